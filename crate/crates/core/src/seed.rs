//! Fixed data and seeds.
//!
//! A seed stores its skew form `b` as integer numerators over one common
//! denominator, always reduced to lowest terms, so that seed equality is
//! equality of the rational data. The exchange matrix `ε_ij = d_i b_ij` is
//! derived on demand.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Seed {
    rank: usize,
    unfrozen: Vec<bool>,
    d_num: Vec<u64>,
    d_den: u64,
    form_num: Vec<i64>,
    form_den: i64,
    label: Option<String>,
}

impl PartialEq for Seed {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.unfrozen == other.unfrozen
            && self.d_num == other.d_num
            && self.d_den == other.d_den
            && self.form_num == other.form_num
            && self.form_den == other.form_den
    }
}

impl Eq for Seed {}

impl core::hash::Hash for Seed {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.unfrozen.hash(state);
        self.d_num.hash(state);
        self.d_den.hash(state);
        self.form_num.hash(state);
        self.form_den.hash(state);
    }
}

/// An arrow `from -> to` of the valued quiver, i.e. a pair with `b_{from,to} > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    /// `ε_{from,to}` as a reduced fraction.
    pub weight: (i64, i64),
    /// `-ε_{to,from}` as a reduced fraction; equals `weight` for skew-symmetric seeds.
    pub reverse_weight: (i64, i64),
}

fn reduce(num: i64, den: i64) -> (i64, i64) {
    let g = num.gcd(&den).max(1);
    let (n, d) = (num / g, den / g);
    if d < 0 {
        (-n, -d)
    } else {
        (n, d)
    }
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

impl Seed {
    /// Builds a seed with integer multipliers.
    pub fn new(unfrozen: Vec<bool>, d: Vec<u64>, form_num: Vec<Vec<i64>>, form_den: i64) -> Result<Self> {
        Self::with_rational_d(unfrozen, d, 1, form_num, form_den)
    }

    /// Builds a seed whose multipliers are `d_num[i] / d_den`.
    pub fn with_rational_d(
        unfrozen: Vec<bool>,
        d_num: Vec<u64>,
        d_den: u64,
        form_num: Vec<Vec<i64>>,
        form_den: i64,
    ) -> Result<Self> {
        let rank = unfrozen.len();
        if rank == 0 {
            return Err(Error::InvalidSeed("rank must be positive".into()));
        }
        if d_num.len() != rank || form_num.len() != rank || form_num.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidSeed("dimension mismatch".into()));
        }
        if d_den == 0 || d_num.iter().any(|&x| x == 0) {
            return Err(Error::InvalidSeed("multipliers must be positive".into()));
        }
        if form_den <= 0 {
            return Err(Error::InvalidSeed("form denominator must be positive".into()));
        }
        let flat: Vec<i64> = form_num.into_iter().flatten().collect();
        Self::from_parts(rank, unfrozen, d_num, d_den, flat, form_den, None)
    }

    fn from_parts(
        rank: usize,
        unfrozen: Vec<bool>,
        mut d_num: Vec<u64>,
        mut d_den: u64,
        mut form_num: Vec<i64>,
        mut form_den: i64,
        label: Option<String>,
    ) -> Result<Self> {
        let g = d_num.iter().fold(d_den, |g, &x| g.gcd(&x));
        d_num.iter_mut().for_each(|x| *x /= g);
        d_den /= g;
        let g = form_num.iter().fold(form_den, |g, &x| g.gcd(&x));
        form_num.iter_mut().for_each(|x| *x /= g);
        form_den /= g;
        let seed = Seed { rank, unfrozen, d_num, d_den, form_num, form_den, label };
        seed.validate()?;
        Ok(seed)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank;
        for i in 0..n {
            if self.b_num(i, i) != 0 {
                return Err(Error::InvalidSeed(alloc::format!("diagonal entry {i} is nonzero")));
            }
            for j in 0..n {
                if self.b_num(i, j) != -self.b_num(j, i) {
                    return Err(Error::InvalidSeed(alloc::format!("form is not skew at ({i}, {j})")));
                }
                if (self.unfrozen[i] || self.unfrozen[j]) && self.epsilon(i, j).is_none() {
                    return Err(Error::NonIntegralExchange(i, j));
                }
                // d_i^{-1} ε_ij = -d_j^{-1} ε_ji
                let (a, b) = self.epsilon_ratio(i, j);
                let (c, e) = self.epsilon_ratio(j, i);
                let lhs = a as i128 * self.d_num[j] as i128 * e as i128;
                let rhs = -(c as i128) * self.d_num[i] as i128 * b as i128;
                if lhs != rhs {
                    return Err(Error::InvalidSeed(alloc::format!("not skew-symmetrizable at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// Skew-symmetric seed from a quiver: every arrow `(i, j)` adds one to `b_ij`.
    pub fn from_quiver(rank: usize, arrows: &[(usize, usize)], frozen: &[usize]) -> Result<Self> {
        let mut b = vec![vec![0i64; rank]; rank];
        for &(i, j) in arrows {
            if i >= rank || j >= rank {
                return Err(Error::IndexOutOfRange { index: i.max(j), rank });
            }
            b[i][j] += 1;
            b[j][i] -= 1;
        }
        let mut unfrozen = vec![true; rank];
        for &f in frozen {
            if f >= rank {
                return Err(Error::IndexOutOfRange { index: f, rank });
            }
            unfrozen[f] = false;
        }
        Self::new(unfrozen, vec![1; rank], b, 1)
    }

    /// Seed from an integer exchange matrix and multipliers, with `b_ij = ε_ij / d_i`.
    pub fn from_exchange_matrix(eps: Vec<Vec<i64>>, d: Vec<u64>, unfrozen: Vec<bool>) -> Result<Self> {
        let n = unfrozen.len();
        if eps.len() != n || d.len() != n {
            return Err(Error::InvalidSeed("dimension mismatch".into()));
        }
        let l = d.iter().fold(1u64, |l, &x| l.lcm(&x.max(1))) as i64;
        let mut b = vec![vec![0i64; n]; n];
        for i in 0..n {
            if eps[i].len() != n {
                return Err(Error::InvalidSeed("dimension mismatch".into()));
            }
            for j in 0..n {
                b[i][j] = eps[i][j] * (l / d[i].max(1) as i64);
            }
        }
        Self::new(unfrozen, d, b, l)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_unfrozen(&self, i: usize) -> bool {
        self.unfrozen[i]
    }

    pub fn unfrozen_mask(&self) -> &[bool] {
        &self.unfrozen
    }

    pub fn unfrozen_indices(&self) -> Vec<usize> {
        (0..self.rank).filter(|&i| self.unfrozen[i]).collect()
    }

    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.rank).filter(|&i| !self.unfrozen[i]).collect()
    }

    /// Multiplier `d_i` as `(numerator, denominator)` over the shared denominator.
    pub fn d(&self, i: usize) -> (u64, u64) {
        (self.d_num[i], self.d_den)
    }

    pub fn d_numerators(&self) -> &[u64] {
        &self.d_num
    }

    pub fn d_denominator(&self) -> u64 {
        self.d_den
    }

    /// Numerator of `b_ij` over [`Seed::form_den`].
    pub fn b_num(&self, i: usize, j: usize) -> i64 {
        self.form_num[i * self.rank + j]
    }

    pub fn form_den(&self) -> i64 {
        self.form_den
    }

    pub fn form_rows(&self) -> Vec<Vec<i64>> {
        self.form_num.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// `ε_ij` as a reduced fraction.
    pub fn epsilon_ratio(&self, i: usize, j: usize) -> (i64, i64) {
        let num = self.d_num[i] as i64 * self.b_num(i, j);
        let den = self.d_den as i64 * self.form_den;
        reduce(num, den)
    }

    /// `ε_ij` when it is an integer.
    pub fn epsilon(&self, i: usize, j: usize) -> Option<i64> {
        let (n, d) = self.epsilon_ratio(i, j);
        (d == 1).then_some(n)
    }

    /// `ε_ij` for a pair meeting the unfrozen part, where integrality is an invariant.
    pub(crate) fn eps(&self, i: usize, j: usize) -> i64 {
        self.epsilon(i, j).expect("exchange entry on an unfrozen pair is integral")
    }

    /// The full exchange matrix, provided every entry is integral.
    pub fn exchange_matrix(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.rank;
        let mut out = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = self.epsilon(i, j).ok_or(Error::NonIntegralExchange(i, j))?;
            }
        }
        Ok(out)
    }

    /// `ε` flattened as reduced `(num, den)` pairs; used as a dedup key.
    pub fn exchange_key(&self) -> Vec<i64> {
        let n = self.rank;
        let mut out = Vec::with_capacity(n * n * 2);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = self.epsilon_ratio(i, j);
                out.push(a);
                out.push(b);
            }
        }
        out
    }

    /// `{u, v}` scaled by [`Seed::form_den`].
    pub fn pairing_num(&self, u: &[i32], v: &[i32]) -> i64 {
        let n = self.rank;
        let mut acc = 0i64;
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            let row = &self.form_num[i * n..(i + 1) * n];
            let s: i64 = row.iter().zip(v).map(|(&b, &x)| b * x as i64).sum();
            acc += u[i] as i64 * s;
        }
        acc
    }

    pub fn arrows(&self) -> Vec<Arrow> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if self.b_num(i, j) > 0 {
                    let (c, e) = self.epsilon_ratio(j, i);
                    out.push(Arrow {
                        from: i,
                        to: j,
                        weight: self.epsilon_ratio(i, j),
                        reverse_weight: (-c, e),
                    });
                }
            }
        }
        out
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank {
            Err(Error::IndexOutOfRange { index: i, rank: self.rank })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_mutable(&self, k: usize) -> Result<()> {
        self.check_index(k)?;
        if self.unfrozen[k] {
            Ok(())
        } else {
            Err(Error::FrozenMutation(k))
        }
    }

    /// Mutation at `k`, computed on the basis: `e_i ↦ e_i + [ε_ki]_+ e_k`, `e_k ↦ -e_k`.
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        self.check_mutable(k)?;
        let n = self.rank;
        let a: Vec<i64> = (0..n).map(|i| if i == k { 0 } else { pos(self.eps(k, i)) }).collect();
        let mut form = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                form[i * n + j] = if i == k && j == k {
                    0
                } else if i == k {
                    -self.b_num(k, j)
                } else if j == k {
                    -self.b_num(i, k)
                } else {
                    self.b_num(i, j) + a[j] * self.b_num(i, k) + a[i] * self.b_num(k, j)
                };
            }
        }
        Self::from_parts(
            n,
            self.unfrozen.clone(),
            self.d_num.clone(),
            self.d_den,
            form,
            self.form_den,
            self.label.clone(),
        )
    }

    pub fn mutate_path(&self, path: &MutationPath) -> Result<Seed> {
        let mut s = self.clone();
        for &k in path.steps() {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Principal extension: indices `n..2n` are frozen copies `i'` with an arrow `i' -> i`.
    pub fn principal_extension(&self) -> Seed {
        let n = self.rank;
        let m = 2 * n;
        // {(e_i,0),(0,f_j)} = -δ_ij / d_i with d_i = d_num[i] / d_den
        let l = self.d_num.iter().fold(1u64, |l, &x| l.lcm(&x)) as i64;
        let den = self.form_den * l;
        let mut form = vec![0i64; m * m];
        for i in 0..n {
            for j in 0..n {
                form[i * m + j] = self.b_num(i, j) * l;
            }
            let v = self.form_den * (l / self.d_num[i] as i64) * self.d_den as i64;
            form[i * m + n + i] = -v;
            form[(n + i) * m + i] = v;
        }
        let mut unfrozen = self.unfrozen.clone();
        unfrozen.extend(core::iter::repeat(false).take(n));
        let mut d = self.d_num.clone();
        d.extend_from_slice(&self.d_num);
        Self::from_parts(m, unfrozen, d, self.d_den, form, den, self.label.clone())
            .expect("principal extension of a valid seed is valid")
    }

    /// Transposed seed: `ε†_ij = ε_ji`, with multipliers proportional to `1/d_i`.
    pub fn transpose(&self) -> Seed {
        let n = self.rank;
        let l = self.d_num.iter().fold(1u64, |l, &x| l.lcm(&x));
        let dt: Vec<u64> = self.d_num.iter().map(|&x| l / x).collect();
        // b†_ij = ε_ji / d†_i = (d_num[j] b_ji / d_den) / (l / d_num[i])
        let den = self.d_den as i64 * self.form_den * l as i64;
        let mut form = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                form[i * n + j] = self.d_num[j] as i64 * self.b_num(j, i) * self.d_num[i] as i64;
            }
        }
        Self::from_parts(n, self.unfrozen.clone(), dt, 1, form, den, self.label.clone())
            .expect("transpose of a valid seed is valid")
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            writeln!(f, "seed {l}")?;
        }
        for i in 0..self.rank {
            let mark = if self.unfrozen[i] { ' ' } else { '*' };
            write!(f, "{mark}{i:>3} |")?;
            for j in 0..self.rank {
                let (a, b) = self.epsilon_ratio(i, j);
                if b == 1 {
                    write!(f, " {a:>4}")?;
                } else {
                    write!(f, " {:>4}", alloc::format!("{a}/{b}"))?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn mutate_seed(seed: &Seed, k: usize) -> Result<Seed> {
    seed.mutate(k)
}

pub fn principal_extension(seed: &Seed) -> Seed {
    seed.principal_extension()
}

pub fn transpose_seed(seed: &Seed) -> Seed {
    seed.transpose()
}

/// A finite sequence of unfrozen indices, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MutationPath(Vec<usize>);

impl MutationPath {
    pub fn new(steps: Vec<usize>) -> Self {
        MutationPath(steps)
    }

    pub fn root() -> Self {
        MutationPath(Vec::new())
    }

    pub fn steps(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, k: usize) {
        self.0.push(k);
    }

    pub fn child(&self, k: usize) -> Self {
        let mut p = self.clone();
        p.0.push(k);
        p
    }

    pub fn prefix(&self, len: usize) -> Self {
        MutationPath(self.0[..len].to_vec())
    }

    pub fn reversed(&self) -> Self {
        MutationPath(self.0.iter().rev().copied().collect())
    }

    /// Checks that every step is a mutable index of `seed`.
    pub fn validate(&self, seed: &Seed) -> Result<()> {
        self.0.iter().try_for_each(|&k| seed.check_mutable(k))
    }
}

impl From<Vec<usize>> for MutationPath {
    fn from(v: Vec<usize>) -> Self {
        MutationPath(v)
    }
}

impl fmt::Display for MutationPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for MutationPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(MutationPath::root());
        }
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidSeed(alloc::format!("bad path step {t:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(MutationPath)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn a2() -> Seed {
        Seed::from_quiver(2, &[(0, 1)], &[]).unwrap()
    }

    #[test]
    fn a2_mutation_flips_sign() {
        let s = a2().mutate(0).unwrap();
        assert_eq!(s.exchange_matrix().unwrap(), vec![vec![0, -1], vec![1, 0]]);
    }

    #[test]
    fn mutation_is_involutive() {
        let s = Seed::from_quiver(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], &[3]).unwrap();
        for k in 0..3 {
            assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s);
        }
    }

    #[test]
    fn frozen_mutation_is_rejected() {
        let s = Seed::from_quiver(2, &[(0, 1)], &[1]).unwrap();
        assert_eq!(s.mutate(1), Err(Error::FrozenMutation(1)));
    }

    #[test]
    fn chain_mutation_creates_triangle() {
        let s = Seed::from_quiver(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], &[0, 4]).unwrap();
        let t = s.mutate(1).unwrap();
        let arrows: Vec<(usize, usize)> = t.arrows().iter().map(|a| (a.from, a.to)).collect();
        let mut expected = vec![(0, 2), (2, 1), (1, 0), (2, 3), (3, 4)];
        expected.sort();
        assert_eq!(arrows, expected);
    }

    #[test]
    fn principal_extension_rank_one() {
        let s = Seed::new(vec![true], vec![1], vec![vec![0]], 1).unwrap();
        let p = s.principal_extension();
        assert_eq!(p.exchange_matrix().unwrap(), vec![vec![0, -1], vec![1, 0]]);
        assert!(!p.is_unfrozen(1));
    }

    #[test]
    fn principal_extension_multiply_laced() {
        let s = Seed::from_exchange_matrix(vec![vec![0, -1], vec![2, 0]], vec![1, 2], vec![true, true]).unwrap();
        let p = s.principal_extension();
        let e = p.exchange_matrix().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(e[2 + i][j], (i == j) as i64);
                assert_eq!(e[i][2 + j], -((i == j) as i64));
            }
        }
    }

    #[test]
    fn transpose_multiply_laced() {
        let s = Seed::from_exchange_matrix(vec![vec![0, -1], vec![2, 0]], vec![1, 2], vec![true, true]).unwrap();
        let t = s.transpose();
        assert_eq!(t.exchange_matrix().unwrap(), vec![vec![0, 2], vec![-1, 0]]);
        assert_eq!(t.d(0), (2, 1));
        assert_eq!(t.d(1), (1, 1));
        assert_eq!(t.transpose(), s);
    }

    #[test]
    fn non_skew_form_is_rejected() {
        let r = Seed::new(vec![true, true], vec![1, 1], vec![vec![0, 1], vec![1, 0]], 1);
        assert!(matches!(r, Err(Error::InvalidSeed(_))));
    }

    #[test]
    fn frozen_pairs_may_be_fractional() {
        let s = Seed::new(vec![false, false, true], vec![1, 1, 1], vec![vec![0, 1, 2], vec![-1, 0, 2], vec![-2, -2, 0]], 2)
            .unwrap();
        assert_eq!(s.epsilon_ratio(0, 1), (1, 2));
        assert_eq!(s.epsilon(0, 2), Some(1));
        let r = Seed::new(vec![true, false], vec![1, 1], vec![vec![0, 1], vec![-1, 0]], 2);
        assert_eq!(r, Err(Error::NonIntegralExchange(0, 1)));
    }

    #[test]
    fn path_round_trips_through_text() {
        let p: MutationPath = "0, 1,0".parse().unwrap();
        assert_eq!(p.steps(), &[0, 1, 0]);
        assert_eq!(p.to_string(), "0,1,0");
        assert_eq!("".parse::<MutationPath>().unwrap(), MutationPath::root());
    }
}
