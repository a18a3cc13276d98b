//! Folding a seed by a group acting on its indices.
//!
//! The group is given by its orbits. Orbit-mates must have identical rows of
//! `b` and equal multipliers, so every permutation inside an orbit is a
//! symmetry and orbit-mates pairwise commute.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::classical::LaurentPoly;
use crate::error::{Error, Result};
use crate::mutation::{pullback_element, pullback_fraction, Binomial, RightFraction};
use crate::qtorus::{torus_denominator, Exponent, QCoeff, QElement, QuantumTorus};
use crate::seed::Seed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldingSpec {
    base: Seed,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl FoldingSpec {
    /// Orbits are sorted internally and numbered by their smallest member.
    pub fn new(base: Seed, orbits: Vec<Vec<usize>>) -> Result<Self> {
        let n = base.rank();
        let mut orbits: Vec<Vec<usize>> = orbits
            .into_iter()
            .map(|mut o| {
                o.sort_unstable();
                o
            })
            .collect();
        orbits.sort();
        let mut orbit_of = vec![usize::MAX; n];
        for (id, o) in orbits.iter().enumerate() {
            if o.is_empty() {
                return Err(Error::InvalidFolding("empty orbit".into()));
            }
            for &i in o {
                if i >= n {
                    return Err(Error::InvalidFolding(format!("index {i} out of range")));
                }
                if orbit_of[i] != usize::MAX {
                    return Err(Error::InvalidFolding(format!("index {i} lies in two orbits")));
                }
                orbit_of[i] = id;
            }
        }
        if let Some(i) = orbit_of.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidFolding(format!("index {i} lies in no orbit")));
        }
        let spec = FoldingSpec { base, orbits, orbit_of };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let s = &self.base;
        for o in &self.orbits {
            let r = o[0];
            for &i in &o[1..] {
                if s.is_unfrozen(i) != s.is_unfrozen(r) {
                    return Err(Error::InvalidFolding(format!("orbit of {r} mixes frozen and unfrozen indices")));
                }
                if s.d(i) != s.d(r) {
                    return Err(Error::InvalidFolding(format!("multipliers differ on the orbit of {r}")));
                }
                if let Some(j) = (0..s.rank()).find(|&j| s.b_num(i, j) != s.b_num(r, j)) {
                    return Err(Error::InvalidFolding(format!("rows {r} and {i} of the form differ at column {j}")));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Seed {
        &self.base
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, i: usize) -> usize {
        self.orbit_of[i]
    }

    /// The same orbits over another seed.
    pub fn with_seed(&self, seed: Seed) -> Result<Self> {
        Self::new(seed, self.orbits.clone())
    }

    pub fn fold(&self) -> Seed {
        let s = &self.base;
        let m = self.orbits.len();
        let l = self.orbits.iter().fold(1u64, |l, o| l.lcm(&(o.len() as u64)));
        let d_num: Vec<u64> = self.orbits.iter().map(|o| s.d(o[0]).0 * (l / o.len() as u64)).collect();
        let d_den = s.d_denominator() * l;
        let form: Vec<Vec<i64>> = (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| {
                        let (oa, ob) = (&self.orbits[a], &self.orbits[b]);
                        (oa.len() * ob.len()) as i64 * s.b_num(oa[0], ob[0])
                    })
                    .collect()
            })
            .collect();
        let unfrozen = self.orbits.iter().map(|o| s.is_unfrozen(o[0])).collect();
        let mut folded = Seed::with_rational_d(unfrozen, d_num, d_den, form, s.form_den())
            .expect("folding of a valid spec is a valid seed");
        if let Some(label) = s.label() {
            folded = folded.with_label(format!("{label}/folded"));
        }
        folded
    }

    /// Mutation at every member of orbit `k`; both orders are computed and compared.
    pub fn orbit_mutate(&self, k: usize) -> Result<FoldingSpec> {
        let o = self.orbits.get(k).ok_or(Error::IndexOutOfRange { index: k, rank: self.orbits.len() })?;
        let mut fwd = self.base.clone();
        for &l in o {
            fwd = fwd.mutate(l)?;
        }
        let mut rev = self.base.clone();
        for &l in o.iter().rev() {
            rev = rev.mutate(l)?;
        }
        assert_eq!(fwd, rev, "mutations inside an orbit commute");
        self.with_seed(fwd)
    }

    /// A `D` shared by the base and folded tori.
    pub fn common_denominator(&self) -> u32 {
        (torus_denominator(&self.base) as u64).lcm(&(torus_denominator(&self.fold()) as u64)) as u32
    }

    pub fn base_torus(&self) -> QuantumTorus {
        QuantumTorus::with_denominator(&self.base, self.common_denominator())
    }

    pub fn folded_torus(&self) -> QuantumTorus {
        QuantumTorus::with_denominator(&self.fold(), self.common_denominator())
    }

    /// `ℰ_{i,a}`: elementary symmetric polynomial of degree `|a|` in `X_j`
    /// (`a > 0`) or `X_j^{-1}` (`a < 0`) over the orbit `i`.
    pub fn elementary(&self, orbit: usize, a: i32) -> QElement {
        let t = self.base_torus();
        let o = &self.orbits[orbit];
        let sign = a.signum();
        let mut out = t.zero();
        for subset in subsets(o.len(), a.unsigned_abs() as usize) {
            let mut e = vec![0; self.base.rank()];
            for s in subset {
                e[o[s]] = sign;
            }
            out.add_term(e, &QCoeff::one());
        }
        out
    }

    /// Invariance under every permutation inside every orbit.
    pub fn is_invariant(&self, f: &QElement) -> bool {
        self.orbits.iter().all(|o| {
            o.windows(2).all(|w| {
                let swapped = QElement::from_terms(
                    f.rank(),
                    f.denom(),
                    f.terms().map(|(e, c)| {
                        let mut x = e.clone();
                        x.swap(w[0], w[1]);
                        (x, c.clone())
                    }),
                );
                &swapped == f
            })
        })
    }

    /// `ι`: the inclusion of the folded torus, `z̄^b ↦ z^{Σ b_ī e_ī}`.
    pub fn iota(&self, x: &QElement) -> QElement {
        let mut out = QElement::zero(self.base.rank(), x.denom());
        for (b, c) in x.terms() {
            let mut e = vec![0; self.base.rank()];
            for (id, o) in self.orbits.iter().enumerate() {
                for &j in o {
                    e[j] = b[id];
                }
            }
            out.add_term(e, c);
        }
        out
    }

    /// `π`: writes each orbit part of `f` in elementary symmetric functions and
    /// keeps only products of the full-orbit products `ℰ_{i,|O(i)|}`. Negative
    /// exponents are handled by first multiplying by a power of `ℰ_{i,|O(i)|}`.
    pub fn project_pi(&self, f: &QElement) -> Result<QElement> {
        if f.rank() != self.base.rank() {
            return Err(Error::SeedMismatch);
        }
        if !self.is_invariant(f) {
            return Err(Error::NotInvariant);
        }
        let mut kappa: BTreeMap<Vec<i32>, BigInt> = BTreeMap::new();
        let mut out = QElement::zero(self.orbits.len(), f.denom());
        for (e, c) in f.terms() {
            // every permutation of e is also a term; handle the sorted representative only
            let mut weight = BigInt::one();
            let mut folded = Vec::with_capacity(self.orbits.len());
            let mut canonical = true;
            for o in &self.orbits {
                let part: Vec<i32> = o.iter().map(|&j| e[j]).collect();
                if part.windows(2).any(|w| w[0] < w[1]) {
                    canonical = false;
                    break;
                }
                let total: i32 = part.iter().sum();
                if total.rem_euclid(o.len() as i32) != 0 {
                    weight = BigInt::zero();
                    break;
                }
                let k = kappa.entry(part.clone()).or_insert_with(|| full_elementary_coefficient(&part)).clone();
                weight *= k;
                folded.push(total / o.len() as i32);
            }
            if !canonical || weight.is_zero() {
                continue;
            }
            let coeff = QCoeff::from_iter_terms(c.terms().map(|(q, v)| (q, v * &weight)));
            out.add_term(folded, &coeff);
        }
        Ok(out)
    }

    /// Expresses `f`, given over the base seed, in the seed mutated at every member of orbit `k`.
    pub fn orbit_transport(&self, k: usize, f: &QElement) -> Result<QElement> {
        let mut s = self.base.clone();
        let mut x = f.clone();
        for &l in &self.orbits[k] {
            let next = s.mutate(l)?;
            x = pullback_element(&next, l, &x)?;
            s = next;
        }
        Ok(x)
    }

    /// `μ_{O(k)}^*(f)` as a fraction over the base seed, for `f` over the orbit-mutated seed.
    pub fn orbit_pullback_fraction(&self, k: usize, f: &QElement) -> Result<RightFraction> {
        let o = &self.orbits[k];
        let mut seeds = vec![self.base.clone()];
        for &l in o {
            let s = seeds.last().unwrap().mutate(l)?;
            seeds.push(s);
        }
        let mut frac = RightFraction::from_element(f.clone());
        for (m, &l) in o.iter().enumerate().rev() {
            let s = &seeds[m];
            let step = pullback_fraction(s, l, &frac.numerator)?;
            let mut dens = step.denominators;
            for b in frac.denominators {
                let (x, mm) = crate::classical::old_exponent(s, l, &b.exponent);
                if mm != 0 {
                    return Err(Error::InvalidFolding("orbit binomial does not commute with the orbit".into()));
                }
                dens.push(Binomial { exponent: x, q_exp: b.q_exp });
            }
            frac = RightFraction { numerator: step.numerator, denominators: dens };
        }
        Ok(frac)
    }
}

/// All `r`-element subsets of `0..n`, as index lists.
fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

fn elementary_poly(n: usize, r: usize) -> LaurentPoly {
    LaurentPoly::from_terms(
        n,
        subsets(n, r).into_iter().map(|s| {
            let mut e = vec![0; n];
            s.into_iter().for_each(|i| e[i] = 1);
            (e, BigInt::one())
        }),
    )
}

/// Coefficient of `e_n^b` when the monomial symmetric function of the
/// (weakly decreasing) exponent `part` is written in elementary symmetric
/// functions of `n = part.len()` commuting variables.
fn full_elementary_coefficient(part: &[i32]) -> BigInt {
    let n = part.len();
    let shift = -part.iter().copied().min().unwrap_or(0).min(0);
    let mut perms: Vec<Exponent> = Vec::new();
    permutations(&part.iter().map(|x| x + shift).collect::<Vec<_>>(), &mut perms);
    let mut rem = LaurentPoly::from_terms(n, perms.into_iter().map(|e| (e, BigInt::one())));
    let e: Vec<LaurentPoly> = (0..=n).map(|r| elementary_poly(n, r)).collect();
    let mut found = BigInt::zero();
    while let Some((lead, c)) = rem.terms().last().map(|(l, c)| (l.clone(), c.clone())) {
        if lead.windows(2).all(|w| w[0] == w[1]) {
            found += &c;
            rem = rem.sub(&LaurentPoly::monomial(lead, c));
            continue;
        }
        let mut p = LaurentPoly::monomial(vec![0; n], c);
        for j in 0..n {
            let next = if j + 1 < n { lead[j + 1] } else { 0 };
            p = p.mul(&e[j + 1].pow((lead[j] - next) as u32));
        }
        rem = rem.sub(&p);
    }
    found
}

fn permutations(v: &[i32], out: &mut Vec<Exponent>) {
    let mut items = v.to_vec();
    items.sort_unstable();
    loop {
        out.push(items.clone());
        // next lexicographic permutation
        let Some(i) = (0..items.len().saturating_sub(1)).rev().find(|&i| items[i] < items[i + 1]) else {
            break;
        };
        let j = (i + 1..items.len()).rev().find(|&j| items[j] > items[i]).unwrap();
        items.swap(i, j);
        items[i + 1..].reverse();
    }
}

pub fn fold(spec: &FoldingSpec) -> Seed {
    spec.fold()
}

pub fn orbit_mutate(seed: &Seed, spec: &FoldingSpec, k: usize) -> Result<Seed> {
    Ok(spec.with_seed(seed.clone())?.orbit_mutate(k)?.base().clone())
}

pub fn project_pi(spec: &FoldingSpec, f: &QElement) -> Result<QElement> {
    spec.project_pi(f)
}

/// Sum `Σ_b q_k^{c b} ℰ_{k,±b}` over the orbit `k`, which equals `∏_l (1 + q_k^c X_l^{±1})`.
fn orbit_factor(spec: &FoldingSpec, k: usize, c: i64, sign: i32) -> QElement {
    let t = spec.base_torus();
    let uk = t.qk_unit(spec.orbits[k][0]);
    let mut out = t.zero();
    for b in 0..=spec.orbits[k].len() as i32 {
        out = out.add(&spec.elementary(k, sign * b).shift_q(c * uk * b as i64));
    }
    out
}

/// Compares the closed formula for `μ_{O(k)}^*(ℰ'_{i,a})` with the engine.
/// `q_offset` perturbs every `q_k` exponent of the formula; a nonzero value
/// serves as a negative control.
pub fn symmetric_mutation_check_with(spec: &FoldingSpec, k: usize, i: usize, a: i32, q_offset: i64) -> Result<bool> {
    if !spec.base.is_unfrozen(spec.orbits[k][0]) {
        return Err(Error::FrozenMutation(spec.orbits[k][0]));
    }
    if a.unsigned_abs() as usize > spec.orbits[i].len() {
        return Err(Error::InvalidFolding(format!("degree {a} exceeds the orbit size")));
    }
    if a == 0 {
        return Ok(true);
    }
    let t = spec.base_torus();
    let mutated = spec.orbit_mutate(k)?;
    let engine = spec.orbit_pullback_fraction(k, &mutated.elementary(i, a))?;
    let uk = t.qk_unit(spec.orbits[k][0]);
    let formula = if i == k {
        RightFraction::from_element(spec.elementary(i, -a).shift_q(q_offset * uk))
    } else {
        let e = spec.base.eps(spec.orbits[k][0], spec.orbits[i][0]);
        let n = a.unsigned_abs() as i64 * e.abs();
        let mut num = spec.elementary(i, a);
        let mut dens = Vec::new();
        let binomials = |c: i64, sign: i32, dens: &mut Vec<Binomial>| {
            for &l in &spec.orbits[k] {
                let mut v = vec![0; spec.base.rank()];
                v[l] = sign;
                dens.push(Binomial { exponent: v, q_exp: c * uk });
            }
        };
        for r in 1..=n {
            let odd = 2 * r - 1;
            match (e <= 0, a > 0) {
                (true, true) => num = t.mul(&num, &orbit_factor(spec, k, odd + q_offset, 1))?,
                (true, false) => binomials(-odd + q_offset, 1, &mut dens),
                (false, true) => binomials(odd + q_offset, -1, &mut dens),
                (false, false) => num = t.mul(&num, &orbit_factor(spec, k, -odd + q_offset, -1))?,
            }
        }
        RightFraction { numerator: num, denominators: dens }
    };
    engine.equals(&formula, &t)
}

/// Checks the formula for every orbit `i` with `|a| ≤ |O(i)|`.
pub fn symmetric_mutation_check(spec: &FoldingSpec, k: usize, a: i32) -> Result<bool> {
    for i in 0..spec.orbits.len() {
        if a.unsigned_abs() as usize <= spec.orbits[i].len() && !symmetric_mutation_check_with(spec, k, i, a, 0)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Arrows 0 -> 1 <- 2, orbits {0,2} and {1}.
    fn a3() -> FoldingSpec {
        let s = Seed::from_quiver(3, &[(0, 1), (2, 1)], &[]).unwrap();
        FoldingSpec::new(s, vec![vec![2, 0], vec![1]]).unwrap()
    }

    #[test]
    fn trivial_group_folds_to_the_same_seed() {
        let s = Seed::from_quiver(3, &[(0, 1), (1, 2)], &[2]).unwrap();
        let spec = FoldingSpec::new(s.clone(), vec![vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(spec.fold(), s);
    }

    #[test]
    fn a3_folds_to_multiply_laced_rank_two() {
        let f = a3().fold();
        assert_eq!(f.rank(), 2);
        assert_eq!(f.d(0), (1, 2));
        assert_eq!(f.d(1), (2, 2));
        assert_eq!(f.exchange_matrix().unwrap(), vec![vec![0, 1], vec![-2, 0]]);
    }

    #[test]
    fn asymmetric_rows_are_rejected() {
        let s = Seed::from_quiver(3, &[(0, 1), (1, 2)], &[]).unwrap();
        assert!(matches!(FoldingSpec::new(s, vec![vec![0, 2], vec![1]]), Err(Error::InvalidFolding(_))));
    }

    #[test]
    fn orbit_mutation_commutes_with_folding() {
        let spec = a3();
        for k in 0..2 {
            assert_eq!(spec.orbit_mutate(k).unwrap().fold(), spec.fold().mutate(k).unwrap());
        }
    }

    #[test]
    fn projection_of_elementary_functions() {
        let spec = a3();
        let ft = spec.folded_torus();
        assert_eq!(spec.project_pi(&spec.elementary(0, 2)).unwrap(), ft.x(0));
        assert!(spec.project_pi(&spec.elementary(0, 1)).unwrap().is_zero());
        let bt = spec.base_torus();
        let sq = bt.mul(&spec.elementary(0, 1), &spec.elementary(0, 1)).unwrap();
        assert!(spec.project_pi(&sq).unwrap().is_zero());
        assert_eq!(spec.project_pi(&bt.x(0)), Err(Error::NotInvariant));
        assert_eq!(spec.iota(&ft.x(0)), spec.elementary(0, 2));
    }

    #[test]
    fn elementary_coefficients() {
        // m_{(2,0)} = e_1^2 - 2 e_2 and m_{(1,1)} = e_2
        assert_eq!(full_elementary_coefficient(&[2, 0]), BigInt::from(-2));
        assert_eq!(full_elementary_coefficient(&[1, 1]), BigInt::from(1));
        assert_eq!(full_elementary_coefficient(&[1, -1]), BigInt::from(-2));
        assert_eq!(full_elementary_coefficient(&[3, 0, 0]), BigInt::from(3));
    }

    #[test]
    fn symmetric_formula_holds() {
        let spec = a3();
        for k in 0..2 {
            for a in -2..=2 {
                assert!(symmetric_mutation_check(&spec, k, a).unwrap(), "k={k} a={a}");
            }
        }
        assert!(!symmetric_mutation_check_with(&spec, 1, 0, 1, 1).unwrap());
    }
}
