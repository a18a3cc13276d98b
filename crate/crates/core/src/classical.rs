//! Commutative (q = 1) Laurent polynomials and subtraction-free fractions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qtorus::Exponent;
use crate::seed::Seed;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], BigInt::one())
    }

    pub fn monomial(exp: Exponent, c: BigInt) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, &c);
        p
    }

    pub fn var(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Exponent, BigInt)>) -> Self {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[i32]) -> Option<&BigInt> {
        self.terms.get(exp)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Exponent, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rank);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.iter().zip(b).map(|(p, q)| p + q).collect(), &(x * y));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.rank), |acc, _| acc.mul(self))
    }

    /// Multiplies by the monomial `z^v`.
    pub fn shift(&self, v: &[i32]) -> Self {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(v).map(|(a, b)| a + b).collect(), c.clone())).collect(),
        }
    }

    pub fn min_exponent(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    pub fn max_exponent(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn is_subtraction_free(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Exact division in the Laurent ring.
    ///
    /// Lexicographic long division; every quotient exponent must lie in the box
    /// cut out by the coordinate extremes of `self` and `d`, which bounds the loop.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (dlead, dc) = d.terms.iter().next_back().ok_or(Error::NotDivisible)?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let n = self.rank;
        let lo: Vec<i32> = (0..n).map(|i| self.min_exponent(i).unwrap() - d.min_exponent(i).unwrap()).collect();
        let hi: Vec<i32> = (0..n).map(|i| self.max_exponent(i).unwrap() - d.max_exponent(i).unwrap()).collect();
        let mut rem = self.clone();
        let mut quot = Self::zero(n);
        while let Some((lead, c)) = rem.terms.iter().next_back() {
            let t: Exponent = lead.iter().zip(dlead).map(|(a, b)| a - b).collect();
            if (0..n).any(|i| t[i] < lo[i] || t[i] > hi[i]) || !(c % dc).is_zero() {
                return Err(Error::NotDivisible);
            }
            let m = Self::monomial(t, c / dc);
            rem = rem.sub(&m.mul(d));
            quot = quot.add(&m);
        }
        Ok(quot)
    }
}

/// A quotient `num / den` of subtraction-free Laurent polynomials, kept
/// uncancelled; tropicalization is well defined on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SfFraction {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl SfFraction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if !num.is_subtraction_free() || !den.is_subtraction_free() {
            return Err(Error::NotSubtractionFree);
        }
        if den.is_zero() || num.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(SfFraction { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Result<Self> {
        let r = p.rank();
        Self::new(p, LaurentPoly::one(r))
    }

    pub fn var(rank: usize, i: usize) -> Self {
        SfFraction { num: LaurentPoly::var(rank, i), den: LaurentPoly::one(rank) }
    }

    /// Min-plus evaluation of `e_i^*`.
    pub fn tropicalize(&self, i: usize) -> i32 {
        self.num.min_exponent(i).unwrap() - self.den.min_exponent(i).unwrap()
    }

    /// Cross-multiplied equality.
    pub fn equals(&self, other: &SfFraction) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

fn one_plus_var_pow(rank: usize, k: usize, e: u32) -> LaurentPoly {
    LaurentPoly::one(rank).add(&LaurentPoly::var(rank, k)).pow(e)
}

/// Classical pullback of a Laurent polynomial written in `seed.mutate(k)`,
/// returned as `numerator / (1 + X_k)^power`.
fn pullback_poly(seed: &Seed, k: usize, p: &LaurentPoly) -> (LaurentPoly, u32) {
    let n = seed.rank();
    let mut parts: Vec<(Exponent, i64, &BigInt)> = Vec::new();
    for (np, c) in p.terms() {
        let (x, m) = old_exponent(seed, k, np);
        parts.push((x, m, c));
    }
    let top = parts.iter().map(|p| p.1).max().unwrap_or(0).max(0);
    let mut num = LaurentPoly::zero(n);
    for (x, m, c) in parts {
        let f = one_plus_var_pow(n, k, (top - m) as u32);
        num = num.add(&f.shift(&x).mul(&LaurentPoly::monomial(vec![0; n], c.clone())));
    }
    (num, top as u32)
}

/// For an exponent `n'` in the mutated seed, the exponent `n` in `seed` and the
/// power `m` with `μ_k^*(z^{n'}) = z^n (1 + X_k)^{-m}` at `q = 1`.
pub(crate) fn old_exponent(seed: &Seed, k: usize, np: &[i32]) -> (Exponent, i64) {
    let n = seed.rank();
    let mut x: Exponent = np.to_vec();
    let mut nk = -(np[k] as i64);
    for i in 0..n {
        if i != k {
            nk += np[i] as i64 * seed.eps(k, i).max(0);
        }
    }
    x[k] = nk as i32;
    let m = (0..n).map(|j| seed.eps(k, j) * x[j] as i64).sum();
    (x, m)
}

/// Classical `μ_k^*` of a fraction written in `seed.mutate(k)`.
pub fn pullback_fraction(seed: &Seed, k: usize, f: &SfFraction) -> Result<SfFraction> {
    seed.check_mutable(k)?;
    let n = seed.rank();
    let (a, pa) = pullback_poly(seed, k, &f.num);
    let (b, pb) = pullback_poly(seed, k, &f.den);
    let common = pa.min(pb);
    let num = a.mul(&one_plus_var_pow(n, k, pb - common));
    let den = b.mul(&one_plus_var_pow(n, k, pa - common));
    SfFraction::new(num, den)
}

/// Classical `A`-mutation at `k`: `A_k' = A_k^{-1}(∏ A_j^{[ε_jk]_+} + ∏ A_j^{[-ε_jk]_+})`,
/// with each `A_j` given as a Laurent polynomial in some fixed variables.
pub fn classical_a_mutation(seed: &Seed, k: usize, a: &[LaurentPoly]) -> Result<LaurentPoly> {
    seed.check_mutable(k)?;
    let n = seed.rank();
    if (0..n).all(|j| seed.eps(j, k) == 0) {
        return Err(Error::DegenerateExchange(k));
    }
    let r = a[k].rank();
    let mut plus = LaurentPoly::one(r);
    let mut minus = LaurentPoly::one(r);
    for j in 0..n {
        let e = seed.eps(j, k);
        if e > 0 {
            plus = plus.mul(&a[j].pow(e as u32));
        } else if e < 0 {
            minus = minus.mul(&a[j].pow((-e) as u32));
        }
    }
    plus.add(&minus).exact_div(&a[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(&[i32], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms[0].0.len(), terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn division_round_trip() {
        let a = p(&[(&[1, 0], 1), (&[0, -1], 2), (&[3, 2], -1)]);
        let d = p(&[(&[0, 0], 1), (&[1, 1], 1)]);
        assert_eq!(a.mul(&d).exact_div(&d).unwrap(), a);
        assert_eq!(p(&[(&[0, 0], 1), (&[1, 0], 1)]).exact_div(&d), Err(Error::NotDivisible));
    }

    #[test]
    fn a2_pullback_of_generators() {
        let s = Seed::from_quiver(2, &[(0, 1)], &[]).unwrap();
        // ε_01 = 1: X_1' pulls back to X_1 (1 + X_0^{-1})^{-1} = X_0 X_1 / (1 + X_0)
        let f = pullback_fraction(&s, 0, &SfFraction::var(2, 1)).unwrap();
        let expect = SfFraction::new(p(&[(&[1, 1], 1)]), p(&[(&[0, 0], 1), (&[1, 0], 1)])).unwrap();
        assert!(f.equals(&expect));
        let g = pullback_fraction(&s, 0, &SfFraction::var(2, 0)).unwrap();
        assert_eq!(g.tropicalize(0), -1);
    }

    #[test]
    fn a_mutation_is_a_binomial() {
        let s = Seed::from_quiver(2, &[(0, 1)], &[]).unwrap();
        let vars = [LaurentPoly::var(2, 0), LaurentPoly::var(2, 1)];
        let a = classical_a_mutation(&s, 0, &vars).unwrap();
        assert_eq!(a, p(&[(&[-1, 0], 1), (&[-1, 1], 1)]));
        let z = Seed::from_quiver(2, &[], &[]).unwrap();
        assert_eq!(classical_a_mutation(&z, 0, &vars), Err(Error::DegenerateExchange(0)));
    }
}
