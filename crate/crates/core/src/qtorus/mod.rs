//! The quantum torus algebra of a seed.
//!
//! Monomials `z^n` multiply by `z^a z^b = q^{-{a,b}} z^{a+b}`. All powers of
//! `q` are stored as integers in units of `1/D`, where `D` is fixed per seed
//! and unchanged by mutation.

mod coeff;
mod element;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

pub use coeff::QCoeff;
pub use element::{CoefficientClass, Exponent, QElement};

use crate::error::{Error, Result};
use crate::seed::Seed;

/// Arithmetic context for elements over one seed.
#[derive(Clone, Debug)]
pub struct QuantumTorus {
    seed: Seed,
    denom: u32,
    /// `{e_i, e_j}` in units of `1/D`, row-major.
    form: Vec<i64>,
}

/// Smallest `D` with `D·{·,·}` integral and `D/d_k` integral for every `k`.
pub fn torus_denominator(seed: &Seed) -> u32 {
    let dd = seed.d_denominator();
    let mut d = seed.form_den() as u64;
    for &dn in seed.d_numerators() {
        d = d.lcm(&(dn / dn.gcd(&dd)));
    }
    d as u32
}

impl QuantumTorus {
    pub fn new(seed: &Seed) -> Self {
        Self::with_denominator(seed, torus_denominator(seed))
    }

    /// Uses a multiple of the minimal denominator.
    pub fn with_denominator(seed: &Seed, denom: u32) -> Self {
        assert_eq!(denom % torus_denominator(seed), 0, "denominator must be a multiple of the minimal one");
        let n = seed.rank();
        let scale = denom as i64 / seed.form_den();
        let form = (0..n * n).map(|x| seed.b_num(x / n, x % n) * scale).collect();
        QuantumTorus { seed: seed.clone(), denom, form }
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn rank(&self) -> usize {
        self.seed.rank()
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// `q_k = q^{1/d_k}` as an exponent in units of `1/D`.
    pub fn qk_unit(&self, k: usize) -> i64 {
        let (dn, dd) = self.seed.d(k);
        (self.denom as u64 * dd / dn) as i64
    }

    /// `{u, v}` in units of `1/D`.
    pub fn pairing(&self, u: &[i32], v: &[i32]) -> i64 {
        let n = self.rank();
        let mut acc = 0;
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            let row = &self.form[i * n..(i + 1) * n];
            acc += u[i] as i64 * row.iter().zip(v).map(|(&b, &x)| b * x as i64).sum::<i64>();
        }
        acc
    }

    fn row_pairing(&self, u: &[i32]) -> Vec<i64> {
        let n = self.rank();
        let mut out = vec![0i64; n];
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..n {
                out[j] += u[i] as i64 * self.form[i * n + j];
            }
        }
        out
    }

    pub fn check(&self, a: &QElement) -> Result<()> {
        if a.rank == self.rank() && a.denom == self.denom {
            Ok(())
        } else {
            Err(Error::SeedMismatch)
        }
    }

    pub fn zero(&self) -> QElement {
        QElement::zero(self.rank(), self.denom)
    }

    pub fn one(&self) -> QElement {
        QElement::one(self.rank(), self.denom)
    }

    pub fn monomial(&self, exp: Exponent) -> QElement {
        QElement::monomial(self.rank(), self.denom, exp, QCoeff::one())
    }

    pub fn term(&self, exp: Exponent, coeff: QCoeff) -> QElement {
        QElement::monomial(self.rank(), self.denom, exp, coeff)
    }

    /// `X_i = z^{e_i}`.
    pub fn x(&self, i: usize) -> QElement {
        self.x_multi(&[i])
    }

    /// `X_{i_1,...,i_k} = z^{e_{i_1}+...+e_{i_k}}`.
    pub fn x_multi(&self, idx: &[usize]) -> QElement {
        let mut e = vec![0; self.rank()];
        for &i in idx {
            e[i] += 1;
        }
        self.monomial(e)
    }

    pub fn mul(&self, a: &QElement, b: &QElement) -> Result<QElement> {
        self.check(a)?;
        self.check(b)?;
        let mut acc: BTreeMap<Exponent, QCoeff> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            let row = self.row_pairing(ea);
            for (eb, cb) in &b.terms {
                let twist: i64 = row.iter().zip(eb).map(|(&r, &x)| r * x as i64).sum();
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let slot = acc.entry(e).or_default();
                ca.mul_into(cb, -twist, slot);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(QElement { rank: a.rank, denom: a.denom, terms: acc })
    }

    pub fn mul_all<'a>(&self, items: impl IntoIterator<Item = &'a QElement>) -> Result<QElement> {
        let mut acc = self.one();
        for x in items {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &QElement, n: u32) -> Result<QElement> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// `ab - ba`.
    pub fn commutator(&self, a: &QElement, b: &QElement) -> Result<QElement> {
        Ok(self.mul(a, b)?.sub(&self.mul(b, a)?))
    }

    /// The binomial `1 + q^{m/D} z^v`.
    pub fn binomial(&self, v: &[i32], m: i64) -> QElement {
        let mut b = self.one();
        b.add_term(v.to_vec(), &QCoeff::monomial(m, 1));
        b
    }

    /// `a · (1 + q^{m/D} z^v)`.
    pub fn mul_binomial(&self, a: &QElement, v: &[i32], m: i64) -> Result<QElement> {
        self.mul(a, &self.binomial(v, m))
    }

    /// Right division by `1 + q^{m/D} z^v`.
    ///
    /// Monomials are graded by their coordinate along the first nonzero entry
    /// of `v`; the quotient is recovered from the top grade down. A quotient
    /// term below the lowest grade of `a` means `a` is not a right multiple.
    pub fn exact_div(&self, a: &QElement, v: &[i32], m: i64) -> Result<QElement> {
        self.check(a)?;
        let j = v.iter().position(|&x| x != 0).ok_or(Error::NotDivisible)?;
        let sign = v[j].signum();
        let step = v[j].abs() as i64;
        let grade = |u: &[i32]| (sign * u[j]) as i64;
        let Some(lower) = a.terms.keys().map(|u| grade(u)).min() else {
            return Ok(a.clone());
        };
        let mut rem: BTreeMap<(i64, Exponent), QCoeff> =
            a.terms.iter().map(|(u, c)| ((grade(u), u.clone()), c.clone())).collect();
        let mut quot: BTreeMap<Exponent, QCoeff> = BTreeMap::new();
        while let Some(((g, w), c)) = rem.pop_last() {
            if g - step < lower {
                return Err(Error::NotDivisible);
            }
            let u: Exponent = w.iter().zip(v).map(|(x, y)| x - y).collect();
            // c_u z^u · q^m z^v = c_u q^{m - {u,v}} z^w must equal c z^w
            let gu = c.shifted(self.pairing(&u, v) - m);
            let key = (g - step, u.clone());
            let slot = rem.entry(key.clone()).or_default();
            slot.sub_assign(&gu);
            if slot.is_zero() {
                rem.remove(&key);
            }
            quot.insert(u, gu);
        }
        Ok(QElement { rank: a.rank, denom: a.denom, terms: quot })
    }

    /// True when both contexts share the seed and `D`.
    pub fn is_same_torus(&self, other: &QuantumTorus) -> bool {
        self.denom == other.denom && self.seed == other.seed
    }
}

pub fn coefficient_class(a: &QElement) -> CoefficientClass {
    a.coefficient_class()
}

pub fn specialize_q1(a: &QElement) -> crate::classical::LaurentPoly {
    a.specialize_q1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn a2() -> QuantumTorus {
        QuantumTorus::new(&Seed::from_quiver(2, &[(0, 1)], &[]).unwrap())
    }

    #[test]
    fn square_of_generator() {
        let t = a2();
        let x = t.x(0);
        assert_eq!(t.mul(&x, &x).unwrap(), t.monomial(vec![2, 0]));
    }

    #[test]
    fn q_commutation() {
        let t = a2();
        let (x1, x2) = (t.x(0), t.x(1));
        assert_eq!(t.mul(&x1, &x2).unwrap(), t.term(vec![1, 1], QCoeff::monomial(-1, 1)));
        assert_eq!(t.mul(&x2, &x1).unwrap(), t.term(vec![1, 1], QCoeff::monomial(1, 1)));
    }

    #[test]
    fn identity_is_neutral() {
        let t = a2();
        let f = t.x(0).add(&t.x_multi(&[0, 1]));
        assert_eq!(t.mul(&f, &t.one()).unwrap(), f);
    }

    #[test]
    fn division_round_trips() {
        let t = a2();
        assert_eq!(t.exact_div(&t.binomial(&[0, 1], 3), &[0, 1], 3).unwrap(), t.one());
        let a = t.mul_binomial(&t.x(0), &[0, 1], 1).unwrap();
        assert_eq!(t.exact_div(&a, &[0, 1], 1).unwrap(), t.x(0));
        let b = t.mul_binomial(&t.x(0).add(&t.monomial(vec![-2, 3])), &[-1, 2], -5).unwrap();
        assert_eq!(t.exact_div(&b, &[-1, 2], -5).unwrap(), t.x(0).add(&t.monomial(vec![-2, 3])));
    }

    #[test]
    fn division_detects_remainder() {
        let t = a2();
        let a = t.one().add(&t.monomial(vec![0, 1])).add(&t.monomial(vec![0, 2]));
        assert_eq!(t.exact_div(&a, &[0, 1], 1), Err(Error::NotDivisible));
    }

    #[test]
    fn coefficient_classes() {
        let t = a2();
        let a = t.one().add(&t.term(vec![1, 0], QCoeff::monomial(2, 1)));
        assert_eq!(a.coefficient_class(), CoefficientClass::PositiveIntegralQ);
        let h = QElement::monomial(2, 2, vec![1, 0], QCoeff::monomial(1, 1));
        assert_eq!(h.coefficient_class(), CoefficientClass::PositiveFractionalQ);
        let n = t.x(0).sub(&t.x(1));
        assert_eq!(n.coefficient_class(), CoefficientClass::HasNegative);
    }

    #[test]
    fn specialization() {
        let t = a2();
        let mut c = QCoeff::monomial(3, 1);
        c.add_term(-1, &BigInt::from(1));
        let p = t.term(vec![1, 0], c).specialize_q1();
        assert_eq!(p.coefficient(&[1, 0]), Some(&BigInt::from(2)));
        assert!(t.zero().specialize_q1().is_zero());
        let prod = t.mul(&t.x(0), &t.x(1)).unwrap().specialize_q1();
        assert_eq!(prod.coefficient(&[1, 1]), Some(&BigInt::from(1)));
    }

    #[test]
    fn multiply_laced_denominator() {
        let s = Seed::from_exchange_matrix(vec![vec![0, -1], vec![2, 0]], vec![1, 2], vec![true, true]).unwrap();
        let t = QuantumTorus::new(&s);
        assert_eq!(t.denom(), 2);
        assert_eq!(t.qk_unit(0), 2);
        assert_eq!(t.qk_unit(1), 1);
        assert_eq!(torus_denominator(&s.mutate(0).unwrap()), 2);
    }
}
