use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::coeff::QCoeff;
use crate::classical::LaurentPoly;

/// An exponent vector `n` of a Weyl-ordered monomial `z^n`.
pub type Exponent = Vec<i32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoefficientClass {
    /// Coefficients lie in `N[q^{±1}]`.
    PositiveIntegralQ,
    /// Nonnegative, but some power of `q` is fractional.
    PositiveFractionalQ,
    HasNegative,
}

/// A finite sum of Weyl-ordered monomials `z^n` with coefficients in `Z[q^{±1/D}]`.
///
/// Elements remember the rank and `D` of the torus they were built in; the
/// multiplicative structure lives in [`super::QuantumTorus`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QElement {
    pub(crate) rank: usize,
    pub(crate) denom: u32,
    pub(crate) terms: BTreeMap<Exponent, QCoeff>,
}

impl QElement {
    pub fn zero(rank: usize, denom: u32) -> Self {
        QElement { rank, denom, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize, denom: u32) -> Self {
        Self::monomial(rank, denom, vec![0; rank], QCoeff::one())
    }

    pub fn monomial(rank: usize, denom: u32, exp: Exponent, coeff: QCoeff) -> Self {
        assert_eq!(exp.len(), rank, "exponent length must equal the rank");
        let mut e = Self::zero(rank, denom);
        if !coeff.is_zero() {
            e.terms.insert(exp, coeff);
        }
        e
    }

    pub fn from_terms(rank: usize, denom: u32, terms: impl IntoIterator<Item = (Exponent, QCoeff)>) -> Self {
        let mut e = Self::zero(rank, denom);
        for (x, c) in terms {
            e.add_term(x, &c);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &QCoeff)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[i32]) -> Option<&QCoeff> {
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

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> + '_ {
        self.terms.keys()
    }

    pub fn add_term(&mut self, exp: Exponent, c: &QCoeff) {
        debug_assert_eq!(exp.len(), self.rank);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(slot) => {
                slot.add_assign(c);
                if slot.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c.clone());
            }
        }
    }

    pub fn add(&self, other: &QElement) -> QElement {
        assert!(self.compatible(other), "elements from different tori");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &QElement) -> QElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QElement {
        QElement {
            rank: self.rank,
            denom: self.denom,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale(&self, c: &QCoeff) -> QElement {
        let mut out = Self::zero(self.rank, self.denom);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), &x.mul(c));
        }
        out
    }

    /// Multiplies by `q^{shift/D}`.
    pub fn shift_q(&self, shift: i64) -> QElement {
        QElement {
            rank: self.rank,
            denom: self.denom,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.shifted(shift))).collect(),
        }
    }

    pub fn compatible(&self, other: &QElement) -> bool {
        self.rank == other.rank && self.denom == other.denom
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coefficient_class(&self) -> CoefficientClass {
        if self.terms.values().any(|c| !c.is_nonnegative()) {
            CoefficientClass::HasNegative
        } else if self.terms.values().all(|c| c.is_integral_in(self.denom)) {
            CoefficientClass::PositiveIntegralQ
        } else {
            CoefficientClass::PositiveFractionalQ
        }
    }

    pub fn is_subtraction_free(&self) -> bool {
        self.terms.values().all(|c| c.is_nonnegative())
    }

    pub fn specialize_q1(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.rank, self.terms.iter().map(|(e, c)| (e.clone(), c.at_one())))
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.max_abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Minimum of coordinate `i` over the support, `None` for zero.
    pub fn min_exponent(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    /// Relabels coordinates: coordinate `i` of `self` becomes coordinate `map[i]`
    /// of a torus of rank `rank` and denominator `denom`, scaling q-exponents by
    /// `q_scale`.
    pub fn reindex(&self, rank: usize, denom: u32, map: &[usize], q_scale: i64) -> QElement {
        let mut out = QElement::zero(rank, denom);
        for (e, c) in &self.terms {
            let mut x = vec![0; rank];
            for (i, &v) in e.iter().enumerate() {
                x[map[i]] += v;
            }
            let c = QCoeff::from_iter_terms(c.terms().map(|(q, v)| (q * q_scale, v.clone())));
            out.add_term(x, &c);
        }
        out
    }
}

impl QCoeff {
    pub(crate) fn from_iter_terms(it: impl IntoIterator<Item = (i64, BigInt)>) -> QCoeff {
        let mut c = QCoeff::zero();
        for (e, v) in it {
            c.add_term(e, &v);
        }
        c
    }
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "z^{e:?}")?;
            } else {
                write!(f, "({c})z^{e:?}")?;
            }
        }
        if self.denom != 1 {
            write!(f, "  [q-exponents in units of 1/{}]", self.denom)?;
        }
        Ok(())
    }
}
