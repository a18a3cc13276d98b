use alloc::collections::BTreeMap;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial in `q^{1/D}` with integer coefficients, keyed by the
/// exponent of `q^{1/D}`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QCoeff(BTreeMap<i64, BigInt>);

impl QCoeff {
    pub fn zero() -> Self {
        QCoeff(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(q_exp: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(q_exp, c);
        }
        QCoeff(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.0.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, q_exp: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(q_exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&q_exp);
        }
    }

    pub fn add_assign(&mut self, other: &QCoeff) {
        for (&e, c) in &other.0 {
            self.add_term(e, c);
        }
    }

    pub fn sub_assign(&mut self, other: &QCoeff) {
        for (&e, c) in &other.0 {
            self.add_term(e, &-c);
        }
    }

    /// Adds `other * q^{shift/D}`.
    pub fn add_shifted(&mut self, other: &QCoeff, shift: i64) {
        for (&e, c) in &other.0 {
            self.add_term(e + shift, c);
        }
    }

    pub fn neg(&self) -> QCoeff {
        QCoeff(self.0.iter().map(|(&e, c)| (e, -c)).collect())
    }

    pub fn shifted(&self, shift: i64) -> QCoeff {
        QCoeff(self.0.iter().map(|(&e, c)| (e + shift, c.clone())).collect())
    }

    pub fn mul(&self, other: &QCoeff) -> QCoeff {
        let mut out = QCoeff::zero();
        for (&a, x) in &self.0 {
            for (&b, y) in &other.0 {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }

    /// Adds `self * other * q^{shift/D}` into `acc`.
    pub(crate) fn mul_into(&self, other: &QCoeff, shift: i64, acc: &mut QCoeff) {
        for (&a, x) in &self.0 {
            for (&b, y) in &other.0 {
                acc.add_term(a + b + shift, &(x * y));
            }
        }
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> BigInt {
        self.0.values().fold(BigInt::zero(), |s, c| s + c)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.values().all(|c| !c.is_negative())
    }

    /// True when every exponent is a multiple of `d`, i.e. only integral powers of `q` occur.
    pub fn is_integral_in(&self, d: u32) -> bool {
        self.0.keys().all(|e| e.rem_euclid(d as i64) == 0)
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0.get(&0).is_some_and(|c| c.is_one())
    }

    /// The single `(exponent, coefficient)` pair when this is a monomial in `q`.
    pub fn as_monomial(&self) -> Option<(i64, &BigInt)> {
        if self.0.len() == 1 {
            self.0.iter().next().map(|(&e, c)| (e, c))
        } else {
            None
        }
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *e == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}q^({e})")?;
            }
        }
        Ok(())
    }
}
