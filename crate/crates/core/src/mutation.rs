//! Quantum and classical mutation pullbacks, transport along paths, and
//! tropicalization.
//!
//! For `z^{n'}` in the mutated seed, let `n` be the same lattice vector in the
//! original basis and `m = Σ_j ε_kj n_j`. The adjoint action of the quantum
//! dilogarithm gives
//!
//! * `m ≤ 0`: `μ_k^*(z^{n'}) = z^n ∏_{r=1}^{|m|} (1 + q_k^{2r-1} X_k)`,
//! * `m > 0`: `μ_k^*(z^{n'}) = z^n ∏_{s=1}^{m} (1 + q_k^{-(2s-1)} X_k)^{-1}`.
//!
//! All denominators of one step are collected and cleared by right division.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::classical::{self, SfFraction};
use crate::error::{Error, Result};
use crate::qtorus::{CoefficientClass, Exponent, QCoeff, QElement, QuantumTorus};
use crate::seed::{MutationPath, Seed};

pub const DEFAULT_MAX_TERMS: usize = 10_000_000;

/// Abort threshold for expression growth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_terms: DEFAULT_MAX_TERMS }
    }
}

impl Limits {
    pub fn check(&self, e: &QElement) -> Result<()> {
        if e.len() > self.max_terms {
            Err(Error::TermLimitExceeded { terms: e.len(), limit: self.max_terms })
        } else {
            Ok(())
        }
    }
}

/// The binomial `1 + q^{q_exp/D} z^{exponent}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binomial {
    pub exponent: Exponent,
    pub q_exp: i64,
}

/// `numerator · (∏ denominators)^{-1}`, where the binomials pairwise commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightFraction {
    pub numerator: QElement,
    pub denominators: Vec<Binomial>,
}

impl RightFraction {
    pub fn from_element(e: QElement) -> Self {
        RightFraction { numerator: e, denominators: Vec::new() }
    }

    /// Clears all denominators by exact right division.
    pub fn resolve(&self, t: &QuantumTorus) -> Result<QElement> {
        let mut x = self.numerator.clone();
        for b in &self.denominators {
            x = t.exact_div(&x, &b.exponent, b.q_exp)?;
        }
        Ok(x)
    }

    pub fn denominator_product(&self, t: &QuantumTorus) -> Result<QElement> {
        let mut p = t.one();
        for b in &self.denominators {
            p = t.mul_binomial(&p, &b.exponent, b.q_exp)?;
        }
        Ok(p)
    }

    /// Equality by cross-multiplication, valid because all binomials commute.
    pub fn equals(&self, other: &RightFraction, t: &QuantumTorus) -> Result<bool> {
        let lhs = t.mul(&self.numerator, &other.denominator_product(t)?)?;
        let rhs = t.mul(&other.numerator, &self.denominator_product(t)?)?;
        Ok(lhs == rhs)
    }
}

fn unit(rank: usize, k: usize, v: i32) -> Exponent {
    let mut e = vec![0; rank];
    e[k] = v;
    e
}

/// `μ_k^*(X_i')` by the three-case generator formula.
pub fn pullback_generator(seed: &Seed, k: usize, i: usize) -> Result<RightFraction> {
    seed.check_mutable(k)?;
    seed.check_index(i)?;
    let t = QuantumTorus::new(seed);
    let n = seed.rank();
    let uk = t.qk_unit(k);
    if i == k {
        return Ok(RightFraction::from_element(t.monomial(unit(n, k, -1))));
    }
    let e = seed.eps(k, i);
    if e <= 0 {
        let mut x = t.x(i);
        for r in 1..=(-e) {
            x = t.mul_binomial(&x, &unit(n, k, 1), (2 * r - 1) * uk)?;
        }
        Ok(RightFraction::from_element(x))
    } else {
        let denominators = (1..=e).map(|r| Binomial { exponent: unit(n, k, -1), q_exp: (2 * r - 1) * uk }).collect();
        Ok(RightFraction { numerator: t.x(i), denominators })
    }
}

/// `μ_k^*(f)` for `f` written in `seed.mutate(k)`, as a fraction over `seed`.
pub fn pullback_fraction(seed: &Seed, k: usize, f: &QElement) -> Result<RightFraction> {
    pullback_fraction_limited(seed, k, f, &Limits::default())
}

fn pullback_fraction_limited(seed: &Seed, k: usize, f: &QElement, limits: &Limits) -> Result<RightFraction> {
    seed.check_mutable(k)?;
    if f.rank() != seed.rank() || f.denom() % crate::qtorus::torus_denominator(seed) != 0 {
        return Err(Error::SeedMismatch);
    }
    let t = QuantumTorus::with_denominator(seed, f.denom());
    let n = seed.rank();
    let uk = t.qk_unit(k);
    let mut groups: BTreeMap<i64, QElement> = BTreeMap::new();
    for (np, c) in f.terms() {
        let (x, m) = classical::old_exponent(seed, k, np);
        groups.entry(m).or_insert_with(|| t.zero()).add_term(x, c);
    }
    let top = groups.keys().next_back().copied().unwrap_or(0).max(0);
    let ek = unit(n, k, 1);
    let mut numerator = t.zero();
    for (m, g) in groups {
        let mut x = g;
        for r in 1..=(-m).max(0) {
            x = t.mul_binomial(&x, &ek, (2 * r - 1) * uk)?;
        }
        for s in m.max(0) + 1..=top {
            x = t.mul_binomial(&x, &ek, -(2 * s - 1) * uk)?;
        }
        numerator = numerator.add(&x);
        limits.check(&numerator)?;
    }
    let denominators = (1..=top).map(|s| Binomial { exponent: ek.clone(), q_exp: -(2 * s - 1) * uk }).collect();
    Ok(RightFraction { numerator, denominators })
}

/// `μ_k^*(f)` as an element of the torus of `seed`; fails when it is not Laurent.
pub fn pullback_element(seed: &Seed, k: usize, f: &QElement) -> Result<QElement> {
    pullback_element_limited(seed, k, f, &Limits::default())
}

pub fn pullback_element_limited(seed: &Seed, k: usize, f: &QElement, limits: &Limits) -> Result<QElement> {
    let frac = pullback_fraction_limited(seed, k, f, limits)?;
    let t = QuantumTorus::with_denominator(seed, f.denom());
    let mut x = frac.numerator;
    for b in &frac.denominators {
        x = t.exact_div(&x, &b.exponent, b.q_exp).map_err(|e| match e {
            Error::NotDivisible => Error::NotLaurent(k),
            e => e,
        })?;
        limits.check(&x)?;
    }
    Ok(x)
}

/// Size record for one step of a transport.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub path_prefix: MutationPath,
    pub term_count: usize,
    pub max_abs_coeff: BigInt,
}

/// Expresses `f`, given in `seed`, in the seed at the end of `path`.
pub fn transport(seed: &Seed, f: &QElement, path: &MutationPath, limits: &Limits) -> Result<QElement> {
    transport_traced(seed, f, path, limits).map(|(x, _)| x)
}

pub fn transport_traced(
    seed: &Seed,
    f: &QElement,
    path: &MutationPath,
    limits: &Limits,
) -> Result<(QElement, Vec<TraceRecord>)> {
    path.validate(seed)?;
    let mut s = seed.clone();
    let mut x = f.clone();
    let mut trace = Vec::with_capacity(path.len());
    for (step, &k) in path.steps().iter().enumerate() {
        let next = s.mutate(k)?;
        x = pullback_element_limited(&next, k, &x, limits)?;
        s = next;
        trace.push(TraceRecord {
            path_prefix: path.prefix(step + 1),
            term_count: x.len(),
            max_abs_coeff: x.max_abs_coeff(),
        });
    }
    Ok((x, trace))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeVerdict {
    Polynomial,
    LaurentOnly,
    NotLaurent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedVerdict {
    pub verdict: NodeVerdict,
    pub class: Option<CoefficientClass>,
    pub terms: usize,
}

impl SeedVerdict {
    fn of(x: &QElement) -> Self {
        SeedVerdict {
            verdict: if x.is_polynomial() { NodeVerdict::Polynomial } else { NodeVerdict::LaurentOnly },
            class: Some(x.coefficient_class()),
            terms: x.len(),
        }
    }
}

/// An element together with its expressions in the seeds visited so far.
#[derive(Clone, Debug)]
pub struct TrackedElement {
    home_seed: Seed,
    home_expression: QElement,
    transported: BTreeMap<MutationPath, QElement>,
    verdicts: BTreeMap<MutationPath, SeedVerdict>,
    limits: Limits,
}

impl TrackedElement {
    pub fn new(home_seed: Seed, home_expression: QElement) -> Result<Self> {
        Self::with_limits(home_seed, home_expression, Limits::default())
    }

    pub fn with_limits(home_seed: Seed, home_expression: QElement, limits: Limits) -> Result<Self> {
        if home_expression.rank() != home_seed.rank()
            || home_expression.denom() % crate::qtorus::torus_denominator(&home_seed) != 0
        {
            return Err(Error::SeedMismatch);
        }
        let mut verdicts = BTreeMap::new();
        verdicts.insert(MutationPath::root(), SeedVerdict::of(&home_expression));
        Ok(TrackedElement { home_seed, home_expression, transported: BTreeMap::new(), verdicts, limits })
    }

    pub fn home_seed(&self) -> &Seed {
        &self.home_seed
    }

    pub fn home_expression(&self) -> &QElement {
        &self.home_expression
    }

    pub fn verdict(&self, path: &MutationPath) -> Option<&SeedVerdict> {
        self.verdicts.get(path)
    }

    pub fn verdicts(&self) -> impl Iterator<Item = (&MutationPath, &SeedVerdict)> + '_ {
        self.verdicts.iter()
    }

    pub fn cached(&self, path: &MutationPath) -> Option<&QElement> {
        if path.is_empty() {
            Some(&self.home_expression)
        } else {
            self.transported.get(path)
        }
    }

    /// The expression at the end of `path`, reusing the longest cached prefix.
    pub fn transport(&mut self, path: &MutationPath) -> Result<QElement> {
        path.validate(&self.home_seed)?;
        let start = (0..=path.len()).rev().find(|&l| self.cached(&path.prefix(l)).is_some()).unwrap_or(0);
        let mut x = self.cached(&path.prefix(start)).cloned().expect("root is always cached");
        let mut s = self.home_seed.mutate_path(&path.prefix(start))?;
        for l in start..path.len() {
            let k = path.steps()[l];
            let next = s.mutate(k)?;
            let prefix = path.prefix(l + 1);
            match pullback_element_limited(&next, k, &x, &self.limits) {
                Ok(y) => x = y,
                Err(e) => {
                    if e == Error::NotLaurent(k) {
                        let v = SeedVerdict { verdict: NodeVerdict::NotLaurent, class: None, terms: 0 };
                        self.verdicts.insert(prefix, v);
                    }
                    return Err(e);
                }
            }
            self.verdicts.insert(prefix.clone(), SeedVerdict::of(&x));
            self.transported.insert(prefix, x.clone());
            s = next;
        }
        Ok(x)
    }

    /// Checks that every cached expression pulls back to its parent exactly.
    pub fn check_round_trips(&self) -> Result<bool> {
        for (path, x) in &self.transported {
            let parent = path.prefix(path.len() - 1);
            let k = *path.steps().last().unwrap();
            let s = self.home_seed.mutate_path(&parent)?;
            let back = pullback_element(&s, k, x)?;
            if Some(&back) != self.cached(&parent) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Min-plus value of `e_i^*` on a subtraction-free element.
pub fn tropicalize(f: &QElement, i: usize) -> Result<i64> {
    if !f.is_subtraction_free() {
        return Err(Error::NotSubtractionFree);
    }
    f.min_exponent(i).map(i64::from).ok_or(Error::ZeroElement)
}

/// Classical expression of `f`, given in `seed`, in the seed at the end of `path`.
pub fn classical_transport(seed: &Seed, f: &SfFraction, path: &MutationPath) -> Result<SfFraction> {
    let mut s = seed.clone();
    let mut x = f.clone();
    for &k in path.steps() {
        let next = s.mutate(k)?;
        x = classical::pullback_fraction(&next, k, &x)?;
        s = next;
    }
    Ok(x)
}

/// Classical pullback to `seed` of `f`, given in the seed at the end of `path`.
pub fn classical_pullback_path(seed: &Seed, f: &SfFraction, path: &MutationPath) -> Result<SfFraction> {
    let mut seeds = vec![seed.clone()];
    for &k in path.steps() {
        let s = seeds.last().unwrap().mutate(k)?;
        seeds.push(s);
    }
    let mut x = f.clone();
    for (l, &k) in path.steps().iter().enumerate().rev() {
        x = classical::pullback_fraction(&seeds[l], k, &x)?;
    }
    Ok(x)
}

/// Scalar helper: `c · q^{e/D}` as a coefficient.
pub fn q_power(e: i64) -> QCoeff {
    QCoeff::monomial(e, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Seed {
        Seed::from_quiver(2, &[(0, 1)], &[]).unwrap()
    }

    #[test]
    fn generator_formula_matches_general_pullback() {
        for s in [a2(), Seed::from_quiver(3, &[(0, 1), (1, 2), (2, 0), (0, 1)], &[]).unwrap()] {
            for k in s.unfrozen_indices() {
                let next = s.mutate(k).unwrap();
                let t = QuantumTorus::new(&s);
                for i in 0..s.rank() {
                    let gen = pullback_generator(&s, k, i).unwrap();
                    let general = pullback_fraction(&s, k, &QuantumTorus::new(&next).x(i)).unwrap();
                    assert!(gen.equals(&general, &t).unwrap(), "k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn generator_cases() {
        let s = a2();
        let t = QuantumTorus::new(&s);
        let g = pullback_generator(&s, 0, 0).unwrap();
        assert_eq!(g.numerator, t.monomial(vec![-1, 0]));
        // ε_10 = -1: X_0 on the mutated side is untouched, X_1 gains factors
        let g = pullback_generator(&s, 1, 0).unwrap();
        assert!(g.denominators.is_empty());
        assert_eq!(g.numerator, t.x(0).add(&t.mul(&t.x(0), &t.x(1)).unwrap().shift_q(1)));
        let g = pullback_generator(&s, 0, 1).unwrap();
        assert_eq!(g.denominators.len(), 1);
    }

    #[test]
    fn mutated_variable_pulls_back_to_inverse() {
        let s = a2();
        let next = s.mutate(0).unwrap();
        let x = pullback_element(&s, 0, &QuantumTorus::new(&next).x(0)).unwrap();
        assert_eq!(x, QuantumTorus::new(&s).monomial(vec![-1, 0]));
    }

    #[test]
    fn transport_twice_is_identity() {
        let s = a2();
        let t = QuantumTorus::new(&s);
        let f = t.x(0).add(&t.x_multi(&[0, 1]));
        let path = MutationPath::new(vec![1, 1]);
        assert_eq!(transport(&s, &f, &path, &Limits::default()).unwrap(), f);
    }

    #[test]
    fn non_laurent_pullback_is_reported() {
        let s = a2();
        let t = QuantumTorus::new(&s);
        // in the seed mutated at 1, X_0 is X_0' (1 + q X_1'^{-1})^{-1}
        let r = transport(&s, &t.x(0), &MutationPath::new(vec![1]), &Limits::default());
        assert_eq!(r, Err(Error::NotLaurent(1)));
    }

    #[test]
    fn term_limit_is_enforced() {
        let s = a2();
        let t = QuantumTorus::new(&s);
        let f = t.x(0).add(&t.x_multi(&[0, 1]));
        let r = transport(&s, &f, &MutationPath::new(vec![1]), &Limits { max_terms: 1 });
        assert!(matches!(r, Err(Error::TermLimitExceeded { .. })));
    }

    #[test]
    fn tracked_element_caches_and_records() {
        let s = a2();
        let t = QuantumTorus::new(&s);
        let mut e = TrackedElement::new(s.clone(), t.x(1)).unwrap();
        let x = e.transport(&MutationPath::new(vec![0])).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(e.verdict(&MutationPath::new(vec![0])).unwrap().verdict, NodeVerdict::Polynomial);
        let mut e = TrackedElement::new(s.clone(), t.x(0)).unwrap();
        assert!(e.transport(&MutationPath::new(vec![1])).is_err());
        assert_eq!(e.verdict(&MutationPath::new(vec![1])).unwrap().verdict, NodeVerdict::NotLaurent);
        assert!(e.check_round_trips().unwrap());
    }

    #[test]
    fn tropical_values() {
        let s = a2();
        let t = QuantumTorus::new(&s);
        assert_eq!(tropicalize(&t.monomial(vec![-1, 0]), 0), Ok(-1));
        let f = t.x(0).add(&t.x_multi(&[0, 1]));
        assert_eq!(tropicalize(&f, 0), Ok(1));
        assert_eq!(tropicalize(&f, 1), Ok(0));
        assert_eq!(tropicalize(&t.x(0).neg(), 0), Err(Error::NotSubtractionFree));
    }
}
