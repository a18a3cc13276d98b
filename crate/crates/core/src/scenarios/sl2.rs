//! The standard quiver for `D_q(sl_2)` and the images of its generators.
//!
//! Vertices are 0-based: arrows `0 -> 1 -> 2 -> 3 -> 0` with `0` and `2`
//! frozen. Which path carries `E` and which carries `F`, and the `q`-powers on
//! each term, are found by [`search_sl2`] rather than fixed by hand.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mutation::{transport, Limits};
use crate::qtorus::{Exponent, QCoeff, QElement, QuantumTorus};
use crate::seed::{MutationPath, Seed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorImages {
    pub seed: Seed,
    pub e: QElement,
    pub f: QElement,
    pub k: QElement,
    pub k_prime: QElement,
    /// Vertices of the telescoping path carrying `E`, starting at the frozen anchor.
    pub e_path: Vec<usize>,
    pub f_path: Vec<usize>,
}

impl GeneratorImages {
    pub fn torus(&self) -> QuantumTorus {
        QuantumTorus::with_denominator(&self.seed, self.e.denom())
    }

    /// `q^n` as a shift in the torus units.
    fn q(&self, n: i64) -> i64 {
        n * self.e.denom() as i64
    }

    /// Each rank-one defining relation with whether it holds.
    pub fn relations(&self) -> Result<Vec<(&'static str, bool)>> {
        let t = self.torus();
        let (e, f, k, kp) = (&self.e, &self.f, &self.k, &self.k_prime);
        let q_commutes = |a: &QElement, b: &QElement, n: i64| -> Result<bool> {
            Ok(t.mul(a, b)? == t.mul(b, a)?.shift_q(self.q(n)))
        };
        let diff = kp.sub(k);
        let rhs = diff.shift_q(self.q(1)).sub(&diff.shift_q(self.q(-1)));
        Ok(vec![
            ("K K' = K' K", q_commutes(k, kp, 0)?),
            ("K E = q^2 E K", q_commutes(k, e, 2)?),
            ("K F = q^-2 F K", q_commutes(k, f, -2)?),
            ("K' E = q^-2 E K'", q_commutes(kp, e, -2)?),
            ("K' F = q^2 F K'", q_commutes(kp, f, 2)?),
            ("[E, F] = (q - q^-1)(K' - K)", t.commutator(e, f)? == rhs),
        ])
    }

    pub fn relations_hold(&self) -> Result<bool> {
        Ok(self.relations()?.iter().all(|(_, ok)| *ok))
    }

    /// Image of `C = F E - q K - q^{-1} K'`.
    pub fn casimir(&self) -> Result<QElement> {
        let t = self.torus();
        Ok(t.mul(&self.f, &self.e)?.sub(&self.k.shift_q(self.q(1))).sub(&self.k_prime.shift_q(self.q(-1))))
    }

    pub fn named(&self) -> [(&'static str, &QElement); 4] {
        [("E", &self.e), ("F", &self.f), ("K", &self.k), ("K'", &self.k_prime)]
    }
}

pub fn sl2_standard_seed() -> Seed {
    Seed::from_quiver(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[0, 2]).expect("valid quiver").with_label("sl2-standard")
}

fn indicator(n: usize, idx: &[usize]) -> Exponent {
    let mut e = vec![0; n];
    idx.iter().for_each(|&i| e[i] += 1);
    e
}

/// `s` with `c = q^{s+1} - q^{s-1}` (in units of `1/D`).
fn q_minus_q_inverse_shift(c: &QCoeff, unit: i64) -> Option<i64> {
    let mut terms: Vec<_> = c.terms().collect();
    if terms.len() != 2 {
        return None;
    }
    terms.sort_by_key(|(q, _)| *q);
    let ((lo, a), (hi, b)) = (terms[0], terms[1]);
    (hi - lo == 2 * unit && *a == (-1).into() && *b == 1.into()).then_some(lo + unit)
}

fn casimir_matches(c: &QElement, n: usize) -> bool {
    let want = [indicator(n, &[0, 2]), indicator(n, &[0, 1, 2, 3])];
    c.len() == 2
        && want.iter().all(|w| c.coefficient(w).and_then(|x| x.as_monomial()).is_some_and(|(_, v)| *v == 1.into()))
}

/// Every assignment of telescoping paths and `q`-powers for which all defining
/// relations hold, each telescoping image becomes a monomial after mutating at
/// the middle of its path, and the Casimir image is `X_{0,2} + X_{0,1,2,3}` up
/// to `q`-powers on each term.
///
/// A path `(a, m, c)` gives `W = X_a + q^s X_{a,m}` and `q^r X_{a,m,c}`. The
/// powers on the `K` monomials are read off from `[E, F]`.
pub fn search_sl2() -> Result<Vec<GeneratorImages>> {
    let seed = sl2_standard_seed();
    let t = QuantumTorus::new(&seed);
    let unit = t.denom() as i64;
    let n = seed.rank();
    let mut found = Vec::new();
    for (a, c) in [(0, 2), (2, 0)] {
        for m in [1, 3] {
            let m2 = 4 - m;
            for e_path in [[c, m2, a], [a, m2, c]] {
                let f_path = [a, m, c];
                for s1 in -4 * unit..=4 * unit {
                    for s3 in -4 * unit..=4 * unit {
                        let f = t.x(f_path[0]).add(&t.monomial(indicator(n, &f_path[..2])).shift_q(s1));
                        let e = t.x(e_path[0]).add(&t.monomial(indicator(n, &e_path[..2])).shift_q(s3));
                        let comm = t.commutator(&e, &f)?;
                        let vkp = indicator(n, &f_path);
                        let vk = indicator(n, &e_path);
                        let Some(s2) = comm.coefficient(&vkp).and_then(|x| q_minus_q_inverse_shift(x, unit)) else {
                            continue;
                        };
                        let Some(s4) = comm.coefficient(&vk).and_then(|x| q_minus_q_inverse_shift(&x.neg(), unit))
                        else {
                            continue;
                        };
                        let images = GeneratorImages {
                            seed: seed.clone(),
                            e,
                            f,
                            k: t.monomial(vk).shift_q(s4),
                            k_prime: t.monomial(vkp).shift_q(s2),
                            e_path: e_path.to_vec(),
                            f_path: f_path.to_vec(),
                        };
                        let collapses = |w: &QElement, mid: usize| {
                            transport(&seed, w, &MutationPath::new(vec![mid]), &Limits::default())
                                .is_ok_and(|x| x.is_monomial())
                        };
                        if collapses(&images.f, f_path[1])
                            && collapses(&images.e, e_path[1])
                            && images.relations_hold()?
                            && casimir_matches(&images.casimir()?, n)
                        {
                            found.push(images);
                        }
                    }
                }
            }
        }
    }
    Ok(found)
}

/// The first assignment found by [`search_sl2`].
pub fn build_sl2_standard() -> Result<GeneratorImages> {
    search_sl2()?
        .into_iter()
        .next()
        .ok_or_else(|| Error::ConstructionFailed("no assignment satisfies the sl2 relations".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycheck::{certify_by_transport, enumerate, Status};
    use crate::qtorus::CoefficientClass;

    #[test]
    fn search_is_unique_up_to_rotation() {
        let all = search_sl2().unwrap();
        assert_eq!(all.len(), 2);
        let g = &all[0];
        assert_eq!(g.f_path, vec![0, 1, 2]);
        assert_eq!(g.e_path, vec![2, 3, 0]);
        // i -> i + 2 is an automorphism of the quiver and carries one onto the other
        let rot = |x: &QElement| {
            QElement::from_terms(4, x.denom(), x.terms().map(|(e, c)| (vec![e[2], e[3], e[0], e[1]], c.clone())))
        };
        let h = &all[1];
        assert_eq!(h.f_path, vec![2, 3, 0]);
        assert_eq!((rot(&g.e), rot(&g.f), rot(&g.k), rot(&g.k_prime)), (h.e.clone(), h.f.clone(), h.k.clone(), h.k_prime.clone()));
    }

    #[test]
    fn casimir_image() {
        let g = build_sl2_standard().unwrap();
        let t = g.torus();
        assert_eq!(g.casimir().unwrap(), t.x_multi(&[0, 2]).add(&t.x_multi(&[0, 1, 2, 3])));
    }

    #[test]
    fn images_are_universally_polynomial() {
        let g = build_sl2_standard().unwrap();
        let graph = enumerate(&g.seed, 4).unwrap();
        assert!(graph.closed);
        let c = g.casimir().unwrap();
        for (name, x) in g.named().into_iter().chain([("C", &c)]) {
            let v = certify_by_transport(x, &graph, &Limits::default()).unwrap();
            let monomial = x.is_monomial();
            let want = if monomial { Status::UniversallyMonomial } else { Status::UniversallyPolynomial };
            assert_eq!(v.status, want, "{name}");
            assert_eq!(v.coefficient_status, Some(CoefficientClass::PositiveIntegralQ), "{name}");
        }
    }

    #[test]
    fn perturbed_image_breaks_a_relation() {
        let mut g = build_sl2_standard().unwrap();
        g.k = g.k.shift_q(1);
        assert!(!g.relations_hold().unwrap());
    }
}
