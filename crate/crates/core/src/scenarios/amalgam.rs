//! Amalgamation of seeds along frozen vertices, and the coproduct images
//! on two glued copies of the standard `sl_2` quiver.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::qtorus::{torus_denominator, QCoeff, QElement, QuantumTorus};
use crate::scenarios::sl2::GeneratorImages;
use crate::seed::Seed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamationSpec {
    pub parts: Vec<Seed>,
    /// `gluing[a][j]` is the glued index of vertex `j` of part `a`.
    pub gluing: Vec<Vec<usize>>,
    /// Glued indices made unfrozen after gluing.
    pub defrost: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amalgamation {
    pub spec: AmalgamationSpec,
    pub seed: Seed,
    /// Common `q` denominator of the parts and the glued seed.
    pub denom: u32,
    offsets: Vec<usize>,
}

pub fn amalgamate(spec: AmalgamationSpec) -> Result<Amalgamation> {
    let bad = |s: alloc::string::String| Err(Error::InvalidGluing(s));
    if spec.parts.len() != spec.gluing.len() {
        return bad("one index map per part is required".into());
    }
    let m = spec.gluing.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
    let mut pre: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for (a, (part, map)) in spec.parts.iter().zip(&spec.gluing).enumerate() {
        if map.len() != part.rank() {
            return bad(format!("index map of part {a} has the wrong length"));
        }
        for (j, &i) in map.iter().enumerate() {
            if pre[i].iter().any(|&(b, _)| b == a) {
                return bad(format!("part {a} sends two vertices to {i}"));
            }
            pre[i].push((a, j));
        }
    }
    if let Some(i) = pre.iter().position(|p| p.is_empty()) {
        return bad(format!("glued index {i} has no preimage"));
    }
    let d_den = spec.parts.iter().fold(1u64, |l, p| l.lcm(&p.d_denominator()));
    let form_den = spec.parts.iter().fold(1i64, |l, p| l.lcm(&p.form_den()));
    let d_of = |a: usize, j: usize| {
        let p = &spec.parts[a];
        p.d(j).0 * (d_den / p.d_denominator())
    };
    let mut d_num = vec![0; m];
    let mut unfrozen = vec![false; m];
    for (i, ps) in pre.iter().enumerate() {
        let (a, j) = ps[0];
        d_num[i] = d_of(a, j);
        unfrozen[i] = spec.parts[a].is_unfrozen(j);
        if ps.len() > 1 {
            for &(b, k) in ps {
                if spec.parts[b].is_unfrozen(k) {
                    return bad(format!("vertex {k} of part {b} is glued but unfrozen"));
                }
                if d_of(b, k) != d_num[i] {
                    return bad(format!("multipliers differ at glued index {i}"));
                }
            }
        }
    }
    let mut form = vec![vec![0i64; m]; m];
    for (part, map) in spec.parts.iter().zip(&spec.gluing) {
        let scale = form_den / part.form_den();
        for j in 0..part.rank() {
            for k in 0..part.rank() {
                form[map[j]][map[k]] += part.b_num(j, k) * scale;
            }
        }
    }
    for &i in &spec.defrost {
        if i >= m || pre[i].len() < 2 {
            return bad(format!("defrosted index {i} is not a glued vertex"));
        }
        unfrozen[i] = true;
    }
    let seed = Seed::with_rational_d(unfrozen, d_num, d_den, form, form_den).map_err(|e| match e {
        Error::NonIntegralExchange(i, j) => Error::InvalidGluing(format!("exchange entry ({i}, {j}) is not integral")),
        e => e,
    })?;
    let denom = spec
        .parts
        .iter()
        .fold(torus_denominator(&seed) as u64, |l, p| l.lcm(&(torus_denominator(p) as u64))) as u32;
    let mut offsets = vec![0];
    for p in &spec.parts {
        offsets.push(offsets.last().unwrap() + p.rank());
    }
    Ok(Amalgamation { spec, seed, denom, offsets })
}

impl Amalgamation {
    pub fn torus(&self) -> QuantumTorus {
        QuantumTorus::with_denominator(&self.seed, self.denom)
    }

    pub fn injections(&self) -> &[Vec<usize>] {
        &self.spec.gluing
    }

    /// `f_0 ⊗ f_1 ⊗ ...` in the torus of the direct sum, one factor per part.
    pub fn tensor(&self, factors: &[&QElement]) -> Result<QElement> {
        if factors.len() != self.spec.parts.len() {
            return Err(Error::InvalidGluing("one factor per part is required".into()));
        }
        let total = *self.offsets.last().unwrap();
        let mut acc = QElement::one(total, self.denom);
        for (a, f) in factors.iter().enumerate() {
            if f.rank() != self.spec.parts[a].rank() || self.denom % f.denom() != 0 {
                return Err(Error::SeedMismatch);
            }
            let scale = (self.denom / f.denom()) as i64;
            let mut next = QElement::zero(total, self.denom);
            for (e, c) in acc.terms() {
                for (x, d) in f.terms() {
                    let mut v = e.clone();
                    for (j, &xj) in x.iter().enumerate() {
                        v[self.offsets[a] + j] += xj;
                    }
                    let d = QCoeff::from_iter_terms(d.terms().map(|(q, b)| (q * scale, b.clone())));
                    next.add_term(v, &c.mul(&d));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Restricts a direct-sum element to the glued lattice, where glued
    /// coordinates must agree.
    pub fn restrict(&self, x: &QElement) -> Result<QElement> {
        let m = self.seed.rank();
        let mut out = QElement::zero(m, x.denom());
        for (e, c) in x.terms() {
            let mut v: Vec<Option<i32>> = vec![None; m];
            for (a, map) in self.spec.gluing.iter().enumerate() {
                for (j, &i) in map.iter().enumerate() {
                    let val = e[self.offsets[a] + j];
                    match v[i] {
                        Some(w) if w != val => {
                            return Err(Error::InvalidGluing(format!("exponent disagrees at glued index {i}")));
                        }
                        _ => v[i] = Some(val),
                    }
                }
            }
            out.add_term(v.into_iter().map(|x| x.unwrap_or(0)).collect(), c);
        }
        Ok(out)
    }

    /// A part's element tensored with units elsewhere, in the glued torus.
    pub fn inject(&self, part: usize, f: &QElement) -> Result<QElement> {
        let ones: Vec<QElement> = self.spec.parts.iter().map(|p| QElement::one(p.rank(), f.denom())).collect();
        let mut factors: Vec<&QElement> = ones.iter().collect();
        factors[part] = f;
        self.restrict(&self.tensor(&factors)?)
    }
}

/// Which side of the tensor product carries the group-like factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorOrder {
    /// `W ⊗ 1 + K ⊗ W`
    GroupLikeLeft,
    /// `1 ⊗ W + W ⊗ K`
    GroupLikeRight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coproduct {
    pub amalgamation: Amalgamation,
    pub images: GeneratorImages,
    /// Frozen vertex of the first part glued to a frozen vertex of the second.
    pub glued: (usize, usize),
    pub e_order: TensorOrder,
    pub f_order: TensorOrder,
}

fn delta(am: &Amalgamation, w: &QElement, k: &QElement, order: TensorOrder) -> Result<QElement> {
    let one = QElement::one(w.rank(), w.denom());
    let x = match order {
        TensorOrder::GroupLikeLeft => am.tensor(&[w, &one])?.add(&am.tensor(&[k, w])?),
        TensorOrder::GroupLikeRight => am.tensor(&[&one, w])?.add(&am.tensor(&[w, k])?),
    };
    am.restrict(&x)
}

/// Images of `E, F, K, K'` on the glued seed from the two-copy tensor formulas.
/// Each of `E` and `F` takes the first tensor order that lands in the glued
/// lattice and satisfies the relations.
pub fn coproduct_images(am: &Amalgamation, part: &GeneratorImages) -> Result<(GeneratorImages, TensorOrder, TensorOrder)> {
    let k = am.restrict(&am.tensor(&[&part.k, &part.k])?)?;
    let k_prime = am.restrict(&am.tensor(&[&part.k_prime, &part.k_prime])?)?;
    let orders = [TensorOrder::GroupLikeLeft, TensorOrder::GroupLikeRight];
    for eo in orders {
        let Ok(e) = delta(am, &part.e, &part.k, eo) else { continue };
        for fo in orders {
            let Ok(f) = delta(am, &part.f, &part.k_prime, fo) else { continue };
            let map = |p: &[usize]| p.iter().map(|&j| am.spec.gluing[0][j]).collect();
            let images = GeneratorImages {
                seed: am.seed.clone(),
                e: e.clone(),
                f,
                k: k.clone(),
                k_prime: k_prime.clone(),
                e_path: map(&part.e_path),
                f_path: map(&part.f_path),
            };
            if images.relations_hold()? {
                return Ok((images, eo, fo));
            }
        }
    }
    Err(Error::ConstructionFailed("no tensor order gives images in the glued lattice".into()))
}

/// Two copies of the standard `sl_2` seed glued along one frozen pair, with
/// the glued vertex defrosted. The pair is the first of the four matchings
/// for which [`coproduct_images`] succeeds.
pub fn sl2_coproduct(part: &GeneratorImages) -> Result<Coproduct> {
    let s = &part.seed;
    let frozen = s.frozen_indices();
    for &f1 in &frozen {
        for &f2 in &frozen {
            let n = s.rank();
            let first: Vec<usize> = (0..n).collect();
            let second: Vec<usize> = (0..n).map(|j| if j == f2 { f1 } else { n + j - usize::from(j > f2) }).collect();
            let spec = AmalgamationSpec { parts: vec![s.clone(), s.clone()], gluing: vec![first, second], defrost: vec![f1] };
            let Ok(am) = amalgamate(spec) else { continue };
            if let Ok((images, e_order, f_order)) = coproduct_images(&am, part) {
                return Ok(Coproduct { amalgamation: am, images, glued: (f1, f2), e_order, f_order });
            }
        }
    }
    Err(Error::ConstructionFailed("no frozen matching supports the coproduct images".into()))
}
