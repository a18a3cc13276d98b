//! A type `A_n` chain with frozen ends and the mutation sequence along its
//! interior, which turns the telescoping sum into a single frozen variable.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mutation::{transport, Limits};
use crate::polycheck::frozen_sufficient;
use crate::qtorus::{QElement, QuantumTorus};
use crate::seed::{MutationPath, Seed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnChain {
    pub seed: Seed,
    /// Chain vertices in order; `chain[0]` and the last entry are frozen.
    pub chain: Vec<usize>,
    /// `X_1 + X_{1,2} + ... + X_{1,...,n-1}` over the chain.
    pub telescoping: QElement,
    /// `X_{1,...,n}`.
    pub full_monomial: QElement,
    /// Mutations at the interior vertices, in chain order.
    pub sequence: MutationPath,
}

impl AnChain {
    pub fn final_seed(&self) -> Result<Seed> {
        self.seed.mutate_path(&self.sequence)
    }

    /// Both elements expressed in the final seed.
    pub fn transported(&self) -> Result<(QElement, QElement)> {
        let lim = Limits::default();
        Ok((
            transport(&self.seed, &self.telescoping, &self.sequence, &lim)?,
            transport(&self.seed, &self.full_monomial, &self.sequence, &lim)?,
        ))
    }

    /// The telescoping sum becomes `X_1''`, the full monomial becomes `X_{1,n}''`,
    /// and both satisfy the frozen criterion in the final seed.
    pub fn verify(&self) -> Result<bool> {
        let fin = self.final_seed()?;
        let t = QuantumTorus::new(&fin);
        let (a, b) = self.transported()?;
        let first = self.chain[0];
        let last = *self.chain.last().unwrap();
        let v1 = t.x(first);
        let v1n = t.x_multi(&[first, last]);
        let exps = |x: &QElement| x.exponents().next().cloned().unwrap_or_default();
        Ok(a == v1 && b == v1n && frozen_sufficient(&fin, &exps(&v1)) && frozen_sufficient(&fin, &exps(&v1n)))
    }
}

fn chain_elements(seed: &Seed, chain: &[usize]) -> (QElement, QElement) {
    let t = QuantumTorus::new(seed);
    let mut tele = t.zero();
    for j in 1..chain.len() {
        tele = tele.add(&t.x_multi(&chain[..j]));
    }
    (tele, t.x_multi(chain))
}

/// Bare chain `0 -> 1 -> ... -> n-1` with both ends frozen.
pub fn build_an_chain(n: usize) -> Result<AnChain> {
    if n < 2 {
        return Err(Error::InvalidSeed(format!("chain length {n} is below 2")));
    }
    let arrows: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let seed = Seed::from_quiver(n, &arrows, &[0, n - 1])?.with_label(format!("A{n}-chain"));
    build_an_chain_in(&seed, &(0..n).collect::<Vec<_>>())
}

/// Chain `chain[0] -> chain[1] -> ...` inside an ambient seed.
pub fn build_an_chain_in(ambient: &Seed, chain: &[usize]) -> Result<AnChain> {
    check_an_hypotheses(ambient, chain)?;
    let (telescoping, full_monomial) = chain_elements(ambient, chain);
    Ok(AnChain {
        seed: ambient.clone(),
        chain: chain.to_vec(),
        telescoping,
        full_monomial,
        sequence: MutationPath::new(chain[1..chain.len() - 1].to_vec()),
    })
}

/// Checks the chain shape and the three conditions on every unfrozen vertex
/// off the chain. Bullets are numbered from 1.
pub fn check_an_hypotheses(seed: &Seed, chain: &[usize]) -> Result<()> {
    let n = chain.len();
    let bad = |detail: alloc::string::String| Err(Error::InvalidSeed(detail));
    if n < 2 {
        return bad(format!("chain length {n} is below 2"));
    }
    for &c in chain {
        seed.check_index(c)?;
    }
    let mut on_chain = vec![None; seed.rank()];
    for (p, &c) in chain.iter().enumerate() {
        if on_chain[c].replace(p).is_some() {
            return bad(format!("vertex {c} repeats in the chain"));
        }
    }
    if seed.is_unfrozen(chain[0]) || seed.is_unfrozen(chain[n - 1]) {
        return bad("chain ends must be frozen".into());
    }
    if let Some(&c) = chain[1..n - 1].iter().find(|&&c| !seed.is_unfrozen(c)) {
        return bad(format!("interior vertex {c} is frozen"));
    }
    let eps = |i: usize, j: usize| seed.epsilon(i, j).unwrap_or(0);
    for p in 0..n {
        for r in p + 1..n {
            let want = if r == p + 1 { 1 } else { 0 };
            if eps(chain[p], chain[r]) != want || eps(chain[r], chain[p]) != -want {
                return bad(format!("chain arrows between {} and {} are not of type A", chain[p], chain[r]));
            }
        }
    }
    let violated = |bullet: u8, detail: alloc::string::String| Err(Error::HypothesisViolated { bullet, detail });
    for v in (0..seed.rank()).filter(|&v| seed.is_unfrozen(v) && on_chain[v].is_none()) {
        if eps(chain[0], v) > 0 {
            return violated(1, format!("arrow from {} to {v}", chain[0]));
        }
        for &c in chain {
            if eps(v, c).abs() > 1 {
                return violated(2, format!("multiple arrows between {v} and {c}"));
            }
        }
        for (p, &c) in chain.iter().enumerate() {
            if eps(v, c) <= 0 {
                continue;
            }
            let Some(r) = (p + 1..n).find(|&r| eps(chain[r], v) > 0) else {
                return violated(3, format!("arrow {v} -> {c} has no returning arrow from further along the chain"));
            };
            if let Some(&w) = chain[p + 1..r].iter().find(|&&w| eps(v, w) != 0) {
                return violated(3, format!("{v} is adjacent to {w} between {c} and {}", chain[r]));
            }
        }
    }
    Ok(())
}
