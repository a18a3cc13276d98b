//! Exchange-graph enumeration and universal polynomiality certificates.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cg::CGState;
use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};
use crate::mutation::{pullback_element_limited, Limits};
use crate::qtorus::{CoefficientClass, Exponent, QElement};
use crate::seed::{MutationPath, Seed};

/// Runs independent jobs, returning results in input order.
pub trait Executor {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        items.into_iter().map(f).collect()
    }
}

/// `(ε, C)`, the identity of a node within one enumeration.
pub type NodeKey = (Vec<i64>, IntMatrix);

#[derive(Clone, Debug)]
pub struct ExchangeGraphNode {
    pub cg: CGState,
    pub key: NodeKey,
    pub depth: usize,
    /// BFS parent and the index mutated to reach this node from it.
    pub parent: Option<(usize, usize)>,
}

impl ExchangeGraphNode {
    pub fn seed(&self) -> &Seed {
        self.cg.seed()
    }

    pub fn path(&self) -> &MutationPath {
        self.cg.path()
    }
}

#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub root: Seed,
    pub nodes: Vec<ExchangeGraphNode>,
    /// `(from, k, to)` for every mutation explored.
    pub edges: Vec<(usize, usize, usize)>,
    pub max_depth: usize,
    pub closed: bool,
}

fn key_of(cg: &CGState) -> NodeKey {
    (cg.seed().exchange_key(), cg.c().clone())
}

pub fn enumerate(seed: &Seed, max_depth: usize) -> Result<ExchangeGraph> {
    enumerate_with(seed, max_depth, &Sequential)
}

/// Breadth-first search over unfrozen mutations, deduplicated by `(ε, C)`.
///
/// The graph is closed when every child of every node, including those at
/// `max_depth`, is already known.
pub fn enumerate_with<E: Executor>(seed: &Seed, max_depth: usize, exec: &E) -> Result<ExchangeGraph> {
    let root = CGState::new(seed)?;
    let mut index: BTreeMap<NodeKey, usize> = BTreeMap::new();
    index.insert(key_of(&root), 0);
    let mut nodes = vec![ExchangeGraphNode { key: key_of(&root), cg: root, depth: 0, parent: None }];
    let mut edges = Vec::new();
    let mutable = seed.unfrozen_indices();
    let mut frontier = vec![0usize];
    let mut closed = true;
    for depth in 0..=max_depth {
        let jobs: Vec<(usize, usize)> = frontier.iter().flat_map(|&p| mutable.iter().map(move |&k| (p, k))).collect();
        let nodes_ref = &nodes;
        let children = exec.map(jobs.clone(), |(p, k)| nodes_ref[p].cg.step(k));
        let mut next = Vec::new();
        for ((p, k), child) in jobs.into_iter().zip(children) {
            let child = child?;
            let key = key_of(&child);
            if let Some(&to) = index.get(&key) {
                edges.push((p, k, to));
                continue;
            }
            if depth == max_depth {
                closed = false;
                continue;
            }
            let id = nodes.len();
            index.insert(key.clone(), id);
            nodes.push(ExchangeGraphNode { cg: child, key, depth: depth + 1, parent: Some((p, k)) });
            edges.push((p, k, id));
            next.push(id);
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(ExchangeGraph { root: seed.clone(), nodes, edges, max_depth, closed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailReason {
    /// A monomial leaves the nonnegative orthant under `G̃_t`.
    GMatrix,
    /// The transported expression has a negative exponent.
    NegativeExponent,
    /// The transported expression is not Laurent.
    NotLaurent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    UniversallyPolynomial,
    UniversallyMonomial,
    FailsAt { path: MutationPath, monomial: Option<Exponent>, reason: FailReason },
    /// Every node up to the given depth passed; the enumeration did not close.
    UpToDepth(usize),
    /// The frozen-vertex criterion found no certifying node.
    NoCertificate,
}

impl Status {
    pub fn passes(&self) -> bool {
        matches!(self, Status::UniversallyPolynomial | Status::UniversallyMonomial | Status::UpToDepth(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Status::UniversallyPolynomial => "UniversallyPolynomial",
            Status::UniversallyMonomial => "UniversallyMonomial",
            Status::FailsAt { .. } => "FailsAt",
            Status::UpToDepth(_) => "UpToDepth",
            Status::NoCertificate => "NoCertificate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeEvidence {
    pub path: MutationPath,
    pub passed: bool,
    pub terms: Option<usize>,
    pub class: Option<CoefficientClass>,
    /// `G̃_t v` for the first failing monomial, in gmatrix mode.
    pub image: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub coefficient_status: Option<CoefficientClass>,
    pub evidence: Vec<NodeEvidence>,
}

/// True when `{e_i, v} = 0` for every unfrozen `i`.
pub fn is_universally_monomial(seed: &Seed, v: &[i32]) -> bool {
    seed.unfrozen_indices().into_iter().all(|i| {
        let mut e = vec![0; seed.rank()];
        e[i] = 1;
        seed.pairing_num(&e, v) == 0
    })
}

/// True when `v` is a nonnegative combination of frozen basis vectors with
/// `{e_j, v} ≥ 0` for every unfrozen `j`.
pub fn frozen_sufficient(seed: &Seed, v: &[i32]) -> bool {
    let n = seed.rank();
    (0..n).all(|i| if seed.is_unfrozen(i) { v[i] == 0 } else { v[i] >= 0 })
        && seed.unfrozen_indices().into_iter().all(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            seed.pairing_num(&e, v) >= 0
        })
}

pub fn frozen_sufficient_at(node: &ExchangeGraphNode, v: &[i32]) -> bool {
    frozen_sufficient(node.seed(), v)
}

fn finish(graph: &ExchangeGraph, evidence: Vec<NodeEvidence>, coefficient_status: Option<CoefficientClass>, all_monomial: bool) -> Verdict {
    let status = if !graph.closed {
        Status::UpToDepth(graph.max_depth)
    } else if all_monomial {
        Status::UniversallyMonomial
    } else {
        Status::UniversallyPolynomial
    };
    Verdict { status, coefficient_status, evidence }
}

/// Every monomial `v` of `f` must satisfy `G̃_t v ≥ 0` at every node.
pub fn gmatrix_criterion(f: &QElement, graph: &ExchangeGraph) -> Result<Verdict> {
    if !f.is_polynomial() {
        return Err(Error::NotAPolynomial);
    }
    if f.rank() != graph.root.rank() {
        return Err(Error::SeedMismatch);
    }
    let class = Some(f.coefficient_class());
    let mut evidence = Vec::with_capacity(graph.nodes.len());
    for node in &graph.nodes {
        let gt = node.cg.g_tilde();
        let mut fail = None;
        for v in f.exponents() {
            let w: Vec<i64> = v.iter().map(|&x| x as i64).collect();
            let img = matrix::mul_vec(&gt, &w);
            if img.iter().any(|&x| x < 0) {
                fail = Some((v.clone(), img));
                break;
            }
        }
        let passed = fail.is_none();
        evidence.push(NodeEvidence {
            path: node.path().clone(),
            passed,
            terms: None,
            class: None,
            image: fail.as_ref().map(|(_, img)| img.clone()),
        });
        if let Some((v, _)) = fail {
            let status = Status::FailsAt { path: node.path().clone(), monomial: Some(v), reason: FailReason::GMatrix };
            return Ok(Verdict { status, coefficient_status: class, evidence });
        }
    }
    Ok(finish(graph, evidence, class, false))
}

/// Expressions of `f` at every node, computed level by level along BFS
/// parents. Entry `i` is `Err` when the expression at node `i` (or an
/// ancestor) could not be computed.
pub fn transport_to_nodes<E: Executor>(
    f: &QElement,
    graph: &ExchangeGraph,
    limits: &Limits,
    exec: &E,
) -> Vec<Result<QElement>> {
    let mut out: Vec<Option<Result<QElement>>> = vec![None; graph.nodes.len()];
    out[0] = Some(Ok(f.clone()));
    let max = graph.nodes.iter().map(|n| n.depth).max().unwrap_or(0);
    for depth in 1..=max {
        let level: Vec<usize> = (0..graph.nodes.len()).filter(|&i| graph.nodes[i].depth == depth).collect();
        let done = &out;
        let results = exec.map(level.clone(), |i| {
            let (p, k) = graph.nodes[i].parent.expect("non-root nodes have parents");
            match done[p].as_ref().expect("parents precede children") {
                Ok(x) => pullback_element_limited(graph.nodes[i].seed(), k, x, limits),
                Err(e) => Err(e.clone()),
            }
        });
        for (i, r) in level.into_iter().zip(results) {
            out[i] = Some(r);
        }
    }
    out.into_iter().map(|r| r.expect("every node is reached")).collect()
}

/// Transports `f` to every node: polynomial everywhere means universally polynomial.
pub fn certify_by_transport(f: &QElement, graph: &ExchangeGraph, limits: &Limits) -> Result<Verdict> {
    certify_by_transport_with(f, graph, limits, &Sequential)
}

pub fn certify_by_transport_with<E: Executor>(
    f: &QElement,
    graph: &ExchangeGraph,
    limits: &Limits,
    exec: &E,
) -> Result<Verdict> {
    if f.rank() != graph.root.rank() {
        return Err(Error::SeedMismatch);
    }
    let exprs = transport_to_nodes(f, graph, limits, exec);
    let mut evidence = Vec::with_capacity(exprs.len());
    let mut worst: Option<CoefficientClass> = None;
    let mut all_monomial = true;
    for (node, r) in graph.nodes.iter().zip(exprs) {
        let path = node.path().clone();
        let x = match r {
            Ok(x) => x,
            Err(Error::NotLaurent(_)) => {
                evidence.push(NodeEvidence { path: path.clone(), passed: false, terms: None, class: None, image: None });
                let status = Status::FailsAt { path, monomial: None, reason: FailReason::NotLaurent };
                return Ok(Verdict { status, coefficient_status: worst, evidence });
            }
            Err(e) => return Err(e),
        };
        let class = x.coefficient_class();
        worst = Some(worst.map_or(class, |w| w.max(class)));
        all_monomial &= x.is_monomial();
        let bad = x.exponents().find(|e| e.iter().any(|&v| v < 0)).cloned();
        evidence.push(NodeEvidence {
            path: path.clone(),
            passed: bad.is_none(),
            terms: Some(x.len()),
            class: Some(class),
            image: None,
        });
        if let Some(v) = bad {
            let status = Status::FailsAt { path, monomial: Some(v), reason: FailReason::NegativeExponent };
            return Ok(Verdict { status, coefficient_status: worst, evidence });
        }
    }
    Ok(finish(graph, evidence, worst, all_monomial))
}

/// Looks for a node where every monomial of `f` is frozen-sufficient. Such a
/// node certifies universal polynomiality regardless of closure.
pub fn certify_frozen(f: &QElement, graph: &ExchangeGraph, limits: &Limits) -> Result<Verdict> {
    if f.rank() != graph.root.rank() {
        return Err(Error::SeedMismatch);
    }
    let exprs = transport_to_nodes(f, graph, limits, &Sequential);
    let mut evidence = Vec::new();
    for (node, r) in graph.nodes.iter().zip(exprs) {
        let Ok(x) = r else {
            evidence.push(NodeEvidence { path: node.path().clone(), passed: false, terms: None, class: None, image: None });
            continue;
        };
        let passed = !x.is_zero() && x.exponents().all(|v| frozen_sufficient(node.seed(), v));
        evidence.push(NodeEvidence {
            path: node.path().clone(),
            passed,
            terms: Some(x.len()),
            class: Some(x.coefficient_class()),
            image: None,
        });
        if passed {
            return Ok(Verdict {
                status: Status::UniversallyPolynomial,
                coefficient_status: Some(x.coefficient_class()),
                evidence,
            });
        }
    }
    Ok(Verdict { status: Status::NoCertificate, coefficient_status: None, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::QuantumTorus;

    fn a2() -> Seed {
        Seed::from_quiver(2, &[(0, 1)], &[]).unwrap()
    }

    #[test]
    fn a2_closes() {
        let g = enumerate(&a2(), 10).unwrap();
        assert!(g.closed);
        assert_eq!(g.nodes.len(), 10);
    }

    #[test]
    fn shallow_enumeration_is_open() {
        let g = enumerate(&a2(), 1).unwrap();
        assert!(!g.closed);
    }

    #[test]
    fn zero_vector_is_monomial_and_sufficient() {
        let s = a2();
        assert!(is_universally_monomial(&s, &[0, 0]));
        assert!(frozen_sufficient(&s, &[0, 0]));
        assert!(!is_universally_monomial(&s, &[1, 0]));
    }

    #[test]
    fn generator_is_not_universal_in_a2() {
        let s = a2();
        let t = QuantumTorus::new(&s);
        let g = enumerate(&s, 10).unwrap();
        let v = gmatrix_criterion(&t.x(0), &g).unwrap();
        assert!(!v.status.passes());
        let w = certify_by_transport(&t.x(0), &g, &Limits::default()).unwrap();
        assert!(!w.status.passes());
        assert!(gmatrix_criterion(&t.monomial(vec![-1, 0]), &g).is_err());
    }
}
