use qcluster_core::folding::{symmetric_mutation_check, symmetric_mutation_check_with, FoldingSpec};
use qcluster_core::mutation::{transport, Limits};
use qcluster_core::polycheck::{certify_by_transport, enumerate, Status};
use qcluster_core::{Error, MutationPath, QElement, QuantumTorus, Seed};

/// 0 -> 1 <- 2 with orbits {0, 2} and {1}.
fn a3() -> FoldingSpec {
    FoldingSpec::new(Seed::from_quiver(3, &[(0, 1), (2, 1)], &[]).unwrap(), vec![vec![0, 2], vec![1]]).unwrap()
}

/// Frozen 0 -> {1, 2} -> frozen 3 with orbits {0}, {1, 2}, {3}.
fn doubled() -> FoldingSpec {
    let s = Seed::from_quiver(4, &[(0, 1), (1, 3), (0, 2), (2, 3)], &[0, 3]).unwrap();
    FoldingSpec::new(s, vec![vec![0], vec![1, 2], vec![3]]).unwrap()
}

/// All orbit paths up to `depth` without immediate repeats.
fn orbit_paths(spec: &FoldingSpec, depth: usize) -> Vec<Vec<usize>> {
    let movable: Vec<usize> =
        (0..spec.orbits().len()).filter(|&o| spec.base().is_unfrozen(spec.orbits()[o][0])).collect();
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &frontier {
            for &k in &movable {
                if p.last() != Some(&k) {
                    let mut q: Vec<usize> = p.clone();
                    q.push(k);
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn spec_at(spec: &FoldingSpec, path: &[usize]) -> FoldingSpec {
    path.iter().fold(spec.clone(), |s, &k| s.orbit_mutate(k).unwrap())
}

/// Small invariant polynomials: elementary functions and their pairwise products.
fn invariant_inputs(spec: &FoldingSpec) -> Vec<QElement> {
    let t = spec.base_torus();
    let mut basic = Vec::new();
    for (o, orbit) in spec.orbits().iter().enumerate() {
        for a in 1..=orbit.len() as i32 {
            basic.push(spec.elementary(o, a));
        }
    }
    let mut out = basic.clone();
    for i in 0..basic.len() {
        for j in i..basic.len() {
            out.push(t.mul(&basic[i], &basic[j]).unwrap());
        }
    }
    out.push(basic[0].add(&t.one()));
    out
}

fn square_commutes(spec: &FoldingSpec, depth: usize) -> (usize, usize) {
    let (mut compared, mut skipped) = (0, 0);
    for path in orbit_paths(spec, depth) {
        let here = spec_at(spec, &path);
        let folded = here.fold();
        for k in 0..here.orbits().len() {
            if !here.base().is_unfrozen(here.orbits()[k][0]) {
                continue;
            }
            let there = here.orbit_mutate(k).unwrap();
            for f in invariant_inputs(&here) {
                let base = here.orbit_transport(k, &f);
                let pf = here.project_pi(&f).unwrap();
                let down = transport(&folded, &pf, &MutationPath::new(vec![k]), &Limits::default());
                match (base, down) {
                    (Ok(b), Ok(d)) => {
                        assert_eq!(there.project_pi(&b).unwrap(), d, "path {path:?} orbit {k} input {f}");
                        compared += 1;
                    }
                    _ => skipped += 1,
                }
            }
        }
    }
    (compared, skipped)
}

#[test]
fn a3_folding_square_commutes_to_depth_four() {
    let spec = a3();
    for path in orbit_paths(&spec, 4) {
        let here = spec_at(&spec, &path);
        let folded = spec.fold().mutate_path(&MutationPath::new(path.clone())).unwrap();
        assert_eq!(here.fold(), folded, "path {path:?}");
    }
    let (compared, _) = square_commutes(&spec, 4);
    assert!(compared > 50, "only {compared} comparisons");
}

#[test]
fn doubled_square_commutes_to_depth_four() {
    let (compared, _) = square_commutes(&doubled(), 4);
    assert!(compared > 20, "only {compared} comparisons");
}

#[test]
fn symmetric_mutation_formula_on_every_orbit() {
    for spec in [a3(), doubled()] {
        for path in orbit_paths(&spec, 3) {
            let here = spec_at(&spec, &path);
            for k in 0..here.orbits().len() {
                if !here.base().is_unfrozen(here.orbits()[k][0]) {
                    continue;
                }
                for a in -2..=2 {
                    assert!(symmetric_mutation_check(&here, k, a).unwrap(), "path {path:?} k={k} a={a}");
                }
            }
        }
    }
}

#[test]
fn shifted_formula_is_rejected() {
    let spec = a3();
    for a in [-2, -1, 1, 2] {
        assert!(!symmetric_mutation_check_with(&spec, 1, 0, a, 1).unwrap(), "a={a}");
        assert!(!symmetric_mutation_check_with(&spec, 0, 1, a.signum(), 1).unwrap(), "a={a}");
    }
}

#[test]
fn folded_universal_polynomial() {
    let spec = doubled();
    let mutated = spec.orbit_mutate(1).unwrap();
    let t = QuantumTorus::new(mutated.base());
    // X_0 of the orbit-mutated seed, written in the base seed
    let f = transport(mutated.base(), &t.x(0), &MutationPath::new(vec![1, 2]), &Limits::default()).unwrap();
    assert_eq!(f.len(), 4);
    let lim = Limits::default();
    let base_graph = enumerate(spec.base(), 6).unwrap();
    assert!(base_graph.closed);
    assert_eq!(certify_by_transport(&f, &base_graph, &lim).unwrap().status, Status::UniversallyPolynomial);
    let pf = spec.project_pi(&f).unwrap();
    assert_eq!(pf.len(), 2);
    let folded_graph = enumerate(&spec.fold(), 6).unwrap();
    assert!(folded_graph.closed);
    assert_eq!(certify_by_transport(&pf, &folded_graph, &lim).unwrap().status, Status::UniversallyPolynomial);
}

#[test]
fn projection_needs_invariance() {
    let spec = doubled();
    let t = spec.base_torus();
    assert_eq!(spec.project_pi(&t.x(1)), Err(Error::NotInvariant));
}
