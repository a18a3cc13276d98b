//! The property suite behind `qcluster verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcluster_core::classical::SfFraction;
use qcluster_core::folding::{symmetric_mutation_check, FoldingSpec};
use qcluster_core::mutation::{classical_pullback_path, classical_transport, TrackedElement};
use qcluster_core::polycheck::{enumerate, ExchangeGraph};
use qcluster_core::scenarios::{build_an_chain, build_markov, build_sl2_standard, sl2_standard_seed};
use qcluster_core::Seed;

type Check = Result<String, String>;

fn ok<T>(r: qcluster_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn named_seeds() -> Vec<(&'static str, Seed, usize)> {
    let ex = |m: Vec<Vec<i64>>, d: Vec<u64>| Seed::from_exchange_matrix(m, d, vec![true, true]).unwrap();
    vec![
        ("A2", Seed::from_quiver(2, &[(0, 1)], &[]).unwrap(), 12),
        ("A3", Seed::from_quiver(3, &[(0, 1), (1, 2)], &[]).unwrap(), 20),
        ("B2", ex(vec![vec![0, -1], vec![2, 0]], vec![1, 2]), 12),
        ("G2", ex(vec![vec![0, -1], vec![3, 0]], vec![1, 3]), 16),
        ("sl2-standard", sl2_standard_seed(), 8),
        ("markov", build_markov(), 4),
    ]
}

fn random_seed(rng: &mut ChaCha8Rng) -> Seed {
    let n = rng.gen_range(2..=5);
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..rng.gen_range(0..=2) {
                arrows.push(if rng.gen_bool(0.5) { (i, j) } else { (j, i) });
            }
        }
    }
    let frozen: Vec<usize> = (1..n).filter(|_| rng.gen_bool(0.3)).collect();
    Seed::from_quiver(n, &arrows, &frozen).unwrap()
}

fn involution() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut count = 0;
    for _ in 0..200 {
        let s = random_seed(&mut rng);
        for k in s.unfrozen_indices() {
            let back = ok(ok(s.mutate(k))?.mutate(k))?;
            if back != s {
                return Err(format!("mutating twice at {k} changed {s:?}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} double mutations"))
}

fn coherence() -> Check {
    let mut nodes = 0;
    for (name, s, depth) in named_seeds() {
        for node in &ok(enumerate(&s, depth))?.nodes {
            let r = node.cg.check_sign_coherence();
            if !r.is_coherent() {
                return Err(format!("{name} at {:?}: {:?}", node.path(), r.violations));
            }
            let det = node.cg.det_c();
            if det != 1.into() && det != (-1).into() {
                return Err(format!("{name} at {:?}: det C = {det}", node.path()));
            }
            nodes += 1;
        }
    }
    Ok(format!("{nodes} nodes"))
}

fn tropical(graph: &ExchangeGraph) -> Result<usize, String> {
    let root = &graph.root;
    let n = root.rank();
    let mut checks = 0;
    for node in &graph.nodes {
        let p = node.path();
        let gt = node.cg.g_tilde();
        for j in 0..n {
            let back = ok(classical_pullback_path(root, &SfFraction::var(n, j), p))?;
            let fwd = ok(classical_transport(root, &SfFraction::var(n, j), p))?;
            for i in 0..n {
                if back.tropicalize(i) as i64 != node.cg.c()[i][j] || fwd.tropicalize(i) as i64 != gt[i][j] {
                    return Err(format!("at {p:?}, entry ({i}, {j})"));
                }
                checks += 1;
            }
        }
        for k in root.unfrozen_indices() {
            let (a, b) = ok(node.cg.step_g_both(k))?;
            if a != b {
                return Err(format!("G recurrences differ at {p:?}, {k}"));
            }
        }
    }
    Ok(checks)
}

fn tropical_identities() -> Check {
    let mut checks = 0;
    for (name, s, depth) in named_seeds().into_iter().take(5) {
        checks += tropical(&ok(enumerate(&s, depth))?).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{checks} tropical entries"))
}

fn sl2() -> Check {
    let g = ok(build_sl2_standard())?;
    for (name, holds) in ok(g.relations())? {
        if !holds {
            return Err(format!("relation {name}"));
        }
    }
    let graph = ok(enumerate(&g.seed, 8))?;
    for (name, x) in g.named() {
        let mut tr = ok(TrackedElement::new(g.seed.clone(), x.clone()))?;
        for node in &graph.nodes {
            let y = ok(tr.transport(node.path()))?;
            if !y.is_polynomial() {
                return Err(format!("{name} at {:?} is not polynomial", node.path()));
            }
        }
        if !ok(tr.check_round_trips())? {
            return Err(format!("{name} does not round trip"));
        }
    }
    Ok("relations, polynomial images and round trips".into())
}

fn chains() -> Check {
    for n in 2..=7 {
        if !ok(ok(build_an_chain(n))?.verify())? {
            return Err(format!("A{n} chain"));
        }
    }
    Ok("n = 2..7".into())
}

fn folding() -> Check {
    let base = Seed::from_quiver(3, &[(0, 1), (2, 1)], &[]).unwrap();
    let mut spec = ok(FoldingSpec::new(base, vec![vec![0, 2], vec![1]]))?;
    let mut folded = spec.fold();
    let mut checks = 0;
    for step in [0, 1, 0, 1, 0] {
        for k in 0..2 {
            for a in -2..=2 {
                if !ok(symmetric_mutation_check(&spec, k, a))? {
                    return Err(format!("orbit {k}, a = {a}"));
                }
                checks += 1;
            }
        }
        spec = ok(spec.orbit_mutate(step))?;
        folded = ok(folded.mutate(step))?;
        if spec.fold() != folded {
            return Err(format!("fold and orbit mutation differ after orbit {step}"));
        }
    }
    Ok(format!("{checks} formula checks"))
}

/// Runs every check; the text has one line per check.
pub fn run() -> (String, bool) {
    let checks: [(&str, fn() -> Check); 7] = [
        ("mutation involution", involution),
        ("sign coherence", coherence),
        ("tropical identities", tropical_identities),
        ("sl2 images", sl2),
        ("A_n chains", chains),
        ("folding formula", folding),
        ("markov monomial", markov),
    ];
    let mut out = String::new();
    let mut all = true;
    for (name, f) in checks {
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(detail) => out.push_str(&format!("PASS  {name}: {detail}\n")),
            Err(why) => {
                all = false;
                out.push_str(&format!("FAIL  {name}: {why}\n"));
            }
        }
    }
    (out, all)
}

fn markov() -> Check {
    let s = build_markov();
    if !qcluster_core::polycheck::is_universally_monomial(&s, &[1, 1, 1]) {
        return Err("X_{0,1,2} is not universally monomial".into());
    }
    Ok("X_{0,1,2} is universally monomial".into())
}
