//! Subcommand bodies. Each returns the text to print and whether the verdict passed.

use std::io::Read;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qcluster_core::folding::FoldingSpec;
use qcluster_core::mutation::{transport_traced, Limits, DEFAULT_MAX_TERMS};
use qcluster_core::polycheck::{
    certify_by_transport_with, certify_frozen, enumerate_with, frozen_sufficient, gmatrix_criterion,
    is_universally_monomial, Executor, Status, Verdict,
};
use qcluster_core::scenarios::{
    amalgamate, build_an_chain, build_markov, build_sl2_standard, sl2_coproduct, AmalgamationSpec,
};
use qcluster_core::{CGState, Error, MutationPath, QElement, QuantumTorus, Seed};

use crate::error::CliError;
use crate::json::{
    format_table, to_pretty, ElementBundle, ElementInput, ElementJson, NamedElement, SeedJson, VerdictJson,
};

#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub passed: bool,
}

impl Report {
    pub fn ok(text: String) -> Self {
        Report { text, passed: true }
    }
}

pub fn limits_from_env() -> Result<Limits, CliError> {
    match std::env::var("QCLUSTER_MAX_TERMS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(|max_terms| Limits { max_terms })
            .map_err(|_| CliError::Input(format!("QCLUSTER_MAX_TERMS={v:?} is not a count"))),
        Err(_) => Ok(Limits { max_terms: DEFAULT_MAX_TERMS }),
    }
}

/// Reads a file, or stdin for `-`.
pub fn read_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

/// A built-in label such as `sl2-standard`, or a seed JSON file.
pub fn load_seed(path: &str) -> Result<Seed, CliError> {
    if let Some(s) = crate::json::seed_by_label(path) {
        return Ok(s);
    }
    serde_json::from_str::<SeedJson>(&read_text(path)?)?.to_seed()
}

fn parse_items<T: std::str::FromStr>(s: &str, sep: char) -> Result<Vec<T>, CliError> {
    s.split(sep)
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| CliError::Input(format!("cannot parse {x:?} in {s:?}"))))
        .collect()
}

/// `"0,1,0"`; the empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    parse_items(s, ',')
}

pub fn parse_vector(s: &str) -> Result<Vec<i32>, CliError> {
    parse_items(s, ',')
}

/// `"0,2|1"`.
pub fn parse_blocks(s: &str) -> Result<Vec<Vec<usize>>, CliError> {
    s.split('|').map(parse_list).collect()
}

pub fn mutate(seed: &Seed, path: &[usize]) -> Result<Report, CliError> {
    let out = seed.mutate_path(&MutationPath::new(path.to_vec()))?;
    Ok(Report::ok(to_pretty(&SeedJson::from_seed(&out))))
}

#[derive(Serialize)]
struct EnumNode {
    id: usize,
    depth: usize,
    path: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parent: Option<(usize, usize)>,
}

#[derive(Serialize)]
struct EnumReport {
    closed: bool,
    max_depth: usize,
    node_count: usize,
    nodes: Vec<EnumNode>,
    edges: Vec<(usize, usize, usize)>,
}

pub fn enumerate<E: Executor>(seed: &Seed, depth: usize, exec: &E) -> Result<Report, CliError> {
    let g = enumerate_with(seed, depth, exec)?;
    let nodes = g
        .nodes
        .iter()
        .enumerate()
        .map(|(id, n)| EnumNode { id, depth: n.depth, path: n.path().steps().to_vec(), parent: n.parent })
        .collect();
    let r = EnumReport { closed: g.closed, max_depth: g.max_depth, node_count: g.nodes.len(), nodes, edges: g.edges };
    Ok(Report::ok(to_pretty(&r)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    C,
    G,
    GTilde,
}

pub fn matrix(seed: &Seed, path: &[usize], kind: MatrixKind, json: bool) -> Result<Report, CliError> {
    let st = CGState::new(seed)?.step_path(&MutationPath::new(path.to_vec()))?;
    let m = match kind {
        MatrixKind::C => st.c().clone(),
        MatrixKind::G => st.g().clone(),
        MatrixKind::GTilde => st.g_tilde(),
    };
    Ok(Report::ok(if json { to_pretty(&m) } else { format_table(&m) }))
}

#[derive(Serialize)]
struct MonoReport {
    vector: Vec<i32>,
    universally_monomial: bool,
    frozen_sufficient: bool,
}

pub fn check_mono(seed: &Seed, v: &[i32]) -> Result<Report, CliError> {
    if v.len() != seed.rank() {
        return Err(CliError::Input(format!("vector has {} entries, rank is {}", v.len(), seed.rank())));
    }
    let r = MonoReport {
        vector: v.to_vec(),
        universally_monomial: is_universally_monomial(seed, v),
        frozen_sufficient: frozen_sufficient(seed, v),
    };
    Ok(Report { passed: r.universally_monomial, text: to_pretty(&r) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Frozen,
    Gmatrix,
    Transport,
}

pub fn verdict_for<E: Executor>(
    seed: &Seed,
    x: &QElement,
    mode: Mode,
    depth: usize,
    exec: &E,
    limits: &Limits,
) -> Result<Verdict, CliError> {
    let graph = enumerate_with(seed, depth, exec)?;
    Ok(match mode {
        Mode::Frozen => certify_frozen(x, &graph, limits)?,
        Mode::Gmatrix => gmatrix_criterion(x, &graph)?,
        Mode::Transport => certify_by_transport_with(x, &graph, limits, exec)?,
    })
}

fn aggregate(statuses: &[&Status]) -> String {
    if let Some(bad) = statuses.iter().find(|s| !s.passes()) {
        return bad.name().into();
    }
    if let Some(s) = statuses.iter().find(|s| matches!(s, Status::UpToDepth(_))) {
        return s.name().into();
    }
    if statuses.iter().all(|s| **s == Status::UniversallyMonomial) {
        "UniversallyMonomial".into()
    } else {
        "UniversallyPolynomial".into()
    }
}

#[derive(Serialize)]
struct NamedVerdict {
    name: String,
    #[serde(flatten)]
    verdict: VerdictJson,
}

#[derive(Serialize)]
struct BundleVerdict {
    status: String,
    elements: Vec<NamedVerdict>,
}

pub fn check_poly<E: Executor>(
    input: ElementInput,
    context: Option<&Seed>,
    mode: Mode,
    depth: usize,
    exec: &E,
    limits: &Limits,
) -> Result<Report, CliError> {
    let single = matches!(input, ElementInput::Single(_));
    let mut verdicts = Vec::new();
    for item in input.into_named() {
        let (seed, x) = item.element.load(context)?;
        verdicts.push((item.name, verdict_for(&seed, &x, mode, depth, exec, limits)?));
    }
    let statuses: Vec<&Status> = verdicts.iter().map(|(_, v)| &v.status).collect();
    let passed = statuses.iter().all(|s| s.passes());
    let text = if single {
        to_pretty(&VerdictJson::from(&verdicts[0].1))
    } else {
        let status = aggregate(&statuses);
        let elements =
            verdicts.iter().map(|(name, v)| NamedVerdict { name: name.clone(), verdict: VerdictJson::from(v) }).collect();
        to_pretty(&BundleVerdict { status, elements })
    };
    Ok(Report { text, passed })
}

pub fn fold(seed: &Seed, orbits: Vec<Vec<usize>>) -> Result<Report, CliError> {
    let spec = FoldingSpec::new(seed.clone(), orbits)?;
    Ok(Report::ok(to_pretty(&SeedJson::from_seed(&spec.fold()))))
}

pub fn amalgamate_seeds(parts: Vec<Seed>, gluing: Vec<Vec<usize>>, defrost: Vec<usize>) -> Result<Report, CliError> {
    let am = amalgamate(AmalgamationSpec { parts, gluing, defrost })?;
    Ok(Report::ok(to_pretty(&SeedJson::from_seed(&am.seed))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Sl2,
    AnChain,
    Markov,
    Sl2Coproduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Seed,
    Elements,
}

fn bundle(seed: &Seed, items: Vec<(&str, &QElement)>) -> String {
    let elements = items
        .into_iter()
        .map(|(name, x)| NamedElement { name: name.into(), element: ElementJson::from_element(seed, x) })
        .collect();
    to_pretty(&ElementBundle { elements })
}

pub fn scenario(which: Scenario, emit: Emit, n: usize) -> Result<Report, CliError> {
    let text = match which {
        Scenario::Sl2 => {
            let g = build_sl2_standard()?;
            let cas = g.casimir()?;
            let mut items: Vec<(&str, &QElement)> = g.named().to_vec();
            items.push(("C", &cas));
            match emit {
                Emit::Seed => to_pretty(&SeedJson::from_seed(&g.seed)),
                Emit::Elements => bundle(&g.seed, items),
            }
        }
        Scenario::AnChain => {
            let c = build_an_chain(n)?;
            match emit {
                Emit::Seed => to_pretty(&SeedJson::from_seed(&c.seed)),
                Emit::Elements => {
                    bundle(&c.seed, vec![("telescoping", &c.telescoping), ("full_monomial", &c.full_monomial)])
                }
            }
        }
        Scenario::Markov => {
            let s = build_markov();
            let m = QuantumTorus::new(&s).x_multi(&[0, 1, 2]);
            match emit {
                Emit::Seed => to_pretty(&SeedJson::from_seed(&s)),
                Emit::Elements => bundle(&s, vec![("X012", &m)]),
            }
        }
        Scenario::Sl2Coproduct => {
            let cp = sl2_coproduct(&build_sl2_standard()?)?;
            let s = &cp.amalgamation.seed;
            match emit {
                Emit::Seed => to_pretty(&SeedJson::from_seed(s)),
                Emit::Elements => bundle(s, cp.images.named().to_vec()),
            }
        }
    };
    Ok(Report::ok(text))
}

#[derive(Clone, Debug)]
pub struct BenchParams {
    pub rank: usize,
    pub frozen: usize,
    pub depth: usize,
    pub samples: usize,
    pub rng_seed: u64,
    pub timings: bool,
}

#[derive(Serialize)]
struct TraceJson {
    path_prefix: Vec<usize>,
    term_count: usize,
    max_abs_coeff: String,
}

#[derive(Serialize)]
struct BenchSample {
    seed: SeedJson,
    path: Vec<usize>,
    outcome: String,
    trace: Vec<TraceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    millis: Option<u128>,
}

/// A random quiver whose frozen vertices carry arrows in one direction each,
/// and a sum of five squarefree frozen-sufficient monomials on it.
pub fn random_case(rng: &mut ChaCha8Rng, rank: usize, frozen: usize) -> Option<(Seed, QElement)> {
    let mut verts: Vec<usize> = (0..rank).collect();
    verts.shuffle(rng);
    let fz = verts[..frozen].to_vec();
    let is_frozen = |v: usize| fz.contains(&v);
    let mut arrows = Vec::new();
    let mut mixed = Vec::new();
    for i in 0..rank {
        for j in i + 1..rank {
            if is_frozen(i) != is_frozen(j) {
                if rng.gen_bool(0.5) {
                    mixed.push(if is_frozen(i) { (j, i) } else { (i, j) });
                }
                continue;
            }
            match rng.gen_range(0..4) {
                0 => arrows.push((i, j)),
                1 => arrows.push((j, i)),
                _ => {}
            }
        }
    }
    for into_frozen in [true, false] {
        let mut all = arrows.clone();
        all.extend(mixed.iter().map(|&(u, f)| if into_frozen { (u, f) } else { (f, u) }));
        let seed = Seed::from_quiver(rank, &all, &fz).ok()?;
        let mut candidates: Vec<Vec<i32>> = (1..1usize << frozen)
            .map(|c| {
                let mut v = vec![0; rank];
                for (pos, &i) in fz.iter().enumerate() {
                    v[i] = (c >> pos & 1) as i32;
                }
                v
            })
            .filter(|v| frozen_sufficient(&seed, v))
            .collect();
        if candidates.len() >= 5 {
            candidates.shuffle(rng);
            let t = QuantumTorus::new(&seed);
            let f = candidates[..5].iter().fold(t.zero(), |f, v| f.add(&t.monomial(v.clone())));
            return Some((seed, f));
        }
    }
    None
}

pub fn bench(p: &BenchParams, limits: &Limits) -> Result<Report, CliError> {
    if p.frozen >= p.rank || p.frozen > 16 {
        return Err(CliError::Input("need 0 < frozen < rank and frozen <= 16".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed);
    let mut samples = Vec::new();
    let mut draws = 0;
    while samples.len() < p.samples {
        draws += 1;
        if draws > 100 * p.samples.max(1) {
            return Err(CliError::Input("could not draw a usable quiver".into()));
        }
        let Some((seed, f)) = random_case(&mut rng, p.rank, p.frozen) else {
            continue;
        };
        let unfrozen = seed.unfrozen_indices();
        let mut steps: Vec<usize> = Vec::new();
        while steps.len() < p.depth {
            let k = *unfrozen.choose(&mut rng).expect("some vertex is unfrozen");
            if steps.last() != Some(&k) || unfrozen.len() == 1 {
                steps.push(k);
            }
        }
        let start = Instant::now();
        let (outcome, trace) = match transport_traced(&seed, &f, &MutationPath::new(steps.clone()), limits) {
            Ok((_, t)) => ("Laurent".to_string(), t),
            Err(Error::NotLaurent(k)) => (format!("NotLaurent({k})"), Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let millis = p.timings.then(|| start.elapsed().as_millis());
        let trace = trace
            .into_iter()
            .map(|r| TraceJson {
                path_prefix: r.path_prefix.steps().to_vec(),
                term_count: r.term_count,
                max_abs_coeff: r.max_abs_coeff.to_string(),
            })
            .collect();
        samples.push(BenchSample { seed: SeedJson::from_seed(&seed), path: steps, outcome, trace, millis });
    }
    Ok(Report::ok(to_pretty(&samples)))
}
