//! JSON artifacts: seeds, elements, matrices and verdicts.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use qcluster_core::matrix::IntMatrix;
use qcluster_core::polycheck::{NodeEvidence, Status, Verdict};
use qcluster_core::scenarios::{build_an_chain, build_markov, sl2_standard_seed};
use qcluster_core::seed::Arrow;
use qcluster_core::{QCoeff, QElement, Seed};

use crate::error::CliError;

/// A multiplier: a plain integer, or `{num, den}` when it is fractional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DJson {
    Int(u64),
    Ratio { num: u64, den: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedJson {
    pub rank: usize,
    pub unfrozen: Vec<bool>,
    pub d: Vec<DJson>,
    pub form_num: Vec<Vec<i64>>,
    pub form_den: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl SeedJson {
    pub fn from_seed(s: &Seed) -> Self {
        let d = (0..s.rank())
            .map(|i| {
                let (num, den) = s.d(i);
                let g = gcd(num, den);
                if den / g == 1 {
                    DJson::Int(num / g)
                } else {
                    DJson::Ratio { num: num / g, den: den / g }
                }
            })
            .collect();
        SeedJson {
            rank: s.rank(),
            unfrozen: s.unfrozen_mask().to_vec(),
            d,
            form_num: s.form_rows(),
            form_den: s.form_den(),
            label: s.label().map(String::from),
        }
    }

    pub fn to_seed(&self) -> Result<Seed, CliError> {
        if self.unfrozen.len() != self.rank {
            return Err(CliError::Input(format!("rank {} but {} unfrozen flags", self.rank, self.unfrozen.len())));
        }
        let parts: Vec<(u64, u64)> = self
            .d
            .iter()
            .map(|x| match *x {
                DJson::Int(n) => (n, 1),
                DJson::Ratio { num, den } => (num, den),
            })
            .collect();
        if parts.iter().any(|&(_, den)| den == 0) {
            return Err(CliError::Input("multiplier with zero denominator".into()));
        }
        let l = parts.iter().fold(1u64, |l, &(_, den)| l / gcd(l, den) * den);
        let nums = parts.iter().map(|&(num, den)| num * (l / den)).collect();
        let s = Seed::with_rational_d(self.unfrozen.clone(), nums, l, self.form_num.clone(), self.form_den)?;
        Ok(match &self.label {
            Some(l) => s.with_label(l.clone()),
            None => s,
        })
    }
}

/// Built-in seeds addressable by label.
pub fn seed_by_label(label: &str) -> Option<Seed> {
    match label {
        "sl2-standard" => Some(sl2_standard_seed()),
        "markov" => Some(build_markov()),
        _ => {
            let n: usize = label.strip_prefix('A')?.strip_suffix("-chain")?.parse().ok()?;
            build_an_chain(n).ok().map(|c| c.seed)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedRef {
    Label(String),
    Inline(SeedJson),
}

/// Coefficients are written as decimal strings; integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigNum {
    Text(String),
    Small(i64),
}

impl BigNum {
    fn value(&self) -> Result<BigInt, CliError> {
        match self {
            BigNum::Text(s) => s.parse().map_err(|_| CliError::Input(format!("bad coefficient {s:?}"))),
            BigNum::Small(n) => Ok(BigInt::from(*n)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<i32>,
    pub coeff: Vec<(i64, BigNum)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub seed: SeedRef,
    #[serde(rename = "D")]
    pub d: u32,
    pub terms: Vec<TermJson>,
}

impl ElementJson {
    pub fn from_element(seed: &Seed, x: &QElement) -> Self {
        let terms = x
            .terms()
            .map(|(e, c)| TermJson {
                exp: e.clone(),
                coeff: c.terms().map(|(q, v)| (q, BigNum::Text(v.to_string()))).collect(),
            })
            .collect();
        ElementJson { seed: SeedRef::Inline(SeedJson::from_seed(seed)), d: x.denom(), terms }
    }

    /// Resolves the seed, preferring `context` when its label matches.
    pub fn resolve_seed(&self, context: Option<&Seed>) -> Result<Seed, CliError> {
        match &self.seed {
            SeedRef::Inline(s) => s.to_seed(),
            SeedRef::Label(l) => {
                if let Some(s) = context.filter(|s| s.label() == Some(l.as_str())) {
                    return Ok(s.clone());
                }
                seed_by_label(l).ok_or_else(|| CliError::Input(format!("unknown seed label {l:?}")))
            }
        }
    }

    pub fn to_element(&self, seed: &Seed) -> Result<QElement, CliError> {
        let n = seed.rank();
        if self.d == 0 || self.d % qcluster_core::qtorus::torus_denominator(seed) != 0 {
            return Err(CliError::Input(format!("D = {} is not a multiple of the seed's denominator", self.d)));
        }
        let mut x = QElement::zero(n, self.d);
        for t in &self.terms {
            if t.exp.len() != n {
                return Err(CliError::Input(format!("exponent {:?} has the wrong length for rank {n}", t.exp)));
            }
            let mut c = QCoeff::zero();
            for (q, v) in &t.coeff {
                c.add_term(*q, &v.value()?);
            }
            x.add_term(t.exp.clone(), &c);
        }
        Ok(x)
    }

    pub fn load(&self, context: Option<&Seed>) -> Result<(Seed, QElement), CliError> {
        let s = self.resolve_seed(context)?;
        let x = self.to_element(&s)?;
        Ok((s, x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedElement {
    pub name: String,
    #[serde(flatten)]
    pub element: ElementJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementBundle {
    pub elements: Vec<NamedElement>,
}

/// Either one element or a named bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementInput {
    Bundle(ElementBundle),
    Single(ElementJson),
}

impl ElementInput {
    pub fn into_named(self) -> Vec<NamedElement> {
        match self {
            ElementInput::Bundle(b) => b.elements,
            ElementInput::Single(e) => vec![NamedElement { name: "element".into(), element: e }],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    /// `ε_{from,to}` as `[num, den]`.
    pub weight: (i64, i64),
    pub reverse_weight: (i64, i64),
}

impl From<&Arrow> for EdgeJson {
    fn from(a: &Arrow) -> Self {
        EdgeJson { from: a.from, to: a.to, weight: a.weight, reverse_weight: a.reverse_weight }
    }
}

pub fn edges(seed: &Seed) -> Vec<EdgeJson> {
    seed.arrows().iter().map(EdgeJson::from).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub path: Vec<usize>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<Vec<i64>>,
}

impl From<&NodeEvidence> for NodeJson {
    fn from(e: &NodeEvidence) -> Self {
        NodeJson {
            path: e.path.steps().to_vec(),
            passed: e.passed,
            terms: e.terms,
            class: e.class.map(|c| format!("{c:?}")),
            image: e.image.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_path: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_monomial: Option<Vec<i32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_class: Option<String>,
    pub per_node: Vec<NodeJson>,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        let mut out = VerdictJson {
            status: v.status.name().into(),
            depth: None,
            witness_path: None,
            witness_monomial: None,
            reason: None,
            coefficient_class: v.coefficient_status.map(|c| format!("{c:?}")),
            per_node: v.evidence.iter().map(NodeJson::from).collect(),
        };
        match &v.status {
            Status::FailsAt { path, monomial, reason } => {
                out.witness_path = Some(path.steps().to_vec());
                out.witness_monomial = monomial.clone();
                out.reason = Some(format!("{reason:?}"));
            }
            Status::UpToDepth(d) => out.depth = Some(*d),
            _ => {}
        }
        out
    }
}

/// Right-aligned integer table, one row per line.
pub fn format_table(m: &IntMatrix) -> String {
    let width = m.iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1);
    let mut out = String::new();
    for row in m {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn to_pretty<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("artifacts serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcluster_core::folding::FoldingSpec;
    use qcluster_core::QuantumTorus;

    #[test]
    fn seed_round_trip() {
        for s in [sl2_standard_seed(), build_markov()] {
            let j = SeedJson::from_seed(&s);
            let text = serde_json::to_string(&j).unwrap();
            let back: SeedJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_seed().unwrap(), s);
        }
    }

    #[test]
    fn fractional_multipliers() {
        let a3 = Seed::from_quiver(3, &[(0, 1), (2, 1)], &[]).unwrap();
        let folded = FoldingSpec::new(a3, vec![vec![0, 2], vec![1]]).unwrap().fold();
        let j = SeedJson::from_seed(&folded);
        assert_eq!(j.d, vec![DJson::Ratio { num: 1, den: 2 }, DJson::Int(1)]);
        assert_eq!(j.to_seed().unwrap(), folded);
        let text = serde_json::to_string(&j.d).unwrap();
        assert_eq!(text, r#"[{"num":1,"den":2},1]"#);
    }

    #[test]
    fn element_round_trip_with_big_coefficients() {
        let s = sl2_standard_seed();
        let t = QuantumTorus::new(&s);
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let mut x = t.x(0).add(&t.x_multi(&[0, 1]));
        x.add_term(vec![0, 0, 2, 0], &QCoeff::monomial(-3, big.clone()));
        let j = ElementJson::from_element(&s, &x);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"123456789012345678901234567890\""));
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.load(None).unwrap(), (s, x));
    }

    #[test]
    fn labels_and_small_integers() {
        let text = r#"{"seed": "sl2-standard", "D": 1, "terms": [{"exp": [1, 0, 0, 0], "coeff": [[0, 1]]}]}"#;
        let e: ElementJson = serde_json::from_str(text).unwrap();
        let (s, x) = e.load(None).unwrap();
        assert_eq!(x, QuantumTorus::new(&s).x(0));
        assert!(seed_by_label("A4-chain").is_some());
        assert!(seed_by_label("B7").is_none());
    }

    #[test]
    fn bad_denominator_is_rejected() {
        let text = r#"{"seed": "markov", "D": 0, "terms": []}"#;
        let e: ElementJson = serde_json::from_str(text).unwrap();
        assert!(matches!(e.load(None), Err(CliError::Input(_))));
    }

    #[test]
    fn table_alignment() {
        assert_eq!(format_table(&vec![vec![1, -10], vec![0, 2]]), "  1 -10\n  0   2\n");
    }
}
