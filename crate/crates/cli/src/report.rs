//! Result documents written by the CLI.

use serde::{Deserialize, Serialize};

use minfre_core::oracle::{AgreementReport, BruteCover, GridResult};
use minfre_core::reduction::{ReductionState, Stage};
use minfre_core::solver::{Solution, Statistics, Status, Triple};
use minfre_core::vertexcover::{CoverResult, StructureReport};
use minfre_core::{Cell, InfeasibilityCause, Scalar, Variant};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauseDoc {
    pub code: String,
    pub message: String,
    pub detail: InfeasibilityCause,
}

impl From<InfeasibilityCause> for CauseDoc {
    fn from(c: InfeasibilityCause) -> Self {
        CauseDoc {
            code: c.code().to_string(),
            message: c.to_string(),
            detail: c,
        }
    }
}

/// One-based selector values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleDoc {
    pub lower: Vec<usize>,
    pub prime: Vec<Variant>,
    pub dprime: Vec<Variant>,
}

impl From<&Triple> for TripleDoc {
    fn from(t: &Triple) -> Self {
        TripleDoc {
            lower: t.lower.iter().map(|j| j + 1).collect(),
            prime: t.prime.clone(),
            dprime: t.dprime.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDoc {
    pub triple: TripleDoc,
    pub lower: Vec<Scalar>,
    pub upper: Vec<Scalar>,
}

impl CellDoc {
    pub fn new(t: &Triple, c: &Cell) -> Self {
        CellDoc {
            triple: t.into(),
            lower: c.lower.clone(),
            upper: c.upper.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveDoc {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<Vec<Scalar>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub objective: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub objective_display: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub triple: Option<TripleDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub infeasibility_cause: Option<CauseDoc>,
    pub statistics: Statistics,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub region: Option<Vec<CellDoc>>,
}

impl SolveDoc {
    pub fn new(sol: &Solution) -> Self {
        let cand = sol.candidate.as_ref();
        SolveDoc {
            status: sol.status,
            x: cand.map(|c| c.x.clone()),
            objective: cand.map(|c| c.objective),
            objective_display: cand.map(|c| c.objective.display_rounded(2)),
            triple: cand.map(|c| (&c.triple).into()),
            infeasibility_cause: sol.cause.map(Into::into),
            statistics: sol.statistics.clone(),
            trace: None,
            region: None,
        }
    }
}

pub fn join(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

pub fn join_one_based(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn render_stages(out: &mut String, stages: &[Stage]) {
    for s in stages {
        out.push_str(&format!(
            "  {:<8} |E'|={} |E''|={} |E_|={} total={}\n",
            s.label,
            s.sizes.prime,
            s.sizes.dprime,
            s.sizes.lower,
            s.sizes.total()
        ));
    }
}

pub fn render_solve(doc: &SolveDoc) -> String {
    let mut out = String::new();
    match doc.status {
        Status::Optimal => {
            out.push_str("status: optimal\n");
            if let (Some(x), Some(obj)) = (&doc.x, doc.objective) {
                out.push_str(&format!("x: {}\n", join(x)));
                out.push_str(&format!("objective: {obj} (display {})\n", obj.display_rounded(2)));
            }
            if let Some(t) = &doc.triple {
                let lower: Vec<String> = t.lower.iter().map(ToString::to_string).collect();
                let prime: Vec<String> = t.prime.iter().map(ToString::to_string).collect();
                let dprime: Vec<String> = t.dprime.iter().map(ToString::to_string).collect();
                out.push_str(&format!(
                    "selectors: e_=[{}] e'=[{}] e''=[{}]\n",
                    lower.join(","),
                    prime.join(","),
                    dprime.join(",")
                ));
            }
        }
        Status::Infeasible => {
            out.push_str("status: infeasible\n");
            if let Some(c) = &doc.infeasibility_cause {
                out.push_str(&format!("cause: {}\n", c.message));
            }
        }
    }
    let s = &doc.statistics;
    out.push_str(&format!(
        "triples: initial={} enumerated={} admissible={} rule_firings={}\n",
        s.initial_triples, s.enumerated_triples, s.admissible_triples, s.rule_firings
    ));
    if let Some(trace) = &doc.trace {
        out.push_str("trace:\n");
        for line in trace {
            out.push_str(&format!("  {line}\n"));
        }
    }
    if let Some(region) = &doc.region {
        out.push_str(&format!("region: {} cell(s)\n", region.len()));
        for c in region {
            out.push_str(&format!("  [{}, {}]\n", join(&c.lower), join(&c.upper)));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceDoc {
    pub trace: Vec<String>,
    pub stages: Vec<Stage>,
    pub dom_prime: Vec<(usize, Vec<Variant>)>,
    pub dom_dprime: Vec<(usize, Vec<Variant>)>,
    pub dom_lower: Vec<(usize, Vec<usize>)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub infeasibility_cause: Option<CauseDoc>,
}

impl ReduceDoc {
    pub fn new(state: &ReductionState, gate: Option<InfeasibilityCause>) -> Self {
        let tied = state.tied_rows();
        let below = state.below_rows();
        ReduceDoc {
            trace: state.trace.iter().map(ToString::to_string).collect(),
            stages: state.stages.clone(),
            dom_prime: (0..tied.len()).map(|k| (tied[k] + 1, state.dom_prime(k))).collect(),
            dom_dprime: (0..below.len()).map(|k| (below[k] + 1, state.dom_dprime(k))).collect(),
            dom_lower: (0..below.len())
                .map(|k| (below[k] + 1, state.dom_lower(k).iter().map(|j| j + 1).collect()))
                .collect(),
            infeasibility_cause: gate.or(state.infeasible).map(Into::into),
        }
    }
}

pub fn render_reduce(doc: &ReduceDoc) -> String {
    let mut out = String::new();
    for line in &doc.trace {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("domains:\n");
    let variants = |v: &[Variant]| -> String {
        let p: Vec<String> = v.iter().map(ToString::to_string).collect();
        format!("{{{}}}", p.join(","))
    };
    for (i, d) in &doc.dom_prime {
        out.push_str(&format!("  e'({i}) in {}\n", variants(d)));
    }
    for (i, d) in &doc.dom_dprime {
        out.push_str(&format!("  e''({i}) in {}\n", variants(d)));
    }
    for (i, d) in &doc.dom_lower {
        let p: Vec<String> = d.iter().map(ToString::to_string).collect();
        out.push_str(&format!("  e_({i}) in {{{}}}\n", p.join(",")));
    }
    out.push_str("cardinalities:\n");
    render_stages(&mut out, &doc.stages);
    if let Some(c) = &doc.infeasibility_cause {
        out.push_str(&format!("infeasible: {}\n", c.message));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDoc {
    /// One-based.
    pub cover: Vec<usize>,
    pub size: usize,
    pub x_star: Vec<Scalar>,
    pub selector: Vec<Variant>,
    pub checks: StructureReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub brute: Option<BruteCover>,
}

impl CoverDoc {
    pub fn new(r: &CoverResult, checks: StructureReport, brute: Option<BruteCover>) -> Self {
        CoverDoc {
            cover: r.cover.iter().map(|v| v + 1).collect(),
            size: r.size,
            x_star: r.x_star.clone(),
            selector: r.selector.clone(),
            checks,
            brute: brute.map(|b| BruteCover {
                size: b.size,
                cover: b.cover.iter().map(|v| v + 1).collect(),
            }),
        }
    }
}

pub fn render_cover(doc: &CoverDoc) -> String {
    let parts: Vec<String> = doc.cover.iter().map(ToString::to_string).collect();
    let mut out = format!("cover: {{{}}}\nsize: {}\nx*: {}\n", parts.join(","), doc.size, join(&doc.x_star));
    out.push_str("checks:\n");
    out.push_str(&doc.checks.to_string());
    if let Some(b) = &doc.brute {
        let parts: Vec<String> = b.cover.iter().map(ToString::to_string).collect();
        out.push_str(&format!("brute force: size {} cover {{{}}}\n", b.size, parts.join(",")));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<GridResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample: Option<AgreementReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cover: Option<BruteCover>,
}
