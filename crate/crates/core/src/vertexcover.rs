//! Minimum vertex cover as a maximization over the equation system.
//!
//! With `A` the adjacency matrix, `b = 0` and unit costs, maximizing `Σ x_j`
//! gives a binary optimum whose zero set is a minimum cover. Every row is tied
//! (`a_ii = 0 = b_i`), so only the `e′` selectors vary and each candidate is
//! `X̄₂(e′)`.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremals::{aggregate_bounds, classify_rows, extremal_solutions, Variant};
use crate::model::{Instance, Sense};
use crate::reduction::build_masks;
use crate::scalar::Scalar;
use crate::solver::{solve, Status};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct AdjacencyDoc {
    adjacency: Vec<Vec<u8>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AdjacencyInput {
    Doc(AdjacencyDoc),
    Bare(Vec<Vec<u8>>),
}

impl Graph {
    /// Builds a graph from zero-based edges. Repeated edges collapse; loops are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Graph(format!(
                    "edge ({}, {}) references a vertex outside 1..={n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop at vertex {}", u + 1)));
            }
            adj[u][v] = true;
            adj[v][u] = true;
        }
        Ok(Graph { n, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn from_adjacency(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut adj = vec![vec![false; n]; n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Graph(format!(
                    "adjacency row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 if i == j => {
                        return Err(Error::Graph(format!("self-loop at vertex {}", i + 1)))
                    }
                    1 => adj[i][j] = true,
                    _ => {
                        return Err(Error::Graph(format!(
                            "adjacency entry ({}, {}) is {v}, expected 0 or 1",
                            i + 1,
                            j + 1
                        )))
                    }
                }
            }
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..i {
                if adj[i][j] != adj[j][i] {
                    return Err(Error::Graph(format!(
                        "adjacency is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Graph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.adj[u][v])
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        self.adj
            .iter()
            .map(|r| r.iter().map(|&e| u8::from(e)).collect())
            .collect()
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.adj[u][v] = false;
        g.adj[v][u] = false;
        g
    }

    pub fn is_cover(&self, cover: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &v in cover {
            inside[v] = true;
        }
        self.edges().iter().all(|&(u, v)| inside[u] || inside[v])
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &u)| set[k + 1..].iter().all(|&v| !self.adj[u][v]))
    }

    /// Parses a DIMACS-like edge list: `c` comments, one `p <n> <m>` (or
    /// `p edge <n> <m>`) line, then `e <u> <v>` lines with one-based vertices.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            let bad = |msg: &str| Error::Graph(format!("line {}: {msg}", lineno + 1));
            let mut tok = line.split_whitespace();
            match tok.next() {
                None | Some("c") => continue,
                Some("p") => {
                    if header.is_some() {
                        return Err(bad("duplicate problem line"));
                    }
                    let rest: Vec<&str> = tok.collect();
                    let nums = match rest.as_slice() {
                        [n, m] => [n, m],
                        [_, n, m] => [n, m],
                        _ => return Err(bad("expected `p <n> <m>`")),
                    };
                    let n = nums[0].parse().map_err(|_| bad("invalid vertex count"))?;
                    let m = nums[1].parse().map_err(|_| bad("invalid edge count"))?;
                    header = Some((n, m));
                }
                Some("e") => {
                    let (n, _) = header.ok_or_else(|| bad("edge before problem line"))?;
                    let mut vertex = || -> Result<usize> {
                        let v: usize = tok
                            .next()
                            .ok_or_else(|| bad("edge needs two endpoints"))?
                            .parse()
                            .map_err(|_| bad("invalid vertex"))?;
                        if v == 0 || v > n {
                            return Err(bad(&format!("vertex {v} outside 1..={n}")));
                        }
                        Ok(v - 1)
                    };
                    let u = vertex()?;
                    let v = vertex()?;
                    if u == v {
                        return Err(bad(&format!("self-loop at vertex {}", u + 1)));
                    }
                    edges.push((u, v));
                }
                Some(other) => return Err(bad(&format!("unknown line type {other:?}"))),
            }
        }
        let (n, _) = header.ok_or_else(|| Error::Graph("missing problem line".into()))?;
        Graph::new(n, &edges)
    }

    pub fn parse_adjacency_json(text: &str) -> Result<Self> {
        let rows = match serde_json::from_str(text) {
            Ok(AdjacencyInput::Doc(d)) => d.adjacency,
            Ok(AdjacencyInput::Bare(rows)) => rows,
            Err(_) => {
                return Err(Error::Graph(
                    "expected {\"adjacency\": [[0|1, ...], ...]} or a bare 0/1 matrix".into(),
                ))
            }
        };
        Graph::from_adjacency(&rows)
    }

    /// Adjacency JSON if the text starts with `{` or `[`, edge list otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with(['{', '[']) {
            Graph::parse_adjacency_json(text)
        } else {
            Graph::parse_edge_list(text)
        }
    }

    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("p edge {} {}\n", self.n, edges.len());
        for (u, v) in edges {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        out
    }

    pub fn to_adjacency_json(&self) -> String {
        serde_json::to_string(&AdjacencyDoc {
            adjacency: self.adjacency(),
        })
        .expect("adjacency serializes")
    }
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    Graph::parse(&fs::read_to_string(path)?)
}

pub fn graph_to_instance(g: &Graph) -> Instance {
    let a = g
        .adj
        .iter()
        .map(|r| r.iter().map(|&e| if e { Scalar::ONE } else { Scalar::ZERO }).collect())
        .collect();
    Instance::new(a, vec![Scalar::ZERO; g.n], vec![Scalar::ONE; g.n], Sense::Maximize)
        .unwrap_or_else(|_| unreachable!("adjacency of a valid graph is a valid instance"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverResult {
    /// Zero-based, ascending.
    pub cover: Vec<usize>,
    pub size: usize,
    pub x_star: Vec<Scalar>,
    /// `e*` over all rows (every row is tied).
    pub selector: Vec<Variant>,
}

impl CoverResult {
    fn from_selector(g: &Graph, selector: Vec<Variant>) -> Self {
        let x_star = selector_point(g, &selector);
        let cover: Vec<usize> = (0..g.n).filter(|&j| x_star[j] == Scalar::ZERO).collect();
        CoverResult {
            size: cover.len(),
            cover,
            x_star,
            selector,
        }
    }
}

/// `X̄₂(e′)` for the derived instance: `x_j = 0` iff `e′(j) = 1` or some
/// neighbor `i` of `j` has `e′(i) = 2`.
pub fn selector_point(g: &Graph, selector: &[Variant]) -> Vec<Scalar> {
    (0..g.n)
        .map(|j| {
            let zero = selector[j] == Variant::One
                || g.neighbors(j).any(|i| selector[i] == Variant::Two);
            if zero {
                Scalar::ZERO
            } else {
                Scalar::ONE
            }
        })
        .collect()
}

/// Solves through the general solver.
pub fn solve_cover(g: &Graph) -> Result<CoverResult> {
    if g.n == 0 {
        return Ok(CoverResult {
            cover: Vec::new(),
            size: 0,
            x_star: Vec::new(),
            selector: Vec::new(),
        });
    }
    let sol = solve(&graph_to_instance(g))?;
    match (sol.status, sol.candidate) {
        (Status::Optimal, Some(c)) => Ok(CoverResult::from_selector(g, c.triple.prime)),
        _ => unreachable!("the all-zero point satisfies every row of a cover instance"),
    }
}

/// Enumerates only selectors whose value-2 rows form an independent set:
/// fixing `e′(i) = 2` forces every neighbor of `i` to 1. Selectors are visited
/// in the same lexicographic order as the general solver, and only a strictly
/// better objective replaces the incumbent, so both return the same `e*`.
pub fn solve_cover_specialized(g: &Graph) -> CoverResult {
    struct Search<'a> {
        g: &'a Graph,
        current: Vec<Variant>,
        forced: Vec<usize>,
        best: Option<(usize, Vec<Variant>)>,
    }
    impl Search<'_> {
        fn run(&mut self, i: usize, twos: usize) {
            let n = self.g.n;
            if let Some((best, _)) = &self.best {
                if twos + (n - i) <= *best {
                    return;
                }
            }
            if i == n {
                self.best = Some((twos, self.current.clone()));
                return;
            }
            self.current[i] = Variant::One;
            self.run(i + 1, twos);
            if self.forced[i] == 0 {
                self.current[i] = Variant::Two;
                for v in self.g.neighbors(i).collect::<Vec<_>>() {
                    self.forced[v] += 1;
                }
                self.run(i + 1, twos + 1);
                for v in self.g.neighbors(i).collect::<Vec<_>>() {
                    self.forced[v] -= 1;
                }
                self.current[i] = Variant::One;
            }
        }
    }
    let mut search = Search {
        g,
        current: vec![Variant::One; g.n],
        forced: vec![0; g.n],
        best: None,
    };
    search.run(0, 0);
    let (_, selector) = search.best.expect("the all-one selector is always visited");
    CoverResult::from_selector(g, selector)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub checks: Vec<Check>,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            writeln!(f, "{mark:>6} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn one_based(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Checks the structural facts of the cover regime against a solved result.
pub fn verify_structure(result: &CoverResult, g: &Graph) -> StructureReport {
    let n = g.n;
    let inst = graph_to_instance(g);
    let cls = classify_rows(&inst);
    let ext = extremal_solutions(&inst, &cls);
    let bounds = aggregate_bounds(&ext, &cls);
    let mut checks = Vec::new();

    let all_tied = cls.i1.is_empty() && cls.i3.is_empty() && cls.i2.len() == n;
    checks.push(check(
        "all-rows-tied",
        all_tied,
        format!("|I1|={} |I2|={} |I3|={}", cls.i1.len(), cls.i2.len(), cls.i3.len()),
    ));

    // With zero lower bounds and no below rows every cell [0, X̄₂(e′)] is
    // nonempty, hence every selector is admissible.
    let zero_floor = bounds.lower12().iter().all(|v| *v == Scalar::ZERO);
    let cap_one = bounds.upper1.iter().all(|v| *v == Scalar::ONE);
    checks.push(check(
        "every-selector-admissible",
        zero_floor && cap_one && cls.i3.is_empty(),
        if zero_floor { "lower bound is zero" } else { "lower bound is nonzero" },
    ));

    let twos: Vec<usize> = (0..result.selector.len())
        .filter(|&i| result.selector[i] == Variant::Two)
        .collect();
    let has_edges = !g.edges().is_empty();
    checks.push(check(
        "some-row-uses-second",
        !has_edges || !twos.is_empty(),
        format!("rows with e*(i)=2: {}", one_based(&twos)),
    ));

    let conflict = twos
        .iter()
        .flat_map(|&u| twos.iter().map(move |&v| (u, v)))
        .find(|&(u, v)| u < v && g.has_edge(u, v));
    checks.push(check(
        "second-rows-independent",
        result.selector.len() == n && conflict.is_none(),
        match conflict {
            Some((u, v)) => format!("rows {} and {} are adjacent", u + 1, v + 1),
            None => "no two value-2 rows are adjacent".to_string(),
        },
    ));

    let masks = build_masks(&ext, &cls, inst.b());
    let mut bad_mask = None;
    for (k, &i) in masks.tied_rows.iter().enumerate() {
        for j in 0..n {
            let want1 = if i == j { Scalar::ZERO } else { Scalar::ONE };
            let want2 = Scalar::ONE - inst.a(i, j);
            if masks.upper_tied[0][k].values[j] != want1 || masks.upper_tied[1][k].values[j] != want2 {
                bad_mask.get_or_insert((i, j));
            }
        }
    }
    checks.push(check(
        "mask-shape",
        bad_mask.is_none(),
        match bad_mask {
            Some((i, j)) => format!("mask entry ({}, {}) differs", i + 1, j + 1),
            None => "first masks are 1-I, second masks are 1-A".to_string(),
        },
    ));

    let binary = result.x_star.iter().all(|v| *v == Scalar::ZERO || *v == Scalar::ONE);
    let matches = result.selector.len() == n && selector_point(g, &result.selector) == result.x_star;
    checks.push(check(
        "binary-optimum",
        binary && matches,
        "x* is binary and equals the selector point",
    ));
    checks.push(check(
        "covers-every-edge",
        g.is_cover(&result.cover) && result.size == result.cover.len(),
        format!("cover {}", one_based(&result.cover)),
    ));

    StructureReport { checks }
}
