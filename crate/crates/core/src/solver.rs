//! Optimization over the feasible set.
//!
//! The feasible set is a finite union of boxes, one per admissible triple of
//! selectors. A linear objective attains its optimum over a box at a vertex that
//! is read off the signs of the costs, so the global optimum is the best of
//! those vertices over all admissible triples.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremals::{
    aggregate_bounds, cell_of, classify_rows, extremal_solutions, selector_bounds_unchecked,
    BoundVectors, Cell, ExtremalSet, RowClassification, Variant,
};
use crate::model::{Instance, Sense};
use crate::reduction::{reduce, ReductionState, RuleFiring, Stage};
use crate::scalar::Scalar;

/// Why an instance has no feasible point. Row and column indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InfeasibilityCause {
    /// Every coefficient of the row is below its right-hand side.
    EmptySupport { row: usize },
    /// `max{X̲₁, X̲₂}` exceeds `X̄₁` at this column.
    BoundConflict { column: usize },
    /// Both maximal solutions of a tied row were ruled out.
    TiedRowExhausted { row: usize },
    /// Both maximal solutions of a row with `a_ii < b_i` were ruled out.
    BelowRowExhausted { row: usize },
    /// Every minimal solution of a row with `a_ii < b_i` was ruled out.
    MinimalRowExhausted { row: usize },
    /// The reduced domains contain no triple with a nonempty cell.
    NoAdmissibleTriple,
}

impl InfeasibilityCause {
    pub fn code(&self) -> &'static str {
        match self {
            InfeasibilityCause::EmptySupport { .. } => "empty-support",
            InfeasibilityCause::BoundConflict { .. } => "bound-conflict",
            InfeasibilityCause::TiedRowExhausted { .. } => "tied-row-exhausted",
            InfeasibilityCause::BelowRowExhausted { .. } => "below-row-exhausted",
            InfeasibilityCause::MinimalRowExhausted { .. } => "minimal-row-exhausted",
            InfeasibilityCause::NoAdmissibleTriple => "no-admissible-triple",
        }
    }
}

impl fmt::Display for InfeasibilityCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InfeasibilityCause::EmptySupport { row } => {
                write!(f, "empty-support: every a_{0}j < b_{0}", row + 1)
            }
            InfeasibilityCause::BoundConflict { column } => write!(
                f,
                "bound-conflict: lower bound exceeds upper bound at column {}",
                column + 1
            ),
            InfeasibilityCause::TiedRowExhausted { row } => write!(
                f,
                "tied-row-exhausted: no maximal solution left for row {}",
                row + 1
            ),
            InfeasibilityCause::BelowRowExhausted { row } => write!(
                f,
                "below-row-exhausted: no maximal solution left for row {}",
                row + 1
            ),
            InfeasibilityCause::MinimalRowExhausted { row } => write!(
                f,
                "minimal-row-exhausted: no minimal solution left for row {}",
                row + 1
            ),
            InfeasibilityCause::NoAdmissibleTriple => {
                f.write_str("no-admissible-triple: every cell is empty")
            }
        }
    }
}

/// Selectors `(e̲, e′, e″)`. `lower` and `dprime` follow the ascending order of
/// the rows with `a_ii < b_i`, `prime` that of the tied rows. The derived order
/// is the lexicographic tie-break order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub lower: Vec<usize>,
    pub prime: Vec<Variant>,
    pub dprime: Vec<Variant>,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lower: Vec<String> = self.lower.iter().map(|j| (j + 1).to_string()).collect();
        let prime: Vec<String> = self.prime.iter().map(ToString::to_string).collect();
        let dprime: Vec<String> = self.dprime.iter().map(ToString::to_string).collect();
        write!(
            f,
            "e_=[{}] e'=[{}] e''=[{}]",
            lower.join(","),
            prime.join(","),
            dprime.join(",")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub triple: Triple,
    pub cell: Cell,
    pub x: Vec<Scalar>,
    pub objective: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statistics {
    /// Size of the unreduced selector product.
    pub initial_triples: u128,
    /// Size of the product over reduced domains; all of these are enumerated.
    pub enumerated_triples: u128,
    pub admissible_triples: u128,
    pub rule_firings: usize,
    pub stages: Vec<Stage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub status: Status,
    pub candidate: Option<Candidate>,
    pub cause: Option<InfeasibilityCause>,
    pub statistics: Statistics,
    pub trace: Vec<RuleFiring>,
}

impl Solution {
    pub fn x(&self) -> Option<&[Scalar]> {
        self.candidate.as_ref().map(|c| c.x.as_slice())
    }

    pub fn objective(&self) -> Option<Scalar> {
        self.candidate.as_ref().map(|c| c.objective)
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Apply the pruning rules before enumerating.
    pub rules: bool,
    /// Refuse to enumerate more triples than this.
    pub max_triples: Option<u128>,
    /// Evaluate triples on the rayon pool.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            rules: true,
            max_triples: None,
            parallel: true,
        }
    }
}

/// Empty supports first, then the aggregated-bound check.
pub fn gate_feasibility(
    cls: &RowClassification,
    bounds: &BoundVectors,
) -> std::result::Result<(), InfeasibilityCause> {
    if let Some(&row) = cls.empty_rows().first() {
        return Err(InfeasibilityCause::EmptySupport { row });
    }
    let floor = bounds.lower12();
    if let Some(column) = floor
        .iter()
        .zip(&bounds.upper1)
        .position(|(lo, up)| lo > up)
    {
        return Err(InfeasibilityCause::BoundConflict { column });
    }
    Ok(())
}

/// Reduced selector domains laid out as mixed-radix axes:
/// first the `e̲` axes, then `e′`, then `e″`. The first axis is most significant.
#[derive(Clone, Debug)]
struct Axes {
    lower: Vec<Vec<usize>>,
    prime: Vec<Vec<Variant>>,
    dprime: Vec<Vec<Variant>>,
}

impl Axes {
    fn from_state(state: &ReductionState) -> Self {
        let q = state.below_rows().len();
        let p = state.tied_rows().len();
        Axes {
            lower: (0..q).map(|k| state.dom_lower(k)).collect(),
            prime: (0..p).map(|k| state.dom_prime(k)).collect(),
            dprime: (0..q).map(|k| state.dom_dprime(k)).collect(),
        }
    }

    fn radices(&self) -> Vec<usize> {
        self.lower
            .iter()
            .map(Vec::len)
            .chain(self.prime.iter().map(Vec::len))
            .chain(self.dprime.iter().map(Vec::len))
            .collect()
    }

    fn count(&self) -> u128 {
        self.radices()
            .into_iter()
            .fold(1u128, |acc, r| acc.saturating_mul(r as u128))
    }

    fn triple(&self, digits: &[usize]) -> Triple {
        let q = self.lower.len();
        let p = self.prime.len();
        Triple {
            lower: (0..q).map(|k| self.lower[k][digits[k]]).collect(),
            prime: (0..p).map(|k| self.prime[k][digits[q + k]]).collect(),
            dprime: (0..q).map(|k| self.dprime[k][digits[q + p + k]]).collect(),
        }
    }

    fn decode(&self, radices: &[usize], mut index: u64) -> Triple {
        let mut digits = vec![0; radices.len()];
        for (d, &r) in digits.iter_mut().zip(radices).rev() {
            *d = (index % r as u64) as usize;
            index /= r as u64;
        }
        self.triple(&digits)
    }
}

struct Context {
    cls: RowClassification,
    ext: ExtremalSet,
    bounds: BoundVectors,
}

impl Context {
    fn new(inst: &Instance) -> Self {
        let cls = classify_rows(inst);
        let ext = extremal_solutions(inst, &cls);
        let bounds = aggregate_bounds(&ext, &cls);
        Context { cls, ext, bounds }
    }

    fn cell(&self, t: &Triple) -> Cell {
        let sb = selector_bounds_unchecked(&self.ext, &self.cls, &t.prime, &t.dprime, &t.lower);
        cell_of(&self.bounds, &sb)
    }
}

/// Streams `(Triple, Cell)` for every triple over the reduced domains whose cell
/// is nonempty, in lexicographic triple order.
pub struct AdmissibleIter<'a> {
    axes: Axes,
    radices: Vec<usize>,
    digits: Option<Vec<usize>>,
    ext: &'a ExtremalSet,
    cls: &'a RowClassification,
    bounds: &'a BoundVectors,
}

impl AdmissibleIter<'_> {
    fn advance(&mut self) {
        let Some(digits) = self.digits.as_mut() else {
            return;
        };
        for pos in (0..digits.len()).rev() {
            digits[pos] += 1;
            if digits[pos] < self.radices[pos] {
                return;
            }
            digits[pos] = 0;
        }
        self.digits = None;
    }
}

impl Iterator for AdmissibleIter<'_> {
    type Item = (Triple, Cell);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let digits = self.digits.as_ref()?;
            let t = self.axes.triple(digits);
            self.advance();
            let sb = selector_bounds_unchecked(self.ext, self.cls, &t.prime, &t.dprime, &t.lower);
            let cell = cell_of(self.bounds, &sb);
            if cell.is_nonempty() {
                return Some((t, cell));
            }
        }
    }
}

pub fn enumerate_admissible<'a>(
    state: &ReductionState,
    bounds: &'a BoundVectors,
    ext: &'a ExtremalSet,
    cls: &'a RowClassification,
) -> AdmissibleIter<'a> {
    let axes = Axes::from_state(state);
    let radices = axes.radices();
    let digits = radices.iter().all(|&r| r > 0).then(|| vec![0; radices.len()]);
    AdmissibleIter {
        axes,
        radices,
        digits,
        ext,
        cls,
        bounds,
    }
}

/// The best vertex of a nonempty cell for the given costs and sense.
pub fn make_candidate(triple: Triple, cell: Cell, c: &[Scalar], sense: Sense) -> Candidate {
    let x: Vec<Scalar> = c
        .iter()
        .enumerate()
        .map(|(j, cj)| {
            let nonneg = !cj.is_negative();
            match (sense, nonneg) {
                (Sense::Minimize, true) | (Sense::Maximize, false) => cell.lower[j],
                (Sense::Minimize, false) | (Sense::Maximize, true) => cell.upper[j],
            }
        })
        .collect();
    let objective = crate::scalar::vec_ops::dot(c, &x);
    Candidate {
        triple,
        cell,
        x,
        objective,
    }
}

pub fn solve(inst: &Instance) -> Result<Solution> {
    solve_with(inst, &SolveOptions::default())
}

struct Prepared {
    ctx: Context,
    state: ReductionState,
    cause: Option<InfeasibilityCause>,
}

fn prepare(inst: &Instance, rules: bool) -> Prepared {
    let ctx = Context::new(inst);
    let mut state = ReductionState::new(&ctx.ext, &ctx.cls, inst.b());
    let mut cause = gate_feasibility(&ctx.cls, &ctx.bounds).err();
    if cause.is_none() && rules {
        state = reduce(inst, &ctx.cls, &ctx.ext, &ctx.bounds);
        cause = state.infeasible;
    }
    Prepared { ctx, state, cause }
}

fn statistics(state: &ReductionState, enumerated: u128, admissible: u128) -> Statistics {
    Statistics {
        initial_triples: state.stages[0].sizes.total(),
        enumerated_triples: enumerated,
        admissible_triples: admissible,
        rule_firings: state.trace.len(),
        stages: state.stages.clone(),
    }
}

fn infeasible(state: &ReductionState, cause: InfeasibilityCause, enumerated: u128) -> Solution {
    Solution {
        status: Status::Infeasible,
        candidate: None,
        cause: Some(cause),
        statistics: statistics(state, enumerated, 0),
        trace: state.trace.clone(),
    }
}

pub fn solve_with(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let Prepared { ctx, state, cause } = prepare(inst, opts.rules);
    if let Some(cause) = cause {
        return Ok(infeasible(&state, cause, 0));
    }
    let axes = Axes::from_state(&state);
    let total = axes.count();
    if let Some(limit) = opts.max_triples {
        if total > limit {
            return Err(Error::Budget(format!("{total} triples exceed the limit of {limit}")));
        }
    }
    let total64 = u64::try_from(total)
        .map_err(|_| Error::Budget(format!("{total} triples cannot be enumerated")))?;
    let radices = axes.radices();
    let sense = inst.sense();
    let c = inst.c();

    // (admissible count, best (key, index)); smaller key is better
    type Best = Option<(Scalar, u64)>;
    let key = |obj: Scalar| match sense {
        Sense::Minimize => obj,
        Sense::Maximize => -obj,
    };
    let eval = |index: u64| -> (u128, Best) {
        let t = axes.decode(&radices, index);
        let cell = ctx.cell(&t);
        if !cell.is_nonempty() {
            return (0, None);
        }
        let cand = make_candidate(t, cell, c, sense);
        (1, Some((key(cand.objective), index)))
    };
    let merge = |a: (u128, Best), b: (u128, Best)| -> (u128, Best) {
        let best = match (a.1, b.1) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        (a.0 + b.0, best)
    };
    let (admissible, best) = if opts.parallel {
        (0..total64)
            .into_par_iter()
            .map(eval)
            .reduce(|| (0, None), merge)
    } else {
        (0..total64).map(eval).fold((0, None), merge)
    };

    let Some((_, index)) = best else {
        return Ok(infeasible(&state, InfeasibilityCause::NoAdmissibleTriple, total));
    };
    let t = axes.decode(&radices, index);
    let cell = ctx.cell(&t);
    let candidate = make_candidate(t, cell, c, sense);
    Ok(Solution {
        status: Status::Optimal,
        candidate: Some(candidate),
        cause: None,
        statistics: statistics(&state, total, admissible),
        trace: state.trace.clone(),
    })
}

/// Every nonempty cell over the admissible triples, in triple order.
///
/// With `prune_dominated`, duplicate cells and cells contained in another cell
/// are dropped; the first representative in triple order is kept.
pub fn feasible_region(
    inst: &Instance,
    prune_dominated: bool,
) -> std::result::Result<Vec<(Triple, Cell)>, InfeasibilityCause> {
    let Prepared { ctx, state, cause } = prepare(inst, true);
    if let Some(cause) = cause {
        return Err(cause);
    }
    let cells: Vec<(Triple, Cell)> =
        enumerate_admissible(&state, &ctx.bounds, &ctx.ext, &ctx.cls).collect();
    if cells.is_empty() {
        return Err(InfeasibilityCause::NoAdmissibleTriple);
    }
    if !prune_dominated {
        return Ok(cells);
    }
    let keep: Vec<bool> = (0..cells.len())
        .map(|a| {
            !cells.iter().enumerate().any(|(b, (_, other))| {
                b != a
                    && cells[a].1.is_within(other)
                    // equal cells: keep the earliest one only
                    && (cells[a].1 != *other || b < a)
            })
        })
        .collect();
    Ok(cells
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect())
}
