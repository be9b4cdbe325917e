//! Mask matrices and the seven domain-pruning rules.
//!
//! Each rule removes selector values that cannot appear in any admissible
//! triple. A removal is stored twice: as a disabled mask row or entry, and as a
//! line in the trace. Selector domains are always read back from the masks, so
//! the two views cannot drift apart.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::extremals::{BoundVectors, ExtremalSet, RowClassification, Variant};
use crate::model::Instance;
use crate::scalar::Scalar;
use crate::solver::InfeasibilityCause;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskRow {
    pub values: Vec<Scalar>,
    pub disabled: bool,
}

/// Tables of maximal and minimal solutions with disabled flags.
///
/// `upper_tied[v][k]` holds `X̄(i′ₖ, v)` for the `k`-th tied row,
/// `upper_below[v][k]` holds `X̄(i″ₖ, v)` for the `k`-th row with `a_ii < b_i`,
/// and `lower_below[k][j]` holds `b_{i″ₖ}` for `j ∈ J_{i″ₖ} ∪ {i″ₖ}`, `None` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskMatrices {
    pub n: usize,
    pub tied_rows: Vec<usize>,
    pub below_rows: Vec<usize>,
    pub upper_tied: [Vec<MaskRow>; 2],
    pub upper_below: [Vec<MaskRow>; 2],
    pub lower_below: Vec<Vec<Option<Scalar>>>,
}

pub fn build_masks(ext: &ExtremalSet, cls: &RowClassification, b: &[Scalar]) -> MaskMatrices {
    let rows_for = |rows: &[usize], v: Variant| -> Vec<MaskRow> {
        rows.iter()
            .map(|&i| MaskRow {
                values: ext.upper(i, v).to_vec(),
                disabled: false,
            })
            .collect()
    };
    let lower_below = cls
        .i3
        .iter()
        .map(|&i| {
            (0..ext.n())
                .map(|j| (j == i || cls.in_support(i, j)).then_some(b[i]))
                .collect()
        })
        .collect();
    MaskMatrices {
        n: ext.n(),
        tied_rows: cls.i2.clone(),
        below_rows: cls.i3.clone(),
        upper_tied: [rows_for(&cls.i2, Variant::One), rows_for(&cls.i2, Variant::Two)],
        upper_below: [rows_for(&cls.i3, Variant::One), rows_for(&cls.i3, Variant::Two)],
        lower_below,
    }
}

/// What a rule removed from a selector domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Removed {
    Variant(Variant),
    Column(usize),
}

/// Evidence that triggered a firing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A column where the bound vector exceeds the removed row or entry.
    Column(usize),
    /// Another row whose coefficients or pinned domain force the removal.
    Row(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleFiring {
    pub rule: u8,
    /// Row whose selector domain shrank.
    pub target: usize,
    pub removed: Removed,
    pub witness: Witness,
}

impl fmt::Display for RuleFiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let removed = match self.removed {
            Removed::Variant(v) => v.to_string(),
            Removed::Column(j) => (j + 1).to_string(),
        };
        let witness = match self.witness {
            Witness::Column(j) => format!("col{}", j + 1),
            Witness::Row(i) => format!("row{}", i + 1),
        };
        write!(
            f,
            "RULE{} target={} removed={} witness={}",
            self.rule,
            self.target + 1,
            removed,
            witness
        )
    }
}

/// Sizes of the three selector sets at some point of the reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cardinalities {
    pub prime: u128,
    pub dprime: u128,
    pub lower: u128,
}

impl Cardinalities {
    pub fn total(&self) -> u128 {
        self.prime
            .saturating_mul(self.dprime)
            .saturating_mul(self.lower)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub label: String,
    pub sizes: Cardinalities,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionState {
    pub masks: MaskMatrices,
    /// `J_i` for each row of `below_rows`, in the same order.
    support: Vec<Vec<usize>>,
    pub trace: Vec<RuleFiring>,
    pub stages: Vec<Stage>,
    pub infeasible: Option<InfeasibilityCause>,
}

impl ReductionState {
    pub fn new(ext: &ExtremalSet, cls: &RowClassification, b: &[Scalar]) -> Self {
        let masks = build_masks(ext, cls, b);
        let support = cls.i3.iter().map(|&i| cls.support[i].clone()).collect();
        let mut state = ReductionState {
            masks,
            support,
            trace: Vec::new(),
            stages: Vec::new(),
            infeasible: None,
        };
        state.record_stage("initial");
        state
    }

    pub fn tied_rows(&self) -> &[usize] {
        &self.masks.tied_rows
    }

    pub fn below_rows(&self) -> &[usize] {
        &self.masks.below_rows
    }

    /// `dom(e′(i′ₖ))`.
    pub fn dom_prime(&self, k: usize) -> Vec<Variant> {
        Variant::BOTH
            .into_iter()
            .filter(|v| !self.masks.upper_tied[v.index()][k].disabled)
            .collect()
    }

    /// `dom(e″(i″ₖ))`.
    pub fn dom_dprime(&self, k: usize) -> Vec<Variant> {
        Variant::BOTH
            .into_iter()
            .filter(|v| !self.masks.upper_below[v.index()][k].disabled)
            .collect()
    }

    /// `dom(e̲(i″ₖ))`, a subset of `J_{i″ₖ}`.
    pub fn dom_lower(&self, k: usize) -> Vec<usize> {
        self.support[k]
            .iter()
            .copied()
            .filter(|&j| self.masks.lower_below[k][j].is_some())
            .collect()
    }

    pub fn cardinalities(&self) -> Cardinalities {
        let product = |sizes: Vec<usize>| {
            sizes
                .into_iter()
                .fold(1u128, |acc, s| acc.saturating_mul(s as u128))
        };
        Cardinalities {
            prime: product((0..self.tied_rows().len()).map(|k| self.dom_prime(k).len()).collect()),
            dprime: product((0..self.below_rows().len()).map(|k| self.dom_dprime(k).len()).collect()),
            lower: product((0..self.below_rows().len()).map(|k| self.dom_lower(k).len()).collect()),
        }
    }

    fn record_stage(&mut self, label: &str) {
        let sizes = self.cardinalities();
        self.stages.push(Stage {
            label: label.to_string(),
            sizes,
        });
    }

    fn disable_tied(&mut self, rule: u8, k: usize, v: Variant, witness: Witness) -> bool {
        let row = &mut self.masks.upper_tied[v.index()][k];
        if row.disabled {
            return false;
        }
        row.disabled = true;
        self.trace.push(RuleFiring {
            rule,
            target: self.masks.tied_rows[k],
            removed: Removed::Variant(v),
            witness,
        });
        true
    }

    fn disable_below(&mut self, rule: u8, k: usize, v: Variant, witness: Witness) -> bool {
        let row = &mut self.masks.upper_below[v.index()][k];
        if row.disabled {
            return false;
        }
        row.disabled = true;
        self.trace.push(RuleFiring {
            rule,
            target: self.masks.below_rows[k],
            removed: Removed::Variant(v),
            witness,
        });
        true
    }

    fn disable_lower(&mut self, rule: u8, k: usize, j: usize, witness: Witness) -> bool {
        let entry = &mut self.masks.lower_below[k][j];
        if entry.is_none() {
            return false;
        }
        *entry = None;
        self.trace.push(RuleFiring {
            rule,
            target: self.masks.below_rows[k],
            removed: Removed::Column(j),
            witness,
        });
        true
    }

    fn flag(&mut self, cause: InfeasibilityCause) {
        if self.infeasible.is_none() {
            self.infeasible = Some(cause);
        }
    }

    /// Flags a tied or below row whose two maximal solutions are both removed.
    fn check_exhausted_upper(&mut self) {
        if let Some(k) = (0..self.tied_rows().len()).find(|&k| self.dom_prime(k).is_empty()) {
            self.flag(InfeasibilityCause::TiedRowExhausted {
                row: self.masks.tied_rows[k],
            });
        }
        if let Some(k) = (0..self.below_rows().len()).find(|&k| self.dom_dprime(k).is_empty()) {
            self.flag(InfeasibilityCause::BelowRowExhausted {
                row: self.masks.below_rows[k],
            });
        }
    }

    /// Flags a below row whose minimal solutions are all removed.
    fn check_exhausted_lower(&mut self) {
        if let Some(k) = (0..self.below_rows().len()).find(|&k| self.dom_lower(k).is_empty()) {
            self.flag(InfeasibilityCause::MinimalRowExhausted {
                row: self.masks.below_rows[k],
            });
        }
    }

    /// Rebuilds the domains from the initial masks and a trace, for auditing.
    pub fn replay(initial: &ReductionState, trace: &[RuleFiring]) -> ReductionState {
        let mut state = initial.clone();
        for f in trace {
            let tied = state.masks.tied_rows.iter().position(|&i| i == f.target);
            let below = state.masks.below_rows.iter().position(|&i| i == f.target);
            match (f.removed, f.rule) {
                (Removed::Variant(v), 1 | 4) => {
                    state.disable_tied(f.rule, tied.expect("tied target"), v, f.witness);
                }
                (Removed::Variant(v), _) => {
                    state.disable_below(f.rule, below.expect("below target"), v, f.witness);
                }
                (Removed::Column(j), _) => {
                    state.disable_lower(f.rule, below.expect("below target"), j, f.witness);
                }
            }
        }
        state
    }
}

/// Rules 1 and 2: a maximal solution lying below `max{X̲₁, X̲₂}` somewhere cannot
/// bound any nonempty cell.
pub fn apply_bound_rules(state: &mut ReductionState, bounds: &BoundVectors) {
    let floor = bounds.lower12();
    let exceeding = |row: &MaskRow| -> Option<usize> {
        floor
            .iter()
            .zip(&row.values)
            .position(|(lo, up)| lo > up)
    };
    for v in Variant::BOTH {
        for k in 0..state.tied_rows().len() {
            if let Some(j) = exceeding(&state.masks.upper_tied[v.index()][k]) {
                state.disable_tied(1, k, v, Witness::Column(j));
            }
        }
    }
    state.record_stage("rule1");
    for v in Variant::BOTH {
        for k in 0..state.below_rows().len() {
            if let Some(j) = exceeding(&state.masks.upper_below[v.index()][k]) {
                state.disable_below(2, k, v, Witness::Column(j));
            }
        }
    }
    state.record_stage("rule2");
    state.check_exhausted_upper();
}

/// Rule 3: the minimal solution `X̲(i, j)` is useless when `b_i` exceeds `(X̄₁)_j`.
pub fn apply_minimal_rule3(state: &mut ReductionState, bounds: &BoundVectors) {
    for k in 0..state.below_rows().len() {
        let i = state.masks.below_rows[k];
        for j in state.support[k].clone() {
            let entry = state.masks.lower_below[k][j];
            if entry.is_some_and(|bi| bi > bounds.upper1[j]) {
                state.disable_lower(3, k, j, Witness::Column(j));
            }
            debug_assert!(i != j);
        }
    }
    state.record_stage("rule3");
    state.check_exhausted_lower();
}

/// Rules 4 and 5: the second maximal solution of row `r` is ruled out when some
/// below row `s` with a larger right-hand side sits in `J_r¹`.
pub fn apply_cross_rules(state: &mut ReductionState, inst: &Instance, cls: &RowClassification) {
    let b = inst.b();
    for k in 0..state.tied_rows().len() {
        let r = state.masks.tied_rows[k];
        if let Some(&s) = cls
            .i3
            .iter()
            .find(|&&s| inst.a(r, s) > b[r] && b[r] < b[s])
        {
            state.disable_tied(4, k, Variant::Two, Witness::Row(s));
        }
    }
    state.record_stage("rule4");
    for k in 0..state.below_rows().len() {
        let r = state.masks.below_rows[k];
        if let Some(&s) = cls
            .i3
            .iter()
            .find(|&&s| s != r && inst.a(r, s) > b[r] && b[r] < b[s])
        {
            state.disable_below(5, k, Variant::Two, Witness::Row(s));
        }
    }
    state.record_stage("rule5");
    state.check_exhausted_upper();
}

/// Rules 6 and 7: a row pinned to its first maximal solution caps `x_r` at `b_r`,
/// so no below row `s` with `b_s > b_r` may use `r` as its minimal column.
pub fn apply_pinned_rules(state: &mut ReductionState, cls: &RowClassification, b: &[Scalar]) {
    let pinned_tied: Vec<usize> = (0..state.tied_rows().len())
        .filter(|&k| state.dom_prime(k) == [Variant::One])
        .map(|k| state.masks.tied_rows[k])
        .collect();
    for r in pinned_tied {
        for ks in 0..state.below_rows().len() {
            let s = state.masks.below_rows[ks];
            if cls.in_support(s, r) && b[r] < b[s] {
                state.disable_lower(6, ks, r, Witness::Row(r));
            }
        }
    }
    state.record_stage("rule6");
    let pinned_below: Vec<usize> = (0..state.below_rows().len())
        .filter(|&k| state.dom_dprime(k) == [Variant::One])
        .map(|k| state.masks.below_rows[k])
        .collect();
    for r in pinned_below {
        for ks in 0..state.below_rows().len() {
            let s = state.masks.below_rows[ks];
            if s != r && cls.in_support(s, r) && b[r] < b[s] {
                state.disable_lower(7, ks, r, Witness::Row(r));
            }
        }
    }
    state.record_stage("rule7");
    state.check_exhausted_lower();
}

/// Runs the rules in schedule order, stopping at the first infeasibility verdict.
pub fn reduce(
    inst: &Instance,
    cls: &RowClassification,
    ext: &ExtremalSet,
    bounds: &BoundVectors,
) -> ReductionState {
    let mut state = ReductionState::new(ext, cls, inst.b());
    apply_bound_rules(&mut state, bounds);
    if state.infeasible.is_some() {
        return state;
    }
    apply_minimal_rule3(&mut state, bounds);
    if state.infeasible.is_some() {
        return state;
    }
    apply_cross_rules(&mut state, inst, cls);
    if state.infeasible.is_some() {
        return state;
    }
    apply_pinned_rules(&mut state, cls, inst.b());
    state
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremals::{aggregate_bounds, classify_rows, extremal_solutions};
    use crate::testutil::{example1, s, sv};

    fn setup(inst: &Instance) -> (RowClassification, ExtremalSet, BoundVectors) {
        let cls = classify_rows(inst);
        let ext = extremal_solutions(inst, &cls);
        let bounds = aggregate_bounds(&ext, &cls);
        (cls, ext, bounds)
    }

    fn one_based(v: Vec<usize>) -> Vec<usize> {
        v.into_iter().map(|j| j + 1).collect()
    }

    // No instance reaches these two checks, so drive them from hand-disabled masks.
    #[test]
    fn exhausted_upper_domains_are_flagged() {
        let inst = example1();
        let (cls, ext, _) = setup(&inst);
        let mut state = ReductionState::new(&ext, &cls, inst.b());
        for v in Variant::BOTH {
            state.disable_tied(1, 2, v, Witness::Column(0));
        }
        state.check_exhausted_upper();
        assert_eq!(state.infeasible, Some(InfeasibilityCause::TiedRowExhausted { row: 4 }));

        let mut state = ReductionState::new(&ext, &cls, inst.b());
        for v in Variant::BOTH {
            state.disable_below(2, 1, v, Witness::Column(0));
        }
        state.check_exhausted_upper();
        assert_eq!(state.infeasible, Some(InfeasibilityCause::BelowRowExhausted { row: 7 }));
    }

    #[test]
    fn example_one_masks() {
        let inst = example1();
        let (cls, ext, _) = setup(&inst);
        let m = build_masks(&ext, &cls, inst.b());
        let row: Vec<Option<Scalar>> = m.lower_below[0].clone();
        let enabled: Vec<usize> = (0..10).filter(|&j| row[j].is_some()).map(|j| j + 1).collect();
        assert_eq!(enabled, vec![1, 3, 4, 6, 7, 9, 10]);
        assert!(row.iter().flatten().all(|&v| v == s("0.55")));
        assert_eq!(
            m.upper_tied[0][0].values,
            sv(&["1", "0.57", "1", "1", "1", "1", "1", "1", "1", "1"])
        );
    }

    #[test]
    fn no_below_rows_gives_empty_tables() {
        let inst = Instance::new(vec![sv(&["0.5"])], sv(&["0.5"]), sv(&["1"]), crate::Sense::Minimize).unwrap();
        let (cls, ext, _) = setup(&inst);
        let m = build_masks(&ext, &cls, inst.b());
        assert!(m.upper_below[0].is_empty() && m.upper_below[1].is_empty());
        assert!(m.lower_below.is_empty());
    }

    #[test]
    fn example_one_cascade() {
        let inst = example1();
        let (cls, ext, bounds) = setup(&inst);
        let state = reduce(&inst, &cls, &ext, &bounds);
        assert!(state.infeasible.is_none());
        let seq: Vec<(u128, u128, u128)> = state
            .stages
            .iter()
            .map(|st| (st.sizes.prime, st.sizes.dprime, st.sizes.lower))
            .collect();
        assert_eq!(
            seq,
            vec![
                (16, 8, 144),
                (4, 8, 144),
                (4, 1, 144),
                (4, 1, 60),
                (2, 1, 60),
                (2, 1, 60),
                (2, 1, 12),
                (2, 1, 4),
            ]
        );
        assert_eq!(state.stages[0].sizes.total(), 18432);
        assert_eq!(state.cardinalities().total(), 8);
        assert_eq!(one_based(state.dom_lower(0)), vec![1, 6]);
        assert_eq!(one_based(state.dom_lower(1)), vec![1]);
        assert_eq!(one_based(state.dom_lower(2)), vec![1, 2]);
    }

    #[test]
    fn example_one_trace_lines() {
        let inst = example1();
        let (cls, ext, bounds) = setup(&inst);
        let state = reduce(&inst, &cls, &ext, &bounds);
        let lines: Vec<String> = state.trace.iter().map(ToString::to_string).collect();
        assert_eq!(lines[0], "RULE1 target=2 removed=2 witness=col1");
        assert_eq!(lines[1], "RULE1 target=5 removed=2 witness=col1");
        assert!(lines.contains(&"RULE4 target=4 removed=2 witness=row7".to_string()));
        assert!(lines.contains(&"RULE7 target=7 removed=10 witness=row10".to_string()));
        assert!(!lines.iter().any(|l| l.starts_with("RULE5")));
    }

    #[test]
    fn rule3_domain_of_row_seven() {
        let inst = example1();
        let (cls, ext, bounds) = setup(&inst);
        let mut state = ReductionState::new(&ext, &cls, inst.b());
        apply_bound_rules(&mut state, &bounds);
        apply_minimal_rule3(&mut state, &bounds);
        assert_eq!(one_based(state.dom_lower(0)), vec![1, 4, 6, 10]);
    }

    #[test]
    fn zero_floor_disables_nothing() {
        // every row tied at zero: lower bounds vanish
        let inst = Instance::new(
            vec![sv(&["0", "1"]), sv(&["1", "0"])],
            sv(&["0", "0"]),
            sv(&["1", "1"]),
            crate::Sense::Maximize,
        )
        .unwrap();
        let (cls, ext, bounds) = setup(&inst);
        let mut state = ReductionState::new(&ext, &cls, inst.b());
        apply_bound_rules(&mut state, &bounds);
        assert!(state.trace.is_empty());
    }

    #[test]
    fn constant_rhs_blocks_cross_rules() {
        let inst = Instance::new(
            vec![sv(&["0.5", "0.9"]), sv(&["0.9", "0.1"])],
            sv(&["0.5", "0.5"]),
            sv(&["1", "1"]),
            crate::Sense::Minimize,
        )
        .unwrap();
        let (cls, ext, _) = setup(&inst);
        let mut state = ReductionState::new(&ext, &cls, inst.b());
        apply_cross_rules(&mut state, &inst, &cls);
        assert!(state.trace.is_empty());
    }

    #[test]
    fn nothing_pinned_means_no_change() {
        let inst = example1();
        let (cls, ext, _) = setup(&inst);
        let mut state = ReductionState::new(&ext, &cls, inst.b());
        apply_pinned_rules(&mut state, &cls, inst.b());
        assert!(state.trace.is_empty());
    }

    #[test]
    fn replay_reproduces_domains() {
        let inst = example1();
        let (cls, ext, bounds) = setup(&inst);
        let initial = ReductionState::new(&ext, &cls, inst.b());
        let done = reduce(&inst, &cls, &ext, &bounds);
        let replayed = ReductionState::replay(&initial, &done.trace);
        assert_eq!(replayed.masks, done.masks);
        assert_eq!(replayed.trace, done.trace);
    }

    #[test]
    fn emptied_minimal_row_is_flagged() {
        let inst = Instance::new(
            vec![sv(&["0.9", "0"]), sv(&["0.8", "0.3"])],
            sv(&["0.4", "0.6"]),
            sv(&["1", "1"]),
            crate::Sense::Minimize,
        )
        .unwrap();
        let (cls, ext, bounds) = setup(&inst);
        let state = reduce(&inst, &cls, &ext, &bounds);
        assert_eq!(
            state.infeasible,
            Some(InfeasibilityCause::MinimalRowExhausted { row: 1 })
        );
    }
}
