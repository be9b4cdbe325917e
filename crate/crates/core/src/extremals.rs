//! Row classification and the extremal solutions of each single-row system.
//!
//! A row is classified by comparing its diagonal coefficient with its right-hand
//! side. Rows with `a_ii > b_i` have a box of solutions, rows with `a_ii = b_i`
//! a union of two boxes sharing a minimum, and rows with `a_ii < b_i` a union of
//! boxes spanned by two maximal and `|J_i|` minimal solutions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::{vec_ops, Scalar};

/// Diagonal relation of a row: `a_ii > b_i`, `a_ii = b_i` or `a_ii < b_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowClass {
    Above,
    Equal,
    Below,
}

/// Which of the two maximal solutions of a row participates in a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Variant {
    pub const BOTH: [Variant; 2] = [Variant::One, Variant::Two];

    pub fn index(self) -> usize {
        match self {
            Variant::One => 0,
            Variant::Two => 1,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::One => f.write_str("1"),
            Variant::Two => f.write_str("2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowClassification {
    pub class: Vec<RowClass>,
    /// `J_i¹ = {j : a_ij > b_i}`, ascending.
    pub above: Vec<Vec<usize>>,
    /// `J_i² = {j : a_ij = b_i}`, ascending.
    pub equal: Vec<Vec<usize>>,
    /// `J_i = J_i¹ ∪ J_i²`, ascending.
    pub support: Vec<Vec<usize>>,
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
    pub i3: Vec<usize>,
}

impl RowClassification {
    pub fn n(&self) -> usize {
        self.class.len()
    }

    /// Rows whose support `J_i` is empty; any such row makes the system infeasible.
    pub fn empty_rows(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.support[i].is_empty()).collect()
    }

    pub fn in_support(&self, i: usize, j: usize) -> bool {
        self.support[i].binary_search(&j).is_ok()
    }
}

pub fn classify_rows(inst: &Instance) -> RowClassification {
    let n = inst.n();
    let b = inst.b();
    let mut cls = RowClassification {
        class: Vec::with_capacity(n),
        above: vec![Vec::new(); n],
        equal: vec![Vec::new(); n],
        support: vec![Vec::new(); n],
        i1: Vec::new(),
        i2: Vec::new(),
        i3: Vec::new(),
    };
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in 0..n {
            let a = inst.a(i, j);
            if a > b[i] {
                cls.above[i].push(j);
                cls.support[i].push(j);
            } else if a == b[i] {
                cls.equal[i].push(j);
                cls.support[i].push(j);
            }
        }
        let diag = inst.a(i, i);
        let class = match diag.cmp(&b[i]) {
            std::cmp::Ordering::Greater => RowClass::Above,
            std::cmp::Ordering::Equal => RowClass::Equal,
            std::cmp::Ordering::Less => RowClass::Below,
        };
        match class {
            RowClass::Above => cls.i1.push(i),
            RowClass::Equal => cls.i2.push(i),
            RowClass::Below => cls.i3.push(i),
        }
        cls.class.push(class);
    }
    cls
}

/// Extremal solutions of a single row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowExtremals {
    /// `a_ii > b_i`: unique maximum and minimum.
    Above { upper: Vec<Scalar>, lower: Vec<Scalar> },
    /// `a_ii = b_i`: two maximal solutions and a unique minimum.
    Equal {
        upper: [Vec<Scalar>; 2],
        lower: Vec<Scalar>,
    },
    /// `a_ii < b_i`: two maximal solutions and one minimal solution per `j ∈ J_i`.
    Below {
        upper: [Vec<Scalar>; 2],
        lower: Vec<(usize, Vec<Scalar>)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalSet {
    n: usize,
    rows: Vec<RowExtremals>,
}

fn unit_at(n: usize, i: usize, v: Scalar, fill: Scalar) -> Vec<Scalar> {
    let mut out = vec![fill; n];
    out[i] = v;
    out
}

/// `b_i` at position `i`, one elsewhere.
fn upper_one(n: usize, i: usize, bi: Scalar) -> Vec<Scalar> {
    unit_at(n, i, bi, Scalar::ONE)
}

/// `b_i` wherever `a_ij > b_i`, one elsewhere.
fn upper_two(inst: &Instance, i: usize) -> Vec<Scalar> {
    let bi = inst.b()[i];
    inst.row(i)
        .iter()
        .map(|&a| if a > bi { bi } else { Scalar::ONE })
        .collect()
}

/// `b_i` at positions `i` and `j`, zero elsewhere.
fn lower_pair(n: usize, i: usize, j: usize, bi: Scalar) -> Vec<Scalar> {
    let mut out = vec![Scalar::ZERO; n];
    out[i] = bi;
    out[j] = bi;
    out
}

pub fn extremal_solutions(inst: &Instance, cls: &RowClassification) -> ExtremalSet {
    let n = inst.n();
    let rows = (0..n)
        .map(|i| {
            let bi = inst.b()[i];
            match cls.class[i] {
                RowClass::Above => RowExtremals::Above {
                    upper: upper_one(n, i, bi),
                    lower: unit_at(n, i, bi, Scalar::ZERO),
                },
                RowClass::Equal => RowExtremals::Equal {
                    upper: [upper_one(n, i, bi), upper_two(inst, i)],
                    lower: unit_at(n, i, bi, Scalar::ZERO),
                },
                RowClass::Below => RowExtremals::Below {
                    upper: [upper_one(n, i, bi), upper_two(inst, i)],
                    lower: cls.support[i]
                        .iter()
                        .map(|&j| (j, lower_pair(n, i, j, bi)))
                        .collect(),
                },
            }
        })
        .collect();
    ExtremalSet { n, rows }
}

impl ExtremalSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &RowExtremals {
        &self.rows[i]
    }

    /// Maximal solution `X̄(i, v)` of an `I₂` or `I₃` row, or the maximum of an `I₁` row.
    pub fn upper(&self, i: usize, v: Variant) -> &[Scalar] {
        match &self.rows[i] {
            RowExtremals::Above { upper, .. } => upper,
            RowExtremals::Equal { upper, .. } | RowExtremals::Below { upper, .. } => {
                &upper[v.index()]
            }
        }
    }

    /// Minimum `X̲(i)` of an `I₁` or `I₂` row.
    pub fn lower(&self, i: usize) -> Option<&[Scalar]> {
        match &self.rows[i] {
            RowExtremals::Above { lower, .. } | RowExtremals::Equal { lower, .. } => Some(lower),
            RowExtremals::Below { .. } => None,
        }
    }

    /// Minimal solution `X̲(i, j)` of an `I₃` row.
    pub fn lower_at(&self, i: usize, j: usize) -> Option<&[Scalar]> {
        match &self.rows[i] {
            RowExtremals::Below { lower, .. } => lower
                .iter()
                .find(|(col, _)| *col == j)
                .map(|(_, v)| v.as_slice()),
            _ => None,
        }
    }

    /// Every vector held by the set, with a label, in row order.
    pub fn labelled(&self) -> Vec<(String, &[Scalar])> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let r = i + 1;
            match row {
                RowExtremals::Above { upper, lower } => {
                    out.push((format!("Xmax({r})"), upper.as_slice()));
                    out.push((format!("Xmin({r})"), lower.as_slice()));
                }
                RowExtremals::Equal { upper, lower } => {
                    out.push((format!("Xmax({r},1)"), upper[0].as_slice()));
                    out.push((format!("Xmax({r},2)"), upper[1].as_slice()));
                    out.push((format!("Xmin({r})"), lower.as_slice()));
                }
                RowExtremals::Below { upper, lower } => {
                    out.push((format!("Xmax({r},1)"), upper[0].as_slice()));
                    out.push((format!("Xmax({r},2)"), upper[1].as_slice()));
                    for (j, v) in lower {
                        out.push((format!("Xmin({r},{})", j + 1), v.as_slice()));
                    }
                }
            }
        }
        out
    }
}

/// Aggregated bounds over the `I₁` and `I₂` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundVectors {
    /// Componentwise max of the `I₁` minima (all zeros when `I₁ = ∅`).
    pub lower1: Vec<Scalar>,
    /// Componentwise min of the `I₁` maxima (all ones when `I₁ = ∅`).
    pub upper1: Vec<Scalar>,
    /// Componentwise max of the `I₂` minima (all zeros when `I₂ = ∅`).
    pub lower2: Vec<Scalar>,
}

impl BoundVectors {
    /// `max{lower1, lower2}`.
    pub fn lower12(&self) -> Vec<Scalar> {
        let mut v = self.lower1.clone();
        vec_ops::max_into(&mut v, &self.lower2);
        v
    }
}

pub fn aggregate_bounds(ext: &ExtremalSet, cls: &RowClassification) -> BoundVectors {
    let n = ext.n();
    let mut lower1 = vec_ops::zeros(n);
    let mut upper1 = vec_ops::ones(n);
    let mut lower2 = vec_ops::zeros(n);
    for &i in &cls.i1 {
        vec_ops::max_into(&mut lower1, ext.lower(i).expect("I1 rows have a minimum"));
        vec_ops::min_into(&mut upper1, ext.upper(i, Variant::One));
    }
    for &i in &cls.i2 {
        vec_ops::max_into(&mut lower2, ext.lower(i).expect("I2 rows have a minimum"));
    }
    BoundVectors {
        lower1,
        upper1,
        lower2,
    }
}

/// Selector-dependent bounds `(X̄₂(e′), X̄₃(e″), X̲₃(e̲))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectorBounds {
    pub upper2: Vec<Scalar>,
    pub upper3: Vec<Scalar>,
    pub lower3: Vec<Scalar>,
}

/// Builds the selector-dependent bounds. `prime` is indexed like `cls.i2`,
/// `dprime` and `lower` like `cls.i3`; `lower` holds column indices.
pub fn selector_bounds(
    ext: &ExtremalSet,
    cls: &RowClassification,
    prime: &[Variant],
    dprime: &[Variant],
    lower: &[usize],
) -> Result<SelectorBounds> {
    if prime.len() != cls.i2.len() {
        return Err(Error::Selector(format!(
            "e' has {} values for {} rows",
            prime.len(),
            cls.i2.len()
        )));
    }
    if dprime.len() != cls.i3.len() || lower.len() != cls.i3.len() {
        return Err(Error::Selector(format!(
            "e'' and e_ need {} values, got {} and {}",
            cls.i3.len(),
            dprime.len(),
            lower.len()
        )));
    }
    for (&i, &j) in cls.i3.iter().zip(lower) {
        if !cls.in_support(i, j) {
            return Err(Error::Selector(format!(
                "column {} is not in J_{}",
                j + 1,
                i + 1
            )));
        }
    }
    Ok(selector_bounds_unchecked(ext, cls, prime, dprime, lower))
}

pub(crate) fn selector_bounds_unchecked(
    ext: &ExtremalSet,
    cls: &RowClassification,
    prime: &[Variant],
    dprime: &[Variant],
    lower: &[usize],
) -> SelectorBounds {
    let n = ext.n();
    let mut upper2 = vec_ops::ones(n);
    for (&i, &v) in cls.i2.iter().zip(prime) {
        vec_ops::min_into(&mut upper2, ext.upper(i, v));
    }
    let mut upper3 = vec_ops::ones(n);
    let mut lower3 = vec_ops::zeros(n);
    for ((&i, &v), &j) in cls.i3.iter().zip(dprime).zip(lower) {
        vec_ops::min_into(&mut upper3, ext.upper(i, v));
        // X̲(i, j) is b_i at i and j, zero elsewhere
        let bi = ext.upper(i, Variant::One)[i];
        lower3[i] = lower3[i].max(bi);
        lower3[j] = lower3[j].max(bi);
    }
    SelectorBounds {
        upper2,
        upper3,
        lower3,
    }
}

/// Closed box `{x : lower <= x <= upper}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub lower: Vec<Scalar>,
    pub upper: Vec<Scalar>,
}

impl Cell {
    pub fn is_nonempty(&self) -> bool {
        vec_ops::leq(&self.lower, &self.upper)
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        vec_ops::leq(&self.lower, x) && vec_ops::leq(x, &self.upper)
    }

    /// True when `self ⊆ other`.
    pub fn is_within(&self, other: &Cell) -> bool {
        vec_ops::leq(&other.lower, &self.lower) && vec_ops::leq(&self.upper, &other.upper)
    }
}

pub fn cell_of(bounds: &BoundVectors, sel: &SelectorBounds) -> Cell {
    let mut lower = bounds.lower12();
    vec_ops::max_into(&mut lower, &sel.lower3);
    let mut upper = bounds.upper1.clone();
    vec_ops::min_into(&mut upper, &sel.upper2);
    vec_ops::min_into(&mut upper, &sel.upper3);
    Cell { lower, upper }
}
