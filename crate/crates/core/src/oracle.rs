//! Brute-force reference implementations used to cross-check the solver.
//!
//! Every extremal vector has components in `{0, 1} ∪ {b_i}`, so the cell
//! bounds and the best vertex of every cell lie on the grid `V^n` built from
//! those values. The optimum over the feasible set is therefore attained on
//! `V^n`, and exhaustive search over that grid is an exact optimum oracle. None
//! of this module is used on the production solve path.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremals::Cell;
use crate::model::{Instance, Sense};
use crate::scalar::Scalar;
use crate::vertexcover::Graph;

pub const DEFAULT_GRID_BUDGET: u64 = 2_000_000;
pub const MAX_COVER_VERTICES: usize = 20;

/// Sorted, deduplicated component values `{0, 1} ∪ {b_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub values: Vec<Scalar>,
}

impl GridSpec {
    pub fn of(inst: &Instance) -> Self {
        let mut values: Vec<Scalar> = [Scalar::ZERO, Scalar::ONE]
            .into_iter()
            .chain(inst.b().iter().copied())
            .collect();
        values.sort_unstable();
        values.dedup();
        GridSpec { values }
    }

    /// The grid plus midpoints of neighboring values, which also probes cell interiors.
    pub fn refined(&self) -> Self {
        let two = Scalar::from(2);
        let mut values = self.values.clone();
        for w in self.values.windows(2) {
            let mid = Scalar::from_decimal((w[0] + w[1]).as_decimal() / two.as_decimal());
            values.push(mid);
        }
        values.sort_unstable();
        values.dedup();
        GridSpec { values }
    }

    pub fn points(&self, n: usize) -> Option<u64> {
        (self.values.len() as u64).checked_pow(n as u32)
    }

    fn point(&self, n: usize, mut index: u64) -> Vec<Scalar> {
        let base = self.values.len() as u64;
        let mut x = vec![Scalar::ZERO; n];
        for slot in x.iter_mut().rev() {
            *slot = self.values[(index % base) as usize];
            index /= base;
        }
        x
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum GridResult {
    Optimal { objective: Scalar, x: Vec<Scalar> },
    Infeasible,
}

impl GridResult {
    pub fn objective(&self) -> Option<Scalar> {
        match self {
            GridResult::Optimal { objective, .. } => Some(*objective),
            GridResult::Infeasible => None,
        }
    }
}

fn grid_points(inst: &Instance, grid: &GridSpec, budget: u64) -> Result<u64> {
    match grid.points(inst.n()) {
        Some(p) if p <= budget => Ok(p),
        Some(p) => Err(Error::Budget(format!("grid has {p} points, budget is {budget}"))),
        None => Err(Error::Budget("grid size overflows".into())),
    }
}

/// Exhaustive optimum over `V^n`. Ties go to the first grid point in
/// lexicographic order.
pub fn grid_optimum(inst: &Instance, budget: u64) -> Result<GridResult> {
    let grid = GridSpec::of(inst);
    let total = grid_points(inst, &grid, budget)?;
    let n = inst.n();
    let sense = inst.sense();
    let best = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let x = grid.point(n, idx);
            if !inst.is_member(&x) {
                return None;
            }
            let obj = inst.objective(&x);
            let key = match sense {
                Sense::Minimize => obj,
                Sense::Maximize => -obj,
            };
            Some((key, idx))
        })
        .min();
    Ok(match best {
        None => GridResult::Infeasible,
        Some((_, idx)) => {
            let x = grid.point(n, idx);
            GridResult::Optimal {
                objective: inst.objective(&x),
                x,
            }
        }
    })
}

fn in_union(cells: &[Cell], x: &[Scalar]) -> bool {
    cells.iter().any(|c| c.contains(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub x: Vec<Scalar>,
    pub member: bool,
    pub in_union: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub checked: u64,
    pub members: u64,
    pub disagreements: Vec<Disagreement>,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Draws `k` uniform points of `[0,1]^n` rounded to the instance precision and
/// compares membership with containment in the cell union.
pub fn sample_feasibility(inst: &Instance, cells: &[Cell], k: u64, seed: u64) -> AgreementReport {
    let scale = inst.precision().max(1);
    let denom = 10i64.pow(scale);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AgreementReport {
        checked: 0,
        members: 0,
        disagreements: Vec::new(),
    };
    for _ in 0..k {
        let x: Vec<Scalar> = (0..inst.n())
            .map(|_| Scalar::from_decimal(Decimal::new(rng.gen_range(0..=denom), scale)))
            .collect();
        tally(inst, cells, x, &mut report);
    }
    report
}

/// Compares membership with the cell union on every point of the refined grid.
pub fn lattice_agreement(inst: &Instance, cells: &[Cell], budget: u64) -> Result<AgreementReport> {
    let grid = GridSpec::of(inst).refined();
    let total = grid_points(inst, &grid, budget)?;
    let mut report = AgreementReport {
        checked: 0,
        members: 0,
        disagreements: Vec::new(),
    };
    for idx in 0..total {
        tally(inst, cells, grid.point(inst.n(), idx), &mut report);
    }
    Ok(report)
}

fn tally(inst: &Instance, cells: &[Cell], x: Vec<Scalar>, report: &mut AgreementReport) {
    let member = inst.is_member(&x);
    let inside = in_union(cells, &x);
    report.checked += 1;
    report.members += u64::from(member);
    if member != inside {
        report.disagreements.push(Disagreement {
            x,
            member,
            in_union: inside,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteCover {
    pub size: usize,
    /// Zero-based, ascending.
    pub cover: Vec<usize>,
}

/// Smallest cover by subset enumeration in increasing size.
pub fn brute_force_cover(g: &Graph) -> Result<BruteCover> {
    let n = g.n();
    if n > MAX_COVER_VERTICES {
        return Err(Error::Budget(format!(
            "brute-force cover supports at most {MAX_COVER_VERTICES} vertices, got {n}"
        )));
    }
    let edges: Vec<u32> = g
        .edges()
        .into_iter()
        .map(|(u, v)| (1u32 << u) | (1u32 << v))
        .collect();
    let covers = |mask: u32| edges.iter().all(|&e| mask & e != 0);
    for size in 0..=n {
        // Gosper's hack walks all masks with `size` bits in increasing order
        let mut mask: u32 = if size == 0 { 0 } else { (1u32 << size) - 1 };
        let limit = 1u64 << n;
        while (mask as u64) < limit {
            if covers(mask) {
                let cover = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
                return Ok(BruteCover { size, cover });
            }
            if mask == 0 {
                break;
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    unreachable!("the full vertex set covers every edge")
}
