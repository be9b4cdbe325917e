//! Problem instances, the `⊗` composition and exact membership testing.
//!
//! Row `i` of the constraint system reads
//! `a_i ⊗ x = max_j min{a_ij, x_i, x_j} = b_i`; the variable `x_i` belongs to the
//! row itself, which is why the coefficient matrix is always square.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "min")]
    Minimize,
    #[serde(rename = "max")]
    Maximize,
}

/// A validated, square instance. Indices are zero-based throughout the API;
/// reports and CLI output render them one-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    a: Vec<Scalar>,
    b: Vec<Scalar>,
    c: Vec<Scalar>,
    sense: Sense,
}

/// On-disk layout of an instance: `{"A": [[..]], "b": [..], "c": [..], "sense": "min"|"max"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    #[serde(rename = "A")]
    pub a: Vec<Vec<Scalar>>,
    pub b: Vec<Scalar>,
    pub c: Vec<Scalar>,
    pub sense: Sense,
}

/// Pads a rectangular system to a square one.
///
/// Extra columns carry zero coefficients; extra rows carry zero coefficients and
/// a zero right-hand side, which makes them vacuous constraints.
pub fn squarify(a: &[Vec<Scalar>], b: &[Scalar]) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let order = m.max(n);
    let mut sa: Vec<Vec<Scalar>> = a
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.resize(order, Scalar::ZERO);
            r
        })
        .collect();
    sa.resize(order, vec![Scalar::ZERO; order]);
    let mut sb = b.to_vec();
    sb.resize(order, Scalar::ZERO);
    (sa, sb)
}

impl Instance {
    /// Builds a square instance. Use [`Instance::from_doc`] for rectangular input.
    pub fn new(a: Vec<Vec<Scalar>>, b: Vec<Scalar>, c: Vec<Scalar>, sense: Sense) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::Dimension("empty coefficient matrix".into()));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        if b.len() != n {
            return Err(Error::Dimension(format!("b has {} entries, expected {n}", b.len())));
        }
        if c.len() != n {
            return Err(Error::Dimension(format!("c has {} entries, expected {n}", c.len())));
        }
        for (i, row) in a.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_unit_interval() {
                    return Err(Error::OutOfRange {
                        what: "A",
                        position: format!("({}, {})", i + 1, j + 1),
                        value: v.to_string(),
                    });
                }
            }
        }
        for (i, v) in b.iter().enumerate() {
            if !v.is_unit_interval() {
                return Err(Error::OutOfRange {
                    what: "b",
                    position: format!("{}", i + 1),
                    value: v.to_string(),
                });
            }
        }
        Ok(Instance {
            n,
            a: a.into_iter().flatten().collect(),
            b,
            c,
            sense,
        })
    }

    /// Validates a document and squares it. Added columns get zero cost.
    pub fn from_doc(doc: InstanceDoc) -> Result<Self> {
        let m = doc.a.len();
        if m == 0 {
            return Err(Error::Dimension("empty coefficient matrix".into()));
        }
        let cols = doc.a[0].len();
        if cols == 0 {
            return Err(Error::Dimension("coefficient matrix has no columns".into()));
        }
        if let Some((i, row)) = doc.a.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                row.len()
            )));
        }
        if doc.b.len() != m {
            return Err(Error::Dimension(format!("b has {} entries, expected {m}", doc.b.len())));
        }
        if doc.c.len() != cols {
            return Err(Error::Dimension(format!(
                "c has {} entries, expected {cols}",
                doc.c.len()
            )));
        }
        // range check before padding so positions refer to the user's matrix
        let (a, b) = squarify(&doc.a, &doc.b);
        let mut c = doc.c;
        c.resize(a.len(), Scalar::ZERO);
        Instance::new(a, b, c, doc.sense)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: InstanceDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Instance::from_doc(doc)
    }

    pub fn to_doc(&self) -> InstanceDoc {
        InstanceDoc {
            a: (0..self.n).map(|i| self.row(i).to_vec()).collect(),
            b: self.b.clone(),
            c: self.c.clone(),
            sense: self.sense,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("instance documents always serialize")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self, i: usize, j: usize) -> Scalar {
        self.a[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn b(&self) -> &[Scalar] {
        &self.b
    }

    pub fn c(&self) -> &[Scalar] {
        &self.c
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn with_sense(&self, sense: Sense) -> Instance {
        Instance {
            sense,
            ..self.clone()
        }
    }

    pub fn with_costs(&self, c: Vec<Scalar>) -> Result<Instance> {
        if c.len() != self.n {
            return Err(Error::Dimension(format!("c has {} entries, expected {}", c.len(), self.n)));
        }
        Ok(Instance { c, ..self.clone() })
    }

    /// Largest number of decimal places used by any entry of `A` or `b`.
    pub fn precision(&self) -> u32 {
        self.a
            .iter()
            .chain(&self.b)
            .map(Scalar::precision)
            .max()
            .unwrap_or(0)
    }

    pub fn objective(&self, x: &[Scalar]) -> Scalar {
        crate::scalar::vec_ops::dot(&self.c, x)
    }

    fn check_point(&self, x: &[Scalar]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!("x has {} entries, expected {}", x.len(), self.n)));
        }
        if let Some((j, v)) = x.iter().enumerate().find(|(_, v)| !v.is_unit_interval()) {
            return Err(Error::OutOfRange {
                what: "x",
                position: format!("{}", j + 1),
                value: v.to_string(),
            });
        }
        Ok(())
    }

    /// `max_j min{a_ij, x_i, x_j}` for a single row.
    pub fn compose_row(&self, i: usize, x: &[Scalar]) -> Result<Scalar> {
        if i >= self.n {
            return Err(Error::Index { index: i, n: self.n });
        }
        self.check_point(x)?;
        Ok(self.compose_row_unchecked(i, x))
    }

    pub(crate) fn compose_row_unchecked(&self, i: usize, x: &[Scalar]) -> Scalar {
        let xi = x[i];
        self.row(i)
            .iter()
            .zip(x)
            .map(|(&a, &xj)| a.min(xi).min(xj))
            .max()
            .unwrap_or(Scalar::ZERO)
    }

    /// Full per-row membership report.
    pub fn check_membership(&self, x: &[Scalar]) -> Result<MembershipReport> {
        self.check_point(x)?;
        let rows = (0..self.n).map(|i| self.row_report(i, x)).collect::<Vec<_>>();
        let feasible = rows.iter().all(RowReport::satisfied);
        Ok(MembershipReport { feasible, rows })
    }

    /// Fast membership predicate without the report.
    pub fn is_member(&self, x: &[Scalar]) -> bool {
        x.len() == self.n
            && x.iter().all(Scalar::is_unit_interval)
            && (0..self.n).all(|i| self.compose_row_unchecked(i, x) == self.b[i])
    }

    fn row_report(&self, i: usize, x: &[Scalar]) -> RowReport {
        let bi = self.b[i];
        let xi = x[i];
        let mut achieved = Scalar::ZERO;
        let mut witness = None;
        let mut violating = None;
        for (j, (&a, &xj)) in self.row(i).iter().zip(x).enumerate() {
            let term = a.min(xi).min(xj);
            achieved = achieved.max(term);
            if term > bi && violating.is_none() {
                violating = Some(j);
            }
            if term == bi && witness.is_none() {
                witness = Some(j);
            }
        }
        RowReport {
            row: i,
            achieved,
            required: bi,
            witness,
            violating,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReport {
    pub row: usize,
    pub achieved: Scalar,
    pub required: Scalar,
    /// First `j` with `min{a_ij, x_i, x_j} = b_i`.
    pub witness: Option<usize>,
    /// First `j` with `min{a_ij, x_i, x_j} > b_i`.
    pub violating: Option<usize>,
}

impl RowReport {
    pub fn satisfied(&self) -> bool {
        self.violating.is_none() && self.witness.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub feasible: bool,
    pub rows: Vec<RowReport>,
}

/// Reads and validates an instance document from disk.
pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let text = fs::read_to_string(path)?;
    Instance::from_json_str(&text)
}

/// Parses a vector of decimals from a JSON array or a comma/space separated list.
pub fn parse_vector(text: &str) -> Result<Vec<Scalar>> {
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()));
    }
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{example1, s, sv};

    fn tiny() -> Instance {
        Instance::from_json_str(r#"{"A": [[0.5]], "b": [0.5], "c": [1], "sense": "min"}"#).unwrap()
    }

    #[test]
    fn loads_smallest_instance() {
        let inst = tiny();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.a(0, 0), s("0.5"));
        assert_eq!(inst.sense(), Sense::Minimize);
    }

    #[test]
    fn loads_example_one() {
        assert_eq!(example1().n(), 10);
    }

    #[test]
    fn rejects_out_of_range_rhs() {
        let err = Instance::from_json_str(r#"{"A": [[0.5]], "b": [1.5], "c": [1], "sense": "min"}"#)
            .unwrap_err();
        assert!(matches!(err, Error::OutOfRange { what: "b", .. }), "{err}");
    }

    #[test]
    fn rejects_ragged_and_mismatched_documents() {
        let ragged = r#"{"A": [[0.5, 0.1], [0.2]], "b": [0.5, 0.1], "c": [1, 1], "sense": "min"}"#;
        assert!(matches!(Instance::from_json_str(ragged), Err(Error::Dimension(_))));
        let short_c = r#"{"A": [[0.5]], "b": [0.5], "c": [], "sense": "min"}"#;
        assert!(matches!(Instance::from_json_str(short_c), Err(Error::Dimension(_))));
        let bad_sense = r#"{"A": [[0.5]], "b": [0.5], "c": [1], "sense": "sideways"}"#;
        assert!(matches!(Instance::from_json_str(bad_sense), Err(Error::Parse(_))));
    }

    #[test]
    fn squarify_square_is_identity() {
        let a = vec![sv(&["0.1", "0.2"]), sv(&["0.3", "0.4"])];
        let b = sv(&["0.1", "0.2"]);
        assert_eq!(squarify(&a, &b), (a.clone(), b.clone()));
    }

    #[test]
    fn squarify_tall_adds_zero_column() {
        let a = vec![sv(&["0.1", "0.2"]), sv(&["0.3", "0.4"]), sv(&["0.5", "0.6"])];
        let b = sv(&["0.1", "0.2", "0.3"]);
        let (sa, sb) = squarify(&a, &b);
        assert_eq!(sa.len(), 3);
        assert!(sa.iter().all(|r| r.len() == 3 && r[2] == Scalar::ZERO));
        assert_eq!(sb, b);
    }

    #[test]
    fn squarify_wide_adds_zero_row() {
        let a = vec![sv(&["0.1", "0.2", "0.3"]), sv(&["0.4", "0.5", "0.6"])];
        let b = sv(&["0.1", "0.2"]);
        let (sa, sb) = squarify(&a, &b);
        assert_eq!(sa.len(), 3);
        assert_eq!(sa[2], vec![Scalar::ZERO; 3]);
        assert_eq!(sb, sv(&["0.1", "0.2", "0"]));
    }

    #[test]
    fn document_padding_extends_costs() {
        let inst = Instance::from_json_str(
            r#"{"A": [[0.5], [0.2]], "b": [0.5, 0.1], "c": [2], "sense": "max"}"#,
        )
        .unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.c(), &sv(&["2", "0"])[..]);
    }

    #[test]
    fn compose_single_term() {
        assert_eq!(tiny().compose_row(0, &sv(&["0.7"])).unwrap(), s("0.5"));
    }

    #[test]
    fn compose_zero_vector_is_zero() {
        let inst = example1();
        let x = vec![Scalar::ZERO; 10];
        for i in 0..10 {
            assert_eq!(inst.compose_row(i, &x).unwrap(), Scalar::ZERO);
        }
    }

    #[test]
    fn compose_rejects_bad_input() {
        let inst = tiny();
        assert!(matches!(inst.compose_row(1, &sv(&["0.5"])), Err(Error::Index { .. })));
        assert!(matches!(inst.compose_row(0, &sv(&["1.5"])), Err(Error::OutOfRange { .. })));
        assert!(matches!(inst.check_membership(&sv(&["0.5", "0.5"])), Err(Error::Dimension(_))));
    }

    #[test]
    fn example_one_reported_optimum_is_member() {
        let inst = example1();
        let x = sv(&["0.66", "0.57", "0.14", "0.40", "0.45", "1", "0.55", "0.62", "0.04", "0.53"]);
        assert_eq!(inst.compose_row(0, &x).unwrap(), s("0.66"));
        let report = inst.check_membership(&x).unwrap();
        assert!(report.feasible);
        assert!(inst.is_member(&x));
    }

    #[test]
    fn below_rhs_fails_condition_two() {
        let report = tiny().check_membership(&sv(&["0.3"])).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.rows[0].witness, None);
        assert_eq!(report.rows[0].violating, None);
        assert_eq!(report.rows[0].achieved, s("0.3"));
    }

    #[test]
    fn first_violation_is_reported() {
        let inst = Instance::from_json_str(
            r#"{"A": [[0.9, 0.9, 0.9]], "b": [0.2], "c": [0, 0, 0], "sense": "min"}"#,
        )
        .unwrap();
        // padded to 3x3; row 1 has every term above 0.2
        let report = inst.check_membership(&sv(&["0.5", "0.6", "0.7"])).unwrap();
        assert_eq!(report.rows[0].violating, Some(0));
        assert!(!report.feasible);
    }

    #[test]
    fn parse_vector_forms() {
        assert_eq!(parse_vector("[0.1, \"0.2\"]").unwrap(), sv(&["0.1", "0.2"]));
        assert_eq!(parse_vector("0.1, 0.2 0.3").unwrap(), sv(&["0.1", "0.2", "0.3"]));
        assert!(parse_vector("0.1, x").is_err());
    }
}
