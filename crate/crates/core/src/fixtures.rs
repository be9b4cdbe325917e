//! Reference instances.

use crate::model::{Instance, InstanceDoc, Sense};
use crate::scalar::Scalar;

const EXAMPLE_ONE_A: [[&str; 10]; 10] = [
    ["0.81", "0.15", "0.65", "0.70", "0.43", "0.27", "0.75", "0.84", "0.35", "0.07"],
    ["0.90", "0.57", "0.03", "0.98", "0.38", "0.67", "0.25", "0.25", "0.83", "0.05"],
    ["0.12", "0.95", "0.84", "0.27", "0.76", "0.14", "0.50", "0.81", "0.58", "0.53"],
    ["0.19", "0.40", "0.93", "0.40", "0.29", "0.16", "0.99", "0.94", "0.54", "0.87"],
    ["0.63", "0.80", "0.67", "0.09", "0.45", "0.11", "0.89", "0.92", "0.91", "0.93"],
    ["0.09", "0.14", "0.75", "0.82", "0.48", "0.79", "0.95", "0.85", "0.28", "0.12"],
    ["0.87", "0.42", "0.74", "0.69", "0.44", "0.95", "0.54", "0.19", "0.75", "0.56"],
    ["0.74", "0.91", "0.39", "0.71", "0.64", "0.34", "0.73", "0.25", "0.75", "0.46"],
    ["0.95", "0.79", "0.65", "0.95", "0.70", "0.58", "0.14", "0.61", "0.38", "0.01"],
    ["0.96", "0.95", "0.17", "0.03", "0.75", "0.22", "0.25", "0.47", "0.56", "0.03"],
];
const EXAMPLE_ONE_B: [&str; 10] = [
    "0.66", "0.57", "0.14", "0.40", "0.45", "0.79", "0.55", "0.62", "0.04", "0.53",
];
const EXAMPLE_ONE_C: [&str; 10] = [
    "-8.36", "0.92", "4.11", "2.36", "-9.66", "-8.87", "5.75", "-4.78", "8.10", "5.84",
];

fn parse_all(v: &[&str]) -> Vec<Scalar> {
    v.iter().map(|s| s.parse().expect("fixture literal")).collect()
}

/// The 10×10 worked example (minimization): three rows with `a_ii > b_i`,
/// four tied rows and three rows with `a_ii < b_i`.
pub fn example_one_doc() -> InstanceDoc {
    InstanceDoc {
        a: EXAMPLE_ONE_A.iter().map(|r| parse_all(r)).collect(),
        b: parse_all(&EXAMPLE_ONE_B),
        c: parse_all(&EXAMPLE_ONE_C),
        sense: Sense::Minimize,
    }
}

pub fn example_one() -> Instance {
    Instance::from_doc(example_one_doc()).expect("fixture is valid")
}
