//! Seeded random instances and graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;

use crate::error::{Error, Result};
use crate::model::{Instance, Sense};
use crate::scalar::Scalar;
use crate::vertexcover::Graph;

#[derive(Clone, Debug)]
pub struct GenParams {
    pub n: usize,
    /// Probability that a coefficient (or edge) is nonzero.
    pub density: f64,
    pub seed: u64,
    /// Decimal places of generated coefficients.
    pub places: u32,
    pub sense: Sense,
    /// Derive `b` from a hidden random point so the instance is feasible.
    pub planted: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 4,
            density: 0.7,
            seed: 0,
            places: 2,
            sense: Sense::Minimize,
            planted: false,
        }
    }
}

impl GenParams {
    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Param("n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::Param(format!("density {} is outside [0, 1]", self.density)));
        }
        if self.places > 6 {
            return Err(Error::Param("at most 6 decimal places are supported".into()));
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn unit(rng: &mut ChaCha8Rng, places: u32) -> Scalar {
    let denom = 10i64.pow(places);
    Scalar::from_decimal(Decimal::new(rng.gen_range(0..=denom), places))
}

fn cost(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_decimal(Decimal::new(rng.gen_range(-1000..=1000), 2))
}

/// Random coefficients on a decimal grid; zero with probability `1 - density`.
pub fn random_fre(p: &GenParams) -> Result<Instance> {
    p.validate()?;
    let mut rng = p.rng();
    let n = p.n;
    let a: Vec<Vec<Scalar>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(p.density) {
                        unit(&mut rng, p.places)
                    } else {
                        Scalar::ZERO
                    }
                })
                .collect()
        })
        .collect();
    let b: Vec<Scalar> = if p.planted {
        let x: Vec<Scalar> = (0..n).map(|_| unit(&mut rng, p.places)).collect();
        (0..n)
            .map(|i| {
                a[i].iter()
                    .zip(&x)
                    .map(|(&aij, &xj)| aij.min(x[i]).min(xj))
                    .max()
                    .unwrap_or(Scalar::ZERO)
            })
            .collect()
    } else {
        (0..n).map(|_| unit(&mut rng, p.places)).collect()
    };
    let c = (0..n).map(|_| cost(&mut rng)).collect();
    Instance::new(a, b, c, p.sense)
}

/// `A ∈ {0,1}^{n×n}` with `b = 0`.
pub fn random_binary_fre(p: &GenParams) -> Result<Instance> {
    p.validate()?;
    let mut rng = p.rng();
    let n = p.n;
    let a = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| if rng.gen_bool(p.density) { Scalar::ONE } else { Scalar::ZERO })
                .collect()
        })
        .collect();
    let c = (0..n).map(|_| cost(&mut rng)).collect();
    Instance::new(a, vec![Scalar::ZERO; n], c, p.sense)
}

/// Erdős–Rényi graph: each pair is an edge with probability `density`.
pub fn random_graph(p: &GenParams) -> Result<Graph> {
    p.validate()?;
    let mut rng = p.rng();
    let mut edges = Vec::new();
    for u in 0..p.n {
        for v in u + 1..p.n {
            if rng.gen_bool(p.density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(p.n, &edges)
}
