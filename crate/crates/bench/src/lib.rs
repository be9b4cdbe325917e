//! Benchmark fixtures.

use minfre_core::gen::{random_fre, random_graph, GenParams};
use minfre_core::{Graph, Instance};

/// Feasible random instances of order `n`, one per seed.
pub fn planted(n: usize, seeds: std::ops::Range<u64>) -> Vec<Instance> {
    seeds
        .map(|seed| {
            random_fre(&GenParams { n, seed, planted: true, ..GenParams::default() })
                .expect("generator accepts its defaults")
        })
        .collect()
}

pub fn graphs(n: usize, density: f64, seeds: std::ops::Range<u64>) -> Vec<Graph> {
    seeds
        .map(|seed| random_graph(&GenParams { n, density, seed, ..GenParams::default() }).expect("valid density"))
        .collect()
}
