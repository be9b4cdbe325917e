#![allow(dead_code)]

use minfre_core::gen::{random_binary_fre, random_fre, random_graph, GenParams};
use minfre_core::vertexcover::Graph;
use minfre_core::{Instance, Sense};

/// Mixed corpus of small instances on a 1- or 2-decimal grid; half of them
/// have a planted feasible point.
pub fn small_corpus(count: u64, sizes: &[usize]) -> Vec<Instance> {
    (0..count)
        .map(|k| {
            let p = GenParams {
                n: sizes[(k as usize) % sizes.len()],
                density: [0.5, 0.8, 1.0][(k as usize / 3) % 3],
                seed: 1000 + k,
                places: if k % 4 < 2 { 1 } else { 2 },
                sense: if k % 2 == 0 { Sense::Minimize } else { Sense::Maximize },
                planted: k % 3 != 0,
            };
            random_fre(&p).expect("valid parameters")
        })
        .collect()
}

pub fn binary_corpus(count: u64) -> Vec<Instance> {
    (0..count)
        .map(|k| {
            let p = GenParams {
                n: 1 + (k as usize % 10),
                density: 0.5,
                seed: 5000 + k,
                sense: if k % 2 == 0 { Sense::Minimize } else { Sense::Maximize },
                ..GenParams::default()
            };
            random_binary_fre(&p).expect("valid parameters")
        })
        .collect()
}

pub fn graph_corpus(count: u64, max_n: usize, seed0: u64) -> Vec<Graph> {
    (0..count)
        .map(|k| {
            let p = GenParams {
                n: 1 + (k as usize % max_n),
                density: [0.2, 0.4, 0.6, 0.8][(k as usize / max_n) % 4],
                seed: seed0 + k,
                ..GenParams::default()
            };
            random_graph(&p).expect("valid parameters")
        })
        .collect()
}

/// Every labelled simple graph on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, e)| *e)
                .collect();
            Graph::new(n, &edges).expect("valid edges")
        })
        .collect()
}

pub fn instance(a: &[&[&str]], b: &[&str]) -> Instance {
    let parse = |r: &[&str]| r.iter().map(|s| s.parse().unwrap()).collect::<Vec<_>>();
    let a = a.iter().map(|r| parse(r)).collect();
    let c = vec![minfre_core::Scalar::ONE; b.len()];
    Instance::new(a, parse(b), c, Sense::Minimize).unwrap()
}
