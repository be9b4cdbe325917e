use proptest::prelude::*;

use minfre_core::oracle::brute_force_cover;
use minfre_core::vertexcover::{selector_point, solve_cover, solve_cover_specialized, verify_structure, Graph};
use minfre_core::{Scalar, Variant};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::new(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cover_is_minimum_and_structured(g in graph(10)) {
        let r = solve_cover(&g).unwrap();
        prop_assert!(g.is_cover(&r.cover));
        prop_assert_eq!(r.size, brute_force_cover(&g).unwrap().size);
        prop_assert!(r.x_star.iter().all(|v| *v == Scalar::ZERO || *v == Scalar::ONE));
        prop_assert_eq!(selector_point(&g, &r.selector), r.x_star.clone());
        let kept: Vec<usize> = (0..g.n()).filter(|&j| r.x_star[j] == Scalar::ONE).collect();
        prop_assert!(g.is_independent(&kept));
        prop_assert_eq!(r.size, g.n() - kept.len());
        let report = verify_structure(&r, &g);
        prop_assert!(report.all_passed(), "{}", report);
    }

    #[test]
    fn specialized_search_agrees(g in graph(12)) {
        prop_assert_eq!(solve_cover_specialized(&g), solve_cover(&g).unwrap());
    }

    #[test]
    fn second_rows_are_the_kept_vertices(g in graph(9)) {
        let r = solve_cover(&g).unwrap();
        let twos: Vec<usize> = (0..g.n()).filter(|&i| r.selector[i] == Variant::Two).collect();
        let kept: Vec<usize> = (0..g.n()).filter(|&j| r.x_star[j] == Scalar::ONE).collect();
        prop_assert_eq!(twos, kept);
    }

    #[test]
    fn edge_list_round_trip(g in graph(8)) {
        prop_assert_eq!(Graph::parse(&g.to_edge_list()).unwrap(), g.clone());
        prop_assert_eq!(Graph::parse(&g.to_adjacency_json()).unwrap(), g);
    }
}
