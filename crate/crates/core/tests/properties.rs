mod common;

use bhrank::blackhole::{assemble_bordered, BlackHoleSolver};
use bhrank::{
    blackhole_metric, blackhole_metric_on, dense_oracle, normalize_weights, pagerank, rank_positions, transform,
    wariness, PageRankConfig, WeightBounds, WeightedDigraph,
};
use common::{dense_pagerank, max_abs_diff, random_graph, rng, saturate, Shape};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn sparse_pagerank_matches_dense_assembly() {
    let mut r = rng(1);
    let cfg = PageRankConfig::default();
    for _ in 0..60 {
        let g = random_graph(&mut r, 50, Shape::Random);
        let sparse = pagerank(&g, &cfg).unwrap();
        assert!(sparse.converged);
        let dense = dense_pagerank(&g, &cfg);
        assert!(max_abs_diff(&sparse.scores, &dense) < 1e-10);
    }
}

#[test]
fn pagerank_mass_is_one() {
    let mut r = rng(2);
    for shape in [Shape::Random, Shape::AllSinks, Shape::Disconnected] {
        for _ in 0..20 {
            let g = random_graph(&mut r, 60, shape);
            let res = pagerank(&g, &PageRankConfig::default()).unwrap();
            assert!(res.converged);
            assert!((res.scores.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(res.scores.iter().all(|&p| p >= 0.0));
        }
    }
}

#[test]
fn pagerank_converges_for_damping_up_to_point_nine() {
    let mut r = rng(3);
    for d in [0.1, 0.5, 0.85, 0.9] {
        for _ in 0..10 {
            let g = random_graph(&mut r, 40, Shape::Random);
            let res = pagerank(&g, &PageRankConfig::default().with_damping(d)).unwrap();
            assert!(res.converged, "d = {d}");
        }
    }
}

#[test]
fn pagerank_is_invariant_under_weight_scaling() {
    let mut r = rng(4);
    let cfg = PageRankConfig::default();
    for c in [0.01, 0.5, 2.0, 99.0 / 49.0, 1000.0] {
        let g = random_graph(&mut r, 40, Shape::Random);
        let scaled = g.map_weights(WeightBounds::enclosing([1e9]), |_, w| w * c).unwrap();
        let a = pagerank(&g, &cfg).unwrap();
        let b = pagerank(&scaled, &cfg).unwrap();
        assert!(max_abs_diff(&a.scores, &b.scores) < 10.0 * cfg.tolerance);
    }
}

#[test]
fn link_matrix_rows_are_stochastic() {
    let mut r = rng(5);
    for _ in 0..30 {
        let g = random_graph(&mut r, 50, Shape::Random);
        let a = normalize_weights(&g).unwrap();
        for (i, s) in a.row_sums().into_iter().enumerate() {
            if g.is_sink(i) {
                assert_eq!(s, 0.0);
            } else {
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(a.values().len(), g.arc_count());
        assert_eq!(a.row_indices().len(), g.arc_count());
        assert_eq!(a.col_ptr().len(), g.node_count() + 1);
    }
}

#[test]
fn transformed_rows_close_with_black_hole() {
    let mut r = rng(6);
    for _ in 0..50 {
        let g = random_graph(&mut r, 50, Shape::Random);
        let net = transform(&g).unwrap();
        let sums = net.abar.row_sums();
        for (i, &sum) in sums.iter().enumerate() {
            let b = net.black_hole[i];
            assert!((0.0..=1.0 + 1e-15).contains(&b));
            if g.is_sink(i) {
                assert_eq!(b, 0.0);
                assert_eq!(sum, 0.0);
            } else {
                assert!((sum + b - 1.0).abs() < 1e-12);
                let cap = 1.0 / g.outdegree(i) as f64;
                for a in g.out_arcs(i) {
                    let v = net.abar.get(i, a.dst);
                    assert!(v >= 0.0 && v <= cap + 1e-15);
                }
            }
        }
        assert_eq!(net.abar.nnz(), g.arc_count());
    }
}

#[test]
fn black_hole_solver_conserves_mass_and_shortcut() {
    let mut r = rng(7);
    let cfg = PageRankConfig::default();
    let d = cfg.damping;
    for shape in [Shape::Random, Shape::AllSinks, Shape::Disconnected] {
        for _ in 0..10 {
            let g = random_graph(&mut r, 50, shape);
            let net = transform(&g).unwrap();
            let mut solver = BlackHoleSolver::new(&net, &cfg).unwrap();
            for _ in 0..60 {
                let pb_before = solver.black_hole();
                let total_before: f64 = solver.scores().iter().sum();
                let (_, s) = solver.step();
                // Tᵀ P̄ = 1 − p_b
                assert!((s.total_mass - (1.0 - pb_before)).abs() < 1e-12);
                assert!((total_before - s.total_mass).abs() < 1e-12);
                // 1 − d(1 − s̄_p − p_b) = d s̄_p + (1 − d) t̄_p + p_b
                let shortcut = 1.0 - d * (1.0 - s.sink_mass - pb_before);
                let expanded = d * s.sink_mass + (1.0 - d) * s.total_mass + pb_before;
                assert!((shortcut - expanded).abs() < 1e-12);
                for x in [s.sink_mass, s.black_hole_inflow, s.total_mass] {
                    assert!((-1e-12..=1.0 + 1e-12).contains(&x));
                }
                let mass: f64 = solver.scores().iter().sum::<f64>() + solver.black_hole();
                assert!((mass - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn oracle_equivalence_small_graphs() {
    let mut r = rng(8);
    let cfg = PageRankConfig::default();
    for _ in 0..40 {
        let g = random_graph(&mut r, 30, Shape::Random);
        let fast = blackhole_metric(&g, &cfg).unwrap();
        let slow = dense_oracle(&g, &cfg).unwrap();
        assert!(fast.converged && slow.converged);
        assert!(max_abs_diff(&fast.scores, &slow.scores) < 1e-10);
        assert!((fast.black_hole - slow.black_hole).abs() < 1e-10);
    }
}

#[test]
fn bordered_matrix_rows_sum_to_one() {
    let mut r = rng(9);
    for d in [0.3, 0.85, 0.95] {
        for _ in 0..10 {
            let g = random_graph(&mut r, 40, Shape::Random);
            let m = assemble_bordered(&g, &PageRankConfig::default().with_damping(d)).unwrap();
            for s in m.row_sums() {
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn saturated_weights_reproduce_pagerank() {
    let mut r = rng(10);
    let cfg = PageRankConfig::default();
    for _ in 0..40 {
        let g = saturate(&random_graph(&mut r, 60, Shape::Random));
        let bh = blackhole_metric(&g, &cfg).unwrap();
        let pr = pagerank(&g, &cfg).unwrap();
        assert!(bh.black_hole.abs() < 1e-9);
        assert!(max_abs_diff(&bh.scores, &pr.scores) < 10.0 * cfg.tolerance);
    }
}

#[test]
fn larger_weights_shrink_the_black_hole() {
    let mut r = rng(11);
    let cfg = PageRankConfig::default();
    for _ in 0..30 {
        // weights strictly inside (0, 10), doubled into (0, 20) under [0, 20]
        let n = 30;
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && r.random_bool(0.2) {
                    arcs.push((i, j, r.random_range(0.5..9.5)));
                }
            }
        }
        let g = WeightedDigraph::new(n, arcs, WeightBounds::global(0.0, 20.0)).unwrap();
        let scaled = bhrank::scale_weights(&g, 2.0, WeightBounds::global(0.0, 20.0)).unwrap();

        let (t1, t2) = (transform(&g).unwrap(), transform(&scaled).unwrap());
        let (b1, b2): (f64, f64) = (t1.black_hole.iter().sum(), t2.black_hole.iter().sum());
        if g.arc_count() > 0 {
            assert!(b2 < b1);
        }
        for i in 0..n {
            if g.is_sink(i) {
                continue;
            }
            // b_i = Σ (h − r) / (out h); doubling r gives b'_i = 2 b_i − 1 with h = 20, l = 0
            assert!((t2.black_hole[i] - (2.0 * t1.black_hole[i] - 1.0)).abs() < 1e-12);
        }
        let (r1, r2) = (
            blackhole_metric_on(&t1, &cfg).unwrap(),
            blackhole_metric_on(&t2, &cfg).unwrap(),
        );
        if g.arc_count() > 0 {
            assert!(r2.black_hole < r1.black_hole);
        }
    }
}

#[test]
fn wariness_stays_in_unit_interval() {
    let mut r = rng(12);
    let cfg = PageRankConfig::default();
    for shape in [Shape::Random, Shape::AllSinks, Shape::Disconnected] {
        for _ in 0..40 {
            let g = random_graph(&mut r, 50, shape);
            let net = transform(&g).unwrap();
            let res = blackhole_metric_on(&net, &cfg).unwrap();
            let w = wariness(&net, &res);
            assert!((0.0..=1.0).contains(&w), "{w}");
        }
    }
}

#[test]
fn saturated_rank_positions_match() {
    let mut r = rng(13);
    let cfg = PageRankConfig::default();
    for _ in 0..30 {
        let g = saturate(&random_graph(&mut r, 80, Shape::Random));
        let pr = rank_positions(&pagerank(&g, &cfg).unwrap().scores);
        let bh = rank_positions(&blackhole_metric(&g, &cfg).unwrap().scores);
        assert_eq!(pr, bh);
    }
}

fn arb_graph() -> impl Strategy<Value = WeightedDigraph> {
    (2usize..25, any::<u64>()).prop_map(|(max_n, seed)| random_graph(&mut rng(seed), max_n, Shape::Random))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outdegrees_sum_to_arc_count(g in arb_graph()) {
        let total: usize = (0..g.node_count()).map(|i| g.outdegree(i)).sum();
        prop_assert_eq!(total, g.arc_count());
    }

    #[test]
    fn metric_mass_and_range(g in arb_graph(), d in 0.05f64..0.95) {
        let cfg = PageRankConfig::default().with_damping(d);
        let res = blackhole_metric(&g, &cfg).unwrap();
        prop_assert!(res.converged);
        let mass = res.scores.iter().sum::<f64>() + res.black_hole;
        prop_assert!((mass - 1.0).abs() < 1e-9);
        prop_assert!(res.black_hole >= 0.0 && res.black_hole < 1.0);
        prop_assert!(res.scores.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn metric_matches_oracle(g in arb_graph(), d in 0.05f64..0.95) {
        let cfg = PageRankConfig::default().with_damping(d);
        let fast = blackhole_metric(&g, &cfg).unwrap();
        let slow = dense_oracle(&g, &cfg).unwrap();
        prop_assert!(max_abs_diff(&fast.scores, &slow.scores) < 1e-10);
        prop_assert!((fast.black_hole - slow.black_hole).abs() < 1e-10);
    }
}
