//! Identities of 2×2 tables and their segment charts, checked against
//! direct ratio evaluation.

mod common;

use common::*;
use nalgebra::DMatrix;
use oddsgeom::geometry::{
    independence_params, independence_table, invert_third_ratio_xp, negative_branch_matrix,
    ruled_surface_sample, sample_segment, SegmentChartPE, SegmentChartXE, SegmentChartXP,
};
use oddsgeom::{
    chart_pe_table, chart_xp_table, entry_ratios_from_triple, odds_triple, ratio_2x3,
    third_ratio_xp, ProbTable2x2, ProbTable2x3, RatioKind, SegmentChart,
};
use proptest::prelude::*;
use rand::Rng;

fn table_strategy() -> impl Strategy<Value = ProbTable2x2> {
    prop::array::uniform4(1e-3f64..1.0).prop_map(|w| {
        let total: f64 = w.iter().sum();
        ProbTable2x2::new(w.map(|x| x / total), 1e-9).unwrap()
    })
}

fn root_strategy() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(f64::exp)
}

#[test]
fn diagonal_and_off_diagonal_ratios() {
    // Which of p01/p10 and p10/p01 matches sqrt(r_parallel / r_equal) is read
    // off the samples, then required to hold on every one of them.
    let mut rng = rng(11);
    let mut hits = [0usize; 2];
    let n = 100_000;
    for _ in 0..n {
        let t = table2x2(&mut rng);
        let p = t.entries();
        let o = t.odds_triple();
        assert!(rel((o.r_parallel * o.r_equal).sqrt(), p[0] / p[3]) <= 1e-12);
        let target = (o.r_parallel / o.r_equal).sqrt();
        hits[0] += usize::from(rel(target, p[1] / p[2]) <= 1e-12);
        hits[1] += usize::from(rel(target, p[2] / p[1]) <= 1e-12);

        let e = entry_ratios_from_triple(&o);
        assert!(rel(e.diag, p[0] / p[3]) <= 1e-12);
        assert!(rel(e.off_diag, p[2] / p[1]) <= 1e-12);
    }
    assert_eq!(hits, [0, n], "p10/p01 is the orientation that holds");
}

#[test]
fn xp_and_pe_charts_hold_their_ratios() {
    let mut rng = rng(12);
    for _ in 0..10_000 {
        let (b, g) = (log_uniform(&mut rng, 3.0), log_uniform(&mut rng, 3.0));
        let v = rng.random_range(0.0..1.0) / (b + g);
        if let Ok(t) = chart_pe_table(b, g, v) {
            let p = t.entries();
            assert!(rel(parallel(p), b * b) <= 1e-12);
            assert!(rel(equal(p), g * g) <= 1e-12);
            assert!(rel(t.entries().iter().sum::<f64>(), 1.0) <= 1e-12);
        }
        let a = log_uniform(&mut rng, 3.0);
        let u = rng.random_range(0.0..1.0) / (a + g);
        if let Ok(t) = SegmentChartXE::new(a, g).and_then(|c| c.table(u)) {
            let p = t.entries();
            assert!(rel(cross(p), a * a) <= 1e-12);
            assert!(rel(equal(p), g * g) <= 1e-12);
        }
    }
}

#[test]
fn charts_reproduce_every_table() {
    let mut rng = rng(13);
    for _ in 0..10_000 {
        let t = table2x2(&mut rng);
        let o = t.odds_triple();
        let (a, b) = (o.r_cross.sqrt(), o.r_parallel.sqrt());
        let v = invert_third_ratio_xp(a, b, o.r_equal).unwrap();
        let back = chart_xp_table(a, b, v).unwrap();
        for (x, y) in back.entries().iter().zip(t.entries()) {
            assert!(rel(*x, y) <= 1e-10, "{:?} vs {:?}", back.entries(), t.entries());
        }
    }
}

#[test]
fn third_ratio_is_decreasing_and_onto() {
    for (a, b) in [(1.0, 1.0), (0.2, 3.0), (5.0, 0.7), (0.05, 0.05)] {
        let upper = 1.0 / (a + b);
        let grid: Vec<f64> = (1..2000).map(|k| k as f64 / 2000.0 * upper).collect();
        let values: Vec<f64> = grid.iter().map(|&v| third_ratio_xp(a, b, v).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
        assert!(third_ratio_xp(a, b, upper * 1e-9).unwrap() > 1e12);
        assert!(third_ratio_xp(a, b, upper * (1.0 - 1e-9)).unwrap() < 1e-12);
        assert!(third_ratio_xp(a, b, 0.0).is_err());
        assert!(third_ratio_xp(a, b, upper).is_err());
    }
}

#[test]
fn independence_away_from_the_boundary() {
    let mut rng = rng(14);
    for _ in 0..10_000 {
        let (s, t) = (rng.random_range(1e-3..1.0 - 1e-3), rng.random_range(1e-3..1.0 - 1e-3));
        let table = independence_table(s, t).unwrap();
        assert!((cross(table.entries()) - 1.0).abs() <= 1e-12);
        let back = independence_params(&table, 1e-12).unwrap();
        assert!((back.s() - s).abs() <= 1e-12 && (back.t() - t).abs() <= 1e-12);
    }
    let dependent = ProbTable2x2::new([0.4, 0.2, 0.1, 0.3], 1e-9).unwrap();
    assert!(independence_params(&dependent, 1e-12).is_err());
}

fn assert_collinear(tables: &[ProbTable2x2]) {
    let diffs: Vec<f64> = tables
        .windows(2)
        .flat_map(|w| {
            let (a, b) = (w[0].entries(), w[1].entries());
            (0..4).map(move |i| b[i] - a[i])
        })
        .collect();
    let m = DMatrix::from_column_slice(4, tables.len() - 1, &diffs);
    let sv = m.singular_values();
    let smax = sv.max();
    let rank = sv.iter().filter(|&&s| s > 1e-10 * smax).count();
    assert_eq!(rank, 1, "singular values {sv:?}");
}

#[test]
fn segments_are_straight() {
    let mut rng = rng(15);
    for _ in 0..200 {
        let (x, y) = (log_uniform(&mut rng, 2.0), log_uniform(&mut rng, 2.0));
        let charts: [Box<dyn SegmentChart>; 3] = [
            Box::new(SegmentChartXP::new(x, y).unwrap()),
            Box::new(SegmentChartPE::new(x, y).unwrap()),
            Box::new(SegmentChartXE::new(x, y).unwrap()),
        ];
        for chart in &charts {
            let tables = sample_segment(chart.as_ref(), 12);
            assert_eq!(tables.len(), 12);
            assert_collinear(&tables);
            let [(k0, v0), (k1, v1)] = chart.fixed();
            for t in &tables {
                assert!(rel(t.ratio(k0), v0) <= 1e-12 && rel(t.ratio(k1), v1) <= 1e-12);
            }
        }
    }
}

#[test]
fn ruled_surface_keeps_cross_ratio() {
    let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
    let tables = ruled_surface_sample(9.0, &grid, 7).unwrap();
    assert_eq!(tables.len(), 35);
    for (i, t) in tables.iter().enumerate() {
        assert!(rel(cross(t.entries()), 9.0) <= 1e-12);
        assert!(rel(parallel(t.entries()), grid[i / 7]) <= 1e-12);
    }
    for segment in tables.chunks(7) {
        assert_collinear(segment);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn case_control_matches_ratios(t in table_strategy()) {
        let s = t.case_control();
        let o = odds_triple(&t);
        prop_assert!(rel(s.dor, o.r_cross) <= 1e-12);
        prop_assert!((s.eor * o.r_parallel - 1.0).abs() <= 1e-12);
        let p = t.entries();
        prop_assert!(rel(s.specificity, p[0] / (p[0] + p[1])) <= 1e-12);
        prop_assert!(rel(s.sensitivity, p[3] / (p[2] + p[3])) <= 1e-12);
    }

    #[test]
    fn symmetry_laws(t in table_strategy()) {
        let o = t.odds_triple();
        let r = t.swap_rows().odds_triple();
        prop_assert!(rel(r.r_cross, 1.0 / o.r_cross) <= 1e-12);
        prop_assert!(rel(r.r_parallel, o.r_parallel) <= 1e-12);
        prop_assert!(rel(r.r_equal, 1.0 / o.r_equal) <= 1e-12);
        let c = t.swap_cols().odds_triple();
        prop_assert!(rel(c.r_cross, 1.0 / o.r_cross) <= 1e-12);
        prop_assert!(rel(c.r_parallel, 1.0 / o.r_parallel) <= 1e-12);
        prop_assert!(rel(c.r_equal, o.r_equal) <= 1e-12);
        let tr = t.transpose().odds_triple();
        prop_assert!(rel(tr.r_cross, o.r_cross) <= 1e-12);
        prop_assert!(rel(tr.r_parallel, o.r_equal) <= 1e-12);
        prop_assert!(rel(tr.r_equal, o.r_parallel) <= 1e-12);
    }

    #[test]
    fn negative_branch_never_positive(
        a in root_strategy(),
        b in root_strategy(),
        u in prop_oneof![-10.0f64..-1e-9, 1e-9f64..10.0],
        v in prop_oneof![-10.0f64..-1e-9, 1e-9f64..10.0],
    ) {
        let m = negative_branch_matrix(a, b, u, v);
        prop_assert!(!m.is_positive());
        prop_assert!(m.entries().iter().any(|&x| x <= 0.0));
        // the same matrix satisfies both fixed ratios
        let p = m.entries();
        prop_assert!(rel(cross(p), a * a) <= 1e-12);
        prop_assert!(rel(parallel(p), b * b) <= 1e-12);
    }

    #[test]
    fn embedded_block_keeps_its_ratios(
        t in table_strategy(),
        col in 0usize..3,
        scale in 0.01f64..0.99,
        extra in prop::array::uniform2(0.01f64..1.0),
    ) {
        // place a scaled copy of t in the kept columns of a 2×3 table
        let p = t.entries();
        let kept = match col { 0 => [1, 2], 1 => [0, 2], _ => [0, 1] };
        let mut q = [0.0; 6];
        for (j, &c) in kept.iter().enumerate() {
            q[c] = scale * p[j];
            q[3 + c] = scale * p[2 + j];
        }
        let rest = (1.0 - scale) / (extra[0] + extra[1]);
        q[col] = extra[0] * rest;
        q[3 + col] = extra[1] * rest;
        let big = ProbTable2x3::new(q, 1e-9).unwrap();
        for kind in RatioKind::ALL {
            prop_assert!(rel(ratio_2x3(&big, kind, col).unwrap(), t.ratio(kind)) <= 1e-12);
        }
    }

    #[test]
    fn ratios_ignore_overall_scale(w in prop::array::uniform6(1e-3f64..1.0), c in 0.01f64..100.0) {
        let a = ProbTable2x3::from_counts(w).unwrap();
        let b = ProbTable2x3::from_counts(w.map(|x| c * x)).unwrap();
        for kind in RatioKind::ALL {
            for col in 0..3 {
                let x = ratio_2x3(&a, kind, col).unwrap();
                prop_assert!(rel(ratio_2x3(&b, kind, col).unwrap(), x) <= 1e-12);
                let direct = match kind {
                    RatioKind::Cross => cross(block(w, col)),
                    RatioKind::Parallel => parallel(block(w, col)),
                    RatioKind::Equal => equal(block(w, col)),
                };
                prop_assert!(rel(x, direct) <= 1e-12);
            }
        }
    }
}
