mod common;

use common::*;
use confcap::gaussian::{pre_fme_inner_system, GaussianParams};
use confcap::harness::{gaussian_sample, SweepConfig, SweepMode};
use confcap::ldc::{pre_fme_system, LdcParams};
use confcap::polytope::{
    minkowski_shift, per_user_gap, project_to_rates, project_to_rates_with_stats, remove_redundant,
    Bound, HalfspaceSystem, Region2D,
};
use confcap::{Rational, Scalar};
use num_complex::Complex64;
use rand::Rng;

#[test]
fn projection_matches_extension_on_grid() {
    assert_eq!(projection_is_sound(11, 60), 0);
}

#[test]
fn decoupled_and_paired_eliminations() {
    let mut s = HalfspaceSystem::<Rational>::new(&["R1", "R2", "y"]).unwrap();
    s.add_le("a", &[("R1", q(1, 1)), ("y", q(1, 1))], q(2, 1))
        .unwrap();
    s.add_le("b", &[("y", q(-1, 1))], q(0, 1)).unwrap();
    s.add_le("c", &[("R2", q(1, 1))], q(3, 1)).unwrap();
    let r = project_to_rates(&s, ["R1", "R2"]).unwrap();
    assert_eq!(r.vertices(), &[pt(0, 0), pt(2, 0), pt(2, 3), pt(0, 3)]);
}

#[test]
fn redundancy_removal_keeps_vertices() {
    let mut r = rng(5);
    for _ in 0..200 {
        let sys = random_system(&mut r);
        let before = project_to_rates(&sys, ["R1", "R2"]).unwrap();
        let pruned = remove_redundant(&sys);
        assert!(pruned.rows().len() <= sys.rows().len());
        let after = project_to_rates(&pruned, ["R1", "R2"]).unwrap();
        assert_eq!(before.vertices(), after.vertices());
        assert_eq!(before.rays(), after.rays());
    }
}

fn random_polygon<R: Rng>(r: &mut R) -> Region2D<Rational> {
    let mut bounds = vec![
        Bound::new(q(1, 1), q(0, 1), q(r.gen_range(1..=9), 1)),
        Bound::new(q(0, 1), q(1, 1), q(r.gen_range(1..=9), 1)),
    ];
    for (a1, a2) in [(1, 1), (2, 1), (1, 2)] {
        if r.gen_bool(0.7) {
            bounds.push(Bound::new(q(a1, 1), q(a2, 1), q(r.gen_range(1..=20), 1)));
        }
    }
    Region2D::new(bounds, q(0, 1))
}

#[test]
fn shift_gap_is_exact() {
    let mut r = rng(17);
    for _ in 0..100 {
        let a = random_polygon(&mut r);
        assert_eq!(per_user_gap(&a, &a).tau, q(0, 1));
        for t in [q(1, 2), q(1, 1), q(2, 1)] {
            let shifted = minkowski_shift(&a, &t).unwrap();
            let g = per_user_gap(&shifted, &a);
            assert!(g.converged);
            assert_eq!(g.tau, t);
        }
    }
}

#[test]
fn shift_rhs_follows_positive_weights() {
    let a = Region2D::new(vec![Bound::new(q(2, 1), q(1, 1), q(7, 1))], q(0, 1));
    let s = minkowski_shift(&a, &q(1, 1)).unwrap();
    assert_eq!(s.support(&q(2, 1), &q(1, 1)), Some(q(10, 1)));
    assert!(minkowski_shift(&a, &q(-1, 1)).is_err());
}

#[test]
fn fixture_projections_stay_small() {
    for p in [
        example_channel(),
        symmetric_channel(0),
        symmetric_channel(1),
        LdcParams::new([2, 2, 2, 2], [1, 1]),
    ] {
        let (_, stats) = project_to_rates_with_stats(&pre_fme_system(&p), ["R1", "R2"]).unwrap();
        assert!(stats.final_rows <= 40, "{p:?}: {}", stats.final_rows);
    }
    let id = GaussianParams::new(
        [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ],
        [0.0, 0.0],
    );
    let (_, stats) =
        project_to_rates_with_stats(&pre_fme_inner_system(&id).unwrap(), ["R1", "R2"]).unwrap();
    assert!(stats.final_rows <= 40, "{}", stats.final_rows);
}

#[test]
fn approx_projection_agrees_with_exact() {
    let mut r = rng(23);
    for _ in 0..50 {
        let exact = random_system(&mut r);
        let approx = HalfspaceSystem::<f64>::from_json(&{
            let mut v = exact.to_json();
            v["mode"] = "approx".into();
            v
        })
        .unwrap();
        let re = project_to_rates(&exact, ["R1", "R2"]).unwrap();
        let ra = project_to_rates(&approx, ["R1", "R2"]).unwrap();
        assert_eq!(re.is_empty(), ra.is_empty());
        let mapped = re.map(|x| x.approx(), 1e-9);
        if !re.is_empty() && re.is_bounded() {
            assert!(mapped.is_subset_of(&ra, &1e-7) && ra.is_subset_of(&mapped, &1e-7));
        }
    }
}

#[test]
fn gaussian_shift_gap_in_floating_point() {
    let cfg = SweepConfig::new(SweepMode::Gaussian, 1, 3);
    for i in 0..20 {
        let a = confcap::gaussian::outer_region(&gaussian_sample(&cfg, i));
        let s = minkowski_shift(&a, &1.5).unwrap();
        let g = per_user_gap(&s, &a);
        assert!((g.tau - 1.5).abs() < 1e-6, "{}", g.tau);
    }
}
