mod common;

use common::*;
use confcap::ldc::{
    capacity_region, channel_output, derived_quantities, pre_fme_system, scheme_search,
    scheme_verify, verify_lemmas_1_2, LdcParams,
};
use confcap::polytope::project_to_rates;
use confcap::Rational;
use rand::Rng;

fn agrees_with_oracle(p: &LdcParams, region: &confcap::ExactRegion) -> bool {
    let hi = (p.q() + p.k12.max(p.k21)) as i64 + 1;
    grid(hi, 6)
        .iter()
        .all(|x| region.contains(x) == oracle_contains(p, x))
}

#[test]
fn example_region_is_a_pentagon() {
    let r = capacity_region(&example_channel());
    assert_eq!(
        r.vertices(),
        &[pt(0, 0), pt(3, 0), pt(3, 1), pt(2, 3), pt(0, 3)]
    );
    assert!(agrees_with_oracle(&example_channel(), &r));
    let z = q(0, 1);
    let kept: Vec<(Rational, Rational, Rational)> = r
        .bounds()
        .iter()
        .filter(|b| b.a1 > z || b.a2 > z)
        .map(|b| (b.a1.clone(), b.a2.clone(), b.b.clone()))
        .collect();
    assert!(kept.contains(&(q(2, 1), q(1, 1), q(7, 1))));
}

#[test]
fn random_regions_match_closed_form() {
    let mut r = rng(101);
    for _ in 0..300 {
        let p = random_ldc(&mut r, 6, 3);
        assert!(agrees_with_oracle(&p, &capacity_region(&p)), "{p:?}");
    }
}

#[test]
fn level_allocation_corners() {
    let no_coop = capacity_region(&symmetric_channel(0));
    let coop = capacity_region(&symmetric_channel(1));
    for (region, corners) in [
        (&no_coop, [pt(4, 2), pt(5, 0)]),
        (&coop, [pt(4, 4), pt(5, 2)]),
    ] {
        for c in &corners {
            assert!(region.contains(c));
            let tight = region.bounds().iter().any(|b| b.lhs(c) == b.b);
            assert!(tight, "{c:?} not on the boundary");
        }
    }
    assert_eq!(coop.support(&q(1, 1), &q(1, 1)), Some(q(8, 1)));
    assert_eq!(coop.support(&q(2, 1), &q(1, 1)), Some(q(12, 1)));
}

#[test]
fn projection_equals_capacity_in_both_rank_cases() {
    let mut r = rng(7);
    for full in [true, false] {
        for _ in 0..20 {
            let p = random_ldc_case(&mut r, 5, 2, full);
            assert!(verify_lemmas_1_2(&p), "{p:?}");
        }
    }
}

#[test]
fn no_conferencing_projection_matches_closed_form() {
    let mut r = rng(8);
    for _ in 0..30 {
        let mut p = random_ldc(&mut r, 5, 0);
        p.k12 = 0;
        p.k21 = 0;
        let proj = project_to_rates(&pre_fme_system(&p), ["R1", "R2"]).unwrap();
        assert!(agrees_with_oracle(&p, &proj), "{p:?}");
    }
}

/// Landing on `n11 + n22 = n12 + n21` drops the full-cooperation sum bound to
/// the largest single link, so growing a direct link can shrink the region.
#[test]
fn direct_gain_is_not_monotone_into_the_singular_case() {
    let p = LdcParams::new([5, 4, 4, 2], [2, 2]);
    let bigger = LdcParams::new([5, 4, 4, 3], [2, 2]);
    let (a, b) = (capacity_region(&p), capacity_region(&bigger));
    assert!(!a.is_subset_of(&b, &q(0, 1)));
    assert_eq!(a.support(&q(1, 1), &q(1, 1)), Some(q(7, 1)));
    assert_eq!(b.support(&q(1, 1), &q(1, 1)), Some(q(5, 1)));
}

#[test]
fn more_levels_or_capacity_never_shrink_the_region() {
    let mut r = rng(9);
    let mut checked = 0;
    while checked < 1000 {
        let p = random_ldc(&mut r, 5, 3);
        let mut bigger = p;
        match r.gen_range(0..4) {
            0 => bigger.n11 += 1,
            1 => bigger.n22 += 1,
            2 => bigger.k12 += 1,
            _ => bigger.k21 += 1,
        }
        if p.full_rank() && !bigger.full_rank() {
            continue;
        }
        checked += 1;
        let (a, b) = (capacity_region(&p), capacity_region(&bigger));
        assert!(a.is_subset_of(&b, &q(0, 1)), "{p:?} -> {bigger:?}");
    }
}

#[test]
fn finite_capacity_is_bracketed() {
    let mut r = rng(10);
    for _ in 0..300 {
        let p = random_ldc(&mut r, 6, 3);
        let mut none = p;
        none.k12 = 0;
        none.k21 = 0;
        let mut full = p;
        let total = p.n11 + p.n12 + p.n21 + p.n22;
        full.k12 = total;
        full.k21 = total;
        let (lo, mid, hi) = (
            capacity_region(&none),
            capacity_region(&p),
            capacity_region(&full),
        );
        assert!(
            lo.is_subset_of(&mid, &q(0, 1)) && mid.is_subset_of(&hi, &q(0, 1)),
            "{p:?}"
        );
    }
}

#[test]
fn searched_schemes_verify_and_lie_inside() {
    let mut r = rng(12);
    for i in 0..60 {
        let p = random_ldc(&mut r, 4, 2);
        let region = capacity_region(&p);
        let r1 = r.gen_range(0..=p.q() as usize);
        let r2 = r.gen_range(0..=p.q() as usize);
        if let Some(s) = scheme_search(&p, r1, r2, 3000, i).unwrap() {
            assert_eq!(scheme_verify(&p, &s, r1, r2), Ok(true));
            assert!(
                region.contains(&pt(r1 as i64, r2 as i64)),
                "{p:?} ({r1}, {r2})"
            );
        }
    }
}

#[test]
fn search_respects_the_guard() {
    let p = LdcParams::new([7, 0, 0, 1], [0, 0]);
    assert!(scheme_search(&p, 1, 1, 10, 0).is_err());
}

#[test]
fn top_interfering_bit_lands_on_top_level() {
    let p = example_channel();
    let mut x2 = vec![false; 3];
    x2[0] = true;
    let (y1, _) = channel_output(&p, &[false; 3], &x2).unwrap();
    assert_eq!(y1, vec![true, false, false]);
}

#[test]
fn hand_evaluated_levels() {
    let d = derived_quantities(&example_channel());
    let [u1, u2] = d.user;
    assert_eq!((u1.p, u1.t, u1.m, u1.g, u1.l, u1.s), (1, 3, 3, 2, 2, 3));
    assert_eq!((u2.p, u2.t, u2.m, u2.g, u2.l, u2.s), (0, 1, 3, 2, 3, 2));
}
