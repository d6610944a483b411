#![allow(dead_code)]

use confcap::ldc::LdcParams;
use confcap::polytope::{project_to_rates, HalfspaceSystem, LinearInequality};
use confcap::{Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

pub fn pt(a: i64, b: i64) -> (Rational, Rational) {
    (q(a, 1), q(b, 1))
}

pub fn example_channel() -> LdcParams {
    LdcParams::new([2, 3, 1, 3], [1, 2])
}

/// Direct links 5, cross links 3, conferencing `k` both ways.
pub fn symmetric_channel(k: u32) -> LdcParams {
    LdcParams::new([5, 3, 3, 5], [k, k])
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

/// Capacity bounds of the deterministic channel as `(a1, a2, rhs)`, written
/// out independently of the library.
pub fn capacity_oracle(p: &LdcParams) -> Vec<(i64, i64, i64)> {
    let (n11, n12, n21, n22) = (p.n11 as i64, p.n12 as i64, p.n21 as i64, p.n22 as i64);
    let (k12, k21) = (p.k12 as i64, p.k21 as i64);
    let sum4 = if n11 + n22 != n12 + n21 {
        (n11 + n22).max(n12 + n21)
    } else {
        n11.max(n12).max(n21).max(n22)
    };
    vec![
        (1, 0, n11.max(n12).min(n11 + k12)),
        (0, 1, n22.max(n21).min(n22 + k21)),
        (1, 1, pos(n11 - n21) + n22.max(n21) + k12),
        (1, 1, pos(n22 - n12) + n11.max(n12) + k21),
        (
            1,
            1,
            n12.max(pos(n11 - n21)) + n21.max(pos(n22 - n12)) + k12 + k21,
        ),
        (1, 1, sum4),
        (
            2,
            1,
            n11.max(n12) + n21.max(pos(n22 - n12)) + pos(n11 - n21) + k12 + k21,
        ),
        (
            1,
            2,
            n22.max(n21) + n12.max(pos(n11 - n21)) + pos(n22 - n12) + k21 + k12,
        ),
        (
            2,
            1,
            n21 + (n11 + pos(n22 - n21)).max(n12) + pos(n11 - n21) + k12,
        ),
        (
            1,
            2,
            n12 + (n22 + pos(n11 - n12)).max(n21) + pos(n22 - n12) + k21,
        ),
    ]
}

pub fn oracle_contains(p: &LdcParams, x: &(Rational, Rational)) -> bool {
    let z = Rational::from_integer(0.into());
    x.0 >= z
        && x.1 >= z
        && capacity_oracle(p)
            .iter()
            .all(|&(a1, a2, b)| q(a1, 1) * &x.0 + q(a2, 1) * &x.1 <= q(b, 1))
}

/// Points of `[0, hi]²` on a grid of step `1/den`.
pub fn grid(hi: i64, den: i64) -> Vec<(Rational, Rational)> {
    let n = hi * den;
    (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (q(i, den), q(j, den))))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_ldc<R: Rng>(rng: &mut R, n_max: u32, k_max: u32) -> LdcParams {
    let mut n = || rng.gen_range(0..=n_max);
    let levels = [n(), n(), n(), n()];
    let caps = [rng.gen_range(0..=k_max), rng.gen_range(0..=k_max)];
    LdcParams::new(levels, caps)
}

/// Draws until the rank case matches.
pub fn random_ldc_case<R: Rng>(rng: &mut R, n_max: u32, k_max: u32, full_rank: bool) -> LdcParams {
    loop {
        let p = random_ldc(rng, n_max, k_max);
        if p.full_rank() == full_rank {
            return p;
        }
    }
}

/// A small random exact system over `R1`, `R2` and up to four helpers, all
/// nonnegative, with integer coefficients in `[-3, 3]`.
pub fn random_system<R: Rng>(rng: &mut R) -> HalfspaceSystem<Rational> {
    let extra = rng.gen_range(0..=4);
    let mut vars = vec!["R1".to_string(), "R2".to_string()];
    vars.extend((0..extra).map(|i| format!("x{i}")));
    let mut sys = HalfspaceSystem::<Rational>::new(&vars)
        .unwrap()
        .all_nonneg();
    let rows = rng.gen_range(2..=12);
    for _ in 0..rows {
        let coeffs: Vec<Rational> = (0..vars.len())
            .map(|_| q(rng.gen_range(-3..=3), 1))
            .collect();
        let rhs = q(rng.gen_range(-2..=8), 1);
        sys.push(LinearInequality::new(coeffs, rhs)).unwrap();
    }
    sys
}

/// Number of points on a 50×50 grid where membership in the projection
/// disagrees with the original system having a point above it.
pub fn projection_is_sound(seed: u64, systems: usize) -> usize {
    let pts: Vec<(Rational, Rational)> = (0..50)
        .flat_map(|i| (0..50).map(move |j| (q(i - 5, 8), q(j - 5, 8))))
        .collect();
    (0..systems)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(seed.wrapping_add(i as u64));
            let sys = random_system(&mut r);
            let region = project_to_rates(&sys, ["R1", "R2"]).unwrap();
            pts.iter()
                .filter(|p| {
                    let ext = sys
                        .has_extension(&[("R1", p.0.clone()), ("R2", p.1.clone())])
                        .unwrap();
                    ext != region.contains(p)
                })
                .count()
        })
        .sum()
}
