use crate::gaussian::{inner_quantities, GaussianParams, UserQuantities};
use crate::polytope::{Bound, HalfspaceSystem, PolytopeError, Region2D};
use crate::strategy::{build_system_with_eps, Quantity};

/// Tolerance for containment between Gaussian regions.
pub const CONTAINMENT_EPS: f64 = 1e-6;

const REGION_EPS: f64 = 1e-9;

pub(crate) fn lg(x: f64) -> f64 {
    x.log2()
}

/// `log(1 + a + b + 2√(ab))`, the rate with both signals coherently combined.
pub(crate) fn coherent(a: f64, b: f64) -> f64 {
    lg(1.0 + a + b + 2.0 * (a * b).sqrt())
}

/// Single-user terms of the outer bounds, written for user 1.
pub(crate) struct OuterTerms {
    pub r_coop: f64,
    pub r_coherent: f64,
    pub sum_z: f64,
    pub slope_a: f64,
    pub slope_b: f64,
}

/// `log(1 + (S1 + 2√(S1·I1))/(1 + I2) + I1)`.
fn leaky(s1: f64, i1: f64, i2: f64) -> f64 {
    lg(1.0 + (s1 + 2.0 * (s1 * i1).sqrt()) / (1.0 + i2) + i1)
}

pub(crate) fn outer_terms(p: &GaussianParams) -> OuterTerms {
    let (s1, s2, i1, i2) = (p.snr1(), p.snr2(), p.inr1(), p.inr2());
    let c12 = p.cb12;
    let c21 = p.cb21;
    let private = lg(1.0 + s1 / (1.0 + i2));
    let joint =
        1.0 + s1 + i1 + s2 + i2 + s1 * s2 + i1 * i2 + s1 * i2 + 2.0 * (1.0 + i2) * (s1 * i1).sqrt();
    OuterTerms {
        r_coop: lg(1.0 + s1) + c12,
        r_coherent: coherent(s1, i1),
        sum_z: private + coherent(s2, i2) + c12,
        slope_a: coherent(s1, i1) + private + leaky(s2, i2, i1) + c12 + c21,
        slope_b: lg(joint) + private + 1.0 + c12,
    }
}

pub(crate) fn outer_sum3(p: &GaussianParams) -> f64 {
    leaky(p.snr1(), p.inr1(), p.inr2()) + leaky(p.snr2(), p.inr2(), p.inr1()) + p.cb12 + p.cb21
}

pub(crate) fn outer_sum4(p: &GaussianParams) -> f64 {
    let (s1, s2, i1, i2) = (p.snr1(), p.snr2(), p.inr1(), p.inr2());
    lg(1.0
        + s1
        + i1
        + s2
        + i2
        + 2.0 * (s1 * i1).sqrt()
        + 2.0 * (s2 * i2).sqrt()
        + p.det().norm_sqr())
}

/// The outer bounds as listed, before reduction. Names: `R1`, `R2`,
/// `Sum1`–`Sum4`, `SlopeTwo1`, `SlopeHalf1`, `SlopeTwo2`, `SlopeHalf2`.
pub fn outer_bounds(p: &GaussianParams) -> Vec<Bound<f64>> {
    let a = outer_terms(p);
    let b = outer_terms(&p.swapped());
    vec![
        Bound::named("R1", 1.0, 0.0, a.r_coop.min(a.r_coherent)),
        Bound::named("R2", 0.0, 1.0, b.r_coop.min(b.r_coherent)),
        Bound::named("Sum1", 1.0, 1.0, a.sum_z),
        Bound::named("Sum2", 1.0, 1.0, b.sum_z),
        Bound::named("Sum3", 1.0, 1.0, outer_sum3(p)),
        Bound::named("Sum4", 1.0, 1.0, outer_sum4(p)),
        Bound::named("SlopeTwo1", 2.0, 1.0, a.slope_a),
        Bound::named("SlopeHalf1", 1.0, 2.0, b.slope_a),
        Bound::named("SlopeTwo2", 2.0, 1.0, a.slope_b),
        Bound::named("SlopeHalf2", 1.0, 2.0, b.slope_b),
    ]
}

pub fn outer_region(p: &GaussianParams) -> Region2D<f64> {
    Region2D::new(outer_bounds(p), REGION_EPS)
}

/// Right-hand sides of the inner bounds before clipping at zero.
pub(crate) struct InnerTerms {
    pub r_m: [f64; 2],
    pub r_n: [f64; 2],
    pub sum_t: f64,
    pub sum_pm: [f64; 2],
    pub sum_gm: [f64; 2],
    pub slope_pmt: [f64; 2],
    pub slope_pms: [f64; 2],
    pub slope_plm: [f64; 2],
}

pub(crate) fn inner_terms(p: &GaussianParams) -> InnerTerms {
    let d = inner_quantities(p);
    let [u1, u2] = d.user;
    let (c12, c21) = (p.cb12, p.cb21);
    let (l3, l5, l90) = (3f64.log2(), 5f64.log2(), 90f64.log2());
    let side = |a: &UserQuantities, b: &UserQuantities, ca: f64, cb: f64| {
        (
            a.n + ca - 2.0 * l3,
            a.p + b.m + ca - l90 / 2.0,
            a.g + b.m,
            a.p + a.m + b.t + ca + cb - l5,
            a.p + a.m + b.s + ca - l5,
            a.p + a.l + b.m + ca,
        )
    };
    let one = side(&u1, &u2, c12, c21);
    let two = side(&u2, &u1, c21, c12);
    InnerTerms {
        r_m: [u1.m, u2.m],
        r_n: [one.0, two.0],
        sum_t: u1.t + u2.t + c12 + c21 - 2.0 * l5,
        sum_pm: [one.1, two.1],
        sum_gm: [one.2, two.2],
        slope_pmt: [one.3, two.3],
        slope_pms: [one.4, two.4],
        slope_plm: [one.5, two.5],
    }
}

/// The nine inner bounds, each right-hand side clipped at zero.
pub fn inner_bounds(p: &GaussianParams) -> Vec<Bound<f64>> {
    let t = inner_terms(p);
    let b = |name: &str, a1: f64, a2: f64, rhs: f64| Bound::named(name, a1, a2, rhs.max(0.0));
    vec![
        b("R1", 1.0, 0.0, t.r_m[0].min(t.r_n[0])),
        b("R2", 0.0, 1.0, t.r_m[1].min(t.r_n[1])),
        b("Sum1", 1.0, 1.0, t.sum_t),
        b("Sum2", 1.0, 1.0, t.sum_pm[0].min(t.sum_pm[1])),
        b("Sum3", 1.0, 1.0, t.sum_gm[0].min(t.sum_gm[1])),
        b("SlopeTwo1", 2.0, 1.0, t.slope_pmt[0]),
        b("SlopeTwo2", 2.0, 1.0, t.slope_pms[0].min(t.slope_plm[0])),
        b("SlopeHalf1", 1.0, 2.0, t.slope_pmt[1]),
        b("SlopeHalf2", 1.0, 2.0, t.slope_pms[1].min(t.slope_plm[1])),
    ]
}

pub fn inner_region(p: &GaussianParams) -> Region2D<f64> {
    Region2D::new(inner_bounds(p), REGION_EPS)
}

/// Split-rate system with every receiver row bounded by the single-user
/// quantity of the same shape as in the deterministic model.
pub fn pre_fme_inner_system(p: &GaussianParams) -> Result<HalfspaceSystem<f64>, PolytopeError> {
    let d = inner_quantities(p);
    let rhs = |user: usize, row: usize| {
        let u = &d.user[user];
        match crate::strategy::RX_ROWS[row].quantity {
            Quantity::P => u.p,
            Quantity::G => u.g,
            Quantity::T => u.t,
            Quantity::N => u.n,
            Quantity::S => u.s,
            Quantity::L => u.l,
            Quantity::M => u.m,
        }
    };
    build_system_with_eps(rhs, [p.cb12, p.cb21], REGION_EPS)
}

/// Split-rate system with the exact mutual-information right-hand sides.
pub fn theorem2_full_system(p: &GaussianParams) -> Result<HalfspaceSystem<f64>, PolytopeError> {
    let d = inner_quantities(p);
    let sc = &d.scheme;
    let rows: Vec<[f64; 16]> = (0..2)
        .map(|i| {
            let u = &d.user[i];
            let (kc, ku) = (sc.k_cond[i], sc.k_u[i]);
            let (sp, sc_, ic) = (u.snr_p, u.snr_c, u.inr_c);
            let den = 1.0 + sc.sigma2[i] + u.inr_p;
            [
                sp,
                kc,
                kc + sp,
                ic + sp,
                sc_ + sp,
                kc + ic,
                kc + ic + sp,
                kc + sc_ + sp,
                sc_ + ic + sp,
                kc + sc_ + ic + sp,
                ku,
                ku + sp,
                ku + ic + sp,
                ku + sc_ + ic + sp,
                ku + sc_ + sp,
                ku + sc_ + ic + sp,
            ]
            .map(|num| lg(1.0 + num / den))
        })
        .collect();
    build_system_with_eps(|user, row| rows[user][row], [p.cb12, p.cb21], REGION_EPS)
}
