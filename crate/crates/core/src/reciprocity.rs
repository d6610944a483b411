//! Uplink–downlink reciprocity between conferencing transmitters and
//! conferencing receivers.

use serde_json::{json, Value};

use crate::gaussian::{
    outer_bounds, outer_region, ClaimEntry, ClaimsReport, GaussianParams, CONTAINMENT_EPS,
};
use crate::polytope::{per_user_gap, Bound, GapReport, Region2D};

/// The reciprocal channel has the same parameter shape.
pub type ReciprocalParams = GaussianParams;

/// Gains `Hᴴ` and swapped conferencing capacities.
pub fn reciprocal_params(p: &GaussianParams) -> ReciprocalParams {
    GaussianParams {
        h11: p.h11.conj(),
        h12: p.h21.conj(),
        h21: p.h12.conj(),
        h22: p.h22.conj(),
        cb12: p.cb21,
        cb21: p.cb12,
    }
}

fn lg(x: f64) -> f64 {
    x.log2()
}

/// Outer bounds of the reciprocal (conferencing-receivers) channel,
/// written in terms of the original channel `p`.
pub fn rx_outer_bounds(p: &GaussianParams) -> Vec<Bound<f64>> {
    let (s1, s2, i1, i2) = (p.snr1(), p.snr2(), p.inr1(), p.inr2());
    let (c12, c21) = (p.cb12, p.cb21);
    let det2 = p.det().norm_sqr();
    let cross_a = lg(1.0 + i2 + s1 / (1.0 + i1));
    let cross_b = lg(1.0 + i1 + s2 / (1.0 + i2));
    let own_a = lg(1.0 + s1 / (1.0 + i1));
    let own_b = lg(1.0 + s2 / (1.0 + i2));
    vec![
        Bound::named("R1", 1.0, 0.0, (lg(1.0 + s1) + c12).min(lg(1.0 + s1 + i1))),
        Bound::named("R2", 0.0, 1.0, (lg(1.0 + s2) + c21).min(lg(1.0 + s2 + i2))),
        Bound::named("Sum1", 1.0, 1.0, cross_a + cross_b + c12 + c21),
        Bound::named("Sum2", 1.0, 1.0, lg(1.0 + s2 + i1) + own_a + c21),
        Bound::named("Sum3", 1.0, 1.0, lg(1.0 + s1 + i2) + own_b + c12),
        Bound::named("Sum4", 1.0, 1.0, lg(1.0 + s1 + s2 + i1 + i2 + det2)),
        Bound::named(
            "SlopeTwo1",
            2.0,
            1.0,
            cross_b + own_a + lg(1.0 + s1 + i2) + c21 + c12,
        ),
        Bound::named(
            "SlopeHalf1",
            1.0,
            2.0,
            cross_a + own_b + lg(1.0 + s2 + i1) + c12 + c21,
        ),
        Bound::named(
            "SlopeTwo2",
            2.0,
            1.0,
            lg(1.0 + s2 / (1.0 + i2) + i1 + s1 + i2 / (1.0 + i2) + det2 / (1.0 + i2))
                + lg(1.0 + s1 + i2)
                + c12,
        ),
        Bound::named(
            "SlopeHalf2",
            1.0,
            2.0,
            lg(1.0 + s1 / (1.0 + i1) + i2 + s2 + i1 / (1.0 + i1) + det2 / (1.0 + i1))
                + lg(1.0 + s2 + i1)
                + c21,
        ),
    ]
}

pub fn rx_outer_region(p: &GaussianParams) -> Region2D<f64> {
    Region2D::new(rx_outer_bounds(p), 1e-9)
}

/// One direction of the comparison, with the bounds that decide it.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectedGap {
    pub gap: GapReport<f64>,
    /// Bounds of the covering region that the witness presses against
    /// after the shift.
    pub binding: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReciprocityReport {
    /// Conferencing-receivers region into the conferencing-transmitters one.
    pub forward: DirectedGap,
    /// Conferencing-transmitters region into the conferencing-receivers one.
    pub reverse: DirectedGap,
}

impl ReciprocityReport {
    pub fn to_json(&self) -> Value {
        let dir = |d: &DirectedGap| {
            let mut v = d.gap.to_json();
            v["binding"] = json!(d.binding);
            v
        };
        json!({ "forward": dir(&self.forward), "reverse": dir(&self.reverse) })
    }
}

fn binding(inner: &Region2D<f64>, gap: &GapReport<f64>) -> Vec<String> {
    let tol = CONTAINMENT_EPS.max(1e-9 * gap.tau.abs());
    inner
        .bounds()
        .iter()
        .filter(|b| (b.lhs(&gap.witness) - b.b - gap.tau * b.positive_weight()).abs() <= tol)
        .map(|b| b.name.clone().unwrap_or_default())
        .collect()
}

fn directed(outer: &Region2D<f64>, inner: &Region2D<f64>) -> DirectedGap {
    let gap = per_user_gap(outer, inner);
    let binding = binding(inner, &gap);
    DirectedGap { gap, binding }
}

pub fn reciprocity_gap(p: &GaussianParams) -> ReciprocityReport {
    let tx = outer_region(p);
    let rx = rx_outer_region(p);
    ReciprocityReport {
        forward: directed(&rx, &tx),
        reverse: directed(&tx, &rx),
    }
}

const PAIRS: [(&str, &str, f64); 10] = [
    ("R1", "R1", 1.0),
    ("R2", "R2", 1.0),
    ("Sum3", "Sum1", 2.0),
    ("Sum2", "Sum2", 1.0),
    ("Sum1", "Sum3", 1.0),
    ("Sum4", "Sum4", 1.0),
    ("SlopeTwo1", "SlopeTwo1", 2.0),
    ("SlopeHalf1", "SlopeHalf1", 2.0),
    ("SlopeTwo2", "SlopeTwo2", 4.0),
    ("SlopeHalf2", "SlopeHalf2", 4.0),
];

fn paired(p: &GaussianParams) -> Vec<(&'static str, &'static str, f64, f64, f64)> {
    let tx = outer_bounds(p);
    let rx = rx_outer_bounds(p);
    let get = |v: &[Bound<f64>], n: &str| {
        v.iter()
            .find(|b| b.name.as_deref() == Some(n))
            .map_or(f64::NAN, |b| b.b)
    };
    PAIRS
        .iter()
        .map(|&(t, r, budget)| (t, r, get(&tx, t), get(&rx, r), budget))
        .collect()
}

/// Each transmitter-side outer bound exceeds its receiver-side counterpart
/// by at most the stated number of bits.
pub fn bound_budgets(p: &GaussianParams) -> ClaimsReport {
    let entries = paired(p)
        .into_iter()
        .map(|(t, r, a, b, budget)| {
            let d = a - b;
            let tol = 1e-9 * a.abs().max(1.0);
            ClaimEntry {
                name: format!("tx {t} - rx {r} <= {budget}"),
                lhs: d,
                rhs: budget,
                slack: budget - d,
                tol,
                pass: budget - d >= -tol,
            }
        })
        .collect();
    ClaimsReport { entries }
}

/// Whether each transmitter-side outer bound is at least its receiver-side
/// counterpart. Not implied by the reciprocity statement, which compares
/// regions rather than bounds.
pub fn bound_order(p: &GaussianParams) -> ClaimsReport {
    let entries = paired(p)
        .into_iter()
        .map(|(t, r, a, b, _)| {
            let tol = 1e-9 * a.abs().max(1.0);
            ClaimEntry {
                name: format!("tx {t} >= rx {r}"),
                lhs: a,
                rhs: b,
                slack: a - b,
                tol,
                pass: a - b >= -tol,
            }
        })
        .collect();
    ClaimsReport { entries }
}
