use serde_json::{json, Value};

use crate::polytope::region::{Bound, Region2D};
use crate::polytope::PolytopeError;
use crate::scalar::{le_eps, smax, Scalar};

pub const PER_USER_METRIC: &str = "per-user shift";

/// Smallest per-user shift τ with `outer ⊆ inner ⊕ [0,τ]²`.
#[derive(Clone, Debug, PartialEq)]
pub struct GapReport<S> {
    pub tau: S,
    /// Outer vertex that needs the full shift.
    pub witness: (S, S),
    /// False when no finite shift works (empty inner region, or outer
    /// unbounded in a direction where inner is not).
    pub converged: bool,
    pub iterations: usize,
    pub metric: &'static str,
}

impl<S: Scalar> GapReport<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "metric": self.metric,
            "tau": self.tau.to_json(),
            "witness": [self.witness.0.to_json(), self.witness.1.to_json()],
            "converged": self.converged,
            "iterations": self.iterations,
        })
    }
}

/// Bounds of `region` together with its support in each axis direction.
/// For a reduced region these are exactly the edge normals needed to write
/// `region ⊕ [0,τ]²` by shifting right-hand sides.
fn supports<S: Scalar>(region: &Region2D<S>) -> Vec<Bound<S>> {
    let (z, o) = (S::zero(), S::one());
    let mut rows: Vec<Bound<S>> = region.bounds().to_vec();
    let axes = [
        ("R1 support", o.clone(), z.clone()),
        ("R2 support", z.clone(), o.clone()),
        ("R1 floor", -o.clone(), z.clone()),
        ("R2 floor", z.clone(), -o),
    ];
    for (name, a1, a2) in axes {
        if let Some(h) = region.support(&a1, &a2) {
            rows.push(Bound::named(name, a1, a2, h));
        }
    }
    rows
}

/// `region ⊕ [0,τ]²`.
pub fn minkowski_shift<S: Scalar>(
    region: &Region2D<S>,
    tau: &S,
) -> Result<Region2D<S>, PolytopeError> {
    if *tau < S::zero() {
        return Err(PolytopeError::NegativeShift);
    }
    if region.is_empty() {
        return Ok(region.clone());
    }
    let rows = supports(region)
        .into_iter()
        .map(|mut b| {
            b.b = b.b.clone() + tau.clone() * b.positive_weight();
            b
        })
        .collect();
    Ok(Region2D::new(rows, region.eps().clone()))
}

/// Per-user gap between two regions.
///
/// Every (outer vertex, shifted inner bound) pair yields one critical τ. The
/// candidates are sorted and bisected with full containment tests, so the
/// answer is one of them and exact in exact mode.
pub fn per_user_gap<S: Scalar>(outer: &Region2D<S>, inner: &Region2D<S>) -> GapReport<S> {
    let z = S::zero();
    let origin = (z.clone(), z.clone());
    let eps = smax(outer.eps().clone(), inner.eps().clone());
    let report = |tau: S, witness: (S, S), converged: bool, iterations: usize| GapReport {
        tau,
        witness,
        converged,
        iterations,
        metric: PER_USER_METRIC,
    };
    if outer.is_empty() {
        return report(z, origin, true, 0);
    }
    if inner.is_empty() {
        return report(z, outer.vertices()[0].clone(), false, 0);
    }
    let rows = supports(inner);
    for d in outer.rays() {
        if rows.iter().any(|b| b.lhs(d) > eps) {
            return report(z, outer.vertices()[0].clone(), false, 0);
        }
    }

    let mut cands: Vec<(S, (S, S))> = vec![(z.clone(), outer.vertices()[0].clone())];
    for v in outer.vertices() {
        for b in &rows {
            let w = b.positive_weight();
            let excess = b.lhs(v) - b.b.clone();
            if w.is_zero() {
                if excess > eps {
                    return report(z, v.clone(), false, 0);
                }
                continue;
            }
            let t = excess / w;
            if t > z {
                cands.push((t, v.clone()));
            }
        }
    }
    cands.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    let contained = |tau: &S| {
        outer.vertices().iter().all(|v| {
            rows.iter().all(|b| {
                le_eps(
                    &b.lhs(v),
                    &(b.b.clone() + tau.clone() * b.positive_weight()),
                    &eps,
                )
            })
        })
    };
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    let mut iterations = 0;
    while lo < hi {
        let mid = (lo + hi) / 2;
        iterations += 1;
        if contained(&cands[mid].0) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let converged = contained(&cands[lo].0);
    let (tau, witness) = cands.swap_remove(lo);
    report(tau, witness, converged, iterations + 1)
}
