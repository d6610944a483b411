use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::polytope::fme::{eliminate, FmeStats};
use crate::polytope::system::HalfspaceSystem;
use crate::polytope::PolytopeError;
use crate::scalar::{eq_eps, le_eps, smax, Scalar};

/// `a1·R1 + a2·R2 ≤ b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound<S> {
    pub a1: S,
    pub a2: S,
    pub b: S,
    pub name: Option<String>,
}

impl<S: Scalar> Bound<S> {
    pub fn new(a1: S, a2: S, b: S) -> Self {
        Bound {
            a1,
            a2,
            b,
            name: None,
        }
    }

    pub fn named(name: impl Into<String>, a1: S, a2: S, b: S) -> Self {
        Bound {
            a1,
            a2,
            b,
            name: Some(name.into()),
        }
    }

    pub fn lhs(&self, p: &(S, S)) -> S {
        self.a1.clone() * p.0.clone() + self.a2.clone() * p.1.clone()
    }

    /// Sum of the positive coefficients: how far the rhs moves when the
    /// region is enlarged by a `[0,τ]²` box with τ = 1.
    pub fn positive_weight(&self) -> S {
        let z = S::zero();
        smax(self.a1.clone(), z.clone()) + smax(self.a2.clone(), z)
    }

    fn direction(&self) -> (S, S) {
        let m = smax(self.a1.abs(), self.a2.abs());
        if m.is_zero() {
            return (S::zero(), S::zero());
        }
        (self.a1.clone() / m.clone(), self.a2.clone() / m)
    }
}

/// A polygon in the nonnegative (R1, R2) quadrant given by its bounds.
///
/// Vertices run counter-clockwise from the lexicographically smallest one.
/// Unbounded regions carry their extreme recession directions in `rays`.
#[derive(Clone, Debug, PartialEq)]
pub struct Region2D<S> {
    bounds: Vec<Bound<S>>,
    vertices: Vec<(S, S)>,
    rays: Vec<(S, S)>,
    eps: S,
}

fn quadrant<S: Scalar>() -> [Bound<S>; 2] {
    let (z, o) = (S::zero(), S::one());
    [
        Bound::new(-o.clone(), z.clone(), z.clone()),
        Bound::new(z.clone(), -o, z),
    ]
}

fn cross<S: Scalar>(o: &(S, S), p: &(S, S), q: &(S, S)) -> S {
    (p.0.clone() - o.0.clone()) * (q.1.clone() - o.1.clone())
        - (p.1.clone() - o.1.clone()) * (q.0.clone() - o.0.clone())
}

fn lex<S: Scalar>(a: &(S, S), b: &(S, S)) -> Ordering {
    a.0.partial_cmp(&b.0)
        .unwrap_or(Ordering::Equal)
        .then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
}

fn enumerate<S: Scalar>(bounds: &[Bound<S>], eps: &S) -> (Vec<(S, S)>, Vec<(S, S)>) {
    let mut cons: Vec<&Bound<S>> = bounds.iter().collect();
    let q = quadrant::<S>();
    cons.extend(q.iter());
    let feasible = |p: &(S, S)| cons.iter().all(|c| le_eps(&c.lhs(p), &c.b, eps));

    let mut pts: Vec<(S, S)> = Vec::new();
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            let (u, v) = (cons[i], cons[j]);
            let det = u.a1.clone() * v.a2.clone() - u.a2.clone() * v.a1.clone();
            if det.abs() <= *eps || det.is_zero() {
                continue;
            }
            let x = (u.b.clone() * v.a2.clone() - u.a2.clone() * v.b.clone()) / det.clone();
            let y = (u.a1.clone() * v.b.clone() - u.b.clone() * v.a1.clone()) / det;
            let p = (x, y);
            if feasible(&p)
                && !pts
                    .iter()
                    .any(|o| eq_eps(&o.0, &p.0, eps) && eq_eps(&o.1, &p.1, eps))
            {
                pts.push(p);
            }
        }
    }
    if pts.is_empty() {
        return (pts, Vec::new());
    }

    pts.sort_by(lex);
    let origin = pts[0].clone();
    let mut rest = pts.split_off(1);
    rest.sort_by(|a, b| {
        let c = cross(&origin, a, b);
        if c > S::zero() {
            Ordering::Less
        } else if c < S::zero() {
            Ordering::Greater
        } else {
            lex(a, b)
        }
    });
    pts.extend(rest);

    // Recession directions: the extreme rays lie on an axis or on the zero
    // set of some bound with mixed-sign coefficients.
    let (z, o) = (S::zero(), S::one());
    let mut cands = vec![(o.clone(), z.clone()), (z.clone(), o.clone())];
    for b in bounds {
        if (b.a1 > z && b.a2 < z) || (b.a1 < z && b.a2 > z) {
            let d = (b.a2.abs(), b.a1.abs());
            let m = smax(d.0.clone(), d.1.clone());
            cands.push((d.0 / m.clone(), d.1 / m));
        }
    }
    let origin0 = (z.clone(), z.clone());
    let mut cone: Vec<(S, S)> = cands
        .into_iter()
        .filter(|d| bounds.iter().all(|b| le_eps(&b.lhs(d), &z, eps)))
        .collect();
    let mut rays = Vec::new();
    if !cone.is_empty() {
        let by_angle = |a: &(S, S), b: &(S, S)| {
            let c = cross(&origin0, a, b);
            if c > z {
                Ordering::Less
            } else if c < z {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        };
        cone.sort_by(by_angle);
        let first = cone[0].clone();
        let last = cone[cone.len() - 1].clone();
        let same = cross(&origin0, &first, &last).abs() <= *eps;
        rays.push(first);
        if !same {
            rays.push(last);
        }
    }
    (pts, rays)
}

impl<S: Scalar> Region2D<S> {
    /// Builds the region and drops bounds that do not touch it, duplicates
    /// of a parallel bound, and bounds implied by the quadrant alone.
    pub fn new(bounds: Vec<Bound<S>>, eps: S) -> Self {
        let mut r = Region2D::unreduced(bounds, eps);
        r.reduce();
        r
    }

    /// Builds the region keeping every bound as given.
    pub fn unreduced(bounds: Vec<Bound<S>>, eps: S) -> Self {
        let (vertices, rays) = enumerate(&bounds, &eps);
        Region2D {
            bounds,
            vertices,
            rays,
            eps,
        }
    }

    fn reduce(&mut self) {
        if self.vertices.is_empty() {
            return;
        }
        let z = S::zero();
        let eps = self.eps.clone();
        let mut kept: Vec<Bound<S>> = Vec::new();
        for b in &self.bounds {
            let quadrant_implied =
                le_eps(&b.a1, &z, &eps) && le_eps(&b.a2, &z, &eps) && le_eps(&z, &b.b, &eps);
            if quadrant_implied {
                continue;
            }
            let touches = self.vertices.iter().any(|v| eq_eps(&b.lhs(v), &b.b, &eps));
            if !touches {
                continue;
            }
            let d = b.direction();
            let dup = kept.iter().any(|k| {
                let e = k.direction();
                eq_eps(&d.0, &e.0, &eps) && eq_eps(&d.1, &e.1, &eps)
            });
            if !dup {
                kept.push(b.clone());
            }
        }
        self.bounds = kept;
    }

    pub fn bounds(&self) -> &[Bound<S>] {
        &self.bounds
    }

    pub fn vertices(&self) -> &[(S, S)] {
        &self.vertices
    }

    pub fn rays(&self) -> &[(S, S)] {
        &self.rays
    }

    pub fn eps(&self) -> &S {
        &self.eps
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn bound(&self, name: &str) -> Option<&Bound<S>> {
        self.bounds.iter().find(|b| b.name.as_deref() == Some(name))
    }

    pub fn contains(&self, p: &(S, S)) -> bool {
        let z = S::zero();
        le_eps(&z, &p.0, &self.eps)
            && le_eps(&z, &p.1, &self.eps)
            && self
                .bounds
                .iter()
                .all(|b| le_eps(&b.lhs(p), &b.b, &self.eps))
    }

    /// `self ⊆ other`, with `tol` slack on `other`'s bounds.
    pub fn is_subset_of(&self, other: &Region2D<S>, tol: &S) -> bool {
        if self.is_empty() {
            return true;
        }
        let z = S::zero();
        let inside = |p: &(S, S)| {
            le_eps(&z, &p.0, tol)
                && le_eps(&z, &p.1, tol)
                && other.bounds.iter().all(|b| le_eps(&b.lhs(p), &b.b, tol))
        };
        self.vertices.iter().all(inside)
            && self
                .rays
                .iter()
                .all(|d| other.bounds.iter().all(|b| le_eps(&b.lhs(d), &z, tol)))
    }

    /// Maximum of `a1·R1 + a2·R2` over the region, `None` when empty or
    /// unbounded in that direction.
    pub fn support(&self, a1: &S, a2: &S) -> Option<S> {
        let probe = Bound::new(a1.clone(), a2.clone(), S::zero());
        if self.rays.iter().any(|d| probe.lhs(d) > self.eps) {
            return None;
        }
        self.vertices.iter().map(|v| probe.lhs(v)).reduce(smax)
    }

    /// Vertex-set equality within the region tolerance.
    pub fn same_set(&self, other: &Region2D<S>) -> bool {
        let eps = smax(self.eps.clone(), other.eps.clone());
        let close = |a: &[(S, S)], b: &[(S, S)]| {
            a.len() == b.len()
                && a.iter()
                    .zip(b)
                    .all(|(p, q)| eq_eps(&p.0, &q.0, &eps) && eq_eps(&p.1, &q.1, &eps))
        };
        close(&self.vertices, &other.vertices) && close(&self.rays, &other.rays)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T, eps: T) -> Region2D<T> {
        let bounds = self
            .bounds
            .iter()
            .map(|b| Bound {
                a1: f(&b.a1),
                a2: f(&b.a2),
                b: f(&b.b),
                name: b.name.clone(),
            })
            .collect();
        Region2D::new(bounds, eps)
    }

    pub fn to_json(&self) -> Value {
        let ineqs: Vec<Value> = self
            .bounds
            .iter()
            .map(|b| {
                let mut v = json!({"a1": b.a1.to_json(), "a2": b.a2.to_json(), "b": b.b.to_json()});
                if let Some(n) = &b.name {
                    v["name"] = Value::String(n.clone());
                }
                v
            })
            .collect();
        let pair = |p: &(S, S)| json!([p.0.to_json(), p.1.to_json()]);
        let mut out = json!({
            "mode": if S::EXACT { "exact" } else { "approx" },
            "inequalities": ineqs,
            "vertices": self.vertices.iter().map(pair).collect::<Vec<_>>(),
            "bounded": self.is_bounded(),
        });
        if !self.rays.is_empty() {
            out["rays"] = Value::Array(self.rays.iter().map(pair).collect());
        }
        out
    }

    /// Rebuilds a region from its inequalities; stored vertices are
    /// recomputed rather than trusted.
    pub fn from_json(v: &Value, eps: S) -> Result<Self, PolytopeError> {
        let bad = |m: &str| PolytopeError::Malformed(m.to_string());
        let rows = v
            .get("inequalities")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `inequalities` array"))?;
        let mut bounds = Vec::with_capacity(rows.len());
        for r in rows {
            let get = |k: &str| {
                r.get(k)
                    .and_then(S::from_json)
                    .ok_or_else(|| bad(&format!("inequality field `{k}` missing or not numeric")))
            };
            let mut b = Bound::new(get("a1")?, get("a2")?, get("b")?);
            b.name = r.get("name").and_then(Value::as_str).map(str::to_string);
            bounds.push(b);
        }
        Ok(Region2D::new(bounds, eps))
    }

    pub fn vertices_csv(&self) -> String {
        let mut s = String::from("R1,R2\n");
        for (x, y) in &self.vertices {
            s.push_str(&format!("{x},{y}\n"));
        }
        s
    }

    /// Region of a system whose only variables are the two rates.
    pub fn from_system(sys: &HalfspaceSystem<S>, keep: [&str; 2]) -> Result<Self, PolytopeError> {
        let i = sys.var_index(keep[0])?;
        let j = sys.var_index(keep[1])?;
        if let Some(extra) = sys
            .variables()
            .iter()
            .find(|v| *v != keep[0] && *v != keep[1])
        {
            return Err(PolytopeError::Malformed(format!(
                "variable `{extra}` is not a rate"
            )));
        }
        let bounds = sys
            .rows()
            .iter()
            .map(|r| Bound {
                a1: r.coeffs[i].clone(),
                a2: r.coeffs[j].clone(),
                b: r.rhs.clone(),
                name: r.label.clone(),
            })
            .collect();
        Ok(Region2D::new(bounds, sys.eps().clone()))
    }
}

/// Projects `sys` onto the two rate variables.
pub fn project_to_rates<S: Scalar>(
    sys: &HalfspaceSystem<S>,
    keep: [&str; 2],
) -> Result<Region2D<S>, PolytopeError> {
    project_to_rates_with_stats(sys, keep).map(|(r, _)| r)
}

pub fn project_to_rates_with_stats<S: Scalar>(
    sys: &HalfspaceSystem<S>,
    keep: [&str; 2],
) -> Result<(Region2D<S>, FmeStats), PolytopeError> {
    sys.var_index(keep[0])?;
    sys.var_index(keep[1])?;
    let others: Vec<&str> = sys
        .variables()
        .iter()
        .map(String::as_str)
        .filter(|v| *v != keep[0] && *v != keep[1])
        .collect();
    let (projected, stats) = eliminate(sys, &others)?;
    Ok((Region2D::from_system(&projected, keep)?, stats))
}
