//! Gaussian interference channel with conferencing transmitters.
//!
//! All rates are in bits; every `log` is base 2.

mod bounds;
mod claims;
mod scheme;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use bounds::{
    inner_bounds, inner_region, outer_bounds, outer_region, pre_fme_inner_system,
    theorem2_full_system, CONTAINMENT_EPS,
};
pub use claims::{check_gaussian_claims, per_bound_gap_check, ClaimEntry, ClaimsReport, CLAIM_EPS};
pub use scheme::{
    inner_quantities, scheme_config, GaussianDerived, GaussianScheme, UserQuantities,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussianError {
    #[error("malformed channel description: {0}")]
    Malformed(String),
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("conferencing capacity {0} is negative")]
    NegativeCapacity(f64),
}

/// Channel gains `h_ij` (transmitter `j` to receiver `i`) under unit noise,
/// and conferencing capacities in bits per channel use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Value", into = "GaussJson")]
pub struct GaussianParams {
    pub h11: Complex64,
    pub h12: Complex64,
    pub h21: Complex64,
    pub h22: Complex64,
    pub cb12: f64,
    pub cb21: f64,
}

#[derive(Serialize)]
struct GaussJson {
    h: [[f64; 2]; 4],
    cb: [f64; 2],
}

impl From<GaussianParams> for GaussJson {
    fn from(p: GaussianParams) -> Self {
        let c = |z: Complex64| [z.re, z.im];
        GaussJson {
            h: [c(p.h11), c(p.h12), c(p.h21), c(p.h22)],
            cb: [p.cb12, p.cb21],
        }
    }
}

impl TryFrom<Value> for GaussianParams {
    type Error = GaussianError;

    fn try_from(v: Value) -> Result<Self, Self::Error> {
        GaussianParams::from_json(&v)
    }
}

/// A number or a list of them.
#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn expand<const N: usize>(&self, what: &str) -> Result<[f64; N], GaussianError> {
        match self {
            OneOrMany::One(x) => Ok([*x; N]),
            OneOrMany::Many(v) => v.as_slice().try_into().map_err(|_| {
                GaussianError::Malformed(format!("`{what}` needs 1 or {N} values, got {}", v.len()))
            }),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DbJson {
    snr_db: OneOrMany,
    inr_db: OneOrMany,
    #[serde(default)]
    phase: Option<OneOrMany>,
    #[serde(default)]
    cb: Option<OneOrMany>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GainJson {
    h: [[f64; 2]; 4],
    #[serde(default)]
    cb: Option<OneOrMany>,
}

fn db_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

impl GaussianParams {
    /// `h = [h11, h12, h21, h22]`, `cb = [cb12, cb21]`.
    pub fn new(h: [Complex64; 4], cb: [f64; 2]) -> Self {
        GaussianParams {
            h11: h[0],
            h12: h[1],
            h21: h[2],
            h22: h[3],
            cb12: cb[0],
            cb21: cb[1],
        }
    }

    /// Real nonnegative gains from powers in dB; cross links get `phase`
    /// (radians).
    pub fn from_db(snr_db: [f64; 2], inr_db: [f64; 2], phase: [f64; 2], cb: [f64; 2]) -> Self {
        GaussianParams::new(
            [
                Complex64::new(db_amplitude(snr_db[0]), 0.0),
                Complex64::from_polar(db_amplitude(inr_db[0]), phase[0]),
                Complex64::from_polar(db_amplitude(inr_db[1]), phase[1]),
                Complex64::new(db_amplitude(snr_db[1]), 0.0),
            ],
            cb,
        )
    }

    /// Accepts `{"h": [[re, im] × 4], "cb": [cb12, cb21]}` or the dB form
    /// `{"snr_db": .., "inr_db": .., "phase": .., "cb": ..}`, where each field
    /// is a number (used for both users) or a pair. `phase` applies to
    /// `h12` and `h21`; `cb` defaults to zero.
    pub fn from_json(v: &Value) -> Result<Self, GaussianError> {
        let obj = v
            .as_object()
            .ok_or_else(|| GaussianError::Malformed("expected a JSON object".into()))?;
        let cb_of =
            |cb: &Option<OneOrMany>| cb.as_ref().map_or(Ok([0.0; 2]), |c| c.expand::<2>("cb"));
        let p = if obj.contains_key("h") {
            let g: GainJson = serde_json::from_value(v.clone())
                .map_err(|e| GaussianError::Malformed(e.to_string()))?;
            let c = |x: [f64; 2]| Complex64::new(x[0], x[1]);
            GaussianParams::new([c(g.h[0]), c(g.h[1]), c(g.h[2]), c(g.h[3])], cb_of(&g.cb)?)
        } else {
            let d: DbJson = serde_json::from_value(v.clone())
                .map_err(|e| GaussianError::Malformed(e.to_string()))?;
            let phase = d
                .phase
                .as_ref()
                .map_or(Ok([0.0; 2]), |p| p.expand::<2>("phase"))?;
            GaussianParams::from_db(
                d.snr_db.expand("snr_db")?,
                d.inr_db.expand("inr_db")?,
                phase,
                cb_of(&d.cb)?,
            )
        };
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain numbers")
    }

    pub fn validate(&self) -> Result<(), GaussianError> {
        for (name, z) in [
            ("h11", self.h11),
            ("h12", self.h12),
            ("h21", self.h21),
            ("h22", self.h22),
        ] {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(GaussianError::NonFinite(name));
            }
        }
        for c in [self.cb12, self.cb21] {
            if !c.is_finite() {
                return Err(GaussianError::NonFinite("cb"));
            }
            if c < 0.0 {
                return Err(GaussianError::NegativeCapacity(c));
            }
        }
        Ok(())
    }

    pub fn snr1(&self) -> f64 {
        self.h11.norm_sqr()
    }

    pub fn snr2(&self) -> f64 {
        self.h22.norm_sqr()
    }

    pub fn inr1(&self) -> f64 {
        self.h12.norm_sqr()
    }

    pub fn inr2(&self) -> f64 {
        self.h21.norm_sqr()
    }

    /// `h11·h22 − h12·h21`.
    pub fn det(&self) -> Complex64 {
        self.h11 * self.h22 - self.h12 * self.h21
    }

    /// `|h11·h21* + h12·h22*|²`, the overlap of the two receivers' rows.
    pub fn cross_sqr(&self) -> f64 {
        (self.h11 * self.h21.conj() + self.h12 * self.h22.conj()).norm_sqr()
    }

    /// The same channel with the user labels exchanged.
    pub fn swapped(&self) -> Self {
        GaussianParams {
            h11: self.h22,
            h12: self.h21,
            h21: self.h12,
            h22: self.h11,
            cb12: self.cb21,
            cb21: self.cb12,
        }
    }
}
