//! Linear deterministic interference channel with conferencing transmitters.

mod claims;
mod region;
mod scheme;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::GaussianParams;

pub use claims::{
    check_ldc_claims, rank_independence_check, LdcClaimCheck, LdcClaimsReport, Relation,
};
pub use region::{capacity_region, pre_fme_system, theorem1_bounds, verify_lemmas_1_2};
pub use scheme::{
    channel_output, scheme_search, scheme_verify, LdcScheme, MAX_SEARCH_K, MAX_SEARCH_Q,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LdcError {
    #[error("expected a bit vector of length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("matrix `{name}` has shape {got:?}, expected {expected:?}")]
    Shape {
        name: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("search guard exceeded: {0}")]
    Guard(String),
}

/// Channel levels `n_ij` (transmitter `j` to receiver `i`) and conferencing
/// capacities in bits per channel use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "LdcJson", into = "LdcJson")]
pub struct LdcParams {
    pub n11: u32,
    pub n12: u32,
    pub n21: u32,
    pub n22: u32,
    pub k12: u32,
    pub k21: u32,
}

#[derive(Serialize, Deserialize)]
struct LdcJson {
    n: [u32; 4],
    k: [u32; 2],
}

impl From<LdcJson> for LdcParams {
    fn from(j: LdcJson) -> Self {
        LdcParams::new(j.n, j.k)
    }
}

impl From<LdcParams> for LdcJson {
    fn from(p: LdcParams) -> Self {
        LdcJson {
            n: [p.n11, p.n12, p.n21, p.n22],
            k: [p.k12, p.k21],
        }
    }
}

impl LdcParams {
    /// `n = [n11, n12, n21, n22]`, `k = [k12, k21]`.
    pub fn new(n: [u32; 4], k: [u32; 2]) -> Self {
        LdcParams {
            n11: n[0],
            n12: n[1],
            n21: n[2],
            n22: n[3],
            k12: k[0],
            k21: k[1],
        }
    }

    pub fn full_rank(&self) -> bool {
        self.n11 + self.n22 != self.n12 + self.n21
    }

    /// Number of levels per transmit vector.
    pub fn q(&self) -> u32 {
        self.n11.max(self.n12).max(self.n21).max(self.n22)
    }

    /// The same channel with the user labels exchanged.
    pub fn swapped(&self) -> Self {
        LdcParams {
            n11: self.n22,
            n12: self.n21,
            n21: self.n12,
            n22: self.n11,
            k12: self.k21,
            k21: self.k12,
        }
    }

    /// Quantizes a Gaussian channel: `n_ij = (⌊log₂|h_ij|²⌋)⁺`,
    /// `k_ij = ⌊C_ij⌋`.
    pub fn from_gaussian(g: &GaussianParams) -> Self {
        let level = |p: f64| if p >= 1.0 { p.log2().floor() as u32 } else { 0 };
        let cap = |c: f64| if c >= 0.0 { c.floor() as u32 } else { 0 };
        LdcParams {
            n11: level(g.snr1()),
            n12: level(g.inr1()),
            n21: level(g.inr2()),
            n22: level(g.snr2()),
            k12: cap(g.cb12),
            k21: cap(g.cb21),
        }
    }
}

/// Single-user quantities of the level-allocation scheme for one receiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserLevels {
    pub p: i64,
    pub t: i64,
    pub m: i64,
    pub l: i64,
    pub s: i64,
    pub g: i64,
    /// Direct-link level `n_ii`.
    pub n: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdcDerived {
    pub q: u32,
    pub full_rank: bool,
    pub user: [UserLevels; 2],
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

fn user_one(p: &LdcParams, full_rank: bool) -> UserLevels {
    let (n11, n12, n21, n22) = (p.n11 as i64, p.n12 as i64, p.n21 as i64, p.n22 as i64);
    let pp = pos(n11 - n21);
    let g = if full_rank {
        (n11 - pos(n21 - n22)).max(n12 - pos(n22 - n21))
    } else {
        pp
    };
    UserLevels {
        p: pp,
        t: n12.max(pp),
        m: n11.max(n12),
        l: n11.max(g),
        s: n12.max(g),
        g,
        n: n11,
    }
}

pub fn derived_quantities(p: &LdcParams) -> LdcDerived {
    let fr = p.full_rank();
    LdcDerived {
        q: p.q(),
        full_rank: fr,
        user: [user_one(p, fr), user_one(&p.swapped(), fr)],
    }
}
