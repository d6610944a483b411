//! Polyhedral engine: linear systems, projection, 2-D regions and gaps.

pub mod fme;
pub mod gap;
pub mod lp;
pub mod region;
pub mod system;

use thiserror::Error;

pub use fme::{eliminate, fme_eliminate, remove_redundant, FmeStats};
pub use gap::{minkowski_shift, per_user_gap, GapReport, PER_USER_METRIC};
pub use lp::LpOutcome;
pub use region::{project_to_rates, project_to_rates_with_stats, Bound, Region2D};
pub use system::{HalfspaceSystem, LinearInequality};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("row has {got} coefficients but the system has {expected} variables")]
    Dimension { expected: usize, got: usize },
    #[error("shift must be nonnegative")]
    NegativeShift,
    #[error("malformed input: {0}")]
    Malformed(String),
}
