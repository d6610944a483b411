//! Capacity-region bounds for the two-user interference channel with
//! conferencing transmitters.
//!
//! The linear deterministic model is handled exactly over `BigRational`;
//! the Gaussian model numerically over `f64`. Both share the polyhedral
//! engine in [`polytope`], which is generic over [`Scalar`].

pub mod gaussian;
pub mod gf2;
pub mod harness;
pub mod ldc;
pub mod polytope;
pub mod reciprocity;
pub mod scalar;
pub mod strategy;

pub use num_rational::BigRational;
pub use scalar::Scalar;

pub type Rational = BigRational;
pub type ExactSystem = polytope::HalfspaceSystem<Rational>;
pub type ApproxSystem = polytope::HalfspaceSystem<f64>;
pub type ExactRegion = polytope::Region2D<Rational>;
pub type ApproxRegion = polytope::Region2D<f64>;
pub type ExactGap = polytope::GapReport<Rational>;
pub type ApproxGap = polytope::GapReport<f64>;
