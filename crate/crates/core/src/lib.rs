//! Verification toolkit for fractional Hardy, fractional Hardy-Sobolev,
//! logarithmic Hardy-Sobolev and Nash-type inequalities on polarisable
//! metric measure spaces.
//!
//! The crate checks these inequalities numerically (and exactly on finite
//! measure spaces) for concrete space models (Euclidean space,
//! homogeneous groups, the Heisenberg group, hyperbolic space), including
//! the closed-form admissibility functional D₁ and the explicit constants
//! on homogeneous groups and ℍⁿ.

pub mod corpus;
pub mod discrete;
pub mod error;
pub mod inequalities;
pub mod quadrature;
pub mod spaces;
pub mod weights;

pub use error::{HardyError, Result};
pub use quadrature::{IntegralResult, QuadratureConfig};
pub use spaces::{SpaceDescriptor, SpacePoint};
