//! Canonical solution operator to `∂̄` on `(0,1)`-forms with holomorphic
//! polynomial coefficients, on the unit disc, the bidisc and the unit ball
//! of C².
//!
//! Everything that can be exact is exact: moments, projections, solutions
//! and Hilbert-Schmidt norms are rationals times powers of π. Quadrature and
//! Monte Carlo paths exist to check the integral representation and to probe
//! kernel square-integrability.

pub mod dbar;
pub mod domains;
pub mod error;
pub mod exact;
pub mod expr;
pub mod hs;
pub mod kernels;
pub mod poly;
pub mod projection;
pub mod quadrature;
pub mod verify;

pub use domains::Domain;
pub use error::{Error, Result};
pub use exact::{ExactComplex, ExactScalar, GaussRat};
pub use poly::{FloatPoly, HoloPoly, MixedPoly, MultiIndex, Scaled};
pub use quadrature::{IntegralEstimate, QuadMethod, QuadratureSpec};
