//! Resistance functionals for curves on surfaces in geodesic coordinates.
//!
//! For a metric `ds^2 = du^2 + f(u)^2 dv^2` and a fluid of particles moving
//! along `-du` with elastic single-impact collisions, this crate evaluates
//! the resistance of piecewise-C1 obstacle profiles, verifies the
//! variational structure of the functional (Euler-Lagrange residuals,
//! conserved quantity, corner and Legendre conditions, Weierstrass excess),
//! and solves the global minimization problem for monotone profiles between
//! two prescribed points: a loxodrome when the angular amplitude is at most
//! the radial budget `L = phi(u1) - phi(u0)`, a truncated loxodrome
//! otherwise. A discrete dynamic-programming oracle and a Monte-Carlo
//! collision simulator provide independent checks of both regimes.

// negated comparisons like `!(x > 0.0)` are kept: they reject NaN, which
// the suggested rewrites silently accept
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod extremal;
pub mod flowsim;
pub mod metric;
pub mod optimizer;
pub mod quad;
pub mod resistance;

pub use error::{Error, Result};
pub use metric::{GeodesicPoint, Metric};
