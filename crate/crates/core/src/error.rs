//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by metric construction, curve evaluation and the
/// numerical routines built on top of them.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Coordinate `u` lies outside the open domain of the metric (or within
    /// the endpoint guard band, where the warp degenerates).
    #[error("u = {u} is outside the metric domain ({lo}, {hi})")]
    OutsideDomain { u: f64, lo: f64, hi: f64 },

    /// Space-form curvature must be one of +1, 0, -1.
    #[error("curvature {0} is not one of +1, 0, -1")]
    InvalidCurvature(f64),

    /// A user-supplied warp was not strictly positive where required.
    #[error("warp must be strictly positive: f({u}) = {value}")]
    NonPositiveWarp { u: f64, value: f64 },

    /// A warp table was malformed (header, ordering or arity).
    #[error("invalid warp table: {0}")]
    InvalidWarpTable(String),

    /// Endpoints do not admit the requested curve.
    #[error("invalid endpoints: {0}")]
    InvalidEndpoints(String),

    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Evaluation outside the parameter range of a curve.
    #[error("parameter {value} outside range [{lo}, {hi}]")]
    OutsideRange { value: f64, lo: f64, hi: f64 },

    /// Evaluation exactly at a breakpoint where one-sided data is required.
    #[error("evaluation at breakpoint v = {0} is ambiguous; use one-sided queries")]
    AtBreakpoint(f64),

    /// The curve failed the regularity requirement at a quadrature node.
    #[error("curve is not regular at t = {0}")]
    RegularityViolation(f64),

    /// A profile required to be monotone (u' >= 0) is not.
    #[error("profile is not monotone: u' = {slope} at v = {v}")]
    NotMonotone { v: f64, slope: f64 },

    /// A reflection was requested against a non-unit normal.
    #[error("normal is not unit: |N|^2 = {0}")]
    NonUnitNormal(f64),

    /// The discrete oracle budget cannot be met with the given slope cap.
    #[error("infeasible budget: L = {budget} exceeds p_max * delta_v = {capacity}")]
    InfeasibleBudget { budget: f64, capacity: f64 },

    /// A numerical routine produced a non-finite value.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
