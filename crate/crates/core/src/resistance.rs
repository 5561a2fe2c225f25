//! The resistance functional and its pointwise density.
//!
//! Three equivalent routes are provided: the parametric form
//! `int v'^3 f(u)^2 / (u'^2 + v'^2 f(u)^2) dt`, the graph form
//! `int f(u)^2 / (u'^2 + f(u)^2) dv`, and the transformed form
//! `int dv / (1 + y'^2)` with `y = phi(u)`. The reports drop the physical
//! factor 2 of the momentum-transfer density; [`density`] keeps it.

use std::cell::Cell;

use serde::Serialize;

use crate::curve::{ParametricCurve, Profile};
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::quad::{self, QuadOptions};

/// How a resistance value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Parametric,
    Graph,
    Transformed,
    ClosedForm,
    MonteCarlo,
}

/// A resistance value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResistanceReport {
    pub value: f64,
    pub abs_error: f64,
    pub method: Method,
}

fn quad_opts() -> QuadOptions {
    QuadOptions::default()
}

/// Resistance of a parametric curve. Orientation-preserving
/// reparametrizations leave the value unchanged; regularity is checked at
/// every quadrature node.
pub fn parametric(curve: &ParametricCurve) -> Result<ResistanceReport> {
    let (a, b) = curve.t_range();
    let bad_node: Cell<Option<f64>> = Cell::new(None);
    let m = curve.metric();
    let r = quad::integrate(
        |t| {
            let f = m.warp_raw(curve.u_raw(t));
            let du = curve.du_raw(t);
            let dv = curve.dv_raw(t);
            let speed2 = du * du + dv * dv * f * f;
            if !(speed2 > 0.0) || !speed2.is_finite() {
                bad_node.set(Some(t));
                return 0.0;
            }
            dv * dv * dv * f * f / speed2
        },
        a,
        b,
        &quad_opts(),
    );
    if let Some(t) = bad_node.get() {
        return Err(Error::RegularityViolation(t));
    }
    if !r.value.is_finite() {
        return Err(Error::NumericalFailure(
            "parametric resistance diverged".into(),
        ));
    }
    Ok(ResistanceReport {
        value: r.value,
        abs_error: r.abs_error,
        method: Method::Parametric,
    })
}

/// Resistance of a graph profile, integrated piece by piece so the
/// quadrature never straddles a corner.
pub fn graph(profile: &Profile) -> Result<ResistanceReport> {
    let m = profile.metric();
    let mut value = 0.0;
    let mut abs_error = 0.0;
    for piece in profile.pieces() {
        let (lo, hi) = piece.v_range();
        let r = quad::integrate(
            |v| {
                let f = m.warp_raw(piece.u(v));
                let du = piece.du(v);
                f * f / (du * du + f * f)
            },
            lo,
            hi,
            &quad_opts(),
        );
        value += r.value;
        abs_error += r.abs_error;
    }
    if !value.is_finite() {
        return Err(Error::NumericalFailure("graph resistance diverged".into()));
    }
    Ok(ResistanceReport {
        value,
        abs_error,
        method: Method::Graph,
    })
}

/// Resistance through the substitution `y = phi(u)`, where the integrand is
/// `1/(1 + y'^2)` with `y' = u'/f(u)`.
pub fn transformed(profile: &Profile) -> Result<ResistanceReport> {
    let m = profile.metric();
    let mut value = 0.0;
    let mut abs_error = 0.0;
    for piece in profile.pieces() {
        let (lo, hi) = piece.v_range();
        let r = quad::integrate(
            |v| {
                let yp = piece.du(v) / m.warp_raw(piece.u(v));
                1.0 / (1.0 + yp * yp)
            },
            lo,
            hi,
            &quad_opts(),
        );
        value += r.value;
        abs_error += r.abs_error;
    }
    if !value.is_finite() {
        return Err(Error::NumericalFailure(
            "transformed resistance diverged".into(),
        ));
    }
    Ok(ResistanceReport {
        value,
        abs_error,
        method: Method::Transformed,
    })
}

/// Pointwise momentum-transfer density `2 v'^2 f(u)^2 / (u'^2 + v'^2
/// f(u)^2)` for a tangent `(u', v')` at radius `u`. The factor 2 is
/// retained here; the functional integrands equal `density * v' / 2`.
pub fn density(metric: &Metric, u: f64, tangent: (f64, f64)) -> Result<f64> {
    let f = metric.warp(u)?;
    let (du, dv) = tangent;
    let speed2 = du * du + dv * dv * f * f;
    if !(speed2 > 0.0) {
        return Err(Error::InvalidParameter("zero tangent vector".into()));
    }
    Ok(2.0 * dv * dv * f * f / speed2)
}

/// Closed-form resistance of the circle tangent to the rays `v = +-v0`:
/// `cot v0 + v0 (1 - cot^2 v0)`. Both branches of the circle give the same
/// value.
pub fn tangent_circle_resistance(v0: f64) -> Result<f64> {
    if !(v0 > 0.0 && v0 < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "tangency half-amplitude must lie in (0, pi/2), got {v0}"
        )));
    }
    let cot = v0.cos() / v0.sin();
    Ok(cot + v0 * (1.0 - cot * cot))
}

/// Ratio of the tangent-circle resistance to the resistance `2 v0` of the
/// concentric circular arc spanning the same rays. Tends to 2/3 as
/// `v0 -> 0` and to 1/2 as `v0 -> pi/2`.
pub fn arc_ratio(v0: f64) -> Result<f64> {
    Ok(tangent_circle_resistance(v0)? / (2.0 * v0))
}
