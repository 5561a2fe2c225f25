//! Numerical verification of the variational structure of the resistance
//! functional: Euler-Lagrange residuals, the conserved quantity of the
//! `v`-independent Lagrangian, corner conditions for broken extremals, the
//! Legendre margin, the Weierstrass excess, and the central field of
//! loxodromes through a point.

use crate::curve::{ParametricCurve, Profile};
use crate::error::{Error, Result};
use crate::metric::{GeodesicPoint, Metric};

/// Tolerance on `|p q - f^2/3|` for the corner classification; the inputs
/// are analytic, so only round-off matters.
const CORNER_TOL: f64 = 1e-10;

/// Graph-form Euler-Lagrange residual
/// `(f(u)^2 - 3u'^2)(f(u) u'' - f'(u) u'^2)`, zero along extremals.
pub fn el_residual_graph(profile: &Profile, v: f64) -> Result<f64> {
    if profile.breakpoints().contains(&v) {
        return Err(Error::AtBreakpoint(v));
    }
    let u = profile.u_at(v)?;
    let du = profile.du_raw(v);
    let d2u = profile.d2u_raw(v);
    let m = profile.metric();
    let f = m.warp(u)?;
    let fp = m.warp_prime_raw(u);
    Ok((f * f - 3.0 * du * du) * (f * d2u - fp * du * du))
}

/// Both components of the parametric Euler-Lagrange system, normalized by
/// `|gamma'|^4` so the values do not scale with the parametrization speed.
pub fn el_residual_parametric(curve: &ParametricCurve, t: f64) -> Result<(f64, f64)> {
    let p = curve.point_at(t)?;
    let m = curve.metric();
    let f = m.warp(p.u)?;
    let fp = m.warp_prime_raw(p.u);
    let du = curve.du_raw(t);
    let dv = curve.dv_raw(t);
    let d2u = curve.d2u_raw(t);
    let d2v = curve.d2v_raw(t);

    let discr = 3.0 * du * du - f * f * dv * dv;
    // common bracket multiplied through by v' to stay division-free
    let bracket = f * d2u * dv - f * du * d2v - fp * du * du * dv;
    let speed2 = du * du + dv * dv * f * f;
    let norm = speed2 * speed2;
    Ok((
        dv * dv * discr * bracket / norm,
        du * dv * discr * bracket / norm,
    ))
}

/// The first integral `v'^2 f^2 (3u'^2 + v'^2 f^2) / (u'^2 + v'^2 f^2)^2`,
/// constant along extremals for the given parametrization.
pub fn conserved_quantity(curve: &ParametricCurve, t: f64) -> Result<f64> {
    let p = curve.point_at(t)?;
    let f = curve.metric().warp(p.u)?;
    let du = curve.du_raw(t);
    let dv = curve.dv_raw(t);
    let speed2 = du * du + dv * dv * f * f;
    Ok(dv * dv * f * f * (3.0 * du * du + dv * dv * f * f) / (speed2 * speed2))
}

/// Legendre margin `3u'^2 - f(u)^2` and the second derivative of the graph
/// Lagrangian with respect to `u'`, `2 f^2 (3u'^2 - f^2) / (f^2 + u'^2)^3`.
/// Their signs agree; a weak local minimum requires both positive.
pub fn legendre_margin(metric: &Metric, u: f64, slope: f64) -> Result<(f64, f64)> {
    let f = metric.warp(u)?;
    let margin = 3.0 * slope * slope - f * f;
    let denom = (f * f + slope * slope).powi(3);
    Ok((margin, 2.0 * f * f * margin / denom))
}

/// Outcome of the corner classification at a junction with one-sided slopes
/// `p` (left) and `q` (right).
#[derive(Debug, Clone, Copy)]
pub struct CornerCheck {
    /// The corner condition `p q = f^2/3` holds with `p != q`.
    pub is_corner: bool,
    /// The condition holds but `p = q`: no actual kink. The only point of
    /// the positive quadrant where this happens is `p = q = f/sqrt(3)`.
    pub degenerate: bool,
    /// `dL/du'` evaluated at `p` and at `q`.
    pub flux: (f64, f64),
    /// `H = L - u' dL/du'` evaluated at `p` and at `q`.
    pub hamiltonian: (f64, f64),
}

/// `dL/du'` for the graph Lagrangian `L = f^2 / (f^2 + u'^2)`.
pub fn momentum(metric: &Metric, u: f64, slope: f64) -> Result<f64> {
    let f = metric.warp(u)?;
    let denom = (f * f + slope * slope).powi(2);
    Ok(-2.0 * f * f * slope / denom)
}

/// `H = L - u' dL/du' = f^2 (f^2 + 3u'^2) / (f^2 + u'^2)^2`.
pub fn hamiltonian(metric: &Metric, u: f64, slope: f64) -> Result<f64> {
    let f = metric.warp(u)?;
    let denom = (f * f + slope * slope).powi(2);
    Ok(f * f * (f * f + 3.0 * slope * slope) / denom)
}

/// Classify a junction against the corner condition `p q = f^2/3` and
/// report the Weierstrass-Erdmann quantities on both sides for inspection.
/// Slopes of zero are rejected: junctions with a flat side belong to the
/// constrained minimizer, not to the interior corner analysis.
pub fn corner_check(metric: &Metric, u: f64, p: f64, q: f64) -> Result<CornerCheck> {
    if p == 0.0 || q == 0.0 {
        return Err(Error::InvalidParameter(
            "corner check requires nonzero one-sided slopes".into(),
        ));
    }
    let f = metric.warp(u)?;
    let holds = (p * q - f * f / 3.0).abs() < CORNER_TOL;
    let degenerate = holds && (p - q).abs() < CORNER_TOL;
    Ok(CornerCheck {
        is_corner: holds && !degenerate,
        degenerate,
        flux: (momentum(metric, u, p)?, momentum(metric, u, q)?),
        hamiltonian: (hamiltonian(metric, u, p)?, hamiltonian(metric, u, q)?),
    })
}

/// Weierstrass excess
/// `E = f^2 (p-q)^2 (p^2 + 2pq - f^2) / ((f^2+q^2)(f^2+p^2)^2)`,
/// where `p` is the extremal slope and `q` the test slope. Its sign is the
/// sign of `S(p, q) = p^2 + 2pq - f^2`.
pub fn weierstrass_excess(metric: &Metric, u: f64, p: f64, q: f64) -> Result<f64> {
    let f = metric.warp(u)?;
    let f2 = f * f;
    let s = p * p + 2.0 * p * q - f2;
    Ok(f2 * (p - q) * (p - q) * s / ((f2 + q * q) * (f2 + p * p).powi(2)))
}

/// The loxodrome field through `a` evaluated at `b`: the unique slope
/// `k = G(u1)/(v1 - v0)` with `G = phi(u1) - phi(u0)`, and the Jacobian
/// determinant `-G(u1)/k^2` of the field chart `(u, k) -> (u, v)` at `b`.
/// The determinant tends to zero as `b` slides down its loxodrome toward
/// `a`, where the field focuses.
#[derive(Debug, Clone, Copy)]
pub struct CentralField {
    pub k: f64,
    pub jacobian_det: f64,
}

pub fn central_field(metric: &Metric, a: GeodesicPoint, b: GeodesicPoint) -> Result<CentralField> {
    metric.check_point(a)?;
    metric.check_point(b)?;
    if !(b.u > a.u && b.v > a.v) {
        return Err(Error::InvalidEndpoints(format!(
            "target ({}, {}) outside the open quadrant u > {}, v > {}",
            b.u, b.v, a.u, a.v
        )));
    }
    let g = metric.amplitude(a.u, b.u)?;
    let k = g / (b.v - a.v);
    let jacobian_det = -g / (k * k);
    if !jacobian_det.is_finite() || jacobian_det == 0.0 {
        return Err(Error::NumericalFailure(format!(
            "degenerate field chart at ({}, {}): det = {jacobian_det}",
            b.u, b.v
        )));
    }
    Ok(CentralField { k, jacobian_det })
}

/// One row of the extremality diagnostic along a profile.
#[derive(Debug, Clone, Copy)]
pub struct DiagnosticRow {
    pub v: f64,
    pub el_residual: f64,
    pub conserved: f64,
    pub legendre_margin: f64,
}

/// Sample the EL residual, the conserved quantity (in the graph
/// parametrization) and the Legendre margin at interior points of each
/// piece.
pub fn diagnostics(profile: &Profile, samples_per_piece: usize) -> Result<Vec<DiagnosticRow>> {
    let n = samples_per_piece.max(1);
    let curve = profile.to_parametric();
    let mut rows = Vec::with_capacity(n * profile.pieces().len());
    for piece in profile.pieces() {
        let (lo, hi) = piece.v_range();
        for j in 0..n {
            let v = lo + (hi - lo) * (j as f64 + 0.5) / (n as f64);
            let u = piece.u(v);
            rows.push(DiagnosticRow {
                v,
                el_residual: el_residual_graph(profile, v)?,
                conserved: conserved_quantity(&curve, v)?,
                legendre_margin: legendre_margin(profile.metric(), u, piece.du(v))?.0,
            });
        }
    }
    Ok(rows)
}
