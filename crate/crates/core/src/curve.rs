//! Profile and curve families on a metric surface.
//!
//! A [`Profile`] is a graph `u = u(v)` assembled from smooth pieces that
//! tile an interval of `v`; continuity is enforced at the piece boundaries,
//! smoothness is not, so corners carry one-sided slopes. Non-graph curves
//! (meridians, arc-length parametrized extremals) live in
//! [`ParametricCurve`].
//!
//! Loxodromes are represented exactly in `phi`-space, where they are affine,
//! and mapped through `phi_inverse` on evaluation; no ODE integration is
//! involved.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::{GeodesicPoint, Metric};
use crate::quad::{self, QuadOptions};

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Tolerance for the continuity check at piece boundaries.
const CONTINUITY_TOL: f64 = 1e-9;

/// One smooth piece of a profile: evaluators for `u`, `u'` and `u''` over a
/// closed `v`-interval.
#[derive(Clone)]
pub struct Piece {
    v_lo: f64,
    v_hi: f64,
    u: EvalFn,
    du: EvalFn,
    d2u: EvalFn,
}

impl Piece {
    pub fn new<U, D, D2>(v_range: (f64, f64), u: U, du: D, d2u: D2) -> Piece
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Piece {
            v_lo: v_range.0,
            v_hi: v_range.1,
            u: Arc::new(u),
            du: Arc::new(du),
            d2u: Arc::new(d2u),
        }
    }

    /// Piece with `u''` supplied by a central difference of `u'`
    /// (`h = 1e-5`), for callers without a closed second derivative.
    pub fn from_u_du<U, D>(v_range: (f64, f64), u: U, du: D) -> Piece
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + Clone + 'static,
    {
        let du2 = du.clone();
        Piece {
            v_lo: v_range.0,
            v_hi: v_range.1,
            u: Arc::new(u),
            du: Arc::new(du),
            d2u: Arc::new(move |v| {
                let h = 1e-5;
                (du2(v + h) - du2(v - h)) / (2.0 * h)
            }),
        }
    }

    pub fn v_range(&self) -> (f64, f64) {
        (self.v_lo, self.v_hi)
    }

    pub fn u(&self, v: f64) -> f64 {
        (self.u)(v)
    }

    pub fn du(&self, v: f64) -> f64 {
        (self.du)(v)
    }

    pub fn d2u(&self, v: f64) -> f64 {
        (self.d2u)(v)
    }
}

/// Which of the two circles tangent to the rays `v = +-v0` to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The far intersection, `u = cos v + sqrt(cos^2 v - cos^2 v0)`.
    Plus,
    /// The near intersection, `u = cos v - sqrt(cos^2 v - cos^2 v0)`.
    Minus,
}

/// A sampled row of a profile export: `v`, `u(v)` and the one-sided `u'(v)`
/// of the piece the sample was taken from.
#[derive(Debug, Clone, Copy)]
pub struct SampleRow {
    pub v: f64,
    pub u: f64,
    pub uprime: f64,
}

/// A piecewise-C1 graph `u = u(v)` over a metric surface, directed with
/// increasing `v`.
#[derive(Clone)]
pub struct Profile {
    metric: Metric,
    pieces: Vec<Piece>,
}

impl Profile {
    /// Assemble a profile from pieces. The pieces must tile an interval
    /// without gaps, match values at shared boundaries and stay inside the
    /// metric domain (checked on a sample grid; evaluation re-checks
    /// lazily).
    pub fn new(metric: Metric, pieces: Vec<Piece>) -> Result<Profile> {
        if pieces.is_empty() {
            return Err(Error::InvalidParameter("profile needs at least one piece".into()));
        }
        for p in &pieces {
            if !(p.v_lo < p.v_hi) {
                return Err(Error::InvalidParameter(format!(
                    "piece range [{}, {}] is empty or reversed",
                    p.v_lo, p.v_hi
                )));
            }
        }
        for w in pieces.windows(2) {
            if w[0].v_hi != w[1].v_lo {
                return Err(Error::InvalidParameter(format!(
                    "pieces do not tile: [{}, {}] then [{}, {}]",
                    w[0].v_lo, w[0].v_hi, w[1].v_lo, w[1].v_hi
                )));
            }
            let left = w[0].u(w[0].v_hi);
            let right = w[1].u(w[1].v_lo);
            if (left - right).abs() > CONTINUITY_TOL {
                return Err(Error::InvalidEndpoints(format!(
                    "discontinuity at v = {}: u = {} vs {}",
                    w[0].v_hi, left, right
                )));
            }
        }
        for p in &pieces {
            for i in 0..=16 {
                let v = p.v_lo + (p.v_hi - p.v_lo) * (i as f64) / 16.0;
                metric.check_u(p.u(v))?;
            }
        }
        Ok(Profile { metric, pieces })
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn v_range(&self) -> (f64, f64) {
        (self.pieces[0].v_lo, self.pieces[self.pieces.len() - 1].v_hi)
    }

    /// Interior piece boundaries, where C1 smoothness may fail.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces[..self.pieces.len() - 1]
            .iter()
            .map(|p| p.v_hi)
            .collect()
    }

    pub fn start(&self) -> GeodesicPoint {
        let v = self.pieces[0].v_lo;
        GeodesicPoint::new(self.pieces[0].u(v), v)
    }

    pub fn end(&self) -> GeodesicPoint {
        let last = &self.pieces[self.pieces.len() - 1];
        GeodesicPoint::new(last.u(last.v_hi), last.v_hi)
    }

    fn piece_index(&self, v: f64) -> usize {
        let n = self.pieces.len();
        for (i, p) in self.pieces.iter().enumerate() {
            if v < p.v_hi {
                return i;
            }
        }
        n - 1
    }

    fn check_v(&self, v: f64) -> Result<()> {
        let (lo, hi) = self.v_range();
        if v < lo || v > hi || !v.is_finite() {
            return Err(Error::OutsideRange { value: v, lo, hi });
        }
        Ok(())
    }

    pub fn u_at(&self, v: f64) -> Result<f64> {
        self.check_v(v)?;
        Ok(self.u_raw(v))
    }

    /// Slope at an interior point of a smooth piece; exact breakpoints are
    /// ambiguous and rejected.
    pub fn slope_at(&self, v: f64) -> Result<f64> {
        self.check_v(v)?;
        if self.breakpoints().contains(&v) {
            return Err(Error::AtBreakpoint(v));
        }
        Ok(self.du_raw(v))
    }

    pub fn curvature_at(&self, v: f64) -> Result<f64> {
        self.check_v(v)?;
        if self.breakpoints().contains(&v) {
            return Err(Error::AtBreakpoint(v));
        }
        Ok(self.d2u_raw(v))
    }

    /// One-sided slopes at a breakpoint (or interior point, where they
    /// agree).
    pub fn slope_left(&self, v: f64) -> Result<f64> {
        self.check_v(v)?;
        let mut i = self.piece_index(v);
        if i > 0 && v <= self.pieces[i].v_lo {
            i -= 1;
        }
        Ok(self.pieces[i].du(v))
    }

    pub fn slope_right(&self, v: f64) -> Result<f64> {
        self.check_v(v)?;
        Ok(self.pieces[self.piece_index(v)].du(v))
    }

    pub(crate) fn u_raw(&self, v: f64) -> f64 {
        self.pieces[self.piece_index(v)].u(v)
    }

    pub(crate) fn du_raw(&self, v: f64) -> f64 {
        self.pieces[self.piece_index(v)].du(v)
    }

    pub(crate) fn d2u_raw(&self, v: f64) -> f64 {
        self.pieces[self.piece_index(v)].d2u(v)
    }

    /// Scan of the monotonicity constraint `u' >= 0`; returns the first
    /// violation, if any.
    pub fn monotonicity_violation(&self, samples_per_piece: usize) -> Option<(f64, f64)> {
        let n = samples_per_piece.max(2);
        for p in &self.pieces {
            for i in 0..=n {
                let v = p.v_lo + (p.v_hi - p.v_lo) * (i as f64) / (n as f64);
                let s = p.du(v);
                if s < -1e-12 {
                    return Some((v, s));
                }
            }
        }
        None
    }

    pub fn is_monotone(&self, samples_per_piece: usize) -> bool {
        self.monotonicity_violation(samples_per_piece).is_none()
    }

    /// `n` uniform samples per piece, endpoints included, so breakpoints
    /// appear once per adjacent piece with one-sided slopes.
    pub fn sample_rows(&self, n_per_piece: usize) -> Vec<SampleRow> {
        let n = n_per_piece.max(2);
        let mut rows = Vec::new();
        for p in &self.pieces {
            for i in 0..n {
                let v = p.v_lo + (p.v_hi - p.v_lo) * (i as f64) / ((n - 1) as f64);
                rows.push(SampleRow {
                    v,
                    u: p.u(v),
                    uprime: p.du(v),
                });
            }
        }
        rows
    }

    /// Arc length `int sqrt(u'^2 + f(u)^2) dv`, summed over pieces.
    pub fn arc_length(&self) -> Result<f64> {
        let mut total = 0.0;
        for p in &self.pieces {
            let m = &self.metric;
            let r = quad::integrate(
                |v| {
                    let u = p.u(v);
                    let du = p.du(v);
                    (du * du + m.warp_raw(u).powi(2)).sqrt()
                },
                p.v_lo,
                p.v_hi,
                &QuadOptions::default(),
            );
            if !r.value.is_finite() {
                return Err(Error::NumericalFailure("arc length diverged".into()));
            }
            total += r.value;
        }
        Ok(total)
    }

    /// View the graph as a parametric curve `t -> (u(t), t)`.
    pub fn to_parametric(&self) -> ParametricCurve {
        let pieces = self.pieces.clone();
        let find = move |v: f64| -> usize {
            for (i, p) in pieces.iter().enumerate() {
                if v < p.v_hi {
                    return i;
                }
            }
            pieces.len() - 1
        };
        let p_u = self.pieces.clone();
        let f_u = find.clone();
        let p_du = self.pieces.clone();
        let f_du = find.clone();
        let p_d2u = self.pieces.clone();
        let f_d2u = find;
        ParametricCurve {
            metric: self.metric.clone(),
            t_range: self.v_range(),
            u: Arc::new(move |t| p_u[f_u(t)].u(t)),
            v: Arc::new(|t| t),
            du: Arc::new(move |t| p_du[f_du(t)].du(t)),
            dv: Arc::new(|_| 1.0),
            d2u: Arc::new(move |t| p_d2u[f_d2u(t)].d2u(t)),
            d2v: Arc::new(|_| 0.0),
        }
    }

    /// The loxodrome through `a` and `b`: the unique graph whose
    /// `phi(u(v))` is affine in `v`. Endpoints with decreasing `v` are
    /// reflected into increasing order first.
    pub fn loxodrome(metric: &Metric, a: GeodesicPoint, b: GeodesicPoint) -> Result<Profile> {
        metric.check_point(a)?;
        metric.check_point(b)?;
        let (a, b) = if b.v < a.v { (b, a) } else { (a, b) };
        if a.v == b.v {
            return Err(Error::InvalidEndpoints(format!(
                "no loxodrome through coincident meridian v = {}: u = {} vs {}",
                a.v, a.u, b.u
            )));
        }
        let ya = metric.phi_raw(a.u);
        let yb = metric.phi_raw(b.u);
        let k = (yb - ya) / (b.v - a.v);
        Profile::new(
            metric.clone(),
            vec![phi_affine_piece(metric, (a.v, b.v), ya, a.v, k)],
        )
    }

    /// A loxodromic arc of slope `k` from `a` over the given `v`-interval.
    pub fn loxodrome_from_slope(
        metric: &Metric,
        a: GeodesicPoint,
        k: f64,
        v_range: (f64, f64),
    ) -> Result<Profile> {
        metric.check_point(a)?;
        let (v0, v1) = v_range;
        if !(v0 < v1) {
            return Err(Error::InvalidParameter(format!(
                "empty v range [{v0}, {v1}]"
            )));
        }
        let ya = metric.phi_raw(a.u);
        Profile::new(
            metric.clone(),
            vec![phi_affine_piece(metric, (v0, v1), ya, a.v, k)],
        )
    }

    /// Loxodrome of slope `k` per the junction rule, then a constant-radius
    /// arc at `u = b.u` from `v_c` onward. The junction is recorded as a
    /// breakpoint.
    pub fn truncated_loxodrome(
        metric: &Metric,
        a: GeodesicPoint,
        b: GeodesicPoint,
        v_c: f64,
    ) -> Result<Profile> {
        metric.check_point(a)?;
        metric.check_point(b)?;
        if !(a.v < b.v) {
            return Err(Error::InvalidEndpoints(format!(
                "truncated loxodrome needs v0 < v1, got {} and {}",
                a.v, b.v
            )));
        }
        if !(a.u < b.u) {
            // Inward fronts (u0 > u1) are not an admissible aerodynamic
            // profile for this flow; reject rather than extrapolate.
            return Err(Error::InvalidEndpoints(format!(
                "truncated loxodrome needs u0 < u1, got {} and {}",
                a.u, b.u
            )));
        }
        if !(a.v < v_c && v_c < b.v) {
            return Err(Error::InvalidParameter(format!(
                "junction v_c = {v_c} outside ({}, {})",
                a.v, b.v
            )));
        }
        let ya = metric.phi_raw(a.u);
        let yb = metric.phi_raw(b.u);
        let k = (yb - ya) / (v_c - a.v);
        let u1 = b.u;
        let arc = Piece::new((v_c, b.v), move |_| u1, |_| 0.0, |_| 0.0);
        Profile::new(
            metric.clone(),
            vec![phi_affine_piece(metric, (a.v, v_c), ya, a.v, k), arc],
        )
    }

    /// Constant-radius profile `u = u0` over a `v`-interval.
    pub fn parallel(metric: &Metric, u0: f64, v_range: (f64, f64)) -> Result<Profile> {
        metric.check_u(u0)?;
        let (lo, hi) = if v_range.1 < v_range.0 {
            (v_range.1, v_range.0)
        } else {
            v_range
        };
        if lo == hi {
            return Err(Error::InvalidParameter("empty parallel arc".into()));
        }
        Profile::new(
            metric.clone(),
            vec![Piece::new((lo, hi), move |_| u0, |_| 0.0, |_| 0.0)],
        )
    }

    /// The rapidly oscillating profile `phi(w_m(v)) = phi(u0) +
    /// (L/2)(1 - cos(2 m s(v)))` with the phase scaled linearly onto
    /// `v_range`; for the natural range `[0, pi/2]` the phase is `2 m v`.
    /// `m_index` must be odd so the profile ends on `u1`.
    pub fn oscillation(
        metric: &Metric,
        u0: f64,
        u1: f64,
        m_index: u32,
        v_range: (f64, f64),
    ) -> Result<Profile> {
        metric.check_u(u0)?;
        metric.check_u(u1)?;
        if !(u0 < u1) {
            return Err(Error::InvalidEndpoints(format!(
                "oscillation needs u0 < u1, got {u0} and {u1}"
            )));
        }
        if m_index == 0 || m_index.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "oscillation index must be odd to land on u1, got {m_index}"
            )));
        }
        let (v0, v1) = v_range;
        if !(v0 < v1) {
            return Err(Error::InvalidParameter(format!(
                "empty v range [{v0}, {v1}]"
            )));
        }
        let big_l = metric.phi_raw(u1) - metric.phi_raw(u0);
        let ya = metric.phi_raw(u0);
        let m = m_index as f64;
        let rate = std::f64::consts::FRAC_PI_2 / (v1 - v0);
        let mc = metric.clone();
        let u = move |v: f64| {
            let theta = 2.0 * m * rate * (v - v0);
            mc.phi_inverse_raw(ya + 0.5 * big_l * (1.0 - theta.cos()))
        };
        let mc = metric.clone();
        let u_for_du = u.clone();
        let du = move |v: f64| {
            let theta = 2.0 * m * rate * (v - v0);
            m * big_l * rate * theta.sin() * mc.warp_raw(u_for_du(v))
        };
        let mc = metric.clone();
        let u_for_d2u = u.clone();
        let d2u = move |v: f64| {
            let theta = 2.0 * m * rate * (v - v0);
            let w = u_for_d2u(v);
            let f = mc.warp_raw(w);
            let fp = mc.warp_prime_raw(w);
            let yp = m * big_l * rate * theta.sin();
            let ypp = 2.0 * m * m * big_l * rate * rate * theta.cos();
            ypp * f + yp * yp * fp * f
        };
        Profile::new(
            metric.clone(),
            vec![Piece::new((v0, v1), u, du, d2u)],
        )
    }

    /// Straight segment between two points of the plane, in polar form
    /// `u(v) = p / cos(v - angle)`.
    pub fn plane_segment(a: GeodesicPoint, b: GeodesicPoint) -> Result<Profile> {
        let metric = Metric::plane();
        metric.check_point(a)?;
        metric.check_point(b)?;
        let (a, b) = if b.v < a.v { (b, a) } else { (a, b) };
        if b.v - a.v <= 0.0 || b.v - a.v >= std::f64::consts::PI {
            return Err(Error::InvalidEndpoints(format!(
                "segment span must lie in (0, pi), got {}",
                b.v - a.v
            )));
        }
        let (ax, ay) = (a.u * a.v.cos(), a.u * a.v.sin());
        let (bx, by) = (b.u * b.v.cos(), b.u * b.v.sin());
        let (dx, dy) = (bx - ax, by - ay);
        let len = dx.hypot(dy);
        let mut nx = dy / len;
        let mut ny = -dx / len;
        let mut p = nx * ax + ny * ay;
        if p < 0.0 {
            nx = -nx;
            ny = -ny;
            p = -p;
        }
        if p <= 1e-12 {
            return Err(Error::InvalidEndpoints(
                "segment passes through the origin".into(),
            ));
        }
        let angle = ny.atan2(nx);
        let u = move |v: f64| p / (v - angle).cos();
        let du = move |v: f64| {
            let w = v - angle;
            p * w.sin() / w.cos().powi(2)
        };
        let d2u = move |v: f64| {
            let w = v - angle;
            let sec = 1.0 / w.cos();
            p * sec * (2.0 * sec * sec - 1.0)
        };
        Profile::new(metric, vec![Piece::new((a.v, b.v), u, du, d2u)])
    }

    /// One of the two circles tangent to the rays `v = +-v0`, centered at
    /// `(1, 0)`. The resistance functional of the plane is invariant under
    /// `u -> lambda u`, so fixing the center loses no generality.
    pub fn tangent_circle(v0: f64, branch: Branch) -> Result<Profile> {
        if !(v0 > 0.0 && v0 < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "tangency half-amplitude must lie in (0, pi/2), got {v0}"
            )));
        }
        let metric = Metric::plane();
        let sign = match branch {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        };
        let c0 = v0.cos() * v0.cos();
        let u = move |v: f64| {
            let r = (v.cos() * v.cos() - c0).max(0.0);
            v.cos() + sign * r.sqrt()
        };
        let du = move |v: f64| {
            let r = v.cos() * v.cos() - c0;
            // one-sided infinite slope at the tangency points
            -v.sin() - sign * v.cos() * v.sin() / r.max(0.0).sqrt()
        };
        let d2u = move |v: f64| {
            let r = v.cos() * v.cos() - c0;
            let rp = -(2.0 * v).sin();
            let rpp = -2.0 * (2.0 * v).cos();
            -v.cos() + sign * (2.0 * rpp * r - rp * rp) / (4.0 * r.max(0.0).powf(1.5))
        };
        Profile::new(metric, vec![Piece::new((-v0, v0), u, du, d2u)])
    }

    /// Piecewise `phi`-affine profile: consecutive segments of prescribed
    /// `phi`-slope and angular width, starting from `start`.
    pub fn from_phi_slopes(
        metric: &Metric,
        start: GeodesicPoint,
        segments: &[(f64, f64)],
    ) -> Result<Profile> {
        metric.check_point(start)?;
        if segments.is_empty() {
            return Err(Error::InvalidParameter("no segments".into()));
        }
        let mut pieces = Vec::with_capacity(segments.len());
        let mut v0 = start.v;
        let mut y0 = metric.phi_raw(start.u);
        for &(slope, dv) in segments {
            if !(dv > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "segment width must be positive, got {dv}"
                )));
            }
            pieces.push(phi_affine_piece(metric, (v0, v0 + dv), y0, v0, slope));
            y0 += slope * dv;
            v0 += dv;
        }
        Profile::new(metric.clone(), pieces)
    }
}

/// Piece with `phi(u(v)) = y_anchor + k (v - v_anchor)`.
fn phi_affine_piece(
    metric: &Metric,
    v_range: (f64, f64),
    y_anchor: f64,
    v_anchor: f64,
    k: f64,
) -> Piece {
    let mu = metric.clone();
    let u = move |v: f64| mu.phi_inverse_raw(y_anchor + k * (v - v_anchor));
    let md = metric.clone();
    let u_for_du = u.clone();
    let du = move |v: f64| k * md.warp_raw(u_for_du(v));
    let m2 = metric.clone();
    let u_for_d2u = u.clone();
    let d2u = move |v: f64| {
        let w = u_for_d2u(v);
        k * k * m2.warp_prime_raw(w) * m2.warp_raw(w)
    };
    Piece::new(v_range, u, du, d2u)
}

/// A regular parametric curve `t -> (u(t), v(t))` with first and second
/// derivative evaluators.
#[derive(Clone)]
pub struct ParametricCurve {
    metric: Metric,
    t_range: (f64, f64),
    u: EvalFn,
    v: EvalFn,
    du: EvalFn,
    dv: EvalFn,
    d2u: EvalFn,
    d2v: EvalFn,
}

impl ParametricCurve {
    #[allow(clippy::too_many_arguments)]
    pub fn new<U, V, DU, DV, D2U, D2V>(
        metric: Metric,
        t_range: (f64, f64),
        u: U,
        v: V,
        du: DU,
        dv: DV,
        d2u: D2U,
        d2v: D2V,
    ) -> Result<ParametricCurve>
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        DU: Fn(f64) -> f64 + Send + Sync + 'static,
        DV: Fn(f64) -> f64 + Send + Sync + 'static,
        D2U: Fn(f64) -> f64 + Send + Sync + 'static,
        D2V: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(t_range.0 < t_range.1) {
            return Err(Error::InvalidParameter(format!(
                "empty parameter range [{}, {}]",
                t_range.0, t_range.1
            )));
        }
        Ok(ParametricCurve {
            metric,
            t_range,
            u: Arc::new(u),
            v: Arc::new(v),
            du: Arc::new(du),
            dv: Arc::new(dv),
            d2u: Arc::new(d2u),
            d2v: Arc::new(d2v),
        })
    }

    /// The meridian `v = v0`, parametrized by arc length over the radial
    /// interval.
    pub fn meridian(metric: &Metric, v0: f64, u_range: (f64, f64)) -> Result<ParametricCurve> {
        let (lo, hi) = if u_range.1 < u_range.0 {
            (u_range.1, u_range.0)
        } else {
            u_range
        };
        metric.check_u(lo)?;
        metric.check_u(hi)?;
        if lo == hi {
            return Err(Error::InvalidParameter("empty meridian segment".into()));
        }
        ParametricCurve::new(
            metric.clone(),
            (lo, hi),
            |t| t,
            move |_| v0,
            |_| 1.0,
            |_| 0.0,
            |_| 0.0,
            |_| 0.0,
        )
    }

    /// Loxodrome of slope `k` from `a`, parametrized by arc length: `u` is
    /// linear in `t` and the speed is identically one.
    pub fn loxodrome_arc_length(
        metric: &Metric,
        a: GeodesicPoint,
        k: f64,
        length: f64,
    ) -> Result<ParametricCurve> {
        metric.check_point(a)?;
        if !(length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "curve length must be positive, got {length}"
            )));
        }
        let root = (1.0 + k * k).sqrt();
        let u_rate = k / root;
        metric.check_u(a.u + u_rate * length)?;
        let u = move |t: f64| a.u + u_rate * t;
        let m_v = metric.clone();
        let u_for_v = u;
        let v = move |t: f64| {
            a.v + quad::integrate(
                |s| 1.0 / (m_v.warp_raw(u_for_v(s)) * root),
                0.0,
                t,
                &QuadOptions::default(),
            )
            .value
        };
        let m_dv = metric.clone();
        let dv = move |t: f64| 1.0 / (m_dv.warp_raw(u(t)) * root);
        let m_d2v = metric.clone();
        let d2v = move |t: f64| {
            let w = u(t);
            -k * m_d2v.warp_prime_raw(w) / (m_d2v.warp_raw(w).powi(2) * (1.0 + k * k))
        };
        ParametricCurve::new(
            metric.clone(),
            (0.0, length),
            u,
            v,
            move |_| u_rate,
            dv,
            |_| 0.0,
            d2v,
        )
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.t_range
    }

    fn check_t(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.t_range;
        if t < lo || t > hi || !t.is_finite() {
            return Err(Error::OutsideRange { value: t, lo, hi });
        }
        Ok(())
    }

    pub fn point_at(&self, t: f64) -> Result<GeodesicPoint> {
        self.check_t(t)?;
        Ok(GeodesicPoint::new((self.u)(t), (self.v)(t)))
    }

    /// Velocity `(u'(t), v'(t))`.
    pub fn velocity_at(&self, t: f64) -> Result<(f64, f64)> {
        self.check_t(t)?;
        Ok(((self.du)(t), (self.dv)(t)))
    }

    pub(crate) fn u_raw(&self, t: f64) -> f64 {
        (self.u)(t)
    }

    pub(crate) fn du_raw(&self, t: f64) -> f64 {
        (self.du)(t)
    }

    pub(crate) fn dv_raw(&self, t: f64) -> f64 {
        (self.dv)(t)
    }

    pub(crate) fn d2u_raw(&self, t: f64) -> f64 {
        (self.d2u)(t)
    }

    pub(crate) fn d2v_raw(&self, t: f64) -> f64 {
        (self.d2v)(t)
    }

    /// Squared speed in the metric, `u'^2 + v'^2 f(u)^2`.
    pub fn speed_squared(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        let f = self.metric.warp_raw((self.u)(t));
        let du = (self.du)(t);
        let dv = (self.dv)(t);
        Ok(du * du + dv * dv * f * f)
    }
}
