//! Geodesic-coordinate metrics `ds^2 = du^2 + f(u)^2 dv^2`.
//!
//! A [`Metric`] bundles the warp `f`, its derivative, the radial
//! antiderivative `phi(u) = int du/f(u)` and the inverse of `phi`. The three
//! space forms carry closed forms for all four; user-supplied warps fall back
//! to adaptive quadrature and bisection. `phi` is strictly increasing
//! (`phi' = 1/f > 0`), which the rest of the crate relies on.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};

/// Evaluation closer than this to a finite domain endpoint is rejected: the
/// warp vanishes there and the flow density `1/f` blows up.
pub const DOMAIN_GUARD: f64 = 1e-9;

/// Absolute tolerance on `u` for the bisection behind `phi_inverse`.
const INVERSION_TOL: f64 = 1e-12;

/// Shared evaluator for scalar functions of the radial coordinate.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A point in geodesic coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicPoint {
    /// Radial coordinate (arc length along meridians).
    pub u: f64,
    /// Angular coordinate.
    pub v: f64,
}

impl GeodesicPoint {
    pub fn new(u: f64, v: f64) -> Self {
        GeodesicPoint { u, v }
    }
}

/// A metric `du^2 + f(u)^2 dv^2` on an open radial interval where `f > 0`.
#[derive(Clone)]
pub struct Metric {
    id: &'static str,
    domain: (f64, f64),
    warp: ScalarFn,
    warp_prime: ScalarFn,
    phi: ScalarFn,
    phi_inverse: ScalarFn,
}

impl std::fmt::Debug for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Metric")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .finish()
    }
}

impl Metric {
    /// The space form of curvature `c in {+1, 0, -1}`: sphere, plane or
    /// hyperbolic plane.
    ///
    /// The sphere uses the latitude convention `f = cos u` on
    /// `(-pi/2, pi/2)`, so its `phi` is the inverse Gudermannian
    /// `ln tan(u/2 + pi/4)`, the unique antiderivative family with
    /// `phi' = 1/cos u`.
    pub fn space_form(c: f64) -> Result<Metric> {
        if c == 1.0 {
            Ok(Metric {
                id: "sphere",
                domain: (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
                warp: Arc::new(|u| u.cos()),
                warp_prime: Arc::new(|u| -u.sin()),
                phi: Arc::new(|u| (0.5 * u + std::f64::consts::FRAC_PI_4).tan().ln()),
                phi_inverse: Arc::new(|y| 2.0 * y.exp().atan() - std::f64::consts::FRAC_PI_2),
            })
        } else if c == 0.0 {
            Ok(Metric {
                id: "plane",
                domain: (0.0, f64::INFINITY),
                warp: Arc::new(|u| u),
                warp_prime: Arc::new(|_| 1.0),
                phi: Arc::new(|u| u.ln()),
                phi_inverse: Arc::new(|y| y.exp()),
            })
        } else if c == -1.0 {
            Ok(Metric {
                id: "hyperbolic",
                domain: (0.0, f64::INFINITY),
                warp: Arc::new(|u| u.sinh()),
                warp_prime: Arc::new(|u| u.cosh()),
                phi: Arc::new(|u| (0.5 * u).tanh().ln()),
                phi_inverse: Arc::new(|y| 2.0 * y.exp().atanh()),
            })
        } else {
            Err(Error::InvalidCurvature(c))
        }
    }

    pub fn sphere() -> Metric {
        Metric::space_form(1.0).expect("valid curvature")
    }

    pub fn plane() -> Metric {
        Metric::space_form(0.0).expect("valid curvature")
    }

    pub fn hyperbolic() -> Metric {
        Metric::space_form(-1.0).expect("valid curvature")
    }

    /// Metric with a user-supplied smooth warp. `phi` is computed by
    /// adaptive quadrature from a fixed anchor inside `domain` and inverted
    /// by bracketed bisection. Pass `warp_prime: None` to fall back to a
    /// central difference.
    pub fn custom<F>(warp: F, warp_prime: Option<ScalarFn>, domain: (f64, f64)) -> Result<Metric>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (lo, hi) = domain;
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "empty metric domain ({lo}, {hi})"
            )));
        }
        let warp: ScalarFn = Arc::new(warp);

        // Probe positivity on a finite window of the domain.
        let probe_lo = if lo.is_finite() { lo + DOMAIN_GUARD } else { -1e3 };
        let probe_hi = if hi.is_finite() { hi - DOMAIN_GUARD } else { 1e3 };
        for i in 0..=64 {
            let u = probe_lo + (probe_hi - probe_lo) * (i as f64) / 64.0;
            let value = warp(u);
            if !(value > 0.0) {
                return Err(Error::NonPositiveWarp { u, value });
            }
        }

        let anchor = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 1.0,
            (false, true) => hi - 1.0,
            (false, false) => 0.0,
        };

        let warp_prime = warp_prime.unwrap_or_else(|| {
            let w = Arc::clone(&warp);
            Arc::new(move |u: f64| {
                let h = 1e-5 * u.abs().max(1.0);
                (w(u + h) - w(u - h)) / (2.0 * h)
            })
        });

        let phi: ScalarFn = {
            let w = Arc::clone(&warp);
            Arc::new(move |u: f64| {
                quad::integrate(|t| 1.0 / w(t), anchor, u, &QuadOptions::default()).value
            })
        };

        let phi_inverse: ScalarFn = {
            let phi = Arc::clone(&phi);
            Arc::new(move |y: f64| invert_monotone(&phi, y, anchor, domain))
        };

        Ok(Metric {
            id: "custom",
            domain,
            warp,
            warp_prime,
            phi,
            phi_inverse,
        })
    }

    /// Metric from a table of `(u, f(u))` samples with strictly increasing
    /// `u` and `f > 0`. The warp is interpolated linearly, which gives `phi`
    /// and its inverse in closed form on every segment.
    pub fn custom_from_table(points: &[(f64, f64)]) -> Result<Metric> {
        if points.len() < 2 {
            return Err(Error::InvalidWarpTable(
                "need at least two (u, f) samples".into(),
            ));
        }
        for pair in points.windows(2) {
            if !(pair[0].0 < pair[1].0) {
                return Err(Error::InvalidWarpTable(format!(
                    "u column must be strictly increasing: {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        for &(u, f) in points {
            if !(f > 0.0) || !f.is_finite() || !u.is_finite() {
                return Err(Error::NonPositiveWarp { u, value: f });
            }
        }

        let table = Arc::new(WarpTable::build(points));
        let domain = (points[0].0, points[points.len() - 1].0);

        let warp: ScalarFn = {
            let t = Arc::clone(&table);
            Arc::new(move |u| t.warp(u))
        };
        let warp_prime: ScalarFn = {
            let t = Arc::clone(&table);
            Arc::new(move |u: f64| {
                let h = 1e-6 * (t.span() / t.len() as f64);
                (t.warp(u + h) - t.warp(u - h)) / (2.0 * h)
            })
        };
        let phi: ScalarFn = {
            let t = Arc::clone(&table);
            Arc::new(move |u| t.phi(u))
        };
        let phi_inverse: ScalarFn = {
            let t = Arc::clone(&table);
            Arc::new(move |y| t.phi_inverse(y))
        };

        Ok(Metric {
            id: "custom",
            domain,
            warp,
            warp_prime,
            phi,
            phi_inverse,
        })
    }

    /// Parse a warp table in the CSV layout `u,f` (header required) and
    /// build the metric from it.
    pub fn custom_from_csv(text: &str) -> Result<Metric> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidWarpTable("empty warp table".into()))?;
        if header.trim() != "u,f" {
            return Err(Error::InvalidWarpTable(format!(
                "expected header 'u,f', found '{}'",
                header.trim()
            )));
        }
        let mut points = Vec::new();
        for (i, line) in lines.enumerate() {
            let mut cols = line.split(',');
            let u = cols
                .next()
                .map(str::trim)
                .and_then(|s| s.parse::<f64>().ok());
            let f = cols
                .next()
                .map(str::trim)
                .and_then(|s| s.parse::<f64>().ok());
            match (u, f, cols.next()) {
                (Some(u), Some(f), None) => points.push((u, f)),
                _ => {
                    return Err(Error::InvalidWarpTable(format!(
                        "malformed row {}: '{}'",
                        i + 2,
                        line
                    )))
                }
            }
        }
        Metric::custom_from_table(&points)
    }

    pub fn id(&self) -> &'static str {
        self.id
    }

    /// Open interval of valid radial coordinates.
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// True when `u` is inside the open domain, clear of the endpoint guard.
    pub fn contains(&self, u: f64) -> bool {
        let (lo, hi) = self.domain;
        let above = if lo.is_finite() { u > lo + DOMAIN_GUARD } else { u > f64::NEG_INFINITY };
        let below = if hi.is_finite() { u < hi - DOMAIN_GUARD } else { u < f64::INFINITY };
        u.is_finite() && above && below
    }

    pub fn check_u(&self, u: f64) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            let (lo, hi) = self.domain;
            Err(Error::OutsideDomain { u, lo, hi })
        }
    }

    pub fn check_point(&self, p: GeodesicPoint) -> Result<()> {
        self.check_u(p.u)
    }

    /// Warp `f(u)`.
    pub fn warp(&self, u: f64) -> Result<f64> {
        self.check_u(u)?;
        Ok((self.warp)(u))
    }

    /// Warp derivative `f'(u)`.
    pub fn warp_prime(&self, u: f64) -> Result<f64> {
        self.check_u(u)?;
        Ok((self.warp_prime)(u))
    }

    /// Radial antiderivative `phi(u)`.
    pub fn phi(&self, u: f64) -> Result<f64> {
        self.check_u(u)?;
        Ok((self.phi)(u))
    }

    /// Inverse of `phi`; the result is accurate to `1e-12` in `u`.
    pub fn phi_inverse(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::InvalidParameter(format!("phi target {y} not finite")));
        }
        let u = (self.phi_inverse)(y);
        self.check_u(u)?;
        Ok(u)
    }

    /// Radial budget `phi(u1) - phi(u0)`, written `L` throughout the crate.
    /// Antisymmetric in its arguments.
    pub fn amplitude(&self, u0: f64, u1: f64) -> Result<f64> {
        Ok(self.phi(u1)? - self.phi(u0)?)
    }

    pub(crate) fn warp_raw(&self, u: f64) -> f64 {
        (self.warp)(u)
    }

    pub(crate) fn warp_prime_raw(&self, u: f64) -> f64 {
        (self.warp_prime)(u)
    }

    pub(crate) fn phi_raw(&self, u: f64) -> f64 {
        (self.phi)(u)
    }

    pub(crate) fn phi_inverse_raw(&self, y: f64) -> f64 {
        (self.phi_inverse)(y)
    }
}

/// Solve `phi(u) = y` for a strictly increasing `phi` by geometric bracket
/// expansion from `anchor` followed by bisection.
fn invert_monotone(phi: &ScalarFn, y: f64, anchor: f64, domain: (f64, f64)) -> f64 {
    let (lo_dom, hi_dom) = domain;
    let floor = if lo_dom.is_finite() { lo_dom + DOMAIN_GUARD } else { f64::NEG_INFINITY };
    let ceil = if hi_dom.is_finite() { hi_dom - DOMAIN_GUARD } else { f64::INFINITY };

    let mut lo = anchor;
    let mut hi = anchor;
    let mut step = 1.0;
    while phi(lo) > y && lo > floor {
        lo = (lo - step).max(floor);
        step *= 2.0;
    }
    step = 1.0;
    while phi(hi) < y && hi < ceil {
        hi = (hi + step).min(ceil);
        step *= 2.0;
    }
    if phi(lo) > y || phi(hi) < y {
        return f64::NAN; // y outside the range of phi; caller reports domain error
    }

    while hi - lo > INVERSION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Piecewise-linear warp with per-segment closed forms for `phi`.
struct WarpTable {
    u: Vec<f64>,
    f: Vec<f64>,
    /// Cumulative `phi` at the knots, anchored at the first knot.
    cum: Vec<f64>,
}

impl WarpTable {
    fn build(points: &[(f64, f64)]) -> WarpTable {
        let u: Vec<f64> = points.iter().map(|p| p.0).collect();
        let f: Vec<f64> = points.iter().map(|p| p.1).collect();
        let mut cum = vec![0.0];
        for i in 0..u.len() - 1 {
            cum.push(cum[i] + segment_phi(u[i], f[i], u[i + 1], f[i + 1], u[i + 1]));
        }
        WarpTable { u, f, cum }
    }

    fn len(&self) -> usize {
        self.u.len()
    }

    fn span(&self) -> f64 {
        self.u[self.u.len() - 1] - self.u[0]
    }

    fn segment(&self, u: f64) -> usize {
        match self.u.binary_search_by(|knot| knot.total_cmp(&u)) {
            Ok(i) => i.min(self.u.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.u.len() - 2),
        }
    }

    fn warp(&self, u: f64) -> f64 {
        let i = self.segment(u);
        let t = (u - self.u[i]) / (self.u[i + 1] - self.u[i]);
        self.f[i] + t * (self.f[i + 1] - self.f[i])
    }

    fn phi(&self, u: f64) -> f64 {
        let i = self.segment(u);
        self.cum[i] + segment_phi(self.u[i], self.f[i], self.u[i + 1], self.f[i + 1], u)
    }

    fn phi_inverse(&self, y: f64) -> f64 {
        let i = match self
            .cum
            .binary_search_by(|c| c.total_cmp(&y))
        {
            Ok(i) => i.min(self.u.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.u.len() - 2),
        };
        let rest = y - self.cum[i];
        let slope = (self.f[i + 1] - self.f[i]) / (self.u[i + 1] - self.u[i]);
        if slope.abs() < 1e-14 {
            self.u[i] + rest * self.f[i]
        } else {
            // invert (1/b) ln(f(u)/f_i) = rest
            self.u[i] + self.f[i] * ((slope * rest).exp() - 1.0) / slope
        }
    }
}

/// `int_{u_a}^{x} dt / f(t)` for `f` linear through `(u_a, f_a), (u_b, f_b)`.
fn segment_phi(u_a: f64, f_a: f64, u_b: f64, f_b: f64, x: f64) -> f64 {
    let slope = (f_b - f_a) / (u_b - u_a);
    if slope.abs() < 1e-14 {
        (x - u_a) / f_a
    } else {
        ((f_a + slope * (x - u_a)) / f_a).ln() / slope
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_pcg::Pcg64;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    #[test]
    fn space_form_warps() {
        assert!((Metric::plane().warp(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((Metric::sphere().warp(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((Metric::hyperbolic().warp(1.0).unwrap() - 1.0f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_curvature() {
        assert!(matches!(
            Metric::space_form(2.0),
            Err(Error::InvalidCurvature(_))
        ));
    }

    #[test]
    fn plane_phi_difference_is_ln2() {
        let m = Metric::plane();
        assert!((m.amplitude(1.0, 2.0).unwrap() - LN_2).abs() < 1e-14);
    }

    #[test]
    fn amplitude_of_empty_interval_is_zero() {
        for m in [Metric::sphere(), Metric::plane(), Metric::hyperbolic()] {
            assert_eq!(m.amplitude(0.7, 0.7).unwrap(), 0.0);
        }
    }

    #[test]
    fn amplitude_matches_quadrature_oracle() {
        let m = Metric::plane();
        let oracle = quad::integrate(|t| 1.0 / t, 1.0, 2.0, &QuadOptions::default());
        assert!((m.amplitude(1.0, 2.0).unwrap() - oracle.value).abs() < 1e-10);
    }

    #[test]
    fn closed_form_phi_agrees_with_quadrature_on_random_pairs() {
        let mut rng = Pcg64::seed_from_u64(7);
        let cases: [(Metric, f64, f64); 3] = [
            (Metric::sphere(), -1.4, 1.4),
            (Metric::plane(), 0.05, 50.0),
            (Metric::hyperbolic(), 0.05, 5.0),
        ];
        for (m, lo, hi) in cases {
            for _ in 0..100 {
                let a = rng.gen_range(lo..hi);
                let b = rng.gen_range(lo..hi);
                let closed = m.amplitude(a, b).unwrap();
                let q = quad::integrate(
                    |t| 1.0 / m.warp_raw(t),
                    a,
                    b,
                    &QuadOptions::default(),
                );
                assert!(
                    (closed - q.value).abs() < 1e-10,
                    "{}: phi({b}) - phi({a}) = {closed} vs quadrature {}",
                    m.id(),
                    q.value
                );
            }
        }
    }

    #[test]
    fn amplitude_positive_and_antisymmetric() {
        let mut rng = Pcg64::seed_from_u64(8);
        let m = Metric::hyperbolic();
        for _ in 0..50 {
            let a = rng.gen_range(0.1..3.0);
            let b = rng.gen_range(0.1..3.0);
            let (u0, u1) = if a < b { (a, b) } else { (b, a) };
            if u0 == u1 {
                continue;
            }
            let fwd = m.amplitude(u0, u1).unwrap();
            assert!(fwd > 0.0);
            assert!((m.amplitude(u1, u0).unwrap() + fwd).abs() < 1e-15);
        }
    }

    #[test]
    fn warp_prime_matches_central_difference() {
        let cases: [(Metric, f64); 3] = [
            (Metric::sphere(), 0.6),
            (Metric::plane(), 2.0),
            (Metric::hyperbolic(), 1.1),
        ];
        for (m, u) in cases {
            for h in [1e-3, 1e-4] {
                let cd = (m.warp_raw(u + h) - m.warp_raw(u - h)) / (2.0 * h);
                let err = (m.warp_prime(u).unwrap() - cd).abs();
                assert!(err <= h * h, "{}: err {err} at h {h}", m.id());
            }
        }
    }

    #[test]
    fn domain_guard_is_enforced() {
        let plane = Metric::plane();
        assert!(plane.warp(0.0).is_err());
        assert!(plane.warp(5e-10).is_err());
        assert!(plane.warp(1e-8).is_ok());
        let sphere = Metric::sphere();
        assert!(sphere.warp(FRAC_PI_2).is_err());
        assert!(sphere.warp(FRAC_PI_2 - 1e-10).is_err());
        assert!(sphere.phi(1.5).is_ok());
    }

    #[test]
    fn custom_flat_warp() {
        let m = Metric::custom(|_| 1.0, None, (f64::NEG_INFINITY, f64::INFINITY)).unwrap();
        assert!((m.amplitude(1.0, 3.0).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn custom_recovers_plane_phi() {
        let m = Metric::custom(|u| u, None, (0.0, f64::INFINITY)).unwrap();
        let plane = Metric::plane();
        for u in [0.5, 1.0, 2.0, 7.5] {
            let diff = m.amplitude(1.0, u).unwrap() - plane.amplitude(1.0, u).unwrap();
            assert!(diff.abs() < 1e-10, "u = {u}: diff {diff}");
        }
    }

    #[test]
    fn custom_phi_inverse_round_trip() {
        let m = Metric::custom(|u| u.cos(), None, (-FRAC_PI_2, FRAC_PI_2)).unwrap();
        let y = m.phi(0.3).unwrap();
        assert!((m.phi_inverse(y).unwrap() - 0.3).abs() < 1e-10);
    }

    #[test]
    fn custom_rejects_nonpositive_warp() {
        let out = Metric::custom(|u| 1.0 - u, None, (0.0, 2.0));
        assert!(matches!(out, Err(Error::NonPositiveWarp { .. })));
    }

    #[test]
    fn custom_accepts_supplied_derivative() {
        let m = Metric::custom(
            |u| u.cosh(),
            Some(Arc::new(|u: f64| u.sinh())),
            (-3.0, 3.0),
        )
        .unwrap();
        assert_eq!(m.warp_prime(0.7).unwrap(), 0.7f64.sinh());
        // phi of cosh is the Gudermannian: phi(u) - phi(0) = atan(sinh u)
        let got = m.amplitude(0.0, 1.2).unwrap();
        assert!((got - 1.2f64.sinh().atan()).abs() < 1e-10);
    }

    #[test]
    fn table_phi_inverse_rejects_out_of_range_targets() {
        let m = Metric::custom_from_table(&[(1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert!(m.phi_inverse(1e9).is_err());
        assert!(m.phi_inverse(-1e9).is_err());
    }

    #[test]
    fn space_form_phi_inverse_round_trip() {
        for (m, u) in [
            (Metric::sphere(), -0.9),
            (Metric::plane(), 3.7),
            (Metric::hyperbolic(), 0.8),
        ] {
            let y = m.phi(u).unwrap();
            assert!((m.phi_inverse(y).unwrap() - u).abs() < 1e-12);
        }
    }

    #[test]
    fn table_metric_tracks_plane() {
        let points: Vec<(f64, f64)> = (0..=40).map(|i| {
            let u = 0.5 + 0.1 * i as f64;
            (u, u)
        }).collect();
        let m = Metric::custom_from_table(&points).unwrap();
        // interpolation is exact for the linear warp f(u) = u
        assert!((m.warp(1.23).unwrap() - 1.23).abs() < 1e-14);
        let plane = Metric::plane();
        let got = m.amplitude(1.0, 2.0).unwrap();
        let want = plane.amplitude(1.0, 2.0).unwrap();
        assert!((got - want).abs() < 1e-12, "got {got} want {want}");
        let y = m.phi(2.0).unwrap();
        assert!((m.phi_inverse(y).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_parsing() {
        let m = Metric::custom_from_csv("u,f\n1,1\n2,2\n3,3\n").unwrap();
        assert!((m.warp(1.5).unwrap() - 1.5).abs() < 1e-14);
        assert!(Metric::custom_from_csv("x,y\n1,1\n2,2").is_err());
        assert!(Metric::custom_from_csv("u,f\n2,1\n1,2").is_err());
        assert!(Metric::custom_from_csv("u,f\n1,1\n2,0").is_err());
        assert!(Metric::custom_from_csv("u,f\n1,1\n2,2,9").is_err());
    }
}
