//! Global minimization of the resistance functional over monotone profiles.
//!
//! In the transformed coordinate `y = phi(u)` the functional is
//! `int g(y') dv` with `g(p) = 1/(1+p^2)`, whose lower convex envelope is
//! linear on `[0, 1]` and equals `g` beyond. Jensen's inequality then gives
//! a sharp lower bound, attained by a smooth loxodrome when
//! `delta_v <= L = phi(u1) - phi(u0)` and by a truncated loxodrome with the
//! junction at `V = v0 + L` otherwise. A budget-constrained dynamic program
//! over quantized slopes provides an independent discrete check of both
//! regimes.

use serde::Serialize;

use crate::curve::Profile;
use crate::error::{Error, Result};
use crate::metric::{GeodesicPoint, Metric};
use crate::resistance;

/// The transformed integrand `g(p) = 1/(1 + p^2)`.
pub fn integrand_g(p: f64) -> f64 {
    1.0 / (1.0 + p * p)
}

/// Lower convex envelope of `g` on `[0, inf)`: the tangent line `1 - p/2`
/// up to the contact point `p = 1`, then `g` itself.
pub fn convex_envelope(p: f64) -> Result<f64> {
    if !(p >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "envelope argument must be nonnegative, got {p}"
        )));
    }
    Ok(if p <= 1.0 { 1.0 - 0.5 * p } else { integrand_g(p) })
}

/// `delta_v * g**(L / delta_v)`: a lower bound for the resistance of every
/// monotone profile with angular amplitude `delta_v` and radial budget `L`.
pub fn jensen_lower_bound(delta_v: f64, big_l: f64) -> Result<f64> {
    if !(delta_v > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "angular amplitude must be positive, got {delta_v}"
        )));
    }
    if !(big_l >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radial budget must be nonnegative, got {big_l}"
        )));
    }
    Ok(delta_v * convex_envelope(big_l / delta_v)?)
}

/// Which family attains the global minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimizerKind {
    Loxodrome,
    Truncated,
}

/// The global minimizer between two points, with its parameters and value.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MinimizerSolution {
    pub kind: MinimizerKind,
    /// Slope of the (loxodromic part of the) minimizer; absent for the
    /// degenerate equal-radii case.
    pub k: Option<f64>,
    /// Junction of the truncated minimizer; absent in the loxodrome regime.
    #[serde(rename = "V")]
    pub junction_v: Option<f64>,
    pub optimal_value: f64,
    pub lower_bound: f64,
}

/// Classify the minimization problem from `a` to `b` over monotone
/// profiles: a loxodrome when `delta_v <= L`, a truncated loxodrome when
/// `delta_v > L`. Equal radii degenerate to the parallel (`L = 0`);
/// decreasing radii are rejected.
pub fn classify(metric: &Metric, a: GeodesicPoint, b: GeodesicPoint) -> Result<MinimizerSolution> {
    metric.check_point(a)?;
    metric.check_point(b)?;
    if !(a.v < b.v) {
        return Err(Error::InvalidEndpoints(format!(
            "classification needs v0 < v1, got {} and {}",
            a.v, b.v
        )));
    }
    if a.u > b.u {
        return Err(Error::InvalidEndpoints(format!(
            "classification needs u0 <= u1, got {} and {}",
            a.u, b.u
        )));
    }
    let delta_v = b.v - a.v;
    let big_l = metric.amplitude(a.u, b.u)?;
    let lower_bound = jensen_lower_bound(delta_v, big_l)?;

    if a.u == b.u {
        // only the parallel connects equal radii monotonically
        return Ok(MinimizerSolution {
            kind: MinimizerKind::Truncated,
            k: None,
            junction_v: Some(a.v),
            optimal_value: delta_v,
            lower_bound,
        });
    }

    if delta_v <= big_l {
        let k = big_l / delta_v;
        Ok(MinimizerSolution {
            kind: MinimizerKind::Loxodrome,
            k: Some(k),
            junction_v: None,
            optimal_value: delta_v * integrand_g(k),
            lower_bound,
        })
    } else {
        Ok(MinimizerSolution {
            kind: MinimizerKind::Truncated,
            k: Some(1.0),
            junction_v: Some(a.v + big_l),
            optimal_value: delta_v - 0.5 * big_l,
            lower_bound,
        })
    }
}

/// Construct the profile realizing [`classify`]'s optimum.
pub fn optimal_profile(metric: &Metric, a: GeodesicPoint, b: GeodesicPoint) -> Result<Profile> {
    let solution = classify(metric, a, b)?;
    match solution.kind {
        MinimizerKind::Loxodrome => Profile::loxodrome(metric, a, b),
        MinimizerKind::Truncated => match solution.junction_v {
            Some(v) if v > a.v => Profile::truncated_loxodrome(metric, a, b, v),
            _ => Profile::parallel(metric, a.u, (a.v, b.v)),
        },
    }
}

/// The one-variable reduction of the truncated-family resistance: a
/// loxodromic arc up to `v_c` followed by a constant-radius arc,
/// `(v_c - v0)^3 / ((v_c - v0)^2 + L^2) + (v1 - v_c)`.
pub fn truncation_objective(v_c: f64, v0: f64, v1: f64, big_l: f64) -> f64 {
    let x = v_c - v0;
    x * x * x / (x * x + big_l * big_l) + (v1 - v_c)
}

/// Golden-section minimization of a unimodal function on `[a, b]` to the
/// absolute `x` tolerance `xtol`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > xtol {
        if f1 > f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

/// Optimal junction of the truncated family.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TruncationOptimum {
    /// Analytic junction `V = v0 + L`.
    #[serde(rename = "V")]
    pub junction_v: f64,
    /// Resistance at the optimum, `delta_v - L/2`.
    pub value: f64,
    /// Curvature of the reduced objective at the optimum, `1/(2L)`.
    pub second_derivative: f64,
    /// Junction recovered by golden-section search over the
    /// quadrature-backed objective, as an independent check.
    pub numeric_junction_v: f64,
}

/// Minimize over the truncated family between `a` and `b`. Requires
/// `delta_v > L > 0`; the returned struct carries both the analytic
/// junction and a golden-section confirmation on the quadrature-evaluated
/// resistance.
pub fn optimal_truncation(
    metric: &Metric,
    a: GeodesicPoint,
    b: GeodesicPoint,
) -> Result<TruncationOptimum> {
    metric.check_point(a)?;
    metric.check_point(b)?;
    if !(a.v < b.v && a.u < b.u) {
        return Err(Error::InvalidEndpoints(format!(
            "truncation needs v0 < v1 and u0 < u1, got ({}, {}) to ({}, {})",
            a.u, a.v, b.u, b.v
        )));
    }
    let delta_v = b.v - a.v;
    let big_l = metric.amplitude(a.u, b.u)?;
    if !(delta_v > big_l) {
        return Err(Error::InvalidParameter(format!(
            "truncation requires delta_v > L, got delta_v = {delta_v}, L = {big_l}"
        )));
    }

    let eps = 1e-9 * delta_v;
    let numeric_junction_v = golden_section_min(
        |v_c| {
            Profile::truncated_loxodrome(metric, a, b, v_c)
                .and_then(|p| resistance::graph(&p))
                .map(|r| r.value)
                .unwrap_or(f64::INFINITY)
        },
        a.v + eps,
        b.v - eps,
        1e-8,
    );

    Ok(TruncationOptimum {
        junction_v: a.v + big_l,
        value: delta_v - 0.5 * big_l,
        second_derivative: 1.0 / (2.0 * big_l),
        numeric_junction_v,
    })
}

/// Discrete oracle: minimize `(delta_v / n) * sum_i g(p_i)` over per-cell
/// constant slopes `p_i` on the grid `{0, 1/slope_grid, ..., p_max}`,
/// subject to the quantized budget `sum_i p_i (delta_v / n)` landing within
/// one quantum below `L`. Accepting only budgets at or below `L` keeps the
/// discrete optimum at or above [`jensen_lower_bound`]; it converges onto
/// the bound from above as both grids refine.
pub fn brute_force_min(
    delta_v: f64,
    big_l: f64,
    n_cells: usize,
    slope_grid: usize,
    p_max: f64,
) -> Result<f64> {
    if !(delta_v > 0.0) || !(big_l >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need delta_v > 0 and L >= 0, got {delta_v} and {big_l}"
        )));
    }
    if n_cells < 4 {
        return Err(Error::InvalidParameter(format!(
            "need at least 4 cells, got {n_cells}"
        )));
    }
    if slope_grid < 8 {
        return Err(Error::InvalidParameter(format!(
            "need a slope grid of at least 8, got {slope_grid}"
        )));
    }
    if big_l > p_max * delta_v {
        return Err(Error::InfeasibleBudget {
            budget: big_l,
            capacity: p_max * delta_v,
        });
    }
    if p_max < (2.0f64).max(2.0 * big_l / delta_v) {
        return Err(Error::InvalidParameter(format!(
            "slope cap {p_max} below max(2, 2L/delta_v)"
        )));
    }

    let delta = 1.0 / slope_grid as f64;
    let width = delta_v / n_cells as f64;
    let quantum = delta * width;
    let j_max = (p_max * slope_grid as f64).round() as usize;

    // budgets within one quantum at or below L
    let b_hi = ((big_l / quantum) + 1e-9).floor() as usize;
    let b_lo = (((big_l / quantum) - 1.0 - 1e-9).ceil().max(0.0)) as usize;
    debug_assert!(b_hi <= n_cells * j_max);

    let costs: Vec<f64> = (0..=j_max).map(|j| integrand_g(j as f64 * delta)).collect();

    let mut dp = vec![f64::INFINITY; b_hi + 1];
    dp[0] = 0.0;
    let mut next = vec![f64::INFINITY; b_hi + 1];
    for cell in 1..=n_cells {
        next.fill(f64::INFINITY);
        // states outside [need, reach] can never complete the budget
        let reach = (cell * j_max).min(b_hi);
        let remaining = (n_cells - cell) * j_max;
        let need = b_lo.saturating_sub(remaining);
        for (j, &cost) in costs.iter().enumerate().take(reach + 1) {
            for b in need.max(j)..=reach {
                let prev = dp[b - j];
                if prev + cost < next[b] {
                    next[b] = prev + cost;
                }
            }
        }
        std::mem::swap(&mut dp, &mut next);
    }

    let best = dp[b_lo..=b_hi]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::NumericalFailure(
            "dynamic program found no feasible slope assignment".into(),
        ));
    }
    Ok(width * best)
}

/// Resistance of the oscillation family `w_m` on the natural range
/// `[0, pi/2]` for each index in `m_list`, by quadrature. The values
/// decrease toward zero as `m` grows, which is what rules out a minimizer
/// without the monotonicity constraint.
pub fn oscillation_infimum_demo(
    metric: &Metric,
    u0: f64,
    u1: f64,
    m_list: &[u32],
) -> Result<Vec<(u32, f64)>> {
    let mut out = Vec::with_capacity(m_list.len());
    for &m_index in m_list {
        let profile = Profile::oscillation(
            metric,
            u0,
            u1,
            m_index,
            (0.0, std::f64::consts::FRAC_PI_2),
        )?;
        let report = resistance::graph(&profile)?;
        out.push((m_index, report.value));
    }
    Ok(out)
}
