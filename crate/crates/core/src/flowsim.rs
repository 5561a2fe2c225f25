//! First-principles Monte-Carlo check of the resistance functional.
//!
//! Particles ride the flow `-du` toward a monotone obstacle profile, reflect
//! elastically off its metric-orthogonal normal, and deposit momentum along
//! the flow direction. Sampling the meridian coordinate uniformly is the
//! flux law itself: the conserved-mass density `rho ~ 1/f` cancels the
//! geometric width `f dv` of the intercepted flow tube, so each particle
//! carries equal weight.
//!
//! The generator is PCG-64 (`rand_pcg::Pcg64`), seeded per run and recorded
//! in the output; reductions are fixed-order pairwise sums keyed by particle
//! index, so a result is reproducible bit for bit from `(profile, n, seed)`.

use rand::Rng;
use rand::SeedableRng;
use rand_pcg::Pcg64;
use serde::Serialize;

use crate::curve::Profile;
use crate::error::{Error, Result};
use crate::metric::{GeodesicPoint, Metric};

/// Identifier of the random generator algorithm, recorded in results.
pub const RNG_ALGORITHM: &str = "pcg64";

/// Reflected velocities with radial component below this threshold are
/// flagged as potential single-impact violations; the margin absorbs
/// round-off on the exactly-grazing `u' = f` family.
const SIC_TOL: f64 = -1e-9;

/// A tangent vector in the coordinate frame, with components along
/// `Psi_u` and `Psi_v`; its squared length is `u^2 + v^2 f^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub u: f64,
    pub v: f64,
}

impl TangentVector {
    pub fn new(u: f64, v: f64) -> Self {
        TangentVector { u, v }
    }
}

/// Metric inner product of two frame vectors at radius `u`.
pub fn inner_product(metric: &Metric, u: f64, a: TangentVector, b: TangentVector) -> Result<f64> {
    let f = metric.warp(u)?;
    Ok(a.u * b.u + a.v * b.v * f * f)
}

/// Elastic reflection `v_f = v_i - 2 <v_i, N> N` against a unit normal.
/// The normal must be unit in the metric at the impact point to within
/// `1e-9`.
pub fn reflect(
    metric: &Metric,
    point: GeodesicPoint,
    v_i: TangentVector,
    normal: TangentVector,
) -> Result<TangentVector> {
    let n2 = inner_product(metric, point.u, normal, normal)?;
    if (n2 - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitNormal(n2));
    }
    let w = inner_product(metric, point.u, v_i, normal)?;
    Ok(TangentVector::new(
        v_i.u - 2.0 * w * normal.u,
        v_i.v - 2.0 * w * normal.v,
    ))
}

/// One recorded impact.
#[derive(Debug, Clone, Copy)]
pub struct ImpactSample {
    /// Meridian the particle traveled along.
    pub v_coord: f64,
    pub impact_point: GeodesicPoint,
    /// Outward unit normal at the impact, in frame components.
    pub normal: TangentVector,
    /// Momentum transferred along `-v_i`; lies in `[0, 2]`.
    pub transfer: f64,
}

/// Monte-Carlo estimate with its sampling error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimulationResult {
    pub estimate: f64,
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
    pub sic_violations: u64,
    pub rng: &'static str,
}

/// Fixed-order pairwise sum; the reduction tree depends only on indices.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 64 {
        let mut acc = 0.0;
        for &x in values {
            acc += x;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

fn transfers(profile: &Profile, n: u64, seed: u64) -> Result<(Vec<f64>, u64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one particle".into()));
    }
    if let Some((v, slope)) = profile.monotonicity_violation(256) {
        return Err(Error::NotMonotone { v, slope });
    }
    let metric = profile.metric();
    let (v0, v1) = profile.v_range();
    let span = v1 - v0;
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n as usize);
    let mut sic = 0u64;
    let incoming = TangentVector::new(-1.0, 0.0);
    for _ in 0..n {
        let v = v0 + span * rng.gen::<f64>();
        let u = profile.u_raw(v);
        let du = profile.du_raw(v);
        let f = metric.warp_raw(u);
        let speed = (du * du + f * f).sqrt();
        let normal = TangentVector::new(f / speed, -du / (f * speed));
        let point = GeodesicPoint::new(u, v);
        let reflected = reflect(metric, point, incoming, normal)?;
        // transfer = <v_f - v_i, -v_i>; with v_i = -Psi_u this is the jump
        // of the radial component
        let transfer = reflected.u - incoming.u;
        if reflected.u < SIC_TOL {
            sic += 1;
        }
        out.push(transfer);
    }
    Ok((out, sic))
}

fn summarize(
    profile: &Profile,
    transfers: &[f64],
    seed: u64,
    sic_violations: u64,
) -> SimulationResult {
    let n = transfers.len() as u64;
    let (v0, v1) = profile.v_range();
    let span = v1 - v0;
    let mean = pairwise_sum(transfers) / n as f64;
    let deviations: Vec<f64> = transfers.iter().map(|t| (t - mean) * (t - mean)).collect();
    let variance = if n > 1 {
        pairwise_sum(&deviations) / (n - 1) as f64
    } else {
        0.0
    };
    let scale = 0.5 * span;
    SimulationResult {
        estimate: scale * mean,
        std_error: scale * (variance / n as f64).sqrt(),
        n,
        seed,
        sic_violations,
        rng: RNG_ALGORITHM,
    }
}

/// Estimate the resistance of a monotone graph profile from `n` simulated
/// impacts. The estimate converges to the graph-quadrature value; the
/// reported error is the sample standard error.
pub fn simulate(profile: &Profile, n: u64, seed: u64) -> Result<SimulationResult> {
    let (transfers, sic) = transfers(profile, n, seed)?;
    Ok(summarize(profile, &transfers, seed, sic))
}

/// As [`simulate`], additionally returning every impact for export.
pub fn simulate_detailed(
    profile: &Profile,
    n: u64,
    seed: u64,
) -> Result<(SimulationResult, Vec<ImpactSample>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one particle".into()));
    }
    if let Some((v, slope)) = profile.monotonicity_violation(256) {
        return Err(Error::NotMonotone { v, slope });
    }
    let metric = profile.metric();
    let (v0, v1) = profile.v_range();
    let span = v1 - v0;
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n as usize);
    let mut values = Vec::with_capacity(n as usize);
    let mut sic = 0u64;
    let incoming = TangentVector::new(-1.0, 0.0);
    for _ in 0..n {
        let v = v0 + span * rng.gen::<f64>();
        let u = profile.u_raw(v);
        let du = profile.du_raw(v);
        let f = metric.warp_raw(u);
        let speed = (du * du + f * f).sqrt();
        let normal = TangentVector::new(f / speed, -du / (f * speed));
        let point = GeodesicPoint::new(u, v);
        let reflected = reflect(metric, point, incoming, normal)?;
        let transfer = reflected.u - incoming.u;
        if reflected.u < SIC_TOL {
            sic += 1;
        }
        samples.push(ImpactSample {
            v_coord: v,
            impact_point: point,
            normal,
            transfer,
        });
        values.push(transfer);
    }
    Ok((summarize(profile, &values, seed, sic), samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resistance;
    use rand::Rng;
    use std::f64::consts::PI;

    #[test]
    fn reflection_cases() {
        let m = Metric::plane();
        let p = GeodesicPoint::new(2.0, 0.0);
        // head-on: full reversal, transfer 2
        let vf = reflect(&m, p, TangentVector::new(-1.0, 0.0), TangentVector::new(1.0, 0.0))
            .unwrap();
        assert_eq!(vf, TangentVector::new(1.0, 0.0));
        // grazing: normal orthogonal to the velocity leaves it unchanged
        let f = m.warp(2.0).unwrap();
        let vf = reflect(
            &m,
            p,
            TangentVector::new(-1.0, 0.0),
            TangentVector::new(0.0, 1.0 / f),
        )
        .unwrap();
        assert_eq!(vf, TangentVector::new(-1.0, 0.0));
        // 45 degree incidence at f = 1: transfer = 2 cos^2(pi/4) = 1
        let m1 = Metric::sphere();
        let p1 = GeodesicPoint::new(0.0, 0.0);
        let n = TangentVector::new(1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt());
        let vf = reflect(&m1, p1, TangentVector::new(-1.0, 0.0), n).unwrap();
        let transfer = vf.u - (-1.0);
        assert!((transfer - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflect_rejects_non_unit_normal() {
        let m = Metric::plane();
        let p = GeodesicPoint::new(1.0, 0.0);
        let out = reflect(
            &m,
            p,
            TangentVector::new(-1.0, 0.0),
            TangentVector::new(1.1, 0.0),
        );
        assert!(matches!(out, Err(Error::NonUnitNormal(_))));
    }

    #[test]
    fn reflection_conserves_energy() {
        let m = Metric::hyperbolic();
        let mut rng = Pcg64::seed_from_u64(3);
        for _ in 0..200 {
            let u = rng.gen_range(0.3..2.0);
            let p = GeodesicPoint::new(u, 0.0);
            let f = m.warp(u).unwrap();
            let angle: f64 = rng.gen_range(0.0..PI);
            let normal = TangentVector::new(angle.cos(), angle.sin() / f);
            let v_i = TangentVector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let v_f = reflect(&m, p, v_i, normal).unwrap();
            let before = inner_product(&m, u, v_i, v_i).unwrap();
            let after = inner_product(&m, u, v_f, v_f).unwrap();
            assert!((before - after).abs() < 1e-12);
        }
    }

    #[test]
    fn two_route_transfer_identity() {
        // <v_f - v_i, -v_i> against 2 <v_i, N>^2 on random impact geometry
        let m = Metric::sphere();
        let mut rng = Pcg64::seed_from_u64(4);
        for _ in 0..200 {
            let u = rng.gen_range(-1.0..1.0);
            let p = GeodesicPoint::new(u, 0.0);
            let f = m.warp(u).unwrap();
            let slope: f64 = rng.gen_range(-2.0..2.0);
            let speed = (slope * slope + f * f).sqrt();
            let normal = TangentVector::new(f / speed, -slope / (f * speed));
            let v_i = TangentVector::new(-1.0, 0.0);
            let v_f = reflect(&m, p, v_i, normal).unwrap();
            let route_a = inner_product(
                &m,
                u,
                TangentVector::new(v_f.u - v_i.u, v_f.v - v_i.v),
                TangentVector::new(-v_i.u, -v_i.v),
            )
            .unwrap();
            let w = inner_product(&m, u, v_i, normal).unwrap();
            let route_b = 2.0 * w * w;
            assert!((route_a - route_b).abs() < 1e-12);
            assert!((0.0..=2.0 + 1e-12).contains(&route_a));
        }
    }

    #[test]
    fn parallel_profile_is_deterministic_full_transfer() {
        let m = Metric::plane();
        let p = Profile::parallel(&m, 2.0, (0.3, 1.8)).unwrap();
        let r = simulate(&p, 4000, 11).unwrap();
        assert_eq!(r.estimate, 1.5);
        assert_eq!(r.std_error, 0.0);
        assert_eq!(r.sic_violations, 0);
        assert_eq!(r.rng, "pcg64");
    }

    #[test]
    fn loxodrome_estimate_matches_quadrature() {
        let m = Metric::plane();
        let a = GeodesicPoint::new(1.0, 0.0);
        let b = GeodesicPoint::new(2.0, 1.5);
        let p = Profile::loxodrome(&m, a, b).unwrap();
        let exact = resistance::graph(&p).unwrap().value;
        let r = simulate(&p, 200_000, 99).unwrap();
        assert!(r.std_error < 1e-3);
        assert!(
            (r.estimate - exact).abs() < 3.0 * r.std_error + 1e-9,
            "estimate {} vs {exact} (se {})",
            r.estimate,
            r.std_error
        );
        assert_eq!(r.sic_violations, 0);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        // a loxodrome has constant transfer, so use a truncated profile
        // where the estimate genuinely depends on the sampled meridians
        let m = Metric::sphere();
        let a = GeodesicPoint::new(-0.5, 0.0);
        let b = GeodesicPoint::new(0.5, 2.0);
        let p = Profile::truncated_loxodrome(&m, a, b, 1.1).unwrap();
        let r1 = simulate(&p, 20_000, 7).unwrap();
        let r2 = simulate(&p, 20_000, 7).unwrap();
        assert_eq!(r1.estimate.to_bits(), r2.estimate.to_bits());
        assert_eq!(r1.std_error.to_bits(), r2.std_error.to_bits());
        let r3 = simulate(&p, 20_000, 8).unwrap();
        assert_ne!(r1.estimate.to_bits(), r3.estimate.to_bits());
    }

    #[test]
    fn unbiased_over_seeds() {
        let m = Metric::plane();
        let a = GeodesicPoint::new(1.0, 0.0);
        let b = GeodesicPoint::new(2.0, 2.0);
        let p = Profile::truncated_loxodrome(&m, a, b, std::f64::consts::LN_2).unwrap();
        let exact = resistance::graph(&p).unwrap().value;
        let mut estimates = Vec::new();
        let mut se2 = 0.0;
        for seed in 0..20u64 {
            let r = simulate(&p, 30_000, seed).unwrap();
            estimates.push(r.estimate);
            se2 += r.std_error * r.std_error;
        }
        let mean = pairwise_sum(&estimates) / estimates.len() as f64;
        let pooled = se2.sqrt() / estimates.len() as f64;
        assert!(
            (mean - exact).abs() < 4.0 * pooled,
            "mean {mean} vs {exact} (pooled {pooled})"
        );
    }

    #[test]
    fn rejects_non_monotone_profile() {
        let a = GeodesicPoint::new(1.0, 0.0);
        let b = GeodesicPoint::new(2.0, std::f64::consts::FRAC_PI_2);
        let p = Profile::plane_segment(a, b).unwrap();
        assert!(matches!(
            simulate(&p, 100, 0),
            Err(Error::NotMonotone { .. })
        ));
    }

    #[test]
    fn steep_profile_flags_sic() {
        // slopes above u' = f reflect particles back toward smaller radii
        let m = Metric::plane();
        let a = GeodesicPoint::new(1.0, 0.0);
        let p = Profile::loxodrome_from_slope(&m, a, 2.0, (0.0, 0.5)).unwrap();
        let r = simulate(&p, 1000, 5).unwrap();
        assert_eq!(r.sic_violations, 1000);
    }

    #[test]
    fn detailed_samples_are_consistent() {
        let m = Metric::plane();
        let a = GeodesicPoint::new(1.0, 0.0);
        let b = GeodesicPoint::new(2.0, 1.0);
        let p = Profile::loxodrome(&m, a, b).unwrap();
        let (summary, samples) = simulate_detailed(&p, 512, 21).unwrap();
        assert_eq!(samples.len(), 512);
        let twin = simulate(&p, 512, 21).unwrap();
        assert_eq!(summary.estimate.to_bits(), twin.estimate.to_bits());
        for s in &samples {
            assert!((0.0..=2.0).contains(&s.transfer));
            let n2 = inner_product(&m, s.impact_point.u, s.normal, s.normal).unwrap();
            assert!((n2 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn result_serializes_with_rng_tag() {
        let m = Metric::plane();
        let p = Profile::parallel(&m, 1.0, (0.0, 1.0)).unwrap();
        let r = simulate(&p, 10, 3).unwrap();
        let json = serde_json::to_value(r).unwrap();
        assert_eq!(json["rng"], "pcg64");
        assert_eq!(json["n"], 10);
        assert_eq!(json["seed"], 3);
        assert!(json["estimate"].as_f64().is_some());
        assert!(json["std_error"].as_f64().is_some());
        assert!(json["sic_violations"].as_u64().is_some());
    }
}
