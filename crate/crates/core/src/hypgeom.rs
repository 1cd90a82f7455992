//! Geometry on the hyperbolic disc `D_R` in the native representation, where
//! a point's hyperbolic distance from the origin equals its polar radius.
//!
//! Distances are evaluated through the hyperbolic law of cosines rearranged
//! into a cancellation-free form,
//!
//! ```text
//! cosh(ζ d) = cosh(ζ (r_u − r_v)) + 2 sinh(ζ r_u) sinh(ζ r_v) sin²(θ/2),
//! ```
//!
//! with all terms nonnegative. When `ζ r` exceeds [`LOG_DOMAIN_SWITCH`] the
//! same expression is evaluated in the log domain so that products of cosh
//! and sinh cannot overflow.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Above this value of `ζ r` the distance kernel switches to log-domain
/// evaluation (`cosh(ζ R)` overflows an f64 near `ζ R ≈ 710`).
pub const LOG_DOMAIN_SWITCH: f64 = 30.0;

/// Default margin `c₀` in the precondition of the angular adjacency window.
/// Pruning stays exact regardless of this value because every candidate pair
/// is re-checked with the exact distance.
pub const DEFAULT_WINDOW_MARGIN: f64 = 10.0;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("relative angle {theta} is not ≫ the critical angle {critical}; the closed-form distance approximation is unreliable here")]
    ApproxDomain { theta: f64, critical: f64 },
    #[error("angular window unavailable: t_u + t_v = {sum} exceeds (1−|δ|)R − c₀ = {limit}")]
    WindowUnavailable { sum: f64, limit: f64 },
}

/// A sampled point of `D_R`: radius `r`, angle `theta ∈ (0, 2π]`, and type
/// `t = R − r`. Large type means close to the centre and high expected degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarVertex {
    pub r: f64,
    pub theta: f64,
    pub t: f64,
}

impl PolarVertex {
    /// Builds a vertex on the disc of radius `radius`, checking
    /// `0 ≤ r ≤ radius` and `0 < theta ≤ 2π`; the type is `radius − r`.
    pub fn new(r: f64, theta: f64, radius: f64) -> Result<Self, GeomError> {
        if !(0.0..=radius).contains(&r) {
            return Err(GeomError::InvalidParameters(format!(
                "radius {r} outside [0, {radius}]"
            )));
        }
        if !(theta > 0.0 && theta <= 2.0 * PI) {
            return Err(GeomError::InvalidParameters(format!(
                "angle {theta} outside (0, 2π]"
            )));
        }
        Ok(Self {
            r,
            theta,
            t: radius - r,
        })
    }
}

/// Full specification of the random graph `G(N; ζ, α, β, ν)`.
///
/// The disc radius is derived so that `N = ν e^{ζR/2}` holds to machine
/// precision. The complex-network regime additionally wants `0 < ζ/α < 2`,
/// but that is a precondition of the theory operations, not of this type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub zeta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub n: usize,
    pub radius: f64,
}

impl ModelParams {
    pub fn new(n: usize, zeta: f64, alpha: f64, beta: f64, nu: f64) -> Result<Self, GeomError> {
        if !(alpha > 0.0) || !(beta > 0.0) {
            return Err(GeomError::InvalidParameters(format!(
                "alpha and beta must be positive, got alpha={alpha}, beta={beta}"
            )));
        }
        let radius = radius_from_count(n, nu, zeta)?;
        Ok(Self {
            zeta,
            alpha,
            beta,
            nu,
            n,
            radius,
        })
    }

    /// `ζ/α`, the ratio that controls the degree-tail exponent `2α/ζ + 1`.
    pub fn ratio(&self) -> f64 {
        self.zeta / self.alpha
    }
}

/// Disc radius `R = (2/ζ) ln(n/ν)`, the inverse of `n = ν e^{ζR/2}`.
pub fn radius_from_count(n: usize, nu: f64, zeta: f64) -> Result<f64, GeomError> {
    if n < 1 || !(nu > 0.0) || !(zeta > 0.0) {
        return Err(GeomError::InvalidParameters(format!(
            "need n ≥ 1, nu > 0, zeta > 0; got n={n}, nu={nu}, zeta={zeta}"
        )));
    }
    if (n as f64) < nu {
        return Err(GeomError::InvalidParameters(format!(
            "n = {n} < nu = {nu} would give a negative radius"
        )));
    }
    Ok(2.0 / zeta * (n as f64 / nu).ln())
}

/// Relative angle `min(|a−b|, 2π−|a−b|) ∈ [0, π]`.
#[inline]
pub fn relative_angle(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    let d = d % (2.0 * PI);
    d.min(2.0 * PI - d)
}

#[inline]
fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

#[inline]
fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    // ln sinh 0 = -inf is the correct absorbing value below.
    x + (-(-2.0 * x).exp_m1()).ln() - std::f64::consts::LN_2
}

#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `acosh(q)` given `ln q`, stable for arbitrarily large `q`.
#[inline]
fn acosh_from_ln(ln_q: f64) -> f64 {
    if ln_q <= 0.0 {
        return 0.0;
    }
    ln_q + (1.0 + (-(-2.0 * ln_q).exp_m1()).sqrt()).ln()
}

fn distance_direct(a: f64, b: f64, sin_half: f64) -> f64 {
    let q = (a - b).cosh() + 2.0 * a.sinh() * b.sinh() * sin_half * sin_half;
    q.max(1.0).acosh()
}

fn distance_log(a: f64, b: f64, sin_half: f64) -> f64 {
    let cross = if sin_half > 0.0 && a > 0.0 && b > 0.0 {
        std::f64::consts::LN_2 + ln_sinh(a) + ln_sinh(b) + 2.0 * sin_half.ln()
    } else {
        f64::NEG_INFINITY
    };
    acosh_from_ln(log_add_exp(ln_cosh(a - b), cross))
}

/// Hyperbolic distance between points given as `(r, relative angle)`; the
/// workhorse behind [`hyperbolic_distance`].
pub fn distance_polar(r_u: f64, r_v: f64, theta: f64, zeta: f64) -> f64 {
    let a = zeta * r_u;
    let b = zeta * r_v;
    let s = (0.5 * theta).sin();
    if a.max(b) <= LOG_DOMAIN_SWITCH {
        distance_direct(a, b, s) / zeta
    } else {
        distance_log(a, b, s) / zeta
    }
}

/// Hyperbolic distance `d(u, v)` solving the law of cosines
/// `cosh(ζd) = cosh(ζr_u)cosh(ζr_v) − sinh(ζr_u)sinh(ζr_v)cos(θ)`.
///
/// Symmetric, zero on the diagonal, and safe against overflow for `ζ r`
/// far beyond the disc radii used at desk scale.
pub fn hyperbolic_distance(u: &PolarVertex, v: &PolarVertex, zeta: f64) -> f64 {
    distance_polar(u.r, v.r, relative_angle(u.theta, v.theta), zeta)
}

/// Critical angle `θ̄ = (e^{−2ζ(R−t_u)} + e^{−2ζ(R−t_v)})^{1/2}` below which
/// the closed-form distance approximation degrades.
pub fn critical_angle(t_u: f64, t_v: f64, radius: f64, zeta: f64) -> f64 {
    f64::hypot((-zeta * (radius - t_u)).exp(), (-zeta * (radius - t_v)).exp())
}

/// Closed-form distance `2R − (t_u + t_v) + (2/ζ) ln sin(θ/2)`, valid when
/// the relative angle dominates the critical angle; the neglected term is of
/// order `(θ̄/θ)²`.
pub fn distance_approx(
    t_u: f64,
    t_v: f64,
    theta: f64,
    radius: f64,
    zeta: f64,
) -> Result<f64, GeomError> {
    let critical = critical_angle(t_u, t_v, radius, zeta);
    if theta <= critical {
        return Err(GeomError::ApproxDomain { theta, critical });
    }
    Ok(2.0 * radius - (t_u + t_v) + 2.0 / zeta * (0.5 * theta).sin().ln())
}

/// Angular adjacency window for the threshold `(1+δ)R`: relative angles below
/// `θ_lo` guarantee `d < (1+δ)R` and angles above `θ_hi` guarantee
/// `d > (1+δ)R`, for `N` beyond the (non-constructive) size where the bound
/// kicks in. Used only as a pruning heuristic followed by an exact check.
///
/// Requires `t_u + t_v < (1−|δ|)R − c₀`.
pub fn disc_angle_window(
    t_u: f64,
    t_v: f64,
    radius: f64,
    zeta: f64,
    delta: f64,
    eps: f64,
    c0: f64,
) -> Result<(f64, f64), GeomError> {
    let limit = (1.0 - delta.abs()) * radius - c0;
    let sum = t_u + t_v;
    if sum >= limit {
        return Err(GeomError::WindowUnavailable { sum, limit });
    }
    let base = 2.0 * ((0.5 * zeta) * (sum - (1.0 - delta) * radius)).exp();
    Ok(((1.0 - eps) * base, (1.0 + eps) * base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn vertex(r: f64, theta: f64, radius: f64) -> PolarVertex {
        PolarVertex::new(r, theta, radius).unwrap()
    }

    #[test]
    fn radius_from_count_examples() {
        // n = ν gives R = 0
        assert_eq!(radius_from_count(5, 5.0, 1.3).unwrap(), 0.0);
        // n = e^10, ν = 1, ζ = 2 gives R = 10
        let n = (10.0f64).exp().round() as usize; // 22026, ln(22026) = 10.000000...
        let r = radius_from_count(n, 1.0, 2.0).unwrap();
        assert_relative_eq!(r, (n as f64).ln(), epsilon = 1e-12);
        // frozen from a 30-digit arithmetic oracle: 2 ln(20000/1.5)
        let r = radius_from_count(20_000, 1.5, 1.0).unwrap();
        assert_relative_eq!(r, 18.996_044_888_855_927, epsilon = 1e-14);
        // round trip n = ν e^{ζR/2} within relative 1e−12
        let params = ModelParams::new(20_000, 1.0, 1.2, 2.0, 1.5).unwrap();
        let back = params.nu * (params.zeta * params.radius / 2.0).exp();
        assert_relative_eq!(back, 20_000.0, max_relative = 1e-12);
    }

    #[test]
    fn radius_from_count_rejects_small_n() {
        assert!(matches!(
            radius_from_count(1, 2.0, 1.0),
            Err(GeomError::InvalidParameters(_))
        ));
    }

    #[test]
    fn distance_collinear_cases() {
        let radius = 20.0;
        let u = vertex(7.0, 1.0, radius);
        let v_same = vertex(3.0, 1.0, radius);
        assert_abs_diff_eq!(hyperbolic_distance(&u, &v_same, 1.0), 4.0, epsilon = 1e-12);
        let v_opp = vertex(3.0, 1.0 + PI, radius);
        assert_abs_diff_eq!(hyperbolic_distance(&u, &v_opp, 1.0), 10.0, epsilon = 1e-9);
        // distance from the origin equals the radius of the other point
        let origin = vertex(0.0, 2.0, radius);
        let w = vertex(13.5, 5.1, radius);
        assert_abs_diff_eq!(hyperbolic_distance(&origin, &w, 1.0), 13.5, epsilon = 1e-12);
        assert_eq!(hyperbolic_distance(&u, &u, 1.0), 0.0);
    }

    #[test]
    fn distance_log_domain_matches_direct() {
        // both paths are valid for ζr in [5, 300]; they must agree closely
        for i in 0..2000u64 {
            let h = rng::key3(9, i, 0x11);
            let a = 5.0 + 295.0 * rng::unit_from(h);
            let b = 5.0 + 295.0 * rng::unit_from(rng::mix64(h));
            let s = (0.5 * PI * rng::unit_from(rng::mix64(h ^ 1))).sin();
            let direct = distance_direct(a, b, s);
            let log = distance_log(a, b, s);
            assert_relative_eq!(direct, log, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn distance_log_domain_exact_cases() {
        // deep in the log-domain regime, collinear distances stay exact
        let radius = 200.0;
        let u = vertex(180.0, 1.0, radius);
        let v = vertex(120.0, 1.0 + PI, radius);
        assert_relative_eq!(hyperbolic_distance(&u, &v, 1.0), 300.0, epsilon = 1e-9);
        let w = vertex(120.0, 1.0, radius);
        assert_relative_eq!(hyperbolic_distance(&u, &w, 1.0), 60.0, epsilon = 1e-9);
        // and the closed-form approximation agrees where it is valid
        let x = vertex(radius, 1.0, radius);
        let y = vertex(radius, 1.0 + 1e-3, radius);
        let exact = hyperbolic_distance(&x, &y, 1.0);
        let approx = distance_approx(0.0, 0.0, 1e-3, radius, 1.0).unwrap();
        assert_relative_eq!(exact, approx, max_relative = 1e-10);
    }

    #[test]
    fn distance_is_a_metric_on_samples() {
        let radius = 20.0;
        let zeta = 1.0;
        let mk = |i: u64| {
            let r = radius * rng::unit(3, i, 0x21);
            let th = 2.0 * PI * (1.0 - rng::unit(3, i, 0x22));
            vertex(r, th, radius)
        };
        for i in 0..10_000u64 {
            let (u, v, w) = (mk(3 * i), mk(3 * i + 1), mk(3 * i + 2));
            let duv = hyperbolic_distance(&u, &v, zeta);
            let dvu = hyperbolic_distance(&v, &u, zeta);
            assert_eq!(duv, dvu);
            let duw = hyperbolic_distance(&u, &w, zeta);
            let dwv = hyperbolic_distance(&w, &v, zeta);
            assert!(duv <= duw + dwv + 1e-9, "triangle inequality violated");
        }
    }

    #[test]
    fn critical_angle_examples() {
        assert_relative_eq!(
            critical_angle(20.0, 20.0, 20.0, 1.0),
            2f64.sqrt(),
            epsilon = 1e-15
        );
        // frozen from the arithmetic oracle: sqrt(2 e^{-40})
        assert_relative_eq!(
            critical_angle(0.0, 0.0, 20.0, 1.0),
            2.914_911_406_987_042e-9,
            max_relative = 1e-12
        );
        for i in 0..100u64 {
            let a = 20.0 * rng::unit(4, i, 1);
            let b = 20.0 * rng::unit(4, i, 2);
            assert_eq!(
                critical_angle(a, b, 20.0, 1.0),
                critical_angle(b, a, 20.0, 1.0)
            );
        }
    }

    #[test]
    fn approx_matches_exact_far_from_critical_angle() {
        let radius = 20.0;
        let zeta = 1.0;
        // t_u = t_v = 0, θ = 2 e^{-ζR/2}: approximation lands near R
        let theta = 2.0 * f64::exp(-(zeta * radius) / 2.0);
        let approx = distance_approx(0.0, 0.0, theta, radius, zeta).unwrap();
        let exact = distance_polar(radius, radius, theta, zeta);
        assert!((approx - exact).abs() < 1e-3, "approx {approx} vs {exact}");
        assert!((approx - radius).abs() < 1e-3);

        // θ = π: exactly 2R − (t_u + t_v)
        let d = distance_approx(1.5, 2.5, PI, radius, zeta).unwrap();
        assert_relative_eq!(d, 2.0 * radius - 4.0, epsilon = 1e-12);

        // random sweep: t_u, t_v < R/2 − ω, θ ≥ 100 θ̄ → |approx − exact| ≤ 1e−2
        let omega = 1.0;
        let mut worst: f64 = 0.0;
        for i in 0..1000u64 {
            let t_u = (radius / 2.0 - omega) * rng::unit(11, i, 1);
            let t_v = (radius / 2.0 - omega) * rng::unit(11, i, 2);
            let crit = critical_angle(t_u, t_v, radius, zeta);
            let theta = (100.0 * crit) + (PI - 100.0 * crit) * rng::unit(11, i, 3);
            let approx = distance_approx(t_u, t_v, theta, radius, zeta).unwrap();
            let exact = distance_polar(radius - t_u, radius - t_v, theta, zeta);
            worst = worst.max((approx - exact).abs());
        }
        assert!(worst <= 1e-2, "worst deviation {worst}");
    }

    #[test]
    fn approx_error_shrinks_with_angle_ratio() {
        let radius = 24.0;
        let zeta = 1.0;
        let median_err = |ratio: f64| {
            let mut errs: Vec<f64> = (0..500u64)
                .map(|i| {
                    let t_u = 5.0 * rng::unit(13, i, 1);
                    let t_v = 5.0 * rng::unit(13, i, 2);
                    let theta = ratio * critical_angle(t_u, t_v, radius, zeta);
                    let approx = distance_approx(t_u, t_v, theta, radius, zeta).unwrap();
                    let exact = distance_polar(radius - t_u, radius - t_v, theta, zeta);
                    (approx - exact).abs()
                })
                .collect();
            errs.sort_unstable_by(f64::total_cmp);
            errs[errs.len() / 2]
        };
        assert!(median_err(100.0) > median_err(10_000.0));
    }

    #[test]
    fn approx_domain_error() {
        let err = distance_approx(19.0, 19.0, 1e-3, 20.0, 1.0);
        assert!(matches!(err, Err(GeomError::ApproxDomain { .. })));
    }

    #[test]
    fn window_collapse_and_monotonicity() {
        let (lo, hi) = disc_angle_window(1.0, 2.0, 20.0, 1.0, 0.0, 0.0, 10.0).unwrap();
        assert_eq!(lo, hi);
        assert_relative_eq!(lo, 2.0 * f64::exp(0.5 * (3.0 - 20.0)), epsilon = 1e-15);
        // θ_hi strictly increasing in t_u
        let mut prev = 0.0;
        for k in 0..8 {
            let t_u = k as f64 * 0.5;
            let (_, hi) = disc_angle_window(t_u, 1.0, 20.0, 1.0, 0.0, 0.1, 10.0).unwrap();
            assert!(hi > prev);
            prev = hi;
        }
        assert!(matches!(
            disc_angle_window(6.0, 5.0, 20.0, 1.0, 0.0, 0.1, 10.0),
            Err(GeomError::WindowUnavailable { .. })
        ));
    }

    #[test]
    fn window_soundness_sweep() {
        // ζ=1, R=20, δ=0, ε=0.1: no pair below θ_lo at distance > R and no
        // pair above θ_hi at distance < R, over 10⁴ admissible pairs.
        let radius = 20.0;
        let zeta = 1.0;
        let mut failures = 0u32;
        let mut checked = 0u32;
        for i in 0..40_000u64 {
            let t_u = 10.0 * rng::unit(17, i, 1);
            let t_v = 10.0 * rng::unit(17, i, 2);
            let Ok((lo, hi)) = disc_angle_window(t_u, t_v, radius, zeta, 0.0, 0.1, 10.0) else {
                continue;
            };
            if checked >= 10_000 {
                break;
            }
            checked += 1;
            let theta = PI * rng::unit(17, i, 3);
            let d = distance_polar(radius - t_u, radius - t_v, theta, zeta);
            if theta < lo && d > radius {
                failures += 1;
            }
            if theta > hi && d < radius {
                failures += 1;
            }
        }
        assert!(checked >= 10_000);
        assert_eq!(failures, 0);
    }
}
