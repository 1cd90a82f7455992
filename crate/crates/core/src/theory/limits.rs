//! Numerical evaluation of the clustering limit formulas.
//!
//! The inner 2-D integral
//!
//! ```text
//! G(c₁, c₂) = ∬_{[0,∞)²} dz₁ dz₂ / [(z₁^β + 1)(z₂^β + 1)((c₁z₁ + c₂z₂)^β + 1)]
//! ```
//!
//! depends on the vertex types only through the ratios
//! `c₁ = e^{(ζ/2)(t_w − t_v)}`, `c₂ = e^{(ζ/2)(t_w − t_u)}`, so the 5-D
//! numerators of the limits factor through it. `limit_L_restricted` and
//! `limit_L_infinity` evaluate `ln G` on a uniform grid in
//! `(ln c₁, ln c₂)`, interpolate bicubically, and run nested adaptive
//! quadrature over the type cube against the table, halving the grid spacing
//! until the result is stable within the requested tolerance.

use super::quad::{integrate, integrate_half_line_decay, EvalCounter, QuadConfig, QuadError, QuadOutcome};
use super::{c_beta, TheoryError};
use crate::par::map_range;
use serde::Serialize;

/// A quadrature result: the value, an error estimate, and the configuration
/// and work statistics that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct LimitValue {
    pub value: f64,
    pub err_estimate: f64,
    pub config: QuadConfig,
    pub evaluations: u64,
    pub panels: u64,
}

impl LimitValue {
    fn from_outcome(o: QuadOutcome, cfg: &QuadConfig) -> Self {
        Self {
            value: o.value,
            err_estimate: o.err_estimate,
            config: *cfg,
            evaluations: o.evaluations,
            panels: o.panels,
        }
    }
}

fn quad_failure(context: &str, err: QuadError) -> TheoryError {
    match err {
        QuadError::ToleranceUnreachable { partial, err_estimate } => TheoryError::Quadrature {
            context: context.to_string(),
            partial,
            err_estimate,
        },
        QuadError::Domain(msg) => TheoryError::Domain(format!("{context}: {msg}")),
    }
}

/// Sanity anchor for the compactified half-line quadrature:
/// `∫₀^∞ dz/(1 + z^β)`, which equals `π/(β sin(π/β)) = (π/2)·C_β` for β > 1.
pub fn one_over_one_plus_pow_integral(beta: f64, cfg: &QuadConfig) -> Result<LimitValue, TheoryError> {
    if !(beta > 1.0) {
        return Err(TheoryError::Domain(format!(
            "integral of 1/(1+z^beta) diverges for beta = {beta} ≤ 1"
        )));
    }
    let out = integrate_half_line_decay(|z| 1.0 / (1.0 + z.powf(beta)), beta, cfg)
        .map_err(|e| quad_failure("one_over_one_plus_pow_integral", e))?;
    Ok(LimitValue::from_outcome(out, cfg))
}

/// `x^β` with fast paths for the small integer exponents that dominate use.
#[inline]
fn pow_beta(x: f64, beta: f64) -> f64 {
    if beta == 2.0 {
        x * x
    } else if beta == 3.0 {
        x * x * x
    } else {
        x.powf(beta)
    }
}

fn g_integrand_factor(z: f64, beta: f64) -> f64 {
    1.0 / (pow_beta(z, beta) + 1.0)
}

fn g_integral_raw(c1: f64, c2: f64, beta: f64, cfg: &QuadConfig) -> Result<QuadOutcome, QuadError> {
    let inner_cfg = cfg.with_rel_tol(cfg.rel_tol * 0.1);
    let evals = EvalCounter::default();
    // both axes see a z^{−2β} tail: one factor from 1/(z^β+1), one from the
    // coupled third factor
    let outer = integrate_half_line_decay(
        |z1| {
            let f1 = g_integrand_factor(z1, beta);
            let inner = integrate_half_line_decay(
                |z2| g_integrand_factor(z2, beta) / (pow_beta(c1 * z1 + c2 * z2, beta) + 1.0),
                2.0 * beta,
                &inner_cfg,
            )
            .map(|o| {
                evals.add(o.evaluations);
                o.value
            })
            .unwrap_or(f64::NAN);
            f1 * inner
        },
        2.0 * beta,
        cfg,
    )?;
    Ok(QuadOutcome {
        evaluations: outer.evaluations + evals.get(),
        ..outer
    })
}

/// The 2-D integral `G(c₁, c₂)` for β > 1. Symmetric in its arguments by
/// the substitution z₁ ↔ z₂; evaluated with canonical argument order so the
/// symmetry is exact.
pub fn g_integral(c1: f64, c2: f64, beta: f64, cfg: &QuadConfig) -> Result<LimitValue, TheoryError> {
    if !(beta > 1.0) {
        return Err(TheoryError::Domain(format!(
            "G diverges for beta = {beta} ≤ 1 (integrand tail is z^(-2β))"
        )));
    }
    if !(c1 > 0.0) || !(c2 > 0.0) {
        return Err(TheoryError::Domain(format!(
            "G needs positive ratios, got c1 = {c1}, c2 = {c2}"
        )));
    }
    let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
    let out = g_integral_raw(lo, hi, beta, cfg).map_err(|e| quad_failure("g_integral", e))?;
    Ok(LimitValue::from_outcome(out, cfg))
}

/// Uniform grid over `(ln c₁, ln c₂) ∈ [−lc_max, lc_max]²` holding `ln G`.
struct GTable {
    lc_max: f64,
    h: f64,
    m: usize,
    log_g: Vec<f64>,
    evaluations: u64,
}

impl GTable {
    /// Builds an `m × m` grid; when `prev` is the same table at twice the
    /// spacing (`m = 2·prev.m − 1`), its values are reused at even indices.
    fn build(
        beta: f64,
        lc_max: f64,
        m: usize,
        cfg: &QuadConfig,
        prev: Option<&GTable>,
    ) -> Result<GTable, TheoryError> {
        let h = 2.0 * lc_max / (m - 1) as f64;
        let cell_cfg = cfg.with_rel_tol((cfg.rel_tol * 3e-2).clamp(1e-9, 3e-6));
        let reuse = prev.filter(|p| p.lc_max == lc_max && p.m * 2 - 1 == m);
        // symmetric: only the lower triangle in (i, j) is integrated
        let rows = map_range(m, true, |i| {
            let lc1 = -lc_max + i as f64 * h;
            let mut row = Vec::with_capacity(i + 1);
            for j in 0..=i {
                if let Some(p) = reuse {
                    if i % 2 == 0 && j % 2 == 0 {
                        row.push(Ok((p.log_g[(i / 2) * p.m + j / 2], 0)));
                        continue;
                    }
                }
                let lc2 = -lc_max + j as f64 * h;
                let out = g_integral_raw(lc2.exp(), lc1.exp(), beta, &cell_cfg)
                    .map(|o| (o.value.ln(), o.evaluations));
                row.push(out);
            }
            row
        });
        let mut log_g = vec![0.0; m * m];
        let mut evaluations = 0u64;
        for (i, row) in rows.into_iter().enumerate() {
            for (j, cell) in row.into_iter().enumerate() {
                let (v, ev) = cell.map_err(|e| quad_failure("G table cell", e))?;
                log_g[i * m + j] = v;
                log_g[j * m + i] = v;
                evaluations += ev;
            }
        }
        Ok(GTable {
            lc_max,
            h,
            m,
            log_g,
            evaluations,
        })
    }

    /// Catmull–Rom weights for the fractional position `f ∈ [0, 1]`.
    #[inline]
    fn cr_weights(f: f64) -> [f64; 4] {
        let f2 = f * f;
        let f3 = f2 * f;
        [
            0.5 * (-f3 + 2.0 * f2 - f),
            0.5 * (3.0 * f3 - 5.0 * f2 + 2.0),
            0.5 * (-3.0 * f3 + 4.0 * f2 + f),
            0.5 * (f3 - f2),
        ]
    }

    /// Bicubic interpolation of `ln G`; coordinates outside the grid clamp
    /// to the edge (used only where the integrand weight is negligible).
    fn eval_log(&self, lc1: f64, lc2: f64) -> f64 {
        let m = self.m;
        let pos = |lc: f64| -> (usize, f64) {
            let x = ((lc + self.lc_max) / self.h).clamp(0.0, (m - 1) as f64);
            let i = (x as usize).min(m - 2);
            (i, x - i as f64)
        };
        let (i, fx) = pos(lc1);
        let (j, fy) = pos(lc2);
        let wx = Self::cr_weights(fx);
        let wy = Self::cr_weights(fy);
        let idx = |k: isize| -> usize { k.clamp(0, m as isize - 1) as usize };
        let mut acc = 0.0;
        for (a, &wxa) in wx.iter().enumerate() {
            let ia = idx(i as isize + a as isize - 1);
            let mut row = 0.0;
            for (b, &wyb) in wy.iter().enumerate() {
                let jb = idx(j as isize + b as isize - 1);
                row += wyb * self.log_g[ia * m + jb];
            }
            acc += wxa * row;
        }
        acc
    }
}

/// `∫₀^t e^{rate·s} ds`, stably.
fn exp_integral(rate: f64, t: f64) -> f64 {
    if rate.abs() < 1e-14 {
        t
    } else {
        (rate * t).exp_m1() / rate
    }
}

/// Closed-form denominator `∫_{[0,t)³} e^{(ζ/2)(t_u+t_v)+ζt_w} e^{−α Σt}`:
/// a product of three one-dimensional exponential integrals.
fn den_closed(t: f64, zeta: f64, alpha: f64) -> f64 {
    let i_uv = exp_integral(0.5 * zeta - alpha, t);
    let i_w = exp_integral(zeta - alpha, t);
    i_uv * i_uv * i_w
}

/// Nested 3-D quadrature of the numerator over `[0, t_hi)³` against a table.
fn num3d(
    t_hi: f64,
    zeta: f64,
    alpha: f64,
    table: &GTable,
    cfg: &QuadConfig,
) -> Result<QuadOutcome, QuadError> {
    let outer_cfg = *cfg;
    let mid_cfg = cfg.with_rel_tol(cfg.rel_tol * 0.2);
    let inner_cfg = cfg.with_rel_tol(cfg.rel_tol * 0.04);
    let k_uv = 0.5 * zeta - alpha;
    let k_w = zeta - alpha;
    let evals = EvalCounter::default();
    let outer = integrate(
        |t_w| {
            let mid = integrate(
                |t_u| {
                    let lc2 = 0.5 * zeta * (t_w - t_u);
                    let inner = integrate(
                        |t_v| {
                            let lc1 = 0.5 * zeta * (t_w - t_v);
                            (k_uv * t_v).exp() * table.eval_log(lc1, lc2).exp()
                        },
                        0.0,
                        t_hi,
                        &inner_cfg,
                    )
                    .map(|o| {
                        evals.add(o.evaluations);
                        o.value
                    })
                    .unwrap_or(f64::NAN);
                    (k_uv * t_u).exp() * inner
                },
                0.0,
                t_hi,
                &mid_cfg,
            )
            .map(|o| {
                evals.add(o.evaluations);
                o.value
            })
            .unwrap_or(f64::NAN);
            (k_w * t_w).exp() * mid
        },
        0.0,
        t_hi,
        &outer_cfg,
    )?;
    Ok(QuadOutcome {
        evaluations: outer.evaluations + evals.get(),
        ..outer
    })
}

/// Grid-refined numerator: halves the table spacing until the value is
/// stable within `cfg.rel_tol`, returning `(value, delta, outcome)`.
fn refined_num(
    t_hi: f64,
    lc_max: f64,
    beta: f64,
    zeta: f64,
    alpha: f64,
    cfg: &QuadConfig,
) -> Result<(f64, f64, QuadOutcome), TheoryError> {
    // initial grid: spacing ≤ 0.5 in ln c, at least 9 points, odd count so
    // each refinement lands on the previous nodes
    let mut m = ((2.0 * lc_max / 0.5).ceil() as usize + 1).max(9);
    if m % 2 == 0 {
        m += 1;
    }
    let mut prev_table: Option<GTable> = None;
    let mut prev_value: Option<f64> = None;
    let mut total_evals = 0u64;
    for _ in 0..5 {
        let table = GTable::build(beta, lc_max, m, cfg, prev_table.as_ref())?;
        total_evals += table.evaluations;
        let out = num3d(t_hi, zeta, alpha, &table, cfg)
            .map_err(|e| quad_failure("limit numerator", e))?;
        total_evals += out.evaluations;
        if let Some(p) = prev_value {
            let delta = (out.value - p).abs();
            if delta <= cfg.rel_tol * out.value.abs() {
                let merged = QuadOutcome {
                    evaluations: total_evals,
                    ..out
                };
                return Ok((out.value, delta, merged));
            }
        }
        prev_value = Some(out.value);
        prev_table = Some(table);
        m = 2 * m - 1;
    }
    Err(TheoryError::Quadrature {
        context: "G-table refinement did not stabilize".into(),
        partial: prev_value.unwrap_or(f64::NAN),
        err_estimate: f64::NAN,
    })
}

/// Numerator over `[0, t_full)³` (`t_full = None` meaning `∞`) with the
/// integration domain truncated where the exponential weights certify it:
/// the discarded mass is bounded by `G ≤ ((π/2)C_β)²` times the closed-form
/// denominator tail, and the cutoff grows until that bound drops below
/// `rel_tol/2` of the running numerator.
fn certified_num(
    t_full: Option<f64>,
    beta: f64,
    zeta: f64,
    alpha: f64,
    cfg: &QuadConfig,
) -> Result<(f64, f64, QuadOutcome), TheoryError> {
    let cb = c_beta(beta)?;
    let g_max = (0.5 * std::f64::consts::PI * cb).powi(2);
    let den_full = match t_full {
        Some(t) => den_closed(t, zeta, alpha),
        None => 1.0 / ((alpha - 0.5 * zeta).powi(2) * (alpha - zeta)),
    };
    // truncation pays off only when every axis weight decays
    let k_uv = alpha - 0.5 * zeta;
    let k_w = alpha - zeta;
    let mut t_int = if k_uv > 0.0 && k_w > 0.0 {
        let cut = (14.0 / k_uv).max(14.0 / k_w);
        match t_full {
            Some(t) => cut.min(t),
            None => cut,
        }
    } else {
        t_full.ok_or_else(|| {
            TheoryError::Domain(format!(
                "infinite type integral diverges for zeta/alpha = {} ≥ 1",
                zeta / alpha
            ))
        })?
    };
    let mut total_evals = 0u64;
    for _ in 0..5 {
        let lc_max = 0.5 * zeta * t_int;
        let (num, delta, out) = refined_num(t_int, lc_max, beta, zeta, alpha, cfg)?;
        total_evals += out.evaluations;
        let tail_bound = g_max * (den_full - den_closed(t_int, zeta, alpha)).max(0.0);
        if tail_bound <= 0.5 * cfg.rel_tol * num {
            let merged = QuadOutcome {
                evaluations: total_evals,
                ..out
            };
            return Ok((num, delta + tail_bound, merged));
        }
        t_int = match t_full {
            Some(t) => (t_int * 1.5).min(t),
            None => t_int * 1.5,
        };
    }
    Err(TheoryError::Quadrature {
        context: "type-integral cutoff did not certify".into(),
        partial: f64::NAN,
        err_estimate: f64::NAN,
    })
}

/// `L(t; β, ζ, α)`: the limit in probability of the type-restricted global
/// clustering coefficient `Ĉ₂(t)`. Requires β > 1, 0 < ζ/α < 2, t > 0.
pub fn limit_l_restricted(
    t: f64,
    beta: f64,
    zeta: f64,
    alpha: f64,
    cfg: &QuadConfig,
) -> Result<LimitValue, TheoryError> {
    check_common(beta, zeta, alpha)?;
    let ratio = zeta / alpha;
    if !(ratio < 2.0) {
        return Err(TheoryError::Domain(format!(
            "need 0 < zeta/alpha < 2, got {ratio}"
        )));
    }
    if !(t > 0.0) {
        return Err(TheoryError::Domain(format!("need t > 0, got {t}")));
    }
    let cb = c_beta(beta)?;
    let (num, delta, out) = certified_num(Some(t), beta, zeta, alpha, cfg)?;
    let den = den_closed(t, zeta, alpha);
    let value = 6.0 * num / ((std::f64::consts::PI * cb).powi(2) * den);
    let rel_err = (delta + out.err_estimate) / num.abs().max(f64::MIN_POSITIVE);
    Ok(LimitValue {
        value,
        err_estimate: rel_err * value.abs(),
        config: *cfg,
        evaluations: out.evaluations,
        panels: out.panels,
    })
}

/// `L_∞(β, ζ, α)`: the limit of the global clustering coefficient for
/// β > 1 and 0 < ζ/α < 1 (the integral diverges at ζ/α ≥ 1, mirroring the
/// collapse of `C₂` to zero there).
///
/// The improper type integrals are truncated at a cutoff certified by the
/// bound `G ≤ ((π/2)C_β)²`: the cutoff grows until the bound puts the
/// discarded tail below `rel_tol/2` of the running numerator.
pub fn limit_l_infinity(
    beta: f64,
    zeta: f64,
    alpha: f64,
    cfg: &QuadConfig,
) -> Result<LimitValue, TheoryError> {
    check_common(beta, zeta, alpha)?;
    let ratio = zeta / alpha;
    if !(ratio < 1.0) {
        return Err(TheoryError::Domain(format!(
            "L_infinity needs 0 < zeta/alpha < 1, got {ratio}"
        )));
    }
    let cb = c_beta(beta)?;
    let prefactor = 1.5 * (zeta - 2.0 * alpha).powi(2) * (alpha - zeta);
    let (num, delta, out) = certified_num(None, beta, zeta, alpha, cfg)?;
    let value = prefactor * num / (std::f64::consts::PI * cb).powi(2);
    let err = (delta + out.err_estimate) / num.abs().max(f64::MIN_POSITIVE) * value.abs();
    Ok(LimitValue {
        value,
        err_estimate: err,
        config: *cfg,
        evaluations: out.evaluations,
        panels: out.panels,
    })
}

fn check_common(beta: f64, zeta: f64, alpha: f64) -> Result<(), TheoryError> {
    if !(beta > 1.0) {
        return Err(TheoryError::Domain(format!(
            "limit formulas require beta > 1, got {beta}"
        )));
    }
    if !(zeta > 0.0) || !(alpha > 0.0) {
        return Err(TheoryError::Domain(format!(
            "need zeta > 0 and alpha > 0, got zeta={zeta}, alpha={alpha}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn power_integral_matches_closed_form() {
        for &beta in &[1.2, 1.5, 2.0, 3.0, 5.0] {
            let got = one_over_one_plus_pow_integral(beta, &cfg()).unwrap();
            let exact = PI / (beta * (PI / beta).sin());
            assert_relative_eq!(got.value, exact, max_relative = 1e-6);
        }
        // frozen oracle values
        let got = one_over_one_plus_pow_integral(3.0, &cfg()).unwrap();
        assert_relative_eq!(got.value, 1.209_199_576_156_145_2, max_relative = 1e-8);
        let got = one_over_one_plus_pow_integral(1.5, &cfg()).unwrap();
        assert_relative_eq!(got.value, 2.418_399_152_312_290_5, max_relative = 1e-8);
        assert!(one_over_one_plus_pow_integral(1.0, &cfg()).is_err());
    }

    #[test]
    fn g_symmetry_and_reference_value() {
        let a = g_integral(2.0, 3.0, 2.0, &cfg()).unwrap();
        let b = g_integral(3.0, 2.0, 2.0, &cfg()).unwrap();
        assert!((a.value - b.value).abs() < 1e-9);
        // value frozen from an independent high-precision evaluation
        assert_relative_eq!(a.value, 0.193_056_042_415_765, max_relative = 1e-5);
        let g11 = g_integral(1.0, 1.0, 2.0, &cfg()).unwrap();
        assert_relative_eq!(g11.value, 0.548_311_355_616_078, max_relative = 1e-5);
    }

    #[test]
    fn g_quadrature_routes_are_symmetric_without_canonicalization() {
        let a = g_integral_raw(2.0, 3.0, 2.0, &cfg().with_rel_tol(1e-8)).unwrap();
        let b = g_integral_raw(3.0, 2.0, 2.0, &cfg().with_rel_tol(1e-8)).unwrap();
        assert_relative_eq!(a.value, b.value, max_relative = 1e-7);
    }

    #[test]
    fn g_bounds_and_monotonicity() {
        let beta = 1.5;
        let bound = {
            let i = PI / (beta * (PI / beta).sin());
            i * i
        };
        let grid = [0.3, 1.0, 2.5, 7.0];
        let mut values = Vec::new();
        for &c1 in &grid {
            for &c2 in &grid {
                let v = g_integral(c1, c2, beta, &cfg()).unwrap().value;
                assert!(v > 0.0);
                assert!(v <= bound * (1.0 + 1e-9), "G={v} exceeds bound {bound}");
                values.push(((c1, c2), v));
            }
        }
        // nonincreasing in each argument
        for i in 0..grid.len() {
            for j in 1..grid.len() {
                let get = |a: f64, b: f64| {
                    values
                        .iter()
                        .find(|((x, y), _)| *x == a && *y == b)
                        .unwrap()
                        .1
                };
                assert!(get(grid[i], grid[j]) <= get(grid[i], grid[j - 1]) * (1.0 + 1e-9));
                assert!(get(grid[j], grid[i]) <= get(grid[j - 1], grid[i]) * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn g_domain_errors() {
        assert!(matches!(
            g_integral(1.0, 1.0, 1.0, &cfg()),
            Err(TheoryError::Domain(_))
        ));
        assert!(matches!(
            g_integral(-1.0, 1.0, 2.0, &cfg()),
            Err(TheoryError::Domain(_))
        ));
    }

    #[test]
    fn table_interpolation_accuracy() {
        let beta = 2.0;
        let table = GTable::build(beta, 3.0, 25, &cfg(), None).unwrap();
        for &(lc1, lc2) in &[(0.13, -0.77), (1.9, 2.3), (-2.2, 0.4), (0.0, 0.0)] {
            let interp = table.eval_log(lc1, lc2).exp();
            let exact = g_integral(lc1.exp(), lc2.exp(), beta, &cfg()).unwrap().value;
            assert_relative_eq!(interp, exact, max_relative = 5e-5);
        }
    }

    #[test]
    fn small_cap_limit_approaches_g11_form() {
        // t → 0⁺: L(t) → 6 G(1,1) / (π C_β)², which equals 1/3 at β = 2
        let l = limit_l_restricted(1e-3, 2.0, 1.0, 1.5, &QuadConfig::for_limits()).unwrap();
        assert_relative_eq!(l.value, 1.0 / 3.0, max_relative = 2e-3);
    }

    #[test]
    fn restricted_limit_reference_value() {
        // frozen from the independent oracle: L(2; β=2, ζ=1.5, α=1)
        let l = limit_l_restricted(2.0, 2.0, 1.5, 1.0, &QuadConfig::for_limits()).unwrap();
        assert_relative_eq!(l.value, 0.295_043_29, max_relative = 2e-3);
        assert!(l.err_estimate >= 0.0);
        // bounded: (0, 1.5] with ≤ 1 observed
        assert!(l.value > 0.0 && l.value <= 1.0);
    }

    #[test]
    fn restricted_limit_is_continuous_in_t() {
        let cfgl = QuadConfig::for_limits();
        for &t in &[0.5, 2.0, 8.0] {
            let a = limit_l_restricted(t, 2.0, 1.0, 1.5, &cfgl).unwrap().value;
            let b = limit_l_restricted(t + 1e-3, 2.0, 1.0, 1.5, &cfgl).unwrap().value;
            assert!((a - b).abs() <= 1e-2, "jump at t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn infinity_limit_reference_and_consistency() {
        let cfgl = QuadConfig::for_limits();
        let inf = limit_l_infinity(2.0, 1.0, 1.5, &cfgl).unwrap();
        // frozen from the independent oracle
        assert_relative_eq!(inf.value, 0.263_066_6, max_relative = 2e-3);
        assert!(inf.value > 0.0);
        // t = 30 restriction agrees within 1e-3 relative
        let l30 = limit_l_restricted(30.0, 2.0, 1.0, 1.5, &cfgl).unwrap();
        assert_relative_eq!(l30.value, inf.value, max_relative = 1e-3);
    }

    #[test]
    fn infinity_limit_prefactor_identity() {
        // (3/2)(ζ−2α)²(α−ζ) = 6 / DEN(∞)
        let (zeta, alpha): (f64, f64) = (1.0, 1.7);
        let pref = 1.5 * (zeta - 2.0 * alpha).powi(2) * (alpha - zeta);
        let den_inf = 1.0 / ((alpha - 0.5 * zeta).powi(2) * (alpha - zeta));
        assert_relative_eq!(pref, 6.0 / den_inf, max_relative = 1e-12);
    }

    #[test]
    fn infinity_limit_domain_errors() {
        let cfgl = QuadConfig::for_limits();
        assert!(matches!(
            limit_l_infinity(2.0, 1.5, 1.0, &cfgl),
            Err(TheoryError::Domain(_))
        ));
        assert!(matches!(
            limit_l_infinity(0.8, 1.0, 1.5, &cfgl),
            Err(TheoryError::Domain(_))
        ));
        assert!(matches!(
            limit_l_restricted(2.0, 2.0, 3.0, 1.0, &cfgl),
            Err(TheoryError::Domain(_))
        ));
    }
}
