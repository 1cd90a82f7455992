//! Seeded sampling of the vertex set on `D_R`.
//!
//! The radius of a vertex follows the density
//! `ρ(r) = α sinh(αr) / (cosh(αR) − 1)` on `[0, R]` and the angle is uniform
//! on `(0, 2π]`. Radii are drawn by exact CDF inversion. Vertex `i` consumes
//! a counter-based substream derived only from `(seed, i)`, so regeneration
//! is bit-identical and independent of evaluation order or thread schedule.

use crate::hypgeom::{GeomError, ModelParams, PolarVertex};
use crate::par::map_range;
use crate::rng;
use std::f64::consts::PI;
use std::io::{self, BufRead, Write};

/// A realized vertex set: `params.n` i.i.d. points of `D_R` plus the seed
/// that produced them.
#[derive(Debug, Clone)]
pub struct VertexSet {
    pub params: ModelParams,
    pub vertices: Vec<PolarVertex>,
    pub seed: u64,
}

/// Slowly growing cutoff `ω(N) = max(1, ln ln ln N)` used by the typical /
/// atypical decomposition.
pub fn omega_default(n: usize) -> f64 {
    let ln = (n as f64).ln();
    if ln <= 1.0 {
        return 1.0;
    }
    let lnln = ln.ln();
    if lnln <= 1.0 {
        return 1.0;
    }
    lnln.ln().max(1.0)
}

/// Exact inverse CDF of the radial density:
/// `r = (1/α) acosh(1 + u (cosh(αR) − 1))`, monotone in `u`, with `r(0) = 0`
/// and `r(1) = R`.
pub fn sample_radius(u01: f64, alpha: f64, radius: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&u01));
    // cosh(αR) − 1 = 2 sinh²(αR/2), free of cancellation near 0
    let span = 2.0 * (0.5 * alpha * radius).sinh().powi(2);
    (1.0 + u01 * span).acosh() / alpha
}

/// Samples vertex `index` of the set keyed by `seed`. Equals the same entry
/// of [`sample_vertex_set`].
pub fn sample_vertex(params: &ModelParams, seed: u64, index: usize) -> PolarVertex {
    let u_r = rng::unit(seed, index as u64, rng::TAG_RADIUS);
    let u_a = rng::unit(seed, index as u64, rng::TAG_ANGLE);
    let r = sample_radius(u_r, params.alpha, params.radius).min(params.radius);
    let theta = 2.0 * PI * (1.0 - u_a); // uniform on (0, 2π]
    PolarVertex {
        r,
        theta,
        t: params.radius - r,
    }
}

/// Samples the full vertex set for `(params, seed)`.
pub fn sample_vertex_set(params: &ModelParams, seed: u64) -> VertexSet {
    let vertices = map_range(params.n, true, |i| sample_vertex(params, seed, i));
    VertexSet {
        params: *params,
        vertices,
        seed,
    }
}

/// Density of the type `t = R − r`. Exact mode evaluates
/// `α sinh(α(R−t)) / (cosh(αR) − 1)`; approximate mode the limiting
/// exponential `α e^{−αt}`.
pub fn type_pdf(t: f64, alpha: f64, radius: f64, approximate: bool) -> f64 {
    if approximate {
        return alpha * (-alpha * t).exp();
    }
    let span = 2.0 * (0.5 * alpha * radius).sinh().powi(2);
    alpha * (alpha * (radius - t)).sinh() / span
}

/// Diagnostic bound `(ζ/2α) R + ω` that asymptotically almost surely
/// dominates every type in the set.
pub fn max_type_bound(params: &ModelParams, omega: f64) -> f64 {
    params.zeta / (2.0 * params.alpha) * params.radius + omega
}

/// Writes the vertex table as CSV with header `index,r,theta,type`, 17
/// significant digits per value (round-trips f64 exactly).
pub fn write_vertices_csv<W: Write>(out: &mut W, vertices: &[PolarVertex]) -> io::Result<()> {
    writeln!(out, "index,r,theta,type")?;
    for (i, v) in vertices.iter().enumerate() {
        writeln!(out, "{i},{:.16e},{:.16e},{:.16e}", v.r, v.theta, v.t)?;
    }
    Ok(())
}

/// Reads a vertex table written by [`write_vertices_csv`]. Returns the
/// vertices and the disc radius recovered as `max(r + t)`.
pub fn read_vertices_csv<R: BufRead>(input: R) -> io::Result<(Vec<PolarVertex>, f64)> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut vertices = Vec::new();
    let mut radius: f64 = 0.0;
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if lineno == 0 {
            if line.trim() != "index,r,theta,type" {
                return Err(bad(format!("unexpected vertex CSV header: {line}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad(format!("line {}: expected 4 fields", lineno + 1)));
        }
        let idx: usize = fields[0]
            .trim()
            .parse()
            .map_err(|e| bad(format!("line {}: bad index: {e}", lineno + 1)))?;
        if idx != vertices.len() {
            return Err(bad(format!(
                "line {}: index {idx} out of order",
                lineno + 1
            )));
        }
        let parse = |s: &str| -> io::Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| bad(format!("line {}: bad number: {e}", lineno + 1)))
        };
        let (r, theta, t) = (parse(fields[1])?, parse(fields[2])?, parse(fields[3])?);
        radius = radius.max(r + t);
        vertices.push(PolarVertex { r, theta, t });
    }
    Ok((vertices, radius))
}

/// Empirical CDF deviation (Kolmogorov–Smirnov statistic) of sampled radii
/// against the analytic CDF `(cosh(αr) − 1)/(cosh(αR) − 1)`.
pub fn radius_ks_statistic(samples: &mut [f64], alpha: f64, radius: f64) -> f64 {
    samples.sort_unstable_by(f64::total_cmp);
    let span = 2.0 * (0.5 * alpha * radius).sinh().powi(2);
    let n = samples.len() as f64;
    let mut worst: f64 = 0.0;
    for (i, &r) in samples.iter().enumerate() {
        let cdf = (2.0 * (0.5 * alpha * r).sinh().powi(2)) / span;
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        worst = worst.max((cdf - lo).abs()).max((cdf - hi).abs());
    }
    worst
}

/// Validation helper used by tests and the harness: build params or fail.
pub fn params(n: usize, zeta: f64, alpha: f64, beta: f64, nu: f64) -> Result<ModelParams, GeomError> {
    ModelParams::new(n, zeta, alpha, beta, nu)
}
