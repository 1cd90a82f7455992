//! Seeded experiment orchestration: generate → analyze → compare to theory.
//!
//! A [`run_trial`] call runs the full pipeline (sample vertices, build the
//! graph, compute [`ClusterStats`]) for every seed of an
//! [`ExperimentConfig`], attaches the in-domain theory values, and aggregates
//! the per-seed statistics. [`run_sweep`] repeats a trial across vertex
//! counts and fits the log-log growth of the typical 2-path count for
//! comparison against the predicted exponents. Seeds run in parallel; every
//! seed's pipeline is independent and the report is assembled in seed order,
//! so results are reproducible end to end.

pub mod hill;
pub mod report;

pub use hill::{fit_tail_exponent, TailFit};

use crate::clustering::{compute_cluster_stats, ClusterStats, DegreeLt2};
use crate::graphgen::{
    build_binomial_with, build_disc_pruned, BinomialOptions, BuildError, Graph, ModelTag,
};
use crate::hypgeom::{GeomError, ModelParams};
use crate::par::map_range;
use crate::rng;
use crate::sampler::{max_type_bound, omega_default, sample_vertex_set};
use crate::theory::{lambda_t_order, limit_l_infinity, limit_l_restricted, GrowthOrder, QuadConfig, TheoryError};
use serde::{Deserialize, Serialize};
use std::io;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("insufficient tail: {0}")]
    InsufficientTail(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("theory evaluation failed: {0}")]
    Theory(#[from] TheoryError),
}

impl HarnessError {
    pub fn io(path: impl AsRef<std::path::Path>) -> impl FnOnce(io::Error) -> HarnessError {
        let path = path.as_ref().to_path_buf();
        move |source| HarnessError::Io { path, source }
    }
}

/// One experiment: model parameters, seeds, and reporting options. This is
/// also the schema of the flat JSON config file consumed by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub zeta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub model: ModelTag,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub type_caps: Vec<f64>,
    #[serde(default)]
    pub omega_override: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub emit_edges: bool,
    #[serde(default)]
    pub force_quadratic: bool,
    #[serde(default)]
    pub convention: DegreeLt2,
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
}

fn default_tail_fraction() -> f64 {
    0.05
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<ModelParams, HarnessError> {
        if self.seeds.is_empty() {
            return Err(HarnessError::Config("seeds must be non-empty".into()));
        }
        if self.type_caps.iter().any(|&t| !(t >= 0.0)) {
            return Err(HarnessError::Config(format!(
                "type caps must be ≥ 0, got {:?}",
                self.type_caps
            )));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction < 1.0) {
            return Err(HarnessError::Config(format!(
                "tail_fraction must lie in (0,1), got {}",
                self.tail_fraction
            )));
        }
        Ok(ModelParams::new(self.n, self.zeta, self.alpha, self.beta, self.nu)?)
    }

    /// Edge seed of the binomial builder for a given vertex seed: derived,
    /// so one seed reproduces the whole pipeline.
    pub fn edge_seed_for(seed: u64) -> u64 {
        rng::mix64(seed ^ 0x4544_4745) // "EDGE"
    }
}

/// Mean, standard error and count over the defined entries of a statistic.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

impl Aggregate {
    /// Aggregates the defined values; `None` entries are excluded, never
    /// coerced to zero. Returns `None` when nothing is defined.
    pub fn over(values: impl Iterator<Item = Option<f64>>) -> Option<Aggregate> {
        let xs: Vec<f64> = values.flatten().collect();
        if xs.is_empty() {
            return None;
        }
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Some(Aggregate { mean, stderr, count: n })
    }
}

/// Outcome of a theory evaluation attached to a report.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TheoryResult {
    Ok { value: f64, err_estimate: f64 },
    OutOfDomain { reason: String },
    Failed { reason: String },
}

impl TheoryResult {
    pub fn value(&self) -> Option<f64> {
        match self {
            TheoryResult::Ok { value, .. } => Some(*value),
            _ => None,
        }
    }

    fn from(res: Result<crate::theory::LimitValue, TheoryError>) -> TheoryResult {
        match res {
            Ok(lv) => TheoryResult::Ok {
                value: lv.value,
                err_estimate: lv.err_estimate,
            },
            Err(TheoryError::Domain(reason)) => TheoryResult::OutOfDomain { reason },
            Err(e @ TheoryError::Quadrature { .. }) => TheoryResult::Failed {
                reason: e.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub seed: u64,
    pub max_type: f64,
    pub stats: ClusterStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictedAggregate {
    pub cap: f64,
    pub aggregate: Option<Aggregate>,
    pub theory: TheoryResult,
}

/// Full result of one trial: per-seed statistics, aggregates, theory values,
/// the degree-tail fit, and the max-type diagnostic.
#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub config: ExperimentConfig,
    pub radius: f64,
    pub omega: f64,
    pub rows: Vec<TrialRow>,
    pub c2: Option<Aggregate>,
    pub c1: Option<Aggregate>,
    pub lambda_hat: Aggregate,
    pub t_hat: Aggregate,
    pub restricted: Vec<RestrictedAggregate>,
    pub l_infinity: TheoryResult,
    pub degree_tail: Option<TailFit>,
    pub degree_tail_error: Option<String>,
    pub max_type_bound: f64,
    pub max_type_exceed_fraction: f64,
}

/// Builds the graph for one seed of a config.
pub fn build_for_seed(
    cfg: &ExperimentConfig,
    params: &ModelParams,
    seed: u64,
) -> Result<Graph, HarnessError> {
    let vs = sample_vertex_set(params, seed);
    let g = match cfg.model {
        ModelTag::Disc => build_disc_pruned(&vs),
        ModelTag::Binomial => build_binomial_with(
            &vs,
            ExperimentConfig::edge_seed_for(seed),
            BinomialOptions {
                force_quadratic: cfg.force_quadratic,
                ..BinomialOptions::default()
            },
            true,
        )?,
    };
    Ok(g)
}

/// Runs the full pipeline for every seed and assembles the report.
/// Deterministic given the config. Theory failures are recorded in the
/// report; the trial continues with empirics.
pub fn run_trial(cfg: &ExperimentConfig) -> Result<TrialReport, HarnessError> {
    let params = cfg.validate()?;
    let omega = cfg.omega_override.unwrap_or_else(|| omega_default(cfg.n));

    let per_seed: Vec<Result<(TrialRow, Vec<f64>), HarnessError>> =
        map_range(cfg.seeds.len(), true, |i| {
            let seed = cfg.seeds[i];
            let g = build_for_seed(cfg, &params, seed)?;
            let stats = compute_cluster_stats(&g, Some(omega), &cfg.type_caps, cfg.convention);
            let degrees: Vec<f64> = (0..g.n()).map(|v| g.degree(v) as f64).collect();
            let max_type = g.vertices().iter().map(|v| v.t).fold(f64::MIN, f64::max);
            if cfg.emit_edges {
                if let Some(dir) = &cfg.output_dir {
                    report::emit_graph_files(dir, &g)?;
                }
            }
            Ok((
                TrialRow {
                    seed,
                    max_type,
                    stats,
                },
                degrees,
            ))
        });

    let mut rows = Vec::with_capacity(cfg.seeds.len());
    let mut pooled_degrees = Vec::new();
    for r in per_seed {
        let (row, degrees) = r?;
        pooled_degrees.extend(degrees);
        rows.push(row);
    }

    let c2 = Aggregate::over(rows.iter().map(|r| r.stats.c2));
    let c1 = Aggregate::over(rows.iter().map(|r| r.stats.c1));
    let lambda_hat = Aggregate::over(rows.iter().map(|r| Some(r.stats.lambda_hat as f64)))
        .expect("seeds are non-empty");
    let t_hat = Aggregate::over(rows.iter().map(|r| Some(r.stats.t_hat as f64)))
        .expect("seeds are non-empty");

    let quad = QuadConfig::for_limits();
    let l_infinity = if cfg.beta > 1.0 {
        TheoryResult::from(limit_l_infinity(cfg.beta, cfg.zeta, cfg.alpha, &quad))
    } else {
        TheoryResult::OutOfDomain {
            reason: format!("beta = {} ≤ 1: C₂ converges to 0, no finite limit", cfg.beta),
        }
    };
    let restricted = cfg
        .type_caps
        .iter()
        .enumerate()
        .map(|(k, &cap)| RestrictedAggregate {
            cap,
            aggregate: Aggregate::over(rows.iter().map(|r| r.stats.restricted[k].c2)),
            theory: if cfg.beta > 1.0 {
                TheoryResult::from(limit_l_restricted(cap, cfg.beta, cfg.zeta, cfg.alpha, &quad))
            } else {
                TheoryResult::OutOfDomain {
                    reason: format!("beta = {} ≤ 1", cfg.beta),
                }
            },
        })
        .collect();

    let (degree_tail, degree_tail_error) =
        match fit_tail_exponent(&pooled_degrees, cfg.tail_fraction, cfg.seeds[0]) {
            Ok(fit) => (Some(fit), None),
            Err(e) => (None, Some(e.to_string())),
        };

    let bound = max_type_bound(&params, omega);
    let exceed = rows.iter().filter(|r| r.max_type > bound).count();

    Ok(TrialReport {
        config: cfg.clone(),
        radius: params.radius,
        omega,
        c2,
        c1,
        lambda_hat,
        t_hat,
        restricted,
        l_infinity,
        degree_tail,
        degree_tail_error,
        max_type_bound: bound,
        max_type_exceed_fraction: exceed as f64 / rows.len() as f64,
        rows,
    })
}

/// Per-N aggregates of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub radius: f64,
    pub c2: Option<Aggregate>,
    pub lambda_hat_over_n: Aggregate,
    pub t_hat_over_n: Aggregate,
    pub c2_times_r: Option<Aggregate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub base: ExperimentConfig,
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `ln(mean Λ̂)` against `ln N`.
    pub lambda_hat_slope: f64,
    pub predicted: GrowthOrder,
    pub trials: Vec<TrialReport>,
}

/// Runs the base trial at each vertex count and fits the Λ̂ growth exponent.
/// Requires at least three distinct counts.
pub fn run_sweep(base: &ExperimentConfig, n_values: &[usize]) -> Result<SweepReport, HarnessError> {
    let mut distinct = n_values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(HarnessError::Config(format!(
            "sweep needs ≥ 3 distinct N values, got {n_values:?}"
        )));
    }
    let predicted = lambda_t_order(base.beta, base.zeta, base.alpha)?;

    let mut trials = Vec::with_capacity(distinct.len());
    for &n in &distinct {
        let cfg_n = ExperimentConfig { n, ..base.clone() };
        trials.push(run_trial(&cfg_n)?);
    }

    let rows: Vec<SweepRow> = trials
        .iter()
        .map(|t| {
            let n = t.config.n as f64;
            SweepRow {
                n: t.config.n,
                radius: t.radius,
                c2: t.c2,
                lambda_hat_over_n: Aggregate::over(
                    t.rows.iter().map(|r| Some(r.stats.lambda_hat as f64 / n)),
                )
                .expect("non-empty"),
                t_hat_over_n: Aggregate::over(
                    t.rows.iter().map(|r| Some(r.stats.t_hat as f64 / n)),
                )
                .expect("non-empty"),
                c2_times_r: Aggregate::over(
                    t.rows.iter().map(|r| r.stats.c2.map(|c| c * t.radius)),
                ),
            }
        })
        .collect();

    let points: Vec<(f64, f64)> = trials
        .iter()
        .map(|t| {
            (
                (t.config.n as f64).ln(),
                t.lambda_hat.mean.max(f64::MIN_POSITIVE).ln(),
            )
        })
        .collect();
    let lambda_hat_slope = least_squares_slope(&points);

    Ok(SweepReport {
        base: base.clone(),
        rows,
        lambda_hat_slope,
        predicted,
        trials,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Statistical acceptance rule: a Monte Carlo mean agrees with a theory
/// value when `|mc − theory| ≤ max(3·stderr, rel_band·|theory|)`.
pub fn comparison_passes(mc_mean: f64, mc_stderr: f64, theory: f64, rel_band: f64) -> bool {
    (mc_mean - theory).abs() <= (3.0 * mc_stderr).max(rel_band * theory.abs())
}

/// Default relative tolerance band of [`comparison_passes`].
pub const DEFAULT_REL_BAND: f64 = 0.15;

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            n: 400,
            zeta: 1.0,
            alpha: 1.5,
            beta: 2.0,
            nu: 1.0,
            model: ModelTag::Binomial,
            seeds: vec![1, 2, 3],
            type_caps: vec![2.0],
            omega_override: None,
            output_dir: None,
            emit_edges: false,
            force_quadratic: false,
            convention: DegreeLt2::Exclude,
            tail_fraction: 0.05,
        }
    }

    #[test]
    fn config_validation_errors() {
        let mut cfg = tiny_config();
        cfg.seeds.clear();
        assert!(matches!(cfg.validate(), Err(HarnessError::Config(_))));
        let mut cfg = tiny_config();
        cfg.type_caps = vec![-1.0];
        assert!(matches!(cfg.validate(), Err(HarnessError::Config(_))));
        let mut cfg = tiny_config();
        cfg.nu = 1e9;
        assert!(cfg.validate().is_err(), "n < nu must be rejected");
    }

    #[test]
    fn trial_is_deterministic_and_structured() {
        let cfg = tiny_config();
        let a = run_trial(&cfg).unwrap();
        let b = run_trial(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.rows.len(), 3);
        assert!(matches!(a.l_infinity, TheoryResult::Ok { .. }));
        assert_eq!(a.restricted.len(), 1);
        for row in &a.rows {
            assert_eq!(row.stats.t_hat + row.stats.t_tilde, row.stats.triangles);
            assert_eq!(row.stats.lambda_hat + row.stats.lambda_tilde, row.stats.paths2);
        }
        // small N: the tail fit must report an insufficient-tail error
        assert!(a.degree_tail.is_none());
        assert!(a.degree_tail_error.is_some());
    }

    #[test]
    fn low_beta_marks_theory_out_of_domain() {
        let cfg = ExperimentConfig {
            beta: 0.8,
            ..tiny_config()
        };
        let rep = run_trial(&cfg).unwrap();
        assert!(matches!(rep.l_infinity, TheoryResult::OutOfDomain { .. }));
        assert!(matches!(
            rep.restricted[0].theory,
            TheoryResult::OutOfDomain { .. }
        ));
        // empirics still present
        assert_eq!(rep.rows.len(), 3);
    }

    #[test]
    fn ratio_above_one_marks_l_infinity_out_of_domain() {
        let cfg = ExperimentConfig {
            zeta: 1.5,
            alpha: 1.0,
            ..tiny_config()
        };
        let rep = run_trial(&cfg).unwrap();
        assert!(matches!(rep.l_infinity, TheoryResult::OutOfDomain { .. }));
        // but the restricted limit is fine there
        assert!(matches!(rep.restricted[0].theory, TheoryResult::Ok { .. }));
    }

    #[test]
    fn sweep_requires_three_sizes() {
        let cfg = tiny_config();
        assert!(matches!(
            run_sweep(&cfg, &[100, 200]),
            Err(HarnessError::Config(_))
        ));
        assert!(matches!(
            run_sweep(&cfg, &[100, 100, 100]),
            Err(HarnessError::Config(_))
        ));
    }

    #[test]
    fn comparison_rule() {
        assert!(comparison_passes(1.0, 0.1, 1.2, 0.15)); // inside 3 se
        assert!(comparison_passes(1.1, 0.001, 1.0, 0.15)); // inside rel band
        assert!(!comparison_passes(1.3, 0.001, 1.0, 0.15));
    }

    #[test]
    fn slope_fit_recovers_lines() {
        let pts: Vec<(f64, f64)> = (1..=5).map(|k| (k as f64, 3.0 + 2.5 * k as f64)).collect();
        assert!((least_squares_slope(&pts) - 2.5).abs() < 1e-12);
    }
}
