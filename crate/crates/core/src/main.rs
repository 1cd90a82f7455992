//! Command-line interface: generate graphs, analyze edge lists, evaluate
//! theory values, and run parameter sweeps.
//!
//! Exit codes: 0 success, 2 invalid configuration or input data, 3
//! out-of-domain theory request, 4 quadrature failure, 1 anything else.

use clap::{Parser, Subcommand, ValueEnum};
use hrg::clustering::{compute_cluster_stats, DegreeLt2};
use hrg::graphgen::{
    build_binomial_with, build_disc_naive_delta, build_disc_pruned_delta, read_edges_csv,
    BinomialOptions, Graph, GraphMetadata,
};
use hrg::harness::report::{emit_graph_files, emit_report, emit_sweep, trials_csv_header};
use hrg::harness::{run_sweep, run_trial, ExperimentConfig, HarnessError};
use hrg::hypgeom::ModelParams;
use hrg::sampler::{omega_default, read_vertices_csv, sample_vertex_set};
use hrg::theory::{c_beta, limit_l_infinity, limit_l_restricted, QuadConfig, TheoryError};
use serde_json::json;
use std::fs;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hrg", version, about = "Random hyperbolic graphs: generation, clustering, and limit values")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Disc,
    Binomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Exclude,
    Zero,
    One,
}

impl From<ConventionArg> for DegreeLt2 {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Exclude => DegreeLt2::Exclude,
            ConventionArg::Zero => DegreeLt2::Zero,
            ConventionArg::One => DegreeLt2::One,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a vertex set and build one graph; writes vertex, edge and
    /// metadata files into the output directory.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        zeta: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        seed: u64,
        /// Edge-coin seed for the binomial model; derived from --seed when
        /// omitted.
        #[arg(long)]
        edge_seed: Option<u64>,
        /// Disc threshold modifier: edges within (1+delta)·R (exploration).
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Use the O(N²) reference scan instead of the pruned builder.
        #[arg(long)]
        naive: bool,
        /// Allow the quadratic binomial builder beyond its N cap.
        #[arg(long)]
        force_quadratic: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute clustering statistics from vertex and edge CSV files.
    Analyze {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        vertices: PathBuf,
        /// Type caps t for the restricted coefficient Ĉ₂(t); repeatable.
        #[arg(long = "type-cap")]
        type_caps: Vec<f64>,
        /// Override the typicality cutoff function ω(N).
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long, value_enum, default_value = "exclude")]
        convention: ConventionArg,
        /// Also append the statistics as a CSV row to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate the clustering limit values by quadrature.
    Theory {
        #[arg(long)]
        zeta: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Type caps t for L(t); when absent, L_infinity is evaluated.
        #[arg(long = "t")]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1e-4)]
        rel_tol: f64,
        #[arg(long, default_value_t = 48)]
        max_depth: u32,
    },
    /// Run a trial from a JSON config across several vertex counts.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Vertex counts, e.g. --n 5000,20000,80000
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Run the seeds of a JSON config once and emit trials.csv/summary.json.
    Trial {
        #[arg(long)]
        config: PathBuf,
    },
}

fn exit_code_for(err: &HarnessError) -> u8 {
    match err {
        HarnessError::Config(_) | HarnessError::Geometry(_) | HarnessError::Build(_) => 2,
        HarnessError::InsufficientTail(_) => 1,
        HarnessError::Io { .. } => 1,
        HarnessError::Theory(TheoryError::Domain(_)) => 3,
        HarnessError::Theory(TheoryError::Quadrature { .. }) => 4,
    }
}

fn fail(err: HarnessError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code_for(&err))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn run(cmd: Cmd) -> Result<(), HarnessError> {
    match cmd {
        Cmd::Generate {
            n,
            zeta,
            alpha,
            beta,
            nu,
            model,
            seed,
            edge_seed,
            delta,
            naive,
            force_quadratic,
            out,
        } => {
            let params = ModelParams::new(n, zeta, alpha, beta, nu)?;
            let vs = sample_vertex_set(&params, seed);
            let g = match model {
                ModelArg::Disc => {
                    if naive {
                        build_disc_naive_delta(&vs, delta)
                    } else {
                        build_disc_pruned_delta(&vs, delta)
                    }
                }
                ModelArg::Binomial => build_binomial_with(
                    &vs,
                    edge_seed.unwrap_or_else(|| ExperimentConfig::edge_seed_for(seed)),
                    BinomialOptions {
                        force_quadratic,
                        ..BinomialOptions::default()
                    },
                    true,
                )?,
            };
            let files = emit_graph_files(&out, &g)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "metadata": GraphMetadata::of(&g),
                    "files": files,
                }))
                .expect("serializable")
            );
            Ok(())
        }
        Cmd::Analyze {
            edges,
            vertices,
            type_caps,
            omega,
            convention,
            csv,
        } => {
            let vfile = fs::File::open(&vertices).map_err(HarnessError::io(&vertices))?;
            let (vs, radius) =
                read_vertices_csv(BufReader::new(vfile)).map_err(HarnessError::io(&vertices))?;
            let efile = fs::File::open(&edges).map_err(HarnessError::io(&edges))?;
            let pairs = read_edges_csv(BufReader::new(efile)).map_err(HarnessError::io(&edges))?;
            if let Some(&(u, v)) = pairs
                .iter()
                .find(|&&(u, v)| u as usize >= vs.len() || v as usize >= vs.len())
            {
                return Err(HarnessError::Config(format!(
                    "edge ({u},{v}) references a vertex outside the table of {} vertices",
                    vs.len()
                )));
            }
            let n = vs.len();
            let g = Graph::from_pairs(vs, radius, &pairs);
            let omega = omega.unwrap_or_else(|| omega_default(n));
            let stats = compute_cluster_stats(&g, Some(omega), &type_caps, convention.into());
            if let Some(csv_path) = csv {
                use std::io::Write;
                let fresh = !csv_path.exists();
                let mut f = fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&csv_path)
                    .map_err(HarnessError::io(&csv_path))?;
                (|| -> std::io::Result<()> {
                    if fresh {
                        writeln!(f, "{}", trials_csv_header(&type_caps))?;
                    }
                    write!(
                        f,
                        ",{},{},{},{},{},{},{},{},{}",
                        n,
                        stats.triangles,
                        stats.paths2,
                        stats.c2.map_or(String::new(), |x| format!("{x:.16e}")),
                        stats.c1.map_or(String::new(), |x| format!("{x:.16e}")),
                        stats.t_hat,
                        stats.lambda_hat,
                        stats.t_tilde,
                        stats.lambda_tilde
                    )?;
                    for r in &stats.restricted {
                        write!(f, ",{}", r.c2.map_or(String::new(), |x| format!("{x:.16e}")))?;
                    }
                    writeln!(f)
                })()
                .map_err(HarnessError::io(&csv_path))?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "n": n,
                    "radius": radius,
                    "omega": omega,
                    "stats": stats,
                }))
                .expect("serializable")
            );
            Ok(())
        }
        Cmd::Theory {
            zeta,
            alpha,
            beta,
            t,
            rel_tol,
            max_depth,
        } => {
            let cfg = QuadConfig {
                rel_tol,
                max_depth,
                ..QuadConfig::for_limits()
            };
            let cb = c_beta(beta)?;
            let mut restricted = Vec::new();
            for &cap in &t {
                let lv = limit_l_restricted(cap, beta, zeta, alpha, &cfg)?;
                restricted.push(json!({ "t": cap, "limit": lv }));
            }
            let l_inf = if t.is_empty() {
                Some(limit_l_infinity(beta, zeta, alpha, &cfg)?)
            } else {
                None
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "inputs": { "zeta": zeta, "alpha": alpha, "beta": beta, "rel_tol": rel_tol },
                    "c_beta": cb,
                    "l_infinity": l_inf,
                    "l_restricted": restricted,
                }))
                .expect("serializable")
            );
            Ok(())
        }
        Cmd::Sweep { config, n } => {
            let base = load_config(&config)?;
            let report = run_sweep(&base, &n)?;
            if let Some(dir) = &base.output_dir {
                emit_sweep(&report, dir)?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            );
            Ok(())
        }
        Cmd::Trial { config } => {
            let cfg = load_config(&config)?;
            let report = run_trial(&cfg)?;
            if let Some(dir) = &cfg.output_dir {
                emit_report(&report, dir)?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            );
            Ok(())
        }
    }
}

fn load_config(path: &PathBuf) -> Result<ExperimentConfig, HarnessError> {
    let file = fs::File::open(path).map_err(HarnessError::io(path))?;
    let cfg: ExperimentConfig = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    cfg.validate()?;
    Ok(cfg)
}
