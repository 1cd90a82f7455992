//! Report files: `trials.csv`, `summary.json`, sweep outputs, and optional
//! per-seed edge lists.
//!
//! `trials.csv` column order (10 fixed columns, then one `C2hat_{t}` column
//! per requested type cap, so the column count is `10 + |type_caps|`):
//!
//! ```text
//! seed,n,T,Lambda,C2,C1,T_hat,Lambda_hat,T_tilde,Lambda_tilde[,C2hat_{t}...]
//! ```
//!
//! Undefined coefficients (`Λ = 0` cases) are written as empty cells and
//! serialized as JSON nulls; they are excluded from aggregates.

use super::{HarnessError, SweepReport, TrialReport};
use crate::graphgen::{write_edges_csv, Graph, GraphMetadata};
use crate::sampler::write_vertices_csv;
use std::fs;
use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:.16e}"))
}

/// Header of `trials.csv` for a given set of type caps.
pub fn trials_csv_header(type_caps: &[f64]) -> String {
    let mut h = String::from("seed,n,T,Lambda,C2,C1,T_hat,Lambda_hat,T_tilde,Lambda_tilde");
    for cap in type_caps {
        h.push_str(&format!(",C2hat_{cap}"));
    }
    h
}

/// Writes `trials.csv` and `summary.json` under `dir`; returns the paths.
pub fn emit_report(report: &TrialReport, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(HarnessError::io(dir))?;
    let mut written = Vec::new();

    let trials_path = dir.join("trials.csv");
    let file = fs::File::create(&trials_path).map_err(HarnessError::io(&trials_path))?;
    let mut w = BufWriter::new(file);
    (|| -> std::io::Result<()> {
        writeln!(w, "{}", trials_csv_header(&report.config.type_caps))?;
        for row in &report.rows {
            let s = &row.stats;
            write!(
                w,
                "{},{},{},{},{},{},{},{},{},{}",
                row.seed,
                report.config.n,
                s.triangles,
                s.paths2,
                fmt_opt(s.c2),
                fmt_opt(s.c1),
                s.t_hat,
                s.lambda_hat,
                s.t_tilde,
                s.lambda_tilde
            )?;
            for r in &s.restricted {
                write!(w, ",{}", fmt_opt(r.c2))?;
            }
            writeln!(w)?;
        }
        w.flush()
    })()
    .map_err(HarnessError::io(&trials_path))?;
    written.push(trials_path);

    let summary_path = dir.join("summary.json");
    let file = fs::File::create(&summary_path).map_err(HarnessError::io(&summary_path))?;
    serde_json::to_writer_pretty(BufWriter::new(file), report)
        .map_err(|e| HarnessError::io(&summary_path)(std::io::Error::other(e)))?;
    written.push(summary_path);
    Ok(written)
}

/// Writes `sweep.csv` and `sweep_summary.json` under `dir`.
pub fn emit_sweep(report: &SweepReport, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(HarnessError::io(dir))?;
    let mut written = Vec::new();

    let csv_path = dir.join("sweep.csv");
    let file = fs::File::create(&csv_path).map_err(HarnessError::io(&csv_path))?;
    let mut w = BufWriter::new(file);
    (|| -> std::io::Result<()> {
        writeln!(
            w,
            "n,R,C2_mean,C2_stderr,Lambda_hat_over_N,T_hat_over_N,C2_times_R"
        )?;
        for row in &report.rows {
            writeln!(
                w,
                "{},{:.16e},{},{},{:.16e},{:.16e},{}",
                row.n,
                row.radius,
                fmt_opt(row.c2.map(|a| a.mean)),
                fmt_opt(row.c2.map(|a| a.stderr)),
                row.lambda_hat_over_n.mean,
                row.t_hat_over_n.mean,
                fmt_opt(row.c2_times_r.map(|a| a.mean)),
            )?;
        }
        w.flush()
    })()
    .map_err(HarnessError::io(&csv_path))?;
    written.push(csv_path);

    let summary_path = dir.join("sweep_summary.json");
    let file = fs::File::create(&summary_path).map_err(HarnessError::io(&summary_path))?;
    serde_json::to_writer_pretty(BufWriter::new(file), report)
        .map_err(|e| HarnessError::io(&summary_path)(std::io::Error::other(e)))?;
    written.push(summary_path);
    Ok(written)
}

/// Writes `vertices_seed{S}.csv`, `edges_seed{S}.csv` and
/// `metadata_seed{S}.json` for one generated graph.
pub fn emit_graph_files(dir: &Path, g: &Graph) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(HarnessError::io(dir))?;
    let tag = g.seed.map_or_else(|| "unseeded".to_string(), |s| s.to_string());

    let vpath = dir.join(format!("vertices_seed{tag}.csv"));
    let file = fs::File::create(&vpath).map_err(HarnessError::io(&vpath))?;
    let mut w = BufWriter::new(file);
    write_vertices_csv(&mut w, g.vertices()).map_err(HarnessError::io(&vpath))?;

    let epath = dir.join(format!("edges_seed{tag}.csv"));
    let file = fs::File::create(&epath).map_err(HarnessError::io(&epath))?;
    let mut w = BufWriter::new(file);
    write_edges_csv(&mut w, g).map_err(HarnessError::io(&epath))?;

    let mpath = dir.join(format!("metadata_seed{tag}.json"));
    let file = fs::File::create(&mpath).map_err(HarnessError::io(&mpath))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &GraphMetadata::of(g))
        .map_err(|e| HarnessError::io(&mpath)(std::io::Error::other(e)))?;
    Ok(vec![vpath, epath, mpath])
}

/// One parsed `trials.csv` row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialCsvRow {
    pub seed: u64,
    pub n: usize,
    pub triangles: u64,
    pub paths2: u64,
    pub c2: Option<f64>,
    pub c1: Option<f64>,
    pub t_hat: u64,
    pub lambda_hat: u64,
    pub t_tilde: u64,
    pub lambda_tilde: u64,
    pub restricted: Vec<Option<f64>>,
}

/// Reads back a `trials.csv` written by [`emit_report`].
pub fn read_trials_csv(path: &Path) -> Result<Vec<TrialCsvRow>, HarnessError> {
    let file = fs::File::open(path).map_err(HarnessError::io(path))?;
    let reader = std::io::BufReader::new(file);
    let bad = |msg: String| HarnessError::io(path)(std::io::Error::other(msg));
    let mut rows = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(HarnessError::io(path))?;
        if lineno == 0 {
            if !line.starts_with("seed,n,T,Lambda,") {
                return Err(bad(format!("unexpected trials.csv header: {line}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() < 10 {
            return Err(bad(format!("line {}: expected ≥ 10 columns", lineno + 1)));
        }
        let int = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("line {}: {e}", lineno + 1)));
        let opt = |s: &str| -> Result<Option<f64>, HarnessError> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse::<f64>()
                    .map(Some)
                    .map_err(|e| bad(format!("line {}: {e}", lineno + 1)))
            }
        };
        rows.push(TrialCsvRow {
            seed: int(f[0])?,
            n: int(f[1])? as usize,
            triangles: int(f[2])?,
            paths2: int(f[3])?,
            c2: opt(f[4])?,
            c1: opt(f[5])?,
            t_hat: int(f[6])?,
            lambda_hat: int(f[7])?,
            t_tilde: int(f[8])?,
            lambda_tilde: int(f[9])?,
            restricted: f[10..].iter().map(|s| opt(s)).collect::<Result<_, _>>()?,
        });
    }
    Ok(rows)
}
