//! Graph builders over a sampled vertex set.
//!
//! Three routes produce the same kind of [`Graph`]:
//!
//! - [`build_disc_naive`] — the reference disc-model builder, a full
//!   `O(N²)` scan joining vertices at hyperbolic distance `≤ R`;
//! - [`build_disc_pruned`] — the same edge set, found by sorting vertices by
//!   angle and only examining candidates inside an angular window derived
//!   from the adjacency threshold (every candidate is re-checked exactly, and
//!   the stop bound is floored by a worst-case bound from the law of cosines,
//!   so the output never depends on the window's asymptotic validity);
//! - [`build_binomial`] — the soft model, joining each pair independently
//!   with probability `1/(exp(β ζ/2 (d − R)) + 1)`. The Bernoulli coin of
//!   pair `(i, j)` is a pure function of `(edge_seed, i, j)`, so the graph is
//!   reproducible under any evaluation order.
//!
//! Pair scans evaluate `cosh(ζ d)` in a cancellation-free form from
//! per-vertex tables of `e^{±ζr}`, `sinh(ζr)` and half-angle sines/cosines:
//!
//! ```text
//! cosh(ζ d) = (e^{ζ(r_u−r_v)} + e^{ζ(r_v−r_u)})/2
//!           + 2 sinh(ζ r_u) sinh(ζ r_v) sin²(Δθ/2)
//! ```
//!
//! with `sin(Δθ/2)` expanded through half-angle products, which keeps every
//! term nonnegative and avoids per-pair transcendentals.

use crate::hypgeom::{
    disc_angle_window, hyperbolic_distance, ModelParams, PolarVertex, DEFAULT_WINDOW_MARGIN,
};
use crate::par::map_range;
use crate::rng;
use crate::sampler::VertexSet;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{self, BufRead, Write};
use thiserror::Error;

/// Inflation applied on top of the `ε = 0.2` angular window when scanning
/// for disc-model candidates.
pub const PRUNE_WINDOW_SAFETY: f64 = 0.25;

/// Default cap on the vertex count of the quadratic binomial builder.
pub const BINOMIAL_PAIR_CAP: usize = 50_000;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("binomial builder refuses n = {n} > cap {cap}: the per-pair scan is O(N²); set force_quadratic to override")]
    PairCapExceeded { n: usize, cap: usize },
}

/// Which generative model produced a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelTag {
    Disc,
    Binomial,
}

/// An undirected simple graph in compressed sparse row form, together with
/// the vertex table and the provenance needed to reproduce it.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    vertices: Vec<PolarVertex>,
    radius: f64,
    pub model: Option<ModelTag>,
    pub params: Option<ModelParams>,
    pub seed: Option<u64>,
    pub edge_seed: Option<u64>,
    /// Disc threshold modifier: edges at distance `≤ (1+δ)R`.
    pub delta: f64,
}

impl Graph {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> u64 {
        (self.neighbors.len() / 2) as u64
    }

    /// Strictly sorted neighbor list of `v`.
    pub fn adj(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn vertices(&self) -> &[PolarVertex] {
        &self.vertices
    }

    /// Disc radius the vertex table lives on.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.adj(u)
                .iter()
                .filter(move |&&v| v as usize > u)
                .map(move |&v| (u as u32, v))
        })
    }

    /// Builds a graph from an explicit pair list (used by the analyze path
    /// and by synthetic test graphs). Pairs may be in any order; self-loops
    /// are rejected, duplicates collapse.
    pub fn from_pairs(
        vertices: Vec<PolarVertex>,
        radius: f64,
        pairs: &[(u32, u32)],
    ) -> Graph {
        let (offsets, neighbors) = assemble_csr(vertices.len(), pairs.iter().copied());
        Graph {
            offsets,
            neighbors,
            vertices,
            radius,
            model: None,
            params: None,
            seed: None,
            edge_seed: None,
            delta: 0.0,
        }
    }

    /// Synthetic graph on abstract vertices with prescribed types (defaults
    /// to all-zero types on a disc of the given radius).
    pub fn synthetic(n: usize, pairs: &[(u32, u32)], types: Option<&[f64]>, radius: f64) -> Graph {
        let vertices = (0..n)
            .map(|i| {
                let t = types.map_or(0.0, |ts| ts[i]);
                PolarVertex {
                    r: radius - t,
                    theta: 2.0 * PI * (i as f64 + 1.0) / (n as f64 + 1.0),
                    t,
                }
            })
            .collect();
        Graph::from_pairs(vertices, radius, pairs)
    }

    /// Induced subgraph on the vertices with `keep[v] == true`. Vertex order
    /// is preserved; provenance metadata is carried over.
    pub fn induce(&self, keep: &[bool]) -> Graph {
        assert_eq!(keep.len(), self.n());
        let mut remap = vec![u32::MAX; self.n()];
        let mut vertices = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                remap[v] = vertices.len() as u32;
                vertices.push(self.vertices[v]);
            }
        }
        let pairs: Vec<(u32, u32)> = self
            .edges()
            .filter(|&(u, v)| keep[u as usize] && keep[v as usize])
            .map(|(u, v)| (remap[u as usize], remap[v as usize]))
            .collect();
        let (offsets, neighbors) = assemble_csr(vertices.len(), pairs.into_iter());
        Graph {
            offsets,
            neighbors,
            vertices,
            radius: self.radius,
            model: self.model,
            params: self.params,
            seed: self.seed,
            edge_seed: self.edge_seed,
            delta: self.delta,
        }
    }
}

/// CSR assembly from an unordered unordered-pair stream.
fn assemble_csr(n: usize, pairs: impl Iterator<Item = (u32, u32)>) -> (Vec<usize>, Vec<u32>) {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (u, v) in pairs {
        debug_assert_ne!(u, v, "self-loop");
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    let mut neighbors = Vec::new();
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
        neighbors.extend_from_slice(row);
        offsets.push(neighbors.len());
    }
    (offsets, neighbors)
}

/// Per-vertex tables for the cancellation-free `cosh(ζ d)` kernel.
struct PairKernel {
    e: Vec<f64>,    // e^{ζ r}
    einv: Vec<f64>, // e^{-ζ r}
    sh: Vec<f64>,   // sinh(ζ r)
    hs: Vec<f64>,   // sin(θ/2)
    hc: Vec<f64>,   // cos(θ/2)
}

impl PairKernel {
    fn new(vertices: &[PolarVertex], zeta: f64) -> Self {
        let n = vertices.len();
        let mut k = PairKernel {
            e: Vec::with_capacity(n),
            einv: Vec::with_capacity(n),
            sh: Vec::with_capacity(n),
            hs: Vec::with_capacity(n),
            hc: Vec::with_capacity(n),
        };
        for v in vertices {
            let a = zeta * v.r;
            k.e.push(a.exp());
            k.einv.push((-a).exp());
            k.sh.push(a.sinh());
            k.hs.push((0.5 * v.theta).sin());
            k.hc.push((0.5 * v.theta).cos());
        }
        k
    }

    /// `cosh(ζ d(i, j))`.
    #[inline]
    fn cosh_dist(&self, i: usize, j: usize) -> f64 {
        let s = self.hs[i] * self.hc[j] - self.hc[i] * self.hs[j]; // sin(Δθ/2)
        0.5 * (self.e[i] * self.einv[j] + self.e[j] * self.einv[i])
            + 2.0 * self.sh[i] * self.sh[j] * s * s
    }
}

/// Connection probability of the binomial model,
/// `p = 1/(exp(β ζ/2 (d(u,v) − R)) + 1) ∈ (0, 1)`.
pub fn connection_probability(u: &PolarVertex, v: &PolarVertex, params: &ModelParams) -> f64 {
    let d = hyperbolic_distance(u, v, params.zeta);
    let x = params.beta * 0.5 * params.zeta * (d - params.radius);
    1.0 / (x.exp() + 1.0)
}

/// Reference disc-model builder: edge iff `d(u, v) ≤ R`, full pair scan.
pub fn build_disc_naive(vs: &VertexSet) -> Graph {
    build_disc_naive_delta(vs, 0.0)
}

/// Reference builder for the modified threshold `(1+δ)R` (exploration only;
/// no theory predictions attach to δ ≠ 0).
pub fn build_disc_naive_delta(vs: &VertexSet, delta: f64) -> Graph {
    let n = vs.params.n;
    let threshold = (1.0 + delta) * vs.params.radius;
    let rows = map_range(n, true, |i| {
        let mut js = Vec::new();
        for j in (i + 1)..n {
            let d = hyperbolic_distance(&vs.vertices[i], &vs.vertices[j], vs.params.zeta);
            if d <= threshold {
                js.push((i as u32, j as u32));
            }
        }
        js
    });
    finish(vs, rows, ModelTag::Disc, None, delta)
}

/// Disc-model builder with angular pruning; edge set identical to
/// [`build_disc_naive`].
pub fn build_disc_pruned(vs: &VertexSet) -> Graph {
    build_disc_pruned_impl(vs, 0.0, true)
}

/// Pruned builder for the `(1+δ)R` threshold.
pub fn build_disc_pruned_delta(vs: &VertexSet, delta: f64) -> Graph {
    build_disc_pruned_impl(vs, delta, true)
}

/// Sequential pruned builder (same output; used for benchmarking the
/// parallel speedup).
pub fn build_disc_pruned_seq(vs: &VertexSet) -> Graph {
    build_disc_pruned_impl(vs, 0.0, false)
}

fn build_disc_pruned_impl(vs: &VertexSet, delta: f64, parallel: bool) -> Graph {
    let n = vs.params.n;
    let zeta = vs.params.zeta;
    let radius = vs.params.radius;
    let threshold = (1.0 + delta) * radius;
    let q_thr = (zeta * threshold).cosh();
    let kern = PairKernel::new(&vs.vertices, zeta);

    // Vertices whose type is too large to satisfy the window precondition
    // against some partner fall back to full scans.
    let tau = 0.5 * ((1.0 - delta.abs()) * radius - DEFAULT_WINDOW_MARGIN);
    let in_h: Vec<bool> = vs.vertices.iter().map(|v| v.t >= tau).collect();

    let mut by_angle: Vec<u32> = (0..n as u32).filter(|&i| !in_h[i as usize]).collect();
    by_angle.sort_unstable_by(|&a, &b| {
        let (ta, tb) = (vs.vertices[a as usize].theta, vs.vertices[b as usize].theta);
        ta.partial_cmp(&tb).unwrap().then(a.cmp(&b))
    });
    let m = by_angle.len();

    let (t_max, r_min) = by_angle.iter().fold((f64::MIN, f64::MAX), |(t, r), &i| {
        let v = &vs.vertices[i as usize];
        (t.max(v.t), r.min(v.r))
    });
    let sh_min = (zeta * r_min).sinh();

    // Window scans among precondition-satisfying vertices.
    let window_rows: Vec<Vec<(u32, u32)>> = map_range(m, parallel, |pos| {
        let u = by_angle[pos] as usize;
        let vu = &vs.vertices[u];
        let w_lemma = disc_angle_window(vu.t, t_max, radius, zeta, delta, 0.2, DEFAULT_WINDOW_MARGIN)
            .map(|(_, hi)| hi * (1.0 + PRUNE_WINDOW_SAFETY))
            .unwrap_or(PI);
        let denom = 2.0 * kern.sh[u] * sh_min;
        let w_exact = if denom > 0.0 {
            2.0 * (q_thr / denom).sqrt().min(1.0).asin()
        } else {
            PI
        };
        let stop = w_lemma.max(w_exact).min(PI);

        let mut out = Vec::new();
        for step in 1..m {
            let v = by_angle[(pos + step) % m] as usize;
            let mut fwd = vs.vertices[v].theta - vu.theta;
            if fwd < 0.0 {
                fwd += 2.0 * PI;
            }
            if fwd > stop {
                break;
            }
            // each unordered pair is scanned from the side whose forward gap
            // is the shorter arc; ties break by index
            if fwd > PI || (fwd == PI && u >= v) {
                continue;
            }
            if kern.cosh_dist(u, v) <= q_thr {
                out.push((u.min(v) as u32, u.max(v) as u32));
            }
        }
        out
    });

    // Full scans for the fallback set.
    let h_list: Vec<u32> = (0..n as u32).filter(|&i| in_h[i as usize]).collect();
    let full_rows: Vec<Vec<(u32, u32)>> = map_range(h_list.len(), parallel, |idx| {
        let u = h_list[idx] as usize;
        let mut out = Vec::new();
        for v in 0..n {
            if v == u || (in_h[v] && v <= u) {
                continue;
            }
            if kern.cosh_dist(u, v) <= q_thr {
                out.push((u.min(v) as u32, u.max(v) as u32));
            }
        }
        out
    });

    let pairs = window_rows.into_iter().chain(full_rows).collect();
    finish(vs, pairs, ModelTag::Disc, None, delta)
}

/// Options for the quadratic binomial builder.
#[derive(Debug, Clone, Copy)]
pub struct BinomialOptions {
    pub cap: usize,
    pub force_quadratic: bool,
}

impl Default for BinomialOptions {
    fn default() -> Self {
        Self {
            cap: BINOMIAL_PAIR_CAP,
            force_quadratic: false,
        }
    }
}

/// Binomial-model builder: each pair `{i, j}` becomes an edge independently
/// with `p_{i,j} = 1/(exp(β ζ/2 (d − R)) + 1)`, using the coin keyed by
/// `(edge_seed, i, j)`.
pub fn build_binomial(vs: &VertexSet, edge_seed: u64) -> Result<Graph, BuildError> {
    build_binomial_with(vs, edge_seed, BinomialOptions::default(), true)
}

/// Sequential binomial builder (same output).
pub fn build_binomial_seq(vs: &VertexSet, edge_seed: u64) -> Result<Graph, BuildError> {
    build_binomial_with(vs, edge_seed, BinomialOptions::default(), false)
}

pub fn build_binomial_with(
    vs: &VertexSet,
    edge_seed: u64,
    opts: BinomialOptions,
    parallel: bool,
) -> Result<Graph, BuildError> {
    let n = vs.params.n;
    if n > opts.cap && !opts.force_quadratic {
        return Err(BuildError::PairCapExceeded { n, cap: opts.cap });
    }
    let zeta = vs.params.zeta;
    let radius = vs.params.radius;
    let half_beta = 0.5 * vs.params.beta;
    let zr = zeta * radius;
    let k_fac = (-half_beta * zr).exp(); // e^{-βζR/2}; only used when β = 2
    let fast = half_beta == 1.0;
    let kern = PairKernel::new(&vs.vertices, zeta);

    let rows = map_range(n, parallel, |i| {
        let mut js = Vec::new();
        for j in (i + 1)..n {
            let q = kern.cosh_dist(i, j).max(1.0);
            let ey = q + (q * q - 1.0).sqrt(); // e^{ζ d}
            let ex = if fast {
                k_fac * ey
            } else {
                (half_beta * (ey.ln() - zr)).exp()
            };
            let p = 1.0 / (ex + 1.0);
            if rng::pair_unit(edge_seed, i as u32, j as u32) < p {
                js.push((i as u32, j as u32));
            }
        }
        js
    });
    Ok(finish_with_edge_seed(vs, rows, ModelTag::Binomial, Some(edge_seed)))
}

fn finish(
    vs: &VertexSet,
    pair_lists: Vec<Vec<(u32, u32)>>,
    model: ModelTag,
    edge_seed: Option<u64>,
    delta: f64,
) -> Graph {
    let (offsets, neighbors) = assemble_csr(
        vs.params.n,
        pair_lists.iter().flat_map(|l| l.iter().copied()),
    );
    Graph {
        offsets,
        neighbors,
        vertices: vs.vertices.clone(),
        radius: vs.params.radius,
        model: Some(model),
        params: Some(vs.params),
        seed: Some(vs.seed),
        edge_seed,
        delta,
    }
}

fn finish_with_edge_seed(
    vs: &VertexSet,
    pair_lists: Vec<Vec<(u32, u32)>>,
    model: ModelTag,
    edge_seed: Option<u64>,
) -> Graph {
    finish(vs, pair_lists, model, edge_seed, 0.0)
}

/// Metadata sidecar written next to edge lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub model: Option<ModelTag>,
    pub params: Option<ModelParams>,
    pub seed: Option<u64>,
    pub edge_seed: Option<u64>,
    pub delta: f64,
    pub n: usize,
    pub edge_count: u64,
}

impl GraphMetadata {
    pub fn of(g: &Graph) -> Self {
        Self {
            model: g.model,
            params: g.params,
            seed: g.seed,
            edge_seed: g.edge_seed,
            delta: g.delta,
            n: g.n(),
            edge_count: g.edge_count(),
        }
    }
}

/// Writes the edge list as CSV `u,v` with `u < v`, lexicographically sorted.
pub fn write_edges_csv<W: Write>(out: &mut W, g: &Graph) -> io::Result<()> {
    writeln!(out, "u,v")?;
    for (u, v) in g.edges() {
        writeln!(out, "{u},{v}")?;
    }
    Ok(())
}

/// Reads an edge list written by [`write_edges_csv`].
pub fn read_edges_csv<R: BufRead>(input: R) -> io::Result<Vec<(u32, u32)>> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut pairs = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if lineno == 0 {
            if line.trim() != "u,v" {
                return Err(bad(format!("unexpected edge CSV header: {line}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| bad(format!("line {}: expected `u,v`", lineno + 1)))?;
        let u: u32 = a
            .trim()
            .parse()
            .map_err(|e| bad(format!("line {}: {e}", lineno + 1)))?;
        let v: u32 = b
            .trim()
            .parse()
            .map_err(|e| bad(format!("line {}: {e}", lineno + 1)))?;
        if u >= v {
            return Err(bad(format!("line {}: edges must have u < v", lineno + 1)));
        }
        pairs.push((u, v));
    }
    Ok(pairs)
}
