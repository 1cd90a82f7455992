//! Exact triangle and 2-path counting, clustering coefficients, and the
//! typical/atypical decomposition.
//!
//! Triangles are counted on a degree-ordered orientation: edges point from
//! lower to higher (degree, index) rank and each directed wedge is closed by
//! intersecting sorted out-neighbour lists. That keeps hub vertices cheap on
//! the power-law graphs produced here. All counters are 64-bit; `Λ` reaches
//! `N·(max degree)²` territory at desk scale, which overflows 32 bits.

use crate::graphgen::Graph;
use crate::par::{map_range, sum_range};
use crate::sampler::omega_default;
use serde::{Deserialize, Serialize};

/// How vertices of degree < 2 enter the mean local clustering coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DegreeLt2 {
    /// Leave them out of the mean (common practice; the default).
    #[default]
    Exclude,
    /// Count them as 0.
    Zero,
    /// Count them as 1 (the convention under which a double star approaches
    /// mean local clustering 1 while its global coefficient stays 0).
    One,
}

/// Triangle / 2-path counts of one graph plus the typical split and any
/// requested type-restricted coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterStats {
    pub triangles: u64,
    pub paths2: u64,
    /// Global clustering `3T/Λ`; `None` when `Λ = 0`.
    pub c2: Option<f64>,
    /// Mean local clustering; `None` when no vertex qualifies.
    pub c1: Option<f64>,
    pub t_hat: u64,
    pub lambda_hat: u64,
    pub t_tilde: u64,
    pub lambda_tilde: u64,
    /// `(type cap t, Ĉ₂(t))` in request order.
    pub restricted: Vec<RestrictedC2>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RestrictedC2 {
    pub cap: f64,
    pub c2: Option<f64>,
}

#[inline]
fn choose2(d: u64) -> u64 {
    d * d.saturating_sub(1) / 2
}

/// Exact degree sequence; sums to twice the edge count.
pub fn degree_sequence(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.degree(v) as u32).collect()
}

/// Number of (not necessarily induced) 2-paths, `Λ = Σ_v C(deg v, 2)`.
pub fn count_paths2(g: &Graph) -> u64 {
    (0..g.n()).map(|v| choose2(g.degree(v) as u64)).sum()
}

/// Degree-ordered orientation: vertex `rank_of[v]` is `v`'s position in the
/// (degree, index) order and `out[r]` holds the higher-ranked neighbours of
/// the rank-`r` vertex, as sorted ranks.
struct Oriented {
    orig_of_rank: Vec<u32>,
    out_offsets: Vec<usize>,
    out: Vec<u32>,
}

impl Oriented {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_unstable_by_key(|&v| (g.degree(v as usize), v));
        let mut rank_of = vec![0u32; n];
        for (r, &v) in order.iter().enumerate() {
            rank_of[v as usize] = r as u32;
        }
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n];
        for v in 0..n {
            let rv = rank_of[v];
            for &w in g.adj(v) {
                let rw = rank_of[w as usize];
                if rw > rv {
                    rows[rv as usize].push(rw);
                }
            }
        }
        let mut out_offsets = Vec::with_capacity(n + 1);
        out_offsets.push(0usize);
        let mut out = Vec::with_capacity(g.edge_count() as usize);
        for row in &mut rows {
            row.sort_unstable();
            out.extend_from_slice(row);
            out_offsets.push(out.len());
        }
        Oriented {
            orig_of_rank: order,
            out_offsets,
            out,
        }
    }

    #[inline]
    fn row(&self, r: usize) -> &[u32] {
        &self.out[self.out_offsets[r]..self.out_offsets[r + 1]]
    }
}

#[inline]
fn intersect_count(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut c) = (0usize, 0usize, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Exact triangle count.
pub fn count_triangles(g: &Graph) -> u64 {
    count_triangles_impl(g, cfg_parallel())
}

/// Sequential triangle count (identical result).
pub fn count_triangles_seq(g: &Graph) -> u64 {
    count_triangles_impl(g, false)
}

#[inline]
fn cfg_parallel() -> bool {
    cfg!(feature = "parallel")
}

fn count_triangles_impl(g: &Graph, parallel: bool) -> u64 {
    let o = Oriented::new(g);
    sum_range(g.n(), parallel, |r| {
        let row = o.row(r);
        row.iter()
            .map(|&s| intersect_count(row, o.row(s as usize)))
            .sum()
    })
}

/// Triangles split by a vertex predicate: returns `(total, all_marked)`
/// where the second component counts triangles whose three corners all
/// satisfy `marked`.
pub fn count_triangles_split(g: &Graph, marked: &[bool]) -> (u64, u64) {
    let o = Oriented::new(g);
    let parallel = cfg_parallel();
    let per_row = map_range(g.n(), parallel, |r| {
        let row = o.row(r);
        let mut total = 0u64;
        let mut all = 0u64;
        let mu = marked[o.orig_of_rank[r] as usize];
        for &s in row {
            let other = o.row(s as usize);
            let ms = marked[o.orig_of_rank[s as usize] as usize];
            let (mut i, mut j) = (0usize, 0usize);
            while i < row.len() && j < other.len() {
                match row[i].cmp(&other[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        total += 1;
                        if mu && ms && marked[o.orig_of_rank[row[i] as usize] as usize] {
                            all += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        (total, all)
    });
    per_row
        .into_iter()
        .fold((0, 0), |(t, a), (dt, da)| (t + dt, a + da))
}

/// Per-vertex triangle participation counts.
pub fn triangle_participation(g: &Graph) -> Vec<u64> {
    let o = Oriented::new(g);
    let n = g.n();
    let parallel = cfg_parallel();
    let fold_rows = |rows: std::ops::Range<usize>, counts: &mut [u64]| {
        for r in rows {
            let row = o.row(r);
            for &s in row {
                let other = o.row(s as usize);
                let (mut i, mut j) = (0usize, 0usize);
                while i < row.len() && j < other.len() {
                    match row[i].cmp(&other[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            counts[o.orig_of_rank[r] as usize] += 1;
                            counts[o.orig_of_rank[s as usize] as usize] += 1;
                            counts[o.orig_of_rank[row[i] as usize] as usize] += 1;
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
        }
    };
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        let threads = rayon::current_num_threads().max(1);
        let chunk = n.div_ceil(threads);
        let partials: Vec<Vec<u64>> = (0..threads)
            .into_par_iter()
            .map(|k| {
                let mut counts = vec![0u64; n];
                let lo = k * chunk;
                let hi = ((k + 1) * chunk).min(n);
                if lo < hi {
                    fold_rows(lo..hi, &mut counts);
                }
                counts
            })
            .collect();
        let mut counts = vec![0u64; n];
        for p in partials {
            for (c, v) in counts.iter_mut().zip(p) {
                *c += v;
            }
        }
        return counts;
    }
    let _ = parallel;
    let mut counts = vec![0u64; n];
    fold_rows(0..n, &mut counts);
    counts
}

/// Global clustering coefficient `C₂ = 3T/Λ`; undefined (`None`) when the
/// graph has no 2-paths — the caller decides what that means.
pub fn global_clustering(g: &Graph) -> Option<f64> {
    let lambda = count_paths2(g);
    if lambda == 0 {
        return None;
    }
    Some(3.0 * count_triangles(g) as f64 / lambda as f64)
}

/// Mean local clustering coefficient with an explicit convention for
/// degree < 2 vertices.
pub fn local_clustering_mean(g: &Graph, convention: DegreeLt2) -> Option<f64> {
    let tri = triangle_participation(g);
    let mut sum = 0.0;
    let mut count = 0u64;
    for v in 0..g.n() {
        let d = g.degree(v) as u64;
        if d >= 2 {
            sum += tri[v] as f64 / choose2(d) as f64;
            count += 1;
        } else {
            match convention {
                DegreeLt2::Exclude => {}
                DegreeLt2::Zero => count += 1,
                DegreeLt2::One => {
                    sum += 1.0;
                    count += 1;
                }
            }
        }
    }
    (count > 0).then(|| sum / count as f64)
}

/// Typical/atypical decomposition with cutoff `R/2 − ω`: counts of triangles
/// and 2-paths whose three vertices are all typical, and of the rest. Both
/// sides are counted directly (not by subtraction), so
/// `T̂ + T̃ = T` and `Λ̂ + Λ̃ = Λ` are real cross-checks.
pub fn typical_split(g: &Graph, omega: f64) -> TypicalSplit {
    let cutoff = g.radius() / 2.0 - omega;
    let typical: Vec<bool> = g.vertices().iter().map(|v| v.t <= cutoff).collect();
    let (total, t_hat) = count_triangles_split(g, &typical);
    let mut lambda_hat = 0u64;
    let mut lambda_tilde = 0u64;
    for v in 0..g.n() {
        let d = g.degree(v) as u64;
        if typical[v] {
            let dt = g.adj(v).iter().filter(|&&w| typical[w as usize]).count() as u64;
            lambda_hat += choose2(dt);
            lambda_tilde += choose2(d) - choose2(dt);
        } else {
            lambda_tilde += choose2(d);
        }
    }
    TypicalSplit {
        t_hat,
        lambda_hat,
        t_tilde: total - t_hat,
        lambda_tilde,
        cutoff,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TypicalSplit {
    pub t_hat: u64,
    pub lambda_hat: u64,
    pub t_tilde: u64,
    pub lambda_tilde: u64,
    pub cutoff: f64,
}

/// `Ĉ₂(t)`: global clustering of the subgraph induced by vertices of type
/// at most `t`. `None` if that subgraph has no 2-paths.
pub fn restricted_clustering(g: &Graph, cap: f64) -> Option<f64> {
    let keep: Vec<bool> = g.vertices().iter().map(|v| v.t <= cap).collect();
    global_clustering(&g.induce(&keep))
}

/// Computes the full statistics block for one graph.
pub fn compute_cluster_stats(
    g: &Graph,
    omega_override: Option<f64>,
    type_caps: &[f64],
    convention: DegreeLt2,
) -> ClusterStats {
    let omega = omega_override.unwrap_or_else(|| omega_default(g.n()));
    let triangles = count_triangles(g);
    let paths2 = count_paths2(g);
    let split = typical_split(g, omega);
    debug_assert_eq!(split.t_hat + split.t_tilde, triangles);
    debug_assert_eq!(split.lambda_hat + split.lambda_tilde, paths2);
    let restricted = type_caps
        .iter()
        .map(|&cap| RestrictedC2 {
            cap,
            c2: restricted_clustering(g, cap),
        })
        .collect();
    ClusterStats {
        triangles,
        paths2,
        c2: (paths2 > 0).then(|| 3.0 * triangles as f64 / paths2 as f64),
        c1: local_clustering_mean(g, convention),
        t_hat: split.t_hat,
        lambda_hat: split.lambda_hat,
        t_tilde: split.t_tilde,
        lambda_tilde: split.lambda_tilde,
        restricted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::Graph;
    use crate::rng;

    fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                pairs.push((i, j));
            }
        }
        Graph::synthetic(n, &pairs, None, 10.0)
    }

    /// Double star with parameter `n`: centres 0 and 1 adjacent, each joined
    /// to `n − 1` leaves; `2n` vertices in total.
    fn double_star(n: usize) -> Graph {
        let mut pairs = vec![(0u32, 1u32)];
        for k in 0..(n - 1) as u32 {
            pairs.push((0, 2 + k));
            pairs.push((1, 2 + (n - 1) as u32 + k));
        }
        Graph::synthetic(2 * n, &pairs, None, 10.0)
    }

    fn gnp(n: usize, p: f64, seed: u64) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if rng::pair_unit(seed, i, j) < p {
                    pairs.push((i, j));
                }
            }
        }
        Graph::synthetic(n, &pairs, None, 10.0)
    }

    fn brute_triangles(g: &Graph) -> u64 {
        let n = g.n();
        let mut t = 0;
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                        t += 1;
                    }
                }
            }
        }
        t
    }

    fn brute_paths2(g: &Graph) -> u64 {
        let n = g.n();
        let mut count = 0;
        for center in 0..n {
            for a in 0..n {
                for b in (a + 1)..n {
                    if a != center
                        && b != center
                        && g.has_edge(center, a)
                        && g.has_edge(center, b)
                    {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn small_graph_counts() {
        let k3 = complete(3);
        assert_eq!(count_triangles(&k3), 1);
        assert_eq!(count_paths2(&k3), 3);
        assert_eq!(global_clustering(&k3), Some(1.0));
        let k4 = complete(4);
        assert_eq!(count_triangles(&k4), 4);
        assert_eq!(global_clustering(&k4), Some(1.0));
        assert_eq!(degree_sequence(&k4), vec![3, 3, 3, 3]);
        // star with 3 leaves
        let star = Graph::synthetic(4, &[(0, 1), (0, 2), (0, 3)], None, 10.0);
        assert_eq!(count_paths2(&star), 3);
        assert_eq!(count_triangles(&star), 0);
        // path on 3 vertices
        let path = Graph::synthetic(3, &[(0, 1), (1, 2)], None, 10.0);
        assert_eq!(global_clustering(&path), Some(0.0));
        assert_eq!(local_clustering_mean(&path, DegreeLt2::Exclude), Some(0.0));
        // any tree has zero triangles
        let tree = Graph::synthetic(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)], None, 10.0);
        assert_eq!(count_triangles(&tree), 0);
        assert_eq!(global_clustering(&tree), Some(0.0));
    }

    #[test]
    fn empty_and_undefined_cases() {
        let empty = Graph::synthetic(5, &[], None, 10.0);
        assert_eq!(degree_sequence(&empty), vec![0; 5]);
        assert_eq!(global_clustering(&empty), None);
        assert_eq!(local_clustering_mean(&empty, DegreeLt2::Exclude), None);
        assert_eq!(local_clustering_mean(&empty, DegreeLt2::Zero), Some(0.0));
        // single edge: Λ = 0 stays undefined, not 0
        let edge = Graph::synthetic(2, &[(0, 1)], None, 10.0);
        assert_eq!(global_clustering(&edge), None);
    }

    #[test]
    fn double_star_contrast() {
        let g = double_star(5); // 10 vertices, centre degree 5
        assert_eq!(count_paths2(&g), 20);
        assert_eq!(count_triangles(&g), 0);
        assert_eq!(global_clustering(&g), Some(0.0));
        assert_eq!(local_clustering_mean(&g, DegreeLt2::One), Some(0.8));
        // C1 under `one` approaches 1 as n grows while C2 stays 0
        let big = double_star(200);
        let c1 = local_clustering_mean(&big, DegreeLt2::One).unwrap();
        assert!(c1 > 0.99);
        assert_eq!(global_clustering(&big), Some(0.0));
    }

    #[test]
    fn conventions_differ_as_documented() {
        let g = double_star(5);
        assert_eq!(local_clustering_mean(&g, DegreeLt2::Zero), Some(0.0));
        assert_eq!(local_clustering_mean(&g, DegreeLt2::Exclude), Some(0.0));
        assert_eq!(local_clustering_mean(&g, DegreeLt2::One), Some(0.8));
        let k3 = complete(3);
        for conv in [DegreeLt2::Exclude, DegreeLt2::Zero, DegreeLt2::One] {
            assert_eq!(local_clustering_mean(&k3, conv), Some(1.0));
        }
    }

    #[test]
    fn counts_match_brute_force() {
        for seed in 0..20u64 {
            let g = gnp(60, 0.2, seed);
            assert_eq!(count_triangles(&g), brute_triangles(&g), "seed {seed}");
            assert_eq!(count_triangles_seq(&g), brute_triangles(&g));
            assert_eq!(count_paths2(&g), brute_paths2(&g));
        }
    }

    #[test]
    fn paths2_center_enumeration_oracle() {
        let g = gnp(400, 0.02, 3);
        assert_eq!(count_paths2(&g), brute_paths2(&g));
    }

    #[test]
    fn three_t_le_lambda_with_equality_iff_complete_components() {
        for seed in 0..10u64 {
            let g = gnp(50, 0.15, seed);
            assert!(3 * count_triangles(&g) <= count_paths2(&g));
        }
        let k5 = complete(5);
        assert_eq!(3 * count_triangles(&k5), count_paths2(&k5));
    }

    #[test]
    fn participation_sums_to_three_t() {
        let g = gnp(80, 0.15, 5);
        let part = triangle_participation(&g);
        assert_eq!(part.iter().sum::<u64>(), 3 * count_triangles(&g));
    }

    #[test]
    fn typical_split_identities_and_dual_route() {
        // types spread over [0, 5] on a disc of radius 10; ω = 1 → cutoff 4
        let n = 60;
        let types: Vec<f64> = (0..n).map(|i| 5.0 * rng::unit(8, i as u64, 1)).collect();
        let mut pairs = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if rng::pair_unit(4, i, j) < 0.2 {
                    pairs.push((i, j));
                }
            }
        }
        let g = Graph::synthetic(n, &pairs, Some(&types), 10.0);
        let split = typical_split(&g, 1.0);
        assert_eq!(split.t_hat + split.t_tilde, count_triangles(&g));
        assert_eq!(split.lambda_hat + split.lambda_tilde, count_paths2(&g));
        // dual route: induced subgraph on typical vertices
        let keep: Vec<bool> = g.vertices().iter().map(|v| v.t <= split.cutoff).collect();
        let induced = g.induce(&keep);
        assert_eq!(split.t_hat, count_triangles(&induced));
        assert_eq!(split.lambda_hat, count_paths2(&induced));
    }

    #[test]
    fn typical_split_degenerate_cases() {
        let g = complete(6); // all types 0 on radius 10: everyone typical at ω=1
        let s = typical_split(&g, 1.0);
        assert_eq!((s.t_tilde, s.lambda_tilde), (0, 0));
        // enormous ω makes everyone atypical
        let s = typical_split(&g, 100.0);
        assert_eq!((s.t_hat, s.lambda_hat), (0, 0));
        assert_eq!(s.t_tilde, count_triangles(&g));
    }

    #[test]
    fn restricted_clustering_cases() {
        let n = 40;
        let types: Vec<f64> = (0..n).map(|i| 4.0 * rng::unit(9, i as u64, 1)).collect();
        let mut pairs = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if rng::pair_unit(10, i, j) < 0.3 {
                    pairs.push((i, j));
                }
            }
        }
        let g = Graph::synthetic(n, &pairs, Some(&types), 10.0);
        // cap ≥ R keeps every vertex
        assert_eq!(restricted_clustering(&g, g.radius()), global_clustering(&g));
        // cap 0 with all positive types: undefined
        assert_eq!(restricted_clustering(&g, 0.0), None);
        // induced vertex count is nondecreasing in the cap
        let mut prev = 0usize;
        for k in 0..=8 {
            let cap = k as f64 * 0.5;
            let kept = g.vertices().iter().filter(|v| v.t <= cap).count();
            assert!(kept >= prev);
            prev = kept;
        }
    }

    #[test]
    fn handshake_identity() {
        let g = gnp(200, 0.05, 12);
        let degs = degree_sequence(&g);
        assert_eq!(degs.iter().map(|&d| d as u64).sum::<u64>(), 2 * g.edge_count());
    }

    #[test]
    fn stats_block_is_consistent() {
        let n = 100;
        let types: Vec<f64> = (0..n).map(|i| 6.0 * rng::unit(14, i as u64, 1)).collect();
        let mut pairs = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if rng::pair_unit(15, i, j) < 0.1 {
                    pairs.push((i, j));
                }
            }
        }
        let g = Graph::synthetic(n, &pairs, Some(&types), 12.0);
        let stats = compute_cluster_stats(&g, Some(1.0), &[2.0, 100.0], DegreeLt2::Exclude);
        assert_eq!(stats.t_hat + stats.t_tilde, stats.triangles);
        assert_eq!(stats.lambda_hat + stats.lambda_tilde, stats.paths2);
        if let Some(c2) = stats.c2 {
            assert!((0.0..=1.0).contains(&c2));
        }
        assert_eq!(stats.restricted.len(), 2);
        // cap beyond every type reproduces the global value
        assert_eq!(stats.restricted[1].c2, stats.c2);
    }
}
