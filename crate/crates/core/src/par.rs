//! Internal helpers that run an index-parallel loop on rayon when the
//! `parallel` feature is enabled and the caller asks for it, and fall back to
//! a plain sequential loop otherwise. Both paths produce identical results:
//! the mapped values land in index order and integer reductions commute.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, collecting results in index order.
pub(crate) fn map_range<T, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}

/// Sums `f(i)` over `0..n` into a `u64`.
pub(crate) fn sum_range<F>(n: usize, parallel: bool, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().map(f).sum();
    }
    let _ = parallel;
    (0..n).map(f).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_and_seq_agree() {
        let a = map_range(100, false, |i| i * i);
        let b = map_range(100, true, |i| i * i);
        assert_eq!(a, b);
        assert_eq!(
            sum_range(1000, false, |i| i as u64),
            sum_range(1000, true, |i| i as u64)
        );
    }
}
