//! Data-parallel execution of per-interpretation and per-subset work.
//!
//! With the `parallel` feature (on by default) the helpers fan out over
//! rayon; without it they run sequentially. [`set_parallel`] toggles the
//! strategy at runtime, which the bench suite uses to compare both paths.
//! All reductions are over exact values, so results never depend on
//! evaluation order.

use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

static PARALLEL: AtomicBool = AtomicBool::new(cfg!(feature = "parallel"));

/// Enables or disables the rayon path at runtime. A no-op (always
/// sequential) when the `parallel` feature is compiled out.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled && cfg!(feature = "parallel"), Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    PARALLEL.load(Ordering::Relaxed)
}

/// Fold `map(0) .. map(n-1)` with an associative, commutative `reduce`.
pub(crate) fn map_reduce<T, M, R>(n: u64, map: M, reduce: R) -> Option<T>
where
    T: Send,
    M: Fn(u64) -> T + Sync,
    R: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return (0..n).into_par_iter().map(&map).reduce_with(&reduce);
    }
    (0..n).map(map).reduce(reduce)
}

/// Collect `map(0) .. map(n-1)`, preserving index order.
pub(crate) fn map_collect<T, M>(n: u64, map: M) -> Vec<T>
where
    T: Send,
    M: Fn(u64) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return (0..n).into_par_iter().map(&map).collect();
    }
    (0..n).map(map).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let f = |i: u64| i * i;
        set_parallel(false);
        let seq = map_reduce(1000, f, u64::max);
        let seq_v = map_collect(10, f);
        set_parallel(true);
        let par = map_reduce(1000, f, u64::max);
        let par_v = map_collect(10, f);
        assert_eq!(seq, par);
        assert_eq!(seq_v, par_v);
    }
}
