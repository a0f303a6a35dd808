//! Execution strategy for the data-parallel loops (phase-space scans,
//! vertex evaluation, orbit generation, optimizer restarts).
//!
//! Every parallel loop in the crate goes through [`map_range`], which keeps
//! results in index order. Reductions are then done sequentially on the
//! ordered output, so results never depend on the thread count or on the
//! chosen strategy.

/// How to run a data-parallel loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    /// Plain iterator on the calling thread.
    Sequential,
    /// Rayon work-stealing over the global pool. Falls back to sequential
    /// execution when the `parallel` feature is disabled.
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this build can actually run in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Evaluates `f(i)` for `i in 0..n` and returns the results in index order.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Splits `0..n` into contiguous chunks of at most `chunk` items and maps
/// each chunk; results come back in chunk order.
pub fn map_chunks<R, F>(exec: Exec, n: usize, chunk: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(std::ops::Range<usize>) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = n.div_ceil(chunk);
    map_range(exec, count, |c| {
        let start = c * chunk;
        f(start..(start + chunk).min(n))
    })
}
