//! Exhaustive sweeps over index ranges.
//!
//! Every checker in this crate reduces to "find the first index in `0..n`
//! whose block of work produces a counterexample". With the `parallel`
//! feature the blocks are distributed over rayon's pool and the
//! lowest-index hit wins, so parallel and sequential runs report the same
//! witness.

/// How a sweep distributes its blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Returns the result of the lowest index `i < n` for which `f(i)` is `Some`.
pub fn find_first<T, F>(strategy: Strategy, n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match strategy {
        Strategy::Sequential => (0..n).find_map(f),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().find_map_first(f)
        }
    }
}

/// Sums `f(i)` over `0..n`.
pub fn sum<F>(strategy: Strategy, n: usize, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    match strategy {
        Strategy::Sequential => (0..n).map(f).sum(),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).sum()
        }
    }
}

/// Caps the global pool at `threads` workers. Only the first call has an
/// effect; later calls (or calls after the pool started) are ignored.
pub fn configure_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
    }
}
