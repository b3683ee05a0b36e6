//! Execution helpers: data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) [`map_indexed`] fans out over
//! rayon's global pool; without it the call compiles to the plain loop in
//! [`map_indexed_seq`]. Both produce results in index order, and every
//! element is computed by the same code, so output is identical whichever
//! path runs.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    map_indexed_seq(n, f)
}

/// Sequential reference path. Always available; used by the `parallel = off`
/// build and by the benchmark suite as the baseline.
pub fn map_indexed_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).map(f).collect()
}
