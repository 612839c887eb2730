//! Thin dispatch layer between rayon and plain iteration.
//!
//! Everything funnels through an index-space map so that results come back
//! in a fixed order regardless of how many threads run the closure. That
//! keeps every caller bit-for-bit deterministic across thread counts and
//! across builds with the `parallel` feature disabled.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(n, f)
}

/// Sequential reference for `map_indexed`; also the fallback used when the
/// `parallel` feature is off. Exposed so benchmarks can time both paths.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}
