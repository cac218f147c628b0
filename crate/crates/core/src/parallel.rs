use rayon::prelude::*;

use crate::error::{Error, Result};

/// Number of worker threads used for ensembles and sweeps.
///
/// Results never depend on this value: work items are indexed, seeded from
/// their index, and merged in index order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parallelism(usize);

impl Parallelism {
    pub fn new(threads: usize) -> Self {
        Parallelism(threads.max(1))
    }

    pub fn sequential() -> Self {
        Parallelism(1)
    }

    /// One thread per logical core.
    pub fn available() -> Self {
        Parallelism(std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn threads(self) -> usize {
        self.0
    }
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism::sequential()
    }
}

/// Evaluates `f(0..n)` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, parallelism: Parallelism, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if parallelism.threads() <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.threads())
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot build worker pool: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(&f).collect())
}
