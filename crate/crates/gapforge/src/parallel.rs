//! Worker pools. Work is split into index-ordered items so results never
//! depend on the thread count.

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{CliError, CliResult};

pub fn pool(threads: usize) -> CliResult<ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config(format!("thread pool: {e}")))
}

/// `f(0), ..., f(n - 1)` in index order.
pub fn ordered<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Splits `[lo, hi)` into consecutive chunks of `chunk` items.
pub fn chunks(lo: u64, hi: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = hi.min(a.saturating_add(chunk));
        out.push((a, b));
        a = b;
    }
    out
}
