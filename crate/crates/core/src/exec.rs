//! Bounded parallel execution.
//!
//! `SPARSE_INTERP_THREADS` caps worker threads for every parallel section:
//! `0` (or `1`) forces serial execution, any other value sizes a dedicated
//! pool, and an unset variable uses the default rayon pool. Results are
//! always joined in index order, so scheduling never changes output.

use std::sync::OnceLock;

use rayon::prelude::*;

pub const THREADS_ENV: &str = "SPARSE_INTERP_THREADS";

enum Mode {
    Serial,
    Default,
    Pool(rayon::ThreadPool),
}

fn mode() -> &'static Mode {
    static MODE: OnceLock<Mode> = OnceLock::new();
    MODE.get_or_init(|| match std::env::var(THREADS_ENV) {
        Err(_) => Mode::Default,
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(0) | Ok(1) => Mode::Serial,
            Ok(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => Mode::Pool(pool),
                Err(_) => Mode::Default,
            },
            Err(_) => Mode::Default,
        },
    })
}

/// Maps `f` over `0..n`, possibly in parallel, returning results in index
/// order.
pub fn run_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode() {
        Mode::Serial => (0..n).map(f).collect(),
        Mode::Default => (0..n).into_par_iter().map(f).collect(),
        Mode::Pool(pool) => pool.install(|| (0..n).into_par_iter().map(f).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_index_order() {
        let out = run_indexed(100, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}
