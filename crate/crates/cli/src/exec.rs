use hyperdet_core::quadrature::Executor;
use rayon::prelude::*;

/// Runs jobs on the rayon pool; results come back in job order.
#[derive(Clone, Copy, Debug, Default)]
pub struct Parallel;

impl Executor for Parallel {
    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T> {
        (0..n).into_par_iter().map(f).collect()
    }
}

/// Sizes the global pool; `None` keeps rayon's default.
pub fn init_threads(threads: Option<usize>) {
    if let Some(t) = threads.filter(|&t| t > 0) {
        // A second initialization (tests, repeated runs) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}
