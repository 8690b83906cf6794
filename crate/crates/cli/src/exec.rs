//! Threaded node evaluation.

use std::num::NonZeroUsize;
use std::thread;

use cauchy_deriv::quad::Executor;
use cauchy_deriv::ScaledComplex;

/// Environment variable capping the number of evaluation threads.
pub const THREADS_ENV: &str = "CAUCHY_DERIV_THREADS";

// Rings smaller than this are evaluated on the calling thread.
const MIN_PARALLEL_NODES: usize = 2048;

/// Splits node evaluation into contiguous chunks over scoped threads.
/// Results are assembled in index order, so output does not depend on the
/// thread count.
#[derive(Clone, Copy, Debug)]
pub struct Threaded {
    threads: usize,
}

impl Threaded {
    pub fn new(threads: usize) -> Self {
        Self {
            threads: threads.max(1),
        }
    }

    /// Available parallelism, capped by `CAUCHY_DERIV_THREADS` when set.
    pub fn from_env() -> Self {
        let available = thread::available_parallelism().map_or(1, NonZeroUsize::get);
        let cap = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0);
        Self::new(cap.map_or(available, |c| c.min(available)))
    }

    pub fn threads(&self) -> usize {
        self.threads
    }
}

impl Executor for Threaded {
    fn run(
        &self,
        count: usize,
        task: &(dyn Fn(usize) -> Option<ScaledComplex> + Sync),
    ) -> Vec<Option<ScaledComplex>> {
        if self.threads == 1 || count < MIN_PARALLEL_NODES {
            return (0..count).map(task).collect();
        }
        let chunk = count.div_ceil(self.threads);
        let mut out = vec![None; count];
        thread::scope(|s| {
            for (k, slot) in out.chunks_mut(chunk).enumerate() {
                s.spawn(move || {
                    for (i, v) in slot.iter_mut().enumerate() {
                        *v = task(k * chunk + i);
                    }
                });
            }
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cauchy_deriv::driver::{taylor_coefficient_with, DriverConfig};
    use cauchy_deriv::quad::Sequential;
    use cauchy_deriv::sfun::lookup;

    #[test]
    fn matches_sequential_bitwise() {
        let f = lookup("bernoulli").unwrap().function().clone();
        let cfg = DriverConfig::default().with_tol(1e-12);
        let a = taylor_coefficient_with(&f, 100, 6.22, &cfg, &Sequential).unwrap();
        for t in [2, 5, 16] {
            let b = taylor_coefficient_with(&f, 100, 6.22, &cfg, &Threaded::new(t)).unwrap();
            assert_eq!(a, b);
        }
    }
}
