//! Execution strategy for data-parallel loops.
//!
//! With the `parallel` feature, [`Execution::Parallel`] runs on the current
//! rayon pool. Without it, every strategy runs sequentially.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether loops will actually be split across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `0..len` in chunks and combines the chunk results with
    /// `merge`, starting from `identity()`. Chunk boundaries do not depend on
    /// the thread count, and chunk results are merged in index order.
    pub fn fold_chunks<A, I, F, M>(self, len: u64, chunk: u64, identity: I, f: F, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(std::ops::Range<u64>) -> A + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        let chunk = chunk.max(1);
        let chunks = len.div_ceil(chunk);
        let range = move |i: u64| i * chunk..((i + 1) * chunk).min(len);
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..chunks)
                .into_par_iter()
                .map(|i| f(range(i)))
                .reduce(&identity, &merge);
        }
        (0..chunks).map(|i| f(range(i))).fold(identity(), &merge)
    }
}

/// Runs `f` inside a rayon pool with `threads` workers (0 means the rayon
/// default). Without the `parallel` feature this simply calls `f`.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_sum_matches_direct_sum() {
        let direct: u64 = (0..1000u64).map(|i| i * i).sum();
        for exec in [Execution::Sequential, Execution::Parallel] {
            for chunk in [1, 7, 64, 5000] {
                let s = exec.fold_chunks(1000, chunk, || 0, |r| r.map(|i| i * i).sum::<u64>(), |a, b| a + b);
                assert_eq!(s, direct);
            }
        }
        assert_eq!(Execution::Parallel.fold_chunks(0, 8, || 0, |r| r.count(), |a, b| a + b), 0);
    }

    #[test]
    fn order_of_merge_is_preserved() {
        for threads in [1, 3] {
            let v = with_threads(threads, || {
                Execution::Parallel.fold_chunks(
                    100,
                    9,
                    Vec::new,
                    |r| r.collect::<Vec<u64>>(),
                    |mut a, b| {
                        a.extend(b);
                        a
                    },
                )
            });
            assert_eq!(v, (0..100).collect::<Vec<_>>());
        }
    }
}
