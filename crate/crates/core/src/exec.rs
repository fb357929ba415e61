//! Execution policy for the data-parallel kernels.
//!
//! Every kernel that fans out (counting over `x_1`, search subtrees, parameter
//! sweeps) takes an [`Exec`]. Results never depend on the policy: partial
//! results are exact and merged in a fixed order.

use std::ops::Range;

/// How a kernel distributes its independent work items.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    /// Plain iteration on the calling thread.
    Sequential,
    /// Work-stealing over the current rayon pool. Falls back to sequential
    /// iteration when the crate is built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps every item and returns the outputs in input order.
    pub fn map<I, T, F>(self, items: Vec<I>, f: F) -> Vec<T>
    where
        I: Send,
        T: Send,
        F: Fn(I) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }

    /// Sums `f` over an integer range. Addition is exact, so the result is
    /// independent of how the range is split.
    pub fn sum_range<T, F>(self, range: Range<u64>, f: F) -> T
    where
        T: Send + std::iter::Sum<T> + std::ops::Add<Output = T> + Default,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().map(f).sum();
        }
        range.map(f).sum()
    }

    /// Folds each element of the range into a per-worker accumulator, then
    /// merges the accumulators. `merge` must be associative and commutative.
    pub fn fold_range<A, F, M>(self, range: Range<u64>, init: impl Fn() -> A + Sync + Send, fold: F, merge: M) -> A
    where
        A: Send,
        F: Fn(A, u64) -> A + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().fold(&init, &fold).reduce(&init, &merge);
        }
        #[cfg(not(feature = "parallel"))]
        let _ = merge;
        range.fold(init(), fold)
    }
}

/// Runs `f` with at most `jobs` worker threads. `None` keeps the global pool.
pub fn with_jobs<R, F>(jobs: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    if let Some(jobs) = jobs {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = jobs;
    f()
}

/// Number of workers the default policy would use.
pub fn available_workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let seq: u64 = Exec::Sequential.sum_range(0..10_000, |x| x * x % 7);
        let par: u64 = Exec::Parallel.sum_range(0..10_000, |x| x * x % 7);
        assert_eq!(seq, par);
        let v = Exec::Parallel.map((0..100u32).collect(), |x| x + 1);
        assert_eq!(v, (1..101).collect::<Vec<_>>());
    }

    #[test]
    fn fold_merges_all_items() {
        let count = Exec::Parallel.fold_range(1..1001, || 0u64, |a, x| a + x, |a, b| a + b);
        assert_eq!(count, 500_500);
    }
}
