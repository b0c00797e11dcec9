//! Execution strategy for the data-parallel loops (bar-complex assembly,
//! elimination row updates and the verification battery).
//!
//! With the `parallel` feature disabled every strategy runs sequentially.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `items`, preserving input order in the output.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Applies `f` to every element of `items` in place.
    pub fn for_each_mut<T, F>(self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(&mut T) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            items.par_iter_mut().for_each(f);
            return;
        }
        items.iter_mut().for_each(f);
    }

    /// Like [`Exec::for_each_mut`] but stays sequential for small workloads,
    /// where thread dispatch costs more than the work.
    pub fn for_each_mut_weighted<T, F>(self, items: &mut [T], work_per_item: usize, f: F)
    where
        T: Send,
        F: Fn(&mut T) + Sync + Send,
    {
        const MIN_PARALLEL_WORK: usize = 1 << 15;
        if items.len().saturating_mul(work_per_item) < MIN_PARALLEL_WORK {
            items.iter_mut().for_each(f);
        } else {
            self.for_each_mut(items, f);
        }
    }
}
