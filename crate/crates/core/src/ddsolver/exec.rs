use crate::{Error, Result};

/// Runs independent per-subdomain tasks, sequentially or on a thread pool.
///
/// Results always come back in task order, so reductions over them are
/// deterministic regardless of the worker count.
pub struct Executor {
    workers: usize,
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor").field("workers", &self.workers).finish()
    }
}

impl Executor {
    /// `workers <= 1` runs sequentially. Without the `parallel` feature every
    /// worker count runs sequentially.
    pub fn new(workers: usize) -> Result<Self> {
        let workers = workers.max(1);
        #[cfg(feature = "parallel")]
        {
            let pool = if workers > 1 {
                Some(
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(workers)
                        .build()
                        .map_err(|e| Error::Dimension(format!("thread pool: {e}")))?,
                )
            } else {
                None
            };
            Ok(Self { workers, pool })
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = Error::Dimension;
            Ok(Self { workers })
        }
    }

    pub fn sequential() -> Self {
        Self {
            workers: 1,
            #[cfg(feature = "parallel")]
            pool: None,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    /// `(0..n).map(f)` in order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| (0..n).into_par_iter().map(&f).collect());
        }
        (0..n).map(f).collect()
    }

    /// Like [`Self::map`] for fallible tasks; the first error in task order wins.
    pub fn try_map<T, F>(&self, n: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        self.map(n, f).into_iter().collect()
    }
}
