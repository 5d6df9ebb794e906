//! Order-preserving parallel map with a sequential fallback.
//!
//! With the `parallel` feature, work runs on rayon (a dedicated pool when
//! `jobs > 1`, the global pool when `jobs == 0`). `jobs == 1` or a build
//! without the feature runs on the calling thread. Results are always in
//! input order, so reports do not depend on the degree of parallelism.

/// Number of worker threads to use when the caller has no preference.
pub fn default_jobs() -> usize {
    std::env::var("EQSCHUB_JOBS").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
}

pub fn map<T, R, F>(jobs: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match jobs {
            1 => items.iter().map(f).collect(),
            0 => items.par_iter().map(f).collect(),
            n => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
                Err(_) => items.par_iter().map(f).collect(),
            },
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        items.iter().map(f).collect()
    }
}

/// Whether this build can run work in parallel at all.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_for_any_job_count() {
        let items: Vec<u64> = (0..500).collect();
        let expect: Vec<u64> = items.iter().map(|x| x * x).collect();
        for jobs in [0, 1, 3] {
            assert_eq!(map(jobs, &items, |x| x * x), expect);
        }
    }
}
