//! Worker pool shared by grid-parallel operations. `MINSURF_THREADS` caps
//! the parallelism; unset or invalid values fall back to the rayon default.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = ThreadPoolBuilder::new();
        if let Ok(v) = std::env::var("MINSURF_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n >= 1 {
                    builder = builder.num_threads(n);
                }
            }
        }
        builder.build().expect("failed to build worker pool")
    })
}
