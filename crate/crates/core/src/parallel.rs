//! Thread-count control for the parallel scans.
//!
//! Every reduction in this crate is associative with a deterministic
//! tie-break, so results do not depend on the number of workers.

/// Environment variable read by the CLI as the default worker count.
pub const THREADS_ENV: &str = "CURV_THREADS";

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is `None` or zero.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}
