//! Indexed map over trial numbers, on rayon when the `parallel` feature
//! is enabled and sequential otherwise. Results always come back in index
//! order.

use std::ops::Range;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

pub const PARALLEL_AVAILABLE: bool = cfg!(feature = "parallel");

pub fn map_indexed<T, F>(exec: Exec, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(f).collect()
        }
        _ => range.map(f).collect(),
    }
}

/// Runs `f` on a pool with `threads` workers (None = all cores). Without
/// the `parallel` feature this just calls `f`.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = threads {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                return pool.install(f);
            }
        }
    }
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let a = map_indexed(Exec::Parallel, 0..1000, |i| i * i);
        let b = map_indexed(Exec::Sequential, 0..1000, |i| i * i);
        assert_eq!(a, b);
        assert_eq!(with_threads(Some(2), || map_indexed(Exec::Parallel, 5..8, |i| i)), vec![5, 6, 7]);
    }
}
