//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) the helpers dispatch to rayon when
//! asked to; without it every call runs sequentially. All helpers preserve
//! input order, so results are identical in both modes.

/// Execution mode for the data-parallel inner loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether a loop of `len` items should actually fan out.
    pub fn fans_out(self, len: usize) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel && len >= PAR_THRESHOLD
    }
}

/// Below this many items the rayon overhead dominates.
pub const PAR_THRESHOLD: usize = 2048;

/// Ordered map over a slice.
pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.fans_out(items.len()) {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Ordered map over `0..n`, without a size threshold. Meant for coarse-grained
/// work items (whole instances, strategy shards).
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel && n > 1 {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let items: Vec<u64> = (0..10_000).collect();
        let a = map_slice(Exec::Sequential, &items, |x| x * x + 1);
        let b = map_slice(Exec::Parallel, &items, |x| x * x + 1);
        assert_eq!(a, b);
        assert_eq!(map_range(Exec::Parallel, 37, |i| i * 3), map_range(Exec::Sequential, 37, |i| i * 3));
    }
}
