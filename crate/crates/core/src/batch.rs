//! Batch evaluation over independent seeded items.
//!
//! With the `parallel` feature (on by default) [`map`] fans out over rayon's
//! pool; without it the sequential path is used. Both are always callable
//! directly so benches can compare them.

/// Evaluates `f(0..count)` sequentially, in index order.
pub fn map_seq<R, F>(count: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..count).map(f).collect()
}

/// Evaluates `f(0..count)` on the rayon pool; output keeps index order.
#[cfg(feature = "parallel")]
pub fn map_par<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    map_par(count, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    map_seq(count, f)
}

/// Largest value produced over the batch (0 for an empty batch, NaN if any item is NaN).
pub fn max_over<F>(count: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    map(count, f)
        .into_iter()
        .fold(0.0_f64, crate::linalg::nan_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let out = map(100, |i| i * i);
        assert_eq!(out, map_seq(100, |i| i * i));
    }

    #[test]
    fn max_over_empty_is_zero() {
        assert_eq!(max_over(0, |_| 1.0), 0.0);
    }
}
