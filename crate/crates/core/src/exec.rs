//! Data-parallel helpers. With the `parallel` feature off everything runs
//! sequentially through the same closures, so results are identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f).collect()`, in parallel when enabled. Output order is the
/// index order regardless of scheduling.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().with_min_len(16).map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Fallible variant of [`map_range`]; the first error by index wins.
pub fn try_map_range<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    let results = map_range(n, f);
    results.into_iter().collect()
}

/// Runs `f` on every item, in parallel when enabled.
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter_mut().enumerate().for_each(|(i, t)| f(i, t));
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter_mut().enumerate().for_each(|(i, t)| f(i, t));
    }
}

/// `f(i, &mut items[i])` for every item, collecting results in index order;
/// the first error by index wins.
pub fn try_map_mut<T, R, E, F>(items: &mut [T], f: F) -> Result<Vec<R>, E>
where
    T: Send,
    R: Send,
    E: Send,
    F: Fn(usize, &mut T) -> Result<R, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let results: Vec<Result<R, E>> = items.par_iter_mut().enumerate().map(|(i, t)| f(i, t)).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<R, E>> = items.iter_mut().enumerate().map(|(i, t)| f(i, t)).collect();
    results.into_iter().collect()
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
