//! Indexed batch evaluation. Samples are keyed by index with independent RNG
//! streams, so parallel and sequential execution produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_indexed_par(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_seq(n, f)
    }
}

/// Sequential implementation, always available (benchmark baseline).
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Rayon implementation.
#[cfg(feature = "parallel")]
pub fn map_indexed_par<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// First failure (by index) among indexed checks returning `Option<String>`
/// counterexamples.
pub fn first_failure<F>(n: usize, f: F) -> Option<(usize, String)>
where
    F: Fn(usize) -> Option<String> + Sync + Send,
{
    let results = map_indexed(n, |i| f(i).map(|msg| (i, msg)));
    results.into_iter().flatten().next()
}
