//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the [`Execution::Parallel`] strategy
//! runs on the rayon pool; without it every strategy runs sequentially.
//! Results are always returned in input order so callers stay deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this strategy actually runs on a thread pool in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Order-preserving map.
pub fn map<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Order-preserving fallible map over an index range; the error reported is
/// the one at the smallest failing index.
pub fn try_map_range<U, E, F>(exec: Execution, n: usize, f: F) -> Result<Vec<U>, E>
where
    U: Send,
    E: Send,
    F: Fn(usize) -> Result<U, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        let results: Vec<Result<U, E>> = (0..n).into_par_iter().map(f).collect();
        return results.into_iter().collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Smallest index whose result is `Some`, or the first error before it.
pub fn find_first<U, E, F>(exec: Execution, n: usize, f: F) -> Result<Option<(usize, U)>, E>
where
    U: Send,
    E: Send,
    F: Fn(usize) -> Result<Option<U>, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        let hit = (0..n)
            .into_par_iter()
            .map(|i| (i, f(i)))
            .find_first(|(_, r)| !matches!(r, Ok(None)));
        return match hit {
            None => Ok(None),
            Some((i, Ok(Some(u)))) => Ok(Some((i, u))),
            Some((_, Err(e))) => Err(e),
            Some((_, Ok(None))) => unreachable!(),
        };
    }
    let _ = exec;
    for i in 0..n {
        if let Some(u) = f(i)? {
            return Ok(Some((i, u)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<i64> = (0..1000).collect();
        let a = map(Execution::Sequential, &xs, |x| x * x);
        let b = map(Execution::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        let f = |i: usize| -> Result<Option<usize>, ()> { Ok((i % 97 == 96).then_some(i)) };
        assert_eq!(
            find_first(Execution::Sequential, 1000, f),
            find_first(Execution::Parallel, 1000, f)
        );
        assert_eq!(find_first(Execution::Parallel, 1000, f), Ok(Some((96, 96))));
    }
}
