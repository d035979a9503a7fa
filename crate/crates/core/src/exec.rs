//! Data-parallel helpers. With the `parallel` feature (default) the maps
//! run on rayon; without it they fall back to plain sequential iteration.
//! Outputs are index-ordered either way, so results do not depend on the
//! feature or the worker count.

#[cfg(feature = "parallel")]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn par_map_indexed<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map_indexed<U, F>(count: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..count).map(f).collect()
}

/// Cap the global worker count. A no-op in sequential builds and after the
/// pool has already been initialized.
pub fn configure_jobs(jobs: usize) {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
    }
}

/// Map over fixed-size chunks, combining chunk results in index order.
/// Chunk size is independent of the worker count so floating-point
/// accumulations reduce in a reproducible order.
pub fn par_chunk_fold<T, A, F, G>(items: &[T], chunk: usize, f: F, mut combine: G) -> Option<A>
where
    T: Sync,
    A: Send,
    F: Fn(&[T]) -> A + Sync + Send,
    G: FnMut(A, A) -> A,
{
    if items.is_empty() {
        return None;
    }
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    let parts: Vec<A> = {
        use rayon::prelude::*;
        items.par_chunks(chunk).map(|c| f(c)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<A> = items.chunks(chunk).map(|c| f(c)).collect();
    let mut it = parts.into_iter();
    let first = it.next()?;
    Some(it.fold(first, |acc, x| combine(acc, x)))
}
