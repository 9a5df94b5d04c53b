//! Thin shim over rayon so the data-parallel inner loops degrade to plain
//! iteration when the `parallel` feature is disabled.

/// Apply `f` to every `width`-sized row of `data`.
pub(crate) fn for_each_row_mut<T, F>(data: &mut [T], width: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(width)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (i, row) in data.chunks_mut(width).enumerate() {
            f(i, row);
        }
    }
}

/// Map every `width`-sized row of `data` and fold the results in row order.
///
/// The per-row maps run in parallel but the fold is sequential over the
/// collected results: floating-point reductions must not depend on the
/// scheduler, or reports stop being bit-for-bit reproducible.
pub(crate) fn map_reduce_rows<T, R, F, G>(data: &[T], width: usize, identity: R, f: F, g: G) -> R
where
    T: Sync,
    R: Send,
    F: Fn(usize, &[T]) -> R + Sync,
    G: Fn(R, R) -> R,
{
    #[cfg(feature = "parallel")]
    let partials: Vec<R> = {
        use rayon::prelude::*;
        data.par_chunks(width)
            .enumerate()
            .map(|(i, row)| f(i, row))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<R> = data
        .chunks(width)
        .enumerate()
        .map(|(i, row)| f(i, row))
        .collect();
    partials.into_iter().fold(identity, g)
}

/// Map an index range into a vector, in parallel when enabled.
pub(crate) fn map_collect<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
