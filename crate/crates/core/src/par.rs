//! Thin wrappers over the hot inner loops.
//!
//! With the `parallel` feature (on by default) these fan out through rayon;
//! without it they run sequentially. Each wrapper preserves sequential
//! semantics exactly: results come back in input order and searches return
//! the first hit in input order, so a build with the feature disabled is
//! observably identical, just slower on large inputs.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over a slice, preserving order.
#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

/// First `Some` produced by `f`, scanning the slice in order.
#[cfg(feature = "parallel")]
pub(crate) fn find_map_first_slice<T: Sync, U: Send>(
    items: &[T],
    f: impl Fn(&T) -> Option<U> + Sync + Send,
) -> Option<U> {
    items.par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_map_first_slice<T, U>(
    items: &[T],
    f: impl Fn(&T) -> Option<U>,
) -> Option<U> {
    items.iter().find_map(f)
}

/// First `Some` produced by `f` over an integer range, in ascending order.
#[cfg(feature = "parallel")]
pub(crate) fn find_map_first_range<U: Send>(
    range: Range<u64>,
    f: impl Fn(u64) -> Option<U> + Sync + Send,
) -> Option<U> {
    range.into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_map_first_range<U>(
    range: Range<u64>,
    f: impl Fn(u64) -> Option<U>,
) -> Option<U> {
    range.into_iter().find_map(f)
}

/// The elements of `range` satisfying `pred`, in ascending order.
#[cfg(feature = "parallel")]
pub(crate) fn filter_range(range: Range<u32>, pred: impl Fn(u32) -> bool + Sync + Send) -> Vec<u32> {
    range.into_par_iter().filter(|&w| pred(w)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn filter_range(range: Range<u32>, pred: impl Fn(u32) -> bool) -> Vec<u32> {
    range.into_iter().filter(|&w| pred(w)).collect()
}
