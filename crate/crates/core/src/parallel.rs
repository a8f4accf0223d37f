//! Deterministic parallel reduction.
//!
//! Every parallel sum in this crate goes through [`tree_reduce`]: the combine
//! tree is a fixed function of the index range and leaf size, never of the
//! worker count or scheduling, so outputs are reproducible even for
//! non-associative combines (floating-point accumulation) and for results
//! whose *representation* depends on association (factored rationals).

use std::ops::Range;

/// Splits `range` at its midpoint recursively down to `leaf_size`, evaluates
/// leaves, and combines the two halves of each split. The recursion shape
/// depends only on `(range.len(), leaf_size)`.
pub fn tree_reduce<T, L, C>(range: Range<u64>, leaf_size: u64, leaf: &L, combine: &C) -> T
where
    T: Send,
    L: Fn(Range<u64>) -> T + Sync,
    C: Fn(T, T) -> T + Sync,
{
    let len = range.end - range.start;
    debug_assert!(len > 0, "tree_reduce needs a nonempty range");
    if len <= leaf_size.max(1) {
        return leaf(range);
    }
    let mid = range.start + len / 2;
    let (a, b) = rayon::join(
        || tree_reduce(range.start..mid, leaf_size, leaf, combine),
        || tree_reduce(mid..range.end, leaf_size, leaf, combine),
    );
    combine(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_match_sequential() {
        let got = tree_reduce(0..1000, 7, &|r| r.sum::<u64>(), &|a, b| a + b);
        assert_eq!(got, (0..1000).sum::<u64>());
    }

    #[test]
    fn float_combine_tree_is_fixed() {
        // same tree twice gives bitwise-equal floats
        let leaf = |r: Range<u64>| r.map(|i| 1.0 / (i + 1) as f64).sum::<f64>();
        let a = tree_reduce(0..100_000, 4096, &leaf, &|x, y| x + y);
        let b = tree_reduce(0..100_000, 4096, &leaf, &|x, y| x + y);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
