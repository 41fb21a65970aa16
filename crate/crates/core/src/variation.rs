//! Partition-supremum sums over a finite grid.
//!
//! All p-variation style quantities reduce to
//!
//! ```text
//! sup over sub-partitions i_0 < i_1 < … < i_k of Σ_l norm(i_l, i_{l+1})^exponent
//! ```
//!
//! computed exactly by dynamic programming over grid prefixes. Including both
//! endpoints never decreases the sum (every term is nonnegative), so the DP
//! over [0, n] covers the supremum over all sub-partitions.

/// prefix[j] = sup over sub-partitions of {0..=j} of the exponentiated sum.
///
/// `norm(i, j)` must return the increment norm over grid indices i < j.
pub fn prefix_sums<F>(n: usize, exponent: f64, norm: F) -> Vec<f64>
where
    F: Fn(usize, usize) -> f64,
{
    let mut best = vec![0.0; n + 1];
    for j in 1..=n {
        let mut b = f64::NEG_INFINITY;
        for i in 0..j {
            let cand = best[i] + norm(i, j).powf(exponent);
            if cand > b {
                b = cand;
            }
        }
        best[j] = b;
    }
    best
}

/// The supremum sum over the whole grid.
pub fn sup_sum<F>(n: usize, exponent: f64, norm: F) -> f64
where
    F: Fn(usize, usize) -> f64,
{
    if n == 0 {
        return 0.0;
    }
    *prefix_sums(n, exponent, norm)
        .last()
        .expect("prefix_sums returns n + 1 entries")
}

/// Variation seminorm: the supremum sum re-normalized by `1 / exponent`.
pub fn seminorm<F>(n: usize, exponent: f64, norm: F) -> f64
where
    F: Fn(usize, usize) -> f64,
{
    sup_sum(n, exponent, norm).powf(1.0 / exponent)
}
