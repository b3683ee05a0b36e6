//! Small descriptive-statistics helpers shared by the bandwidth rules and
//! the Monte Carlo harness.

/// Arithmetic mean. Empty input returns NaN.
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation with divisor n-1.
pub fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len();
    let m = mean(values);
    let ss = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    (ss / (n - 1) as f64).sqrt()
}

/// Linear-interpolation quantile (type 7) of an ascending-sorted slice.
///
/// `p` in [0, 1]; index h = (n-1)p, value interpolated between the two
/// bracketing order statistics.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = lo + 1;
    if hi >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Interquartile range (type-7 quantiles) of an unsorted slice.
pub fn iqr(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("non-finite value"));
    quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25)
}

/// Median of an unsorted slice.
pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("non-finite value"));
    quantile_sorted(&sorted, 0.5)
}
