//! Small descriptive statistics used by bandwidth selection and the
//! simulation lab.

use crate::Scalar;

/// Linear-interpolation quantile (Hyndman-Fan type 7) of an ascending slice.
pub fn quantile_sorted<T: Scalar>(sorted: &[T], p: T) -> T {
    match sorted.len() {
        0 => T::nan(),
        1 => sorted[0],
        n => {
            let pos = p.max(T::zero()).min(T::one()) * T::from_count(n - 1);
            let lo = pos.floor();
            let k = lo.to_usize().unwrap_or(0).min(n - 1);
            if k + 1 >= n {
                return sorted[n - 1];
            }
            let frac = pos - lo;
            sorted[k] + frac * (sorted[k + 1] - sorted[k])
        }
    }
}

/// Sorts a copy (NaNs last) and returns the `p`-quantile.
pub fn quantile<T: Scalar>(values: &[T], p: T) -> T {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or_else(|| a.is_nan().cmp(&b.is_nan())));
    quantile_sorted(&v, p)
}

pub fn median<T: Scalar>(values: &[T]) -> T {
    quantile(values, T::lit(0.5))
}

pub fn mean<T: Scalar>(values: &[T]) -> T {
    values.iter().copied().sum::<T>() / T::from_count(values.len())
}

/// Sample covariance (denominator `n - 1`).
pub fn covariance<T: Scalar>(a: &[T], b: &[T]) -> T {
    let (ma, mb) = (mean(a), mean(b));
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - ma) * (y - mb))
        .sum::<T>()
        / T::from_count(a.len().saturating_sub(1))
}

pub fn std_dev<T: Scalar>(values: &[T]) -> T {
    covariance(values, values).sqrt()
}

pub fn correlation<T: Scalar>(a: &[T], b: &[T]) -> T {
    covariance(a, b) / (std_dev(a) * std_dev(b))
}
