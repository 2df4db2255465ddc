//! Leave-one-out cross-validation of the covariate bandwidth `h`.
//!
//! ```text
//! score(h) = sum_i sum_j (1{Y_i >= Y_j} - F_{-i}(Y_j | X_i))^2
//! ```
//!
//! where `F_{-i}` is the survival estimator built without observation `i`.
//! Rows whose leave-one-out neighborhood is empty predict `1/2`, so every
//! candidate is scored on the same set of pairs.

use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimator::EstimatorConfig;
use crate::semimetric::DistanceMatrix;
use crate::stats::quantile_sorted;
use crate::Scalar;

/// Strictly increasing positive candidate bandwidths.
#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthGrid<T> {
    values: Vec<T>,
}

impl<T: Scalar> BandwidthGrid<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("grid", "bandwidth grid is empty"));
        }
        if values.iter().any(|&h| !(h > T::zero() && h.is_finite())) {
            return Err(Error::invalid("grid", "bandwidths must be positive and finite"));
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("grid", "bandwidths must be strictly increasing"));
        }
        Ok(Self { values })
    }

    /// `m` equispaced values from `lo` to `hi`.
    pub fn regular(lo: T, hi: T, m: usize) -> Result<Self> {
        match m {
            0 => Err(Error::invalid("grid", "needs at least one value")),
            1 => Self::new(vec![lo]),
            _ => {
                let step = (hi - lo) / T::from_count(m - 1);
                Self::new((0..m).map(|k| lo + step * T::from_count(k)).collect())
            }
        }
    }

    /// The default candidate set: 20 values from 0.01 to 0.1.
    pub fn standard() -> Self {
        Self::regular(T::lit(0.01), T::lit(0.1), 20).expect("valid default grid")
    }

    /// `m` values spanning the 1% to 25% quantiles of the positive pairwise
    /// distances.
    pub fn auto(distances: &DistanceMatrix<T>, m: usize) -> Result<Self> {
        let mut d: Vec<T> = distances
            .pairwise()
            .into_iter()
            .filter(|&v| v > T::zero())
            .collect();
        if d.is_empty() {
            return Err(Error::invalid("grid", "no positive pairwise distance"));
        }
        d.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
        let lo = quantile_sorted(&d, T::lit(0.01));
        let hi = quantile_sorted(&d, T::lit(0.25));
        if hi > lo {
            Self::regular(lo, hi, m)
        } else {
            Self::new(vec![hi])
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult<T> {
    pub h_opt: T,
    /// One score per grid value, in grid order.
    pub scores: Vec<T>,
}

/// Cross-validated `h` for `dataset`; `cfg.h` is ignored.
pub fn cv_bandwidth<T: Scalar>(
    dataset: &Dataset<T>,
    grid: &BandwidthGrid<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<CvResult<T>> {
    let distances = DistanceMatrix::build(dataset, cfg.semimetric)?;
    cv_bandwidth_with(&distances, dataset.responses(), grid, cfg)
}

/// As [`cv_bandwidth`] with a prebuilt distance matrix.
pub fn cv_bandwidth_with<T: Scalar>(
    distances: &DistanceMatrix<T>,
    responses: &[T],
    grid: &BandwidthGrid<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<CvResult<T>> {
    let n = responses.len();
    if n < 2 {
        return Err(Error::invalid("dataset", "cross-validation needs n >= 2"));
    }
    if distances.len() != n {
        return Err(Error::LengthMismatch {
            curves: distances.len(),
            responses: n,
        });
    }
    if !(cfg.lambda > T::zero()) {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    let scorer = Scorer::new(distances, responses, cfg);
    let scores: Vec<T> = grid
        .values()
        .par_iter()
        .map(|&h| scorer.score(h))
        .collect();
    let mut best = 0;
    for (k, &s) in scores.iter().enumerate() {
        if s < scores[best] {
            best = k;
        }
    }
    Ok(CvResult {
        h_opt: grid.values()[best],
        scores,
    })
}

/// Leave-one-out score at a single bandwidth.
pub fn cv_score<T: Scalar>(
    distances: &DistanceMatrix<T>,
    responses: &[T],
    h: T,
    cfg: &EstimatorConfig<T>,
) -> T {
    Scorer::new(distances, responses, cfg).score(h)
}

struct Scorer<'a, T> {
    distances: &'a DistanceMatrix<T>,
    responses: &'a [T],
    cfg: &'a EstimatorConfig<T>,
    /// Responses ascending.
    sorted: Vec<T>,
}

impl<'a, T: Scalar> Scorer<'a, T> {
    fn new(distances: &'a DistanceMatrix<T>, responses: &'a [T], cfg: &'a EstimatorConfig<T>) -> Self {
        let mut sorted = responses.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite responses"));
        Self {
            distances,
            responses,
            cfg,
            sorted,
        }
    }

    /// O(n^2) plus the in-window work: for fixed `i`, neighbor `l`
    /// contributes its full weight to every `Y_j <= Y_l - lambda` (a prefix of
    /// the sorted responses, accumulated with a difference array) and a
    /// partial weight inside `(Y_l - lambda, Y_l + lambda)`.
    fn score(&self, h: T) -> T {
        let n = self.responses.len();
        let lambda = self.cfg.lambda;
        let half = T::lit(0.5);
        let mut full = vec![T::zero(); n + 1];
        let mut partial = vec![T::zero(); n];
        let mut total_score = T::zero();

        for i in 0..n {
            let yi = self.responses[i];
            // number of j with Y_j <= Y_i
            let below = self.sorted.partition_point(|&y| y <= yi);
            let row = self.distances.row(i);

            full.iter_mut().for_each(|v| *v = T::zero());
            partial.iter_mut().for_each(|v| *v = T::zero());
            let mut total = T::zero();
            for (l, (&d, &yl)) in row.iter().zip(self.responses).enumerate() {
                if l == i {
                    continue;
                }
                let w = self.cfg.kernel.eval(d / h);
                if w <= T::zero() {
                    continue;
                }
                total = total + w;
                let start = self.sorted.partition_point(|&y| y <= yl - lambda);
                let end = self.sorted.partition_point(|&y| y < yl + lambda);
                full[0] = full[0] + w;
                full[start] = full[start] - w;
                for k in start..end {
                    partial[k] = partial[k] + w * self.cfg.response_kernel.cdf((yl - self.sorted[k]) / lambda);
                }
            }

            let mut running = T::zero();
            for k in 0..n {
                let indicator = if k < below { T::one() } else { T::zero() };
                let pred = if total > T::zero() {
                    running = running + full[k];
                    (running + partial[k]) / total
                } else {
                    half
                };
                let r = indicator - pred;
                total_score = total_score + r * r;
            }
        }
        total_score
    }
}
