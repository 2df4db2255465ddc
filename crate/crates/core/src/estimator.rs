//! Kernel estimator of the conditional survival function and its
//! generalized inverse.
//!
//! For a query curve `x`,
//!
//! ```text
//! F(y|x) = sum_i K(d(x, X_i)/h) Q((Y_i - y)/lambda) / sum_i K(d(x, X_i)/h)
//! q(alpha|x) = inf { t : F(t|x) <= alpha }
//! ```
//!
//! Everything at a fixed `x` only depends on the sample points inside the
//! ball `d(x, X_i) <= h`, so [`LocalFit`] gathers them once and answers many
//! survival / quantile queries.

use crate::data::{Curve, Dataset};
use crate::error::{Error, Result};
use crate::kernel::{CovariateKernel, ResponseKernel};
use crate::semimetric::SemiMetricKind;
use crate::Scalar;

/// Smoothing configuration shared by every estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig<T> {
    /// Covariate bandwidth, in units of the semi-metric.
    pub h: T,
    /// Response bandwidth, in units of `Y`.
    pub lambda: T,
    pub kernel: CovariateKernel,
    pub response_kernel: ResponseKernel,
    pub semimetric: SemiMetricKind,
    /// Relative tolerance of the quantile bisection.
    pub tol_rel: T,
}

impl<T: Scalar> EstimatorConfig<T> {
    pub fn new(h: T, lambda: T) -> Result<Self> {
        let cfg = Self {
            h,
            lambda,
            kernel: CovariateKernel::Paper,
            response_kernel: ResponseKernel::Triangular,
            semimetric: SemiMetricKind::L2,
            tol_rel: T::lit(1e-10),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_kernel(mut self, kernel: CovariateKernel) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn with_semimetric(mut self, semimetric: SemiMetricKind) -> Self {
        self.semimetric = semimetric;
        self
    }

    pub fn with_h(mut self, h: T) -> Result<Self> {
        self.h = h;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > T::zero() && self.h.is_finite()) {
            return Err(Error::invalid("h", format!("must be positive and finite, got {}", self.h)));
        }
        if !(self.lambda > T::zero() && self.lambda.is_finite()) {
            return Err(Error::invalid(
                "lambda",
                format!("must be positive and finite, got {}", self.lambda),
            ));
        }
        if !(self.tol_rel > T::zero()) {
            return Err(Error::invalid("tol", "must be positive"));
        }
        Ok(())
    }
}

/// `K(d(x, X_i)/h)` for every sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalWeights<T> {
    pub weights: Vec<T>,
    pub total: T,
}

impl<T: Scalar> LocalWeights<T> {
    pub fn from_distances(distances: &[T], h: T, kernel: CovariateKernel) -> Result<Self> {
        let weights: Vec<T> = distances.iter().map(|&d| kernel.eval(d / h)).collect();
        let total: T = weights.iter().copied().sum();
        if total <= T::zero() {
            return Err(empty_neighborhood(distances, h));
        }
        Ok(Self { weights, total })
    }
}

fn empty_neighborhood<T: Scalar>(distances: &[T], h: T) -> Error {
    let nearest = distances
        .iter()
        .copied()
        .fold(T::infinity(), T::min)
        .to_f64_lossy();
    Error::EmptyNeighborhood {
        h: h.to_f64_lossy(),
        nearest,
    }
}

/// What a standardization rate is computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Level<T> {
    /// Quantile order `alpha`; gives `sigma_n(x)`.
    Order(T),
    /// Survival level `F(y_n|x)`, estimated or known; gives `Lambda_n(x)`.
    Survival(T),
}

/// Empirical small-ball probability, kernel moments and the resulting
/// normalizing rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Standardization<T> {
    pub phi_hat: T,
    pub mu1_hat: T,
    pub mu2_hat: T,
    pub sigma_n: Option<T>,
    pub lambda_n: Option<T>,
}

/// The sample points in the ball around one query curve, ready for repeated
/// survival and quantile evaluations.
#[derive(Debug, Clone)]
pub struct LocalFit<T> {
    n: usize,
    lambda: T,
    response_kernel: ResponseKernel,
    tol_rel: T,
    /// In-ball responses, ascending.
    ys: Vec<T>,
    /// Kernel weights aligned with `ys`.
    ws: Vec<T>,
    total: T,
}

impl<T: Scalar> LocalFit<T> {
    /// Builds the fit at `x` against every sample curve of `dataset`.
    pub fn new(dataset: &Dataset<T>, x: &Curve<T>, cfg: &EstimatorConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let distances = cfg.semimetric.distances_to(dataset, x)?;
        Self::from_distances(&distances, dataset.responses(), cfg)
    }

    /// Builds the fit from precomputed distances `d(x, X_i)`.
    pub fn from_distances(distances: &[T], responses: &[T], cfg: &EstimatorConfig<T>) -> Result<Self> {
        Self::from_distances_excluding(distances, responses, cfg, None)
    }

    /// As [`LocalFit::from_distances`], leaving out observation `skip`.
    pub fn from_distances_excluding(
        distances: &[T],
        responses: &[T],
        cfg: &EstimatorConfig<T>,
        skip: Option<usize>,
    ) -> Result<Self> {
        if distances.len() != responses.len() {
            return Err(Error::LengthMismatch {
                curves: distances.len(),
                responses: responses.len(),
            });
        }
        let pts: Vec<(T, T)> = distances
            .iter()
            .zip(responses)
            .enumerate()
            .filter(|&(i, _)| Some(i) != skip)
            .filter_map(|(_, (&d, &y))| {
                let w = cfg.kernel.eval(d / cfg.h);
                (w > T::zero()).then_some((y, w))
            })
            .collect();
        let n = distances.len() - usize::from(skip.is_some_and(|s| s < distances.len()));
        if pts.is_empty() {
            let kept: Vec<T> = distances
                .iter()
                .enumerate()
                .filter(|&(i, _)| Some(i) != skip)
                .map(|(_, &d)| d)
                .collect();
            return Err(empty_neighborhood(&kept, cfg.h));
        }
        Ok(Self::from_points(pts, n, cfg))
    }

    /// Fit from explicit nonnegative weights, one per response; `sample_size`
    /// is the `n` used by the small-ball and moment estimates.
    pub fn from_weights(
        responses: &[T],
        weights: &[T],
        sample_size: usize,
        cfg: &EstimatorConfig<T>,
    ) -> Result<Self> {
        if weights.len() != responses.len() {
            return Err(Error::LengthMismatch {
                curves: weights.len(),
                responses: responses.len(),
            });
        }
        if weights.iter().any(|&w| !(w >= T::zero() && w.is_finite())) {
            return Err(Error::invalid("weights", "must be nonnegative and finite"));
        }
        let pts: Vec<(T, T)> = responses
            .iter()
            .zip(weights)
            .filter(|&(_, &w)| w > T::zero())
            .map(|(&y, &w)| (y, w))
            .collect();
        if pts.is_empty() {
            return Err(Error::invalid("weights", "all weights are zero"));
        }
        if sample_size < pts.len() {
            return Err(Error::invalid("sample_size", "smaller than the number of weighted points"));
        }
        Ok(Self::from_points(pts, sample_size, cfg))
    }

    fn from_points(mut pts: Vec<(T, T)>, n: usize, cfg: &EstimatorConfig<T>) -> Self {
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite responses"));
        let (ys, ws): (Vec<T>, Vec<T>) = pts.into_iter().unzip();
        let total = ws.iter().copied().sum();
        Self {
            n,
            lambda: cfg.lambda,
            response_kernel: cfg.response_kernel,
            tol_rel: cfg.tol_rel,
            ys,
            ws,
            total,
        }
    }

    /// Sample size the fit was built from.
    pub fn sample_size(&self) -> usize {
        self.n
    }

    /// Number of sample points in the ball.
    pub fn in_ball(&self) -> usize {
        self.ys.len()
    }

    pub fn total_weight(&self) -> T {
        self.total
    }

    /// In-ball `(Y_i, K_i)` pairs, ascending in `Y`.
    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.ys.iter().copied().zip(self.ws.iter().copied())
    }

    /// Smallest and largest in-ball response.
    pub fn response_range(&self) -> (T, T) {
        (self.ys[0], self.ys[self.ys.len() - 1])
    }

    /// Conditional survival estimate at `y`.
    pub fn csf(&self, y: T) -> T {
        // Fixed-order sum of terms that are each nonincreasing in y keeps the
        // result exactly monotone under rounding.
        let num: T = self
            .ys
            .iter()
            .zip(&self.ws)
            .map(|(&yi, &w)| w * self.response_kernel.cdf((yi - y) / self.lambda))
            .sum();
        (num / self.total).max(T::zero()).min(T::one())
    }

    /// Generalized inverse `inf { t : csf(t) <= alpha }`, by bisection on
    /// `[min Y - lambda, max Y + lambda]`. Flat stretches at level `alpha`
    /// resolve to their left end.
    pub fn quantile(&self, alpha: T) -> Result<T> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::invalid(
                "alpha",
                format!("must lie in (0, 1), got {alpha}"),
            ));
        }
        let (ymin, ymax) = self.response_range();
        // csf(lo) = 1 > alpha and csf(hi) = 0 <= alpha
        let mut lo = ymin - self.lambda;
        let mut hi = ymax + self.lambda;
        let (mut c_lo, mut c_hi) = (T::one(), T::zero());
        let tol = self.tol_rel * (T::one() + (hi - lo).abs());
        let two = T::lit(2.0);
        // stop once the bracket is narrow in y and csf barely moves across it
        for _ in 0..400 {
            if hi - lo <= tol && c_lo - c_hi <= self.tol_rel {
                break;
            }
            let mid = lo + (hi - lo) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            let c = self.csf(mid);
            if c <= alpha {
                hi = mid;
                c_hi = c;
            } else {
                lo = mid;
                c_lo = c;
            }
        }
        Ok(hi)
    }

    /// Empirical small-ball probability `#{d(x, X_i) <= h} / n`.
    pub fn phi_hat(&self) -> T {
        T::from_count(self.ys.len()) / T::from_count(self.n)
    }

    /// Empirical kernel moment `(1/n) sum_i K^tau(d(x, X_i)/h)`.
    pub fn kernel_moment(&self, tau: T) -> T {
        self.ws.iter().map(|w| w.powf(tau)).sum::<T>() / T::from_count(self.n)
    }

    /// `(n p mu1^2 / mu2)^(-1/2)` for the level `p` carried by `level`.
    pub fn standardization(&self, level: Level<T>) -> Result<Standardization<T>> {
        let p = match level {
            Level::Order(a) | Level::Survival(a) => a,
        };
        if !(p > T::zero() && p <= T::one()) {
            return Err(Error::invalid(
                "level",
                format!("must lie in (0, 1], got {p}"),
            ));
        }
        let mu1 = self.kernel_moment(T::one());
        let mu2 = self.kernel_moment(T::lit(2.0));
        let rate = (T::from_count(self.n) * p * mu1 * mu1 / mu2).sqrt().recip();
        let (sigma_n, lambda_n) = match level {
            Level::Order(_) => (Some(rate), None),
            Level::Survival(_) => (None, Some(rate)),
        };
        Ok(Standardization {
            phi_hat: self.phi_hat(),
            mu1_hat: mu1,
            mu2_hat: mu2,
            sigma_n,
            lambda_n,
        })
    }
}

pub fn local_weights<T: Scalar>(
    dataset: &Dataset<T>,
    x: &Curve<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<LocalWeights<T>> {
    cfg.validate()?;
    let distances = cfg.semimetric.distances_to(dataset, x)?;
    LocalWeights::from_distances(&distances, cfg.h, cfg.kernel)
}

pub fn csf<T: Scalar>(dataset: &Dataset<T>, x: &Curve<T>, y: T, cfg: &EstimatorConfig<T>) -> Result<T> {
    Ok(LocalFit::new(dataset, x, cfg)?.csf(y))
}

pub fn quantile<T: Scalar>(
    dataset: &Dataset<T>,
    x: &Curve<T>,
    alpha: T,
    cfg: &EstimatorConfig<T>,
) -> Result<T> {
    LocalFit::new(dataset, x, cfg)?.quantile(alpha)
}

pub fn standardization<T: Scalar>(
    dataset: &Dataset<T>,
    x: &Curve<T>,
    level: Level<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<Standardization<T>> {
    LocalFit::new(dataset, x, cfg)?.standardization(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Grid;

    /// Scalar "curves": the L2 distance on a 3-point unit grid between
    /// constant curves `a` and `b` is `|a - b| * sqrt(2)`.
    fn dataset(levels: &[f64], ys: &[f64]) -> Dataset<f64> {
        let grid = Grid::unit(3).unwrap();
        let curves = levels
            .iter()
            .map(|&v| Curve::new(vec![v; 3]).unwrap())
            .collect();
        Dataset::new(grid, curves, ys.to_vec()).unwrap()
    }

    fn at(v: f64) -> Curve<f64> {
        Curve::new(vec![v; 3]).unwrap()
    }

    #[test]
    fn empty_neighborhood_reports_nearest() {
        let ds = dataset(&[1.0, 2.0], &[1.0, 2.0]);
        let cfg = EstimatorConfig::new(0.5, 0.1).unwrap();
        match local_weights(&ds, &at(0.0), &cfg).unwrap_err() {
            Error::EmptyNeighborhood { nearest, .. } => {
                assert!((nearest - 2f64.sqrt()).abs() < 1e-12)
            }
            other => panic!("{other}"),
        }
        assert!(matches!(
            quantile(&ds, &at(0.0), 0.5, &cfg),
            Err(Error::EmptyNeighborhood { .. })
        ));
    }

    #[test]
    fn zero_distance_weight_is_k0() {
        let ds = dataset(&[0.0, 10.0], &[1.0, 2.0]);
        let cfg = EstimatorConfig::new(1.0, 0.1).unwrap();
        let lw = local_weights(&ds, &at(0.0), &cfg).unwrap();
        assert!((lw.weights[0] - 1.9).abs() < 1e-15);
        assert_eq!(lw.weights[1], 0.0);
    }

    #[test]
    fn uniform_kernel_counts() {
        let ds = dataset(&[0.0, 0.1, 0.2, 5.0, 6.0], &[1.0; 5]);
        let cfg = EstimatorConfig::new(1.0, 0.1)
            .unwrap()
            .with_kernel(CovariateKernel::Uniform);
        let lw = local_weights(&ds, &at(0.0), &cfg).unwrap();
        assert_eq!(lw.total, 3.0);
    }

    #[test]
    fn single_point_csf() {
        let ds = dataset(&[0.0], &[5.0]);
        let cfg = EstimatorConfig::new(1.0, 0.1).unwrap();
        assert_eq!(csf(&ds, &at(0.0), 5.0 - 0.2, &cfg).unwrap(), 1.0);
        assert_eq!(csf(&ds, &at(0.0), 5.0, &cfg).unwrap(), 0.5);
        assert!((quantile(&ds, &at(0.0), 0.5, &cfg).unwrap() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn two_points_average() {
        let ds = dataset(&[0.0, 0.0], &[10.0, 0.0]);
        let cfg = EstimatorConfig::new(1.0, 0.1).unwrap();
        assert_eq!(csf(&ds, &at(0.0), 5.0, &cfg).unwrap(), 0.5);
        // 0.5 * Q((10 - t)/0.1) = 0.25 at t = 10
        let q = quantile(&ds, &at(0.0), 0.25, &cfg).unwrap();
        assert!((q - 10.0).abs() < 1e-8, "{q}");
    }

    #[test]
    fn tiny_alpha_stays_in_bracket() {
        let ds = dataset(&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]);
        let cfg = EstimatorConfig::new(1.0, 0.1).unwrap();
        let q = quantile(&ds, &at(0.0), 1e-12, &cfg).unwrap();
        assert!(q <= 3.1 + 1e-9 && q > 3.0);
    }

    #[test]
    fn alpha_out_of_range() {
        let ds = dataset(&[0.0], &[1.0]);
        let cfg = EstimatorConfig::new(1.0, 0.1).unwrap();
        for a in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(matches!(
                quantile(&ds, &at(0.0), a, &cfg),
                Err(Error::InvalidParameter { name: "alpha", .. })
            ));
        }
    }

    #[test]
    fn flat_level_resolves_left() {
        // Two far-apart points: csf = 1/2 exactly on [1.1, 8.9].
        let ds = dataset(&[0.0, 0.0], &[1.0, 9.0]);
        let cfg = EstimatorConfig::new(1.0, 0.1).unwrap();
        let q = quantile(&ds, &at(0.0), 0.5, &cfg).unwrap();
        assert!((q - 1.1).abs() < 1e-8, "{q}");
    }

    #[test]
    fn uniform_kernel_standardization() {
        // 20 of 100 points in the ball, alpha = 0.05: sigma_n = (100 * 0.05 * 0.2)^(-1/2) = 1
        let mut levels = vec![0.0; 20];
        levels.extend(vec![50.0; 80]);
        let ds = dataset(&levels, &vec![1.0; 100]);
        let cfg = EstimatorConfig::new(1.0, 0.1)
            .unwrap()
            .with_kernel(CovariateKernel::Uniform);
        let s = standardization(&ds, &at(0.0), Level::Order(0.05), &cfg).unwrap();
        assert!((s.phi_hat - 0.2).abs() < 1e-15);
        assert_eq!(s.mu1_hat, s.mu2_hat);
        assert!((s.sigma_n.unwrap() - 1.0).abs() < 1e-12);
        assert!(s.lambda_n.is_none());
    }

    #[test]
    fn paper_kernel_moment_bounds() {
        let levels: Vec<f64> = (0..50).map(|i| i as f64 * 0.03).collect();
        let ds = dataset(&levels, &vec![1.0; 50]);
        let cfg = EstimatorConfig::new(1.0, 0.1).unwrap();
        let s = standardization(&ds, &at(0.4), Level::Survival(0.1), &cfg).unwrap();
        assert!(0.01 * s.phi_hat <= s.mu2_hat && s.mu2_hat <= 3.61 * s.phi_hat);
        assert!(0.1 * s.phi_hat <= s.mu1_hat && s.mu1_hat <= 1.9 * s.phi_hat);
        assert!(s.lambda_n.is_some());
    }

    #[test]
    fn excluding_drops_point() {
        let d = [0.0, 0.0, 0.0];
        let y = [1.0, 2.0, 100.0];
        let cfg = EstimatorConfig::new(1.0, 0.1).unwrap();
        let fit = LocalFit::from_distances_excluding(&d, &y, &cfg, Some(2)).unwrap();
        assert_eq!(fit.in_ball(), 2);
        assert_eq!(fit.sample_size(), 2);
        assert_eq!(fit.response_range(), (1.0, 2.0));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(EstimatorConfig::new(0.0, 0.1).is_err());
        assert!(EstimatorConfig::new(1.0, -0.1).is_err());
        assert!(EstimatorConfig::new(f64::INFINITY, 0.1).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let grid = Grid::<f32>::unit(3).unwrap();
        let curves = vec![Curve::new(vec![0.0f32; 3]).unwrap(); 2];
        let ds = Dataset::new(grid, curves, vec![0.0f32, 10.0]).unwrap();
        let cfg = EstimatorConfig::<f32>::new(1.0, 0.1).unwrap();
        let x = Curve::new(vec![0.0f32; 3]).unwrap();
        let q = quantile(&ds, &x, 0.25, &cfg).unwrap();
        assert!((q - 10.0).abs() < 1e-4, "{q}");
    }
}
