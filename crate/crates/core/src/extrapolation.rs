//! Weissman extrapolation: `q(beta|x) = q(alpha|x) (alpha/beta)^gamma(x)`.

use crate::data::{Curve, Dataset};
use crate::error::{Error, Result};
use crate::estimator::{EstimatorConfig, Level, LocalFit};
use crate::tail_index::TailIndexSpec;
use crate::Scalar;

/// Anchor order `alpha`, target order `beta`, optional fixed tail index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeissmanQuery<T> {
    pub alpha: T,
    pub beta: T,
    /// When `None` the tail index is estimated at the same anchor `alpha`.
    pub gamma_hat: Option<T>,
}

impl<T: Scalar> WeissmanQuery<T> {
    /// Requires `0 < beta < alpha < 1`.
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if !(beta > T::zero() && beta < alpha) {
            return Err(Error::invalid(
                "beta",
                format!("must satisfy 0 < beta < alpha = {alpha}, got {beta}"),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            gamma_hat: None,
        })
    }

    pub fn with_gamma(mut self, gamma: T) -> Result<Self> {
        if !(gamma > T::zero() && gamma.is_finite()) {
            return Err(Error::invalid("gamma", format!("must be positive and finite, got {gamma}")));
        }
        self.gamma_hat = Some(gamma);
        Ok(self)
    }

    /// `alpha = c log(n) / n`.
    pub fn anchor_from_c(c: T, n: usize) -> T {
        let n = T::from_count(n);
        c * n.ln() / n
    }
}

/// `q_alpha * (alpha / beta)^gamma`, for `0 < beta <= alpha`.
pub fn extrapolate<T: Scalar>(q_alpha: T, alpha: T, beta: T, gamma: T) -> Result<T> {
    if !(beta > T::zero() && beta <= alpha) {
        return Err(Error::invalid(
            "beta",
            format!("must satisfy 0 < beta <= alpha = {alpha}, got {beta}"),
        ));
    }
    if !gamma.is_finite() {
        return Err(Error::invalid("gamma", "must be finite"));
    }
    Ok(q_alpha * (alpha / beta).powf(gamma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeissmanEstimate<T> {
    pub quantile: T,
    pub anchor_quantile: T,
    pub gamma: T,
    pub alpha: T,
    pub beta: T,
    /// Plug-in asymptotic variance of `q_W / q - 1`:
    /// `V_phi(gamma_hat) sigma_n^2 log^2(alpha/beta)`. Asymptotic only.
    pub relative_variance: T,
}

/// Extrapolated quantile at the curve behind `fit`.
pub fn weissman_local<T: Scalar>(
    fit: &LocalFit<T>,
    query: &WeissmanQuery<T>,
    spec: &TailIndexSpec<T>,
) -> Result<WeissmanEstimate<T>> {
    let WeissmanQuery { alpha, beta, gamma_hat } = *query;
    let (anchor, gamma) = match gamma_hat {
        Some(g) => (fit.quantile(alpha)?, g),
        None => {
            let qs = spec.local_quantiles(fit, alpha)?;
            // tau_1 = 1, so the first quantile is the anchor
            (qs[0], spec.gamma_from_quantiles(&qs, alpha)?)
        }
    };
    let quantile = extrapolate(anchor, alpha, beta, gamma)?;
    let sigma = fit
        .standardization(Level::Order(alpha))?
        .sigma_n
        .expect("order level yields sigma_n");
    let log_ratio = (alpha / beta).ln();
    let relative_variance = spec.asymptotic_variance(gamma) * sigma * sigma * log_ratio * log_ratio;
    Ok(WeissmanEstimate {
        quantile,
        anchor_quantile: anchor,
        gamma,
        alpha,
        beta,
        relative_variance,
    })
}

pub fn weissman_quantile<T: Scalar>(
    dataset: &Dataset<T>,
    x: &Curve<T>,
    query: &WeissmanQuery<T>,
    cfg: &EstimatorConfig<T>,
    spec: &TailIndexSpec<T>,
) -> Result<WeissmanEstimate<T>> {
    let fit = LocalFit::new(dataset, x, cfg)?;
    weissman_local(&fit, query, spec)
}
