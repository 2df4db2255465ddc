//! Tail-index estimators built from log conditional quantiles.
//!
//! Given weights `1 = tau_1 > ... > tau_J > 0` and a function `phi: R^J -> R`
//! that is invariant to shifts along `u = (1, ..., 1)` and scales linearly
//! along `v = (log 1/tau_1, ..., log 1/tau_J)`,
//!
//! ```text
//! gamma(x) = phi(log q(tau_1 alpha|x), ..., log q(tau_J alpha|x)) / phi(v)
//! ```
//!
//! is a tail-index estimator. Exact power-law quantiles `q(a) = c a^-gamma`
//! give `log q = gamma v + const u`, so every member returns `gamma` exactly.
//!
//! The power-mean members use `m_p(x) = sum_{j>=2} (x_j - x_1)^p`, which is
//! defined for nondecreasing inputs (log quantiles at decreasing orders).

use crate::data::{Curve, Dataset};
use crate::error::{Error, Result};
use crate::estimator::{EstimatorConfig, LocalFit};
use crate::Scalar;

/// Which invariant function a spec uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiKind<T> {
    /// `phi(x) = sum_j (x_j - x_1)`.
    Hill,
    /// `phi(x) = log((e^x2 - e^x1) / (e^x3 - e^x2))` on `tau = (1, 1/2, 1/4)`.
    Pickands,
    /// `phi_p = m_p^(1/p)`.
    PowerMean { p: T },
    /// `phi_{p,q,r} = m_q^(p/q) m_r^((1-p)/r)`.
    Aggregated { p: T, q: T, r: T },
}

impl<T: Scalar> PhiKind<T> {
    fn to_f64(self) -> PhiKind<f64> {
        match self {
            PhiKind::Hill => PhiKind::Hill,
            PhiKind::Pickands => PhiKind::Pickands,
            PhiKind::PowerMean { p } => PhiKind::PowerMean { p: p.to_f64_lossy() },
            PhiKind::Aggregated { p, q, r } => PhiKind::Aggregated {
                p: p.to_f64_lossy(),
                q: q.to_f64_lossy(),
                r: r.to_f64_lossy(),
            },
        }
    }

    fn phi(self, x: &[T]) -> T {
        match self {
            PhiKind::Hill => x.iter().map(|&xj| xj - x[0]).sum(),
            PhiKind::Pickands => {
                // log(1 - e^(x1-x2)) - log(e^(x3-x2) - 1)
                (-(x[0] - x[1]).exp_m1()).ln() - (x[2] - x[1]).exp_m1().ln()
            }
            PhiKind::PowerMean { p } => power_sum(x, p).powf(p.recip()),
            PhiKind::Aggregated { p, q, r } => {
                power_sum(x, q).powf(p / q) * power_sum(x, r).powf((T::one() - p) / r)
            }
        }
    }

    fn gradient(self, x: &[T]) -> Vec<T> {
        match self {
            PhiKind::Hill => {
                let mut g = vec![T::one(); x.len()];
                g[0] = -T::from_count(x.len() - 1);
                g
            }
            PhiKind::Pickands => {
                let g1 = -(x[1] - x[0]).exp_m1().recip();
                let g3 = -(-(x[1] - x[2]).exp_m1()).recip();
                let g2 = (-(x[0] - x[1]).exp_m1()).recip() + (x[2] - x[1]).exp_m1().recip();
                vec![g1, g2, g3]
            }
            PhiKind::PowerMean { p } => power_mean_gradient(x, p),
            PhiKind::Aggregated { p, q, r } => {
                let fq = power_sum(x, q).powf(q.recip());
                let fr = power_sum(x, r).powf(r.recip());
                let gq = power_mean_gradient(x, q);
                let gr = power_mean_gradient(x, r);
                let one = T::one();
                let a = p * fq.powf(p - one) * fr.powf(one - p);
                let b = (one - p) * fq.powf(p) * fr.powf(-p);
                gq.iter().zip(&gr).map(|(&dq, &dr)| a * dq + b * dr).collect()
            }
        }
    }
}

/// `m_p(x) = sum_{j>=2} (x_j - x_1)^p`.
fn power_sum<T: Scalar>(x: &[T], p: T) -> T {
    x[1..].iter().map(|&xj| (xj - x[0]).powf(p)).sum()
}

/// Gradient of `m_p^(1/p)`.
fn power_mean_gradient<T: Scalar>(x: &[T], p: T) -> Vec<T> {
    let one = T::one();
    let scale = power_sum(x, p).powf(one / p - one);
    let mut g = vec![T::zero(); x.len()];
    let mut first = T::zero();
    for j in 1..x.len() {
        g[j] = scale * (x[j] - x[0]).powf(p - one);
        first = first - g[j];
    }
    g[0] = first;
    g
}

/// Geometric weights `tau_j = (1/j)^s`, `j = 1..J`.
pub fn power_taus<T: Scalar>(j: usize, s: T) -> Vec<T> {
    (1..=j).map(|k| T::from_count(k).recip().powf(s)).collect()
}

/// One member of the estimator family: the invariant function plus its
/// quantile-order weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TailIndexSpec<T> {
    kind: PhiKind<T>,
    taus: Vec<T>,
    name: String,
    phi_v: T,
}

impl<T: Scalar> TailIndexSpec<T> {
    pub fn hill(taus: Vec<T>) -> Result<Self> {
        Self::build(PhiKind::Hill, taus, "hill".into())
    }

    pub fn pickands() -> Result<Self> {
        Self::build(
            PhiKind::Pickands,
            vec![T::one(), T::lit(0.5), T::lit(0.25)],
            "pickands".into(),
        )
    }

    pub fn phi_p(taus: Vec<T>, p: T) -> Result<Self> {
        check_exponent("p", p)?;
        Self::build(PhiKind::PowerMean { p }, taus, format!("phi-p({p})"))
    }

    pub fn phi_pqr(taus: Vec<T>, p: T, q: T, r: T) -> Result<Self> {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        check_exponent("r", r)?;
        Self::build(
            PhiKind::Aggregated { p, q, r },
            taus,
            format!("phi-pqr({p},{q},{r})"),
        )
    }

    fn build(kind: PhiKind<T>, taus: Vec<T>, name: String) -> Result<Self> {
        check_taus(&taus)?;
        if kind == PhiKind::Pickands && taus.len() != 3 {
            return Err(Error::invalid("taus", "pickands uses exactly (1, 1/2, 1/4)"));
        }
        let v: Vec<T> = taus.iter().map(|t| t.recip().ln()).collect();
        let phi_v = kind.phi(&v);
        if !(phi_v.is_finite() && phi_v != T::zero()) {
            return Err(Error::invalid("phi", format!("phi(v) = {phi_v} must be finite and nonzero")));
        }
        let spec = Self {
            kind,
            taus,
            name,
            phi_v,
        };
        spec.check_gradient()?;
        Ok(spec)
    }

    /// Central finite differences of `phi` at `v` must agree with the
    /// analytic gradient to a relative error of 1e-6.
    fn check_gradient(&self) -> Result<()> {
        let kind = self.kind.to_f64();
        let v: Vec<f64> = self.taus.iter().map(|t| t.to_f64_lossy().recip().ln()).collect();
        let err = finite_difference_error(kind, &v);
        if !(err < 1e-6) {
            return Err(Error::invalid(
                "phi",
                format!("analytic gradient disagrees with finite differences (rel. error {err:e})"),
            ));
        }
        Ok(())
    }

    pub fn kind(&self) -> PhiKind<T> {
        self.kind
    }

    pub fn taus(&self) -> &[T] {
        &self.taus
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `v = (log 1/tau_1, ..., log 1/tau_J)`.
    pub fn v(&self) -> Vec<T> {
        self.taus.iter().map(|t| t.recip().ln()).collect()
    }

    pub fn phi_v(&self) -> T {
        self.phi_v
    }

    pub fn phi(&self, x: &[T]) -> T {
        self.kind.phi(x)
    }

    pub fn gradient(&self, x: &[T]) -> Vec<T> {
        self.kind.gradient(x)
    }

    /// Estimate from log quantiles `log q(tau_j alpha)`, `j = 1..J`.
    pub fn gamma_from_log_quantiles(&self, logs: &[T]) -> Result<T> {
        if logs.len() != self.taus.len() {
            return Err(Error::invalid(
                "quantiles",
                format!("expected {} values, got {}", self.taus.len(), logs.len()),
            ));
        }
        Ok(self.kind.phi(logs) / self.phi_v)
    }

    /// Estimate from quantiles `q(tau_j alpha)`; `alpha` only labels errors.
    pub fn gamma_from_quantiles(&self, quantiles: &[T], alpha: T) -> Result<T> {
        let logs = quantiles
            .iter()
            .zip(&self.taus)
            .map(|(&q, &tau)| {
                if q > T::zero() {
                    Ok(q.ln())
                } else {
                    Err(Error::NonPositiveQuantile {
                        order: (tau * alpha).to_f64_lossy(),
                        value: q.to_f64_lossy(),
                    })
                }
            })
            .collect::<Result<Vec<T>>>()?;
        self.gamma_from_log_quantiles(&logs)
    }

    /// Quantiles of `fit` at the orders `tau_j alpha`.
    pub fn local_quantiles(&self, fit: &LocalFit<T>, alpha: T) -> Result<Vec<T>> {
        self.taus.iter().map(|&tau| fit.quantile(tau * alpha)).collect()
    }

    /// Tail-index estimate at the curve behind `fit`.
    pub fn estimate(&self, fit: &LocalFit<T>, alpha: T) -> Result<T> {
        let q = self.local_quantiles(fit, alpha)?;
        self.gamma_from_quantiles(&q, alpha)
    }

    /// `Sigma_{j,k} = 1 / tau_{min(j,k)}`.
    pub fn sigma(&self) -> Vec<Vec<T>> {
        let j = self.taus.len();
        (0..j)
            .map(|a| (0..j).map(|b| self.taus[a.min(b)].recip()).collect())
            .collect()
    }

    /// Limit variance of `sigma_n^-1 (gamma_hat - gamma)`:
    /// `gamma^2 / phi(v)^2 * grad(gamma v)' Sigma grad(gamma v)`.
    pub fn asymptotic_variance(&self, gamma: T) -> T {
        let point: Vec<T> = self.v().into_iter().map(|vj| gamma * vj).collect();
        let g = self.kind.gradient(&point);
        let sigma = self.sigma();
        let mut quad = T::zero();
        for (a, row) in sigma.iter().enumerate() {
            for (b, &s) in row.iter().enumerate() {
                quad = quad + g[a] * s * g[b];
            }
        }
        gamma * gamma / (self.phi_v * self.phi_v) * quad
    }
}

fn check_exponent<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

fn check_taus<T: Scalar>(taus: &[T]) -> Result<()> {
    if taus.len() < 2 {
        return Err(Error::invalid("taus", "need at least two weights"));
    }
    if taus[0] != T::one() {
        return Err(Error::invalid("taus", format!("first weight must be 1, got {}", taus[0])));
    }
    if taus.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("taus", "weights must be strictly decreasing"));
    }
    if !(taus[taus.len() - 1] > T::zero()) {
        return Err(Error::invalid("taus", "weights must be positive"));
    }
    Ok(())
}

/// Max-norm relative error between the analytic gradient and central
/// differences at `x`.
fn finite_difference_error(kind: PhiKind<f64>, x: &[f64]) -> f64 {
    let analytic = kind.gradient(x);
    let mut worst = 0.0f64;
    let scale = analytic.iter().fold(0.0f64, |m, g| m.max(g.abs())).max(1e-300);
    let mut probe = x.to_vec();
    for k in 0..x.len() {
        let step = 1e-5 * x[k].abs().max(1.0);
        probe[k] = x[k] + step;
        let up = kind.phi(&probe);
        probe[k] = x[k] - step;
        let down = kind.phi(&probe);
        probe[k] = x[k];
        let numeric = (up - down) / (2.0 * step);
        worst = worst.max((numeric - analytic[k]).abs() / scale);
    }
    worst
}

/// Relative finite-difference error of the spec's gradient at `gamma v`.
pub fn gradient_check<T: Scalar>(spec: &TailIndexSpec<T>, gamma: f64) -> f64 {
    let v: Vec<f64> = spec
        .taus
        .iter()
        .map(|t| gamma * t.to_f64_lossy().recip().ln())
        .collect();
    finite_difference_error(spec.kind.to_f64(), &v)
}

/// Closed-form Hill variance
/// `gamma^2 (sum_j (2(J-j)+1)/tau_j - J^2) / (sum_j log(1/tau_j))^2`.
pub fn hill_variance_closed_form<T: Scalar>(taus: &[T], gamma: T) -> T {
    let j = taus.len();
    let num: T = taus
        .iter()
        .enumerate()
        .map(|(k, &t)| T::from_count(2 * (j - (k + 1)) + 1) / t)
        .sum::<T>()
        - T::from_count(j * j);
    let den: T = taus.iter().map(|t| t.recip().ln()).sum();
    gamma * gamma * num / (den * den)
}

/// Classical Pickands variance
/// `gamma^2 (2^(2 gamma + 1) + 1) / (4 (log 2)^2 (2^gamma - 1)^2)`.
///
/// This is normalized by the smallest of the three orders (`alpha / 4`); the
/// quadratic form of [`TailIndexSpec::asymptotic_variance`] is normalized by
/// `alpha` and is four times larger.
pub fn pickands_variance_closed_form<T: Scalar>(gamma: T) -> T {
    let two = T::lit(2.0);
    let ln2 = T::LN_2();
    let g = two.powf(gamma);
    gamma * gamma * (two.powf(two * gamma + T::one()) + T::one())
        / (T::lit(4.0) * ln2 * ln2 * (g - T::one()) * (g - T::one()))
}

pub fn estimate_gamma<T: Scalar>(
    dataset: &Dataset<T>,
    x: &Curve<T>,
    alpha: T,
    spec: &TailIndexSpec<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<T> {
    let fit = LocalFit::new(dataset, x, cfg)?;
    spec.estimate(&fit, alpha)
}
