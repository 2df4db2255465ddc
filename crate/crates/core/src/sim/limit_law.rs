use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::data::Curve;
use crate::error::{Error, Result};
use crate::estimator::{EstimatorConfig, Level, LocalFit};
use crate::extrapolation::extrapolate;
use crate::stats::{correlation, covariance, mean};
use crate::tail_index::TailIndexSpec;

use super::{stream_rng, CosineCovariateProcess, HeavyTailModel};

/// Which standardized statistic to simulate.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitStatistic {
    /// `Lambda_n^-1 (F_hat(a_j y_n|x) / F(a_j y_n|x) - 1)`, `y_n = q(alpha|x)`.
    Csf { levels: Vec<f64> },
    /// `sigma_n^-1 (q_hat(tau_j alpha|x) / q(tau_j alpha|x) - 1)`.
    Quantile,
    /// `sigma_n^-1 (gamma_hat - gamma)`.
    Gamma,
    /// `sigma_n^-1 / log(alpha/beta) (q_W(beta|x) / q(beta|x) - 1)`, `beta = alpha * beta_ratio`.
    Weissman { beta_ratio: f64 },
}

impl LimitStatistic {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Csf { .. } => "csf",
            Self::Quantile => "quantile",
            Self::Gamma => "gamma",
            Self::Weissman { .. } => "weissman",
        }
    }
}

/// How the sample covariates are drawn.
#[derive(Debug, Clone)]
pub enum CovariateDesign {
    /// Every observation sits at the query curve.
    Repeated,
    /// Covariates from the cosine process.
    Cosine(CosineCovariateProcess),
}

#[derive(Debug, Clone)]
pub struct LimitLawPlan {
    pub n: usize,
    pub replications: usize,
    pub alpha: f64,
    pub config: EstimatorConfig<f64>,
    /// Weights `tau_j` and the tail-index functional.
    pub spec: TailIndexSpec<f64>,
    pub design: CovariateDesign,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalityReport {
    pub statistic: &'static str,
    pub empirical_sd: Vec<f64>,
    pub theoretical_sd: Vec<f64>,
    /// Empirical over theoretical sd, per component.
    pub sd_ratios: Vec<f64>,
    pub empirical_mean: Vec<f64>,
    pub empirical_corr: Vec<Vec<f64>>,
    pub theoretical_corr: Vec<Vec<f64>>,
    /// Kolmogorov-Smirnov distance to the centered normal limit, per component.
    pub ks: Vec<f64>,
    pub completed: usize,
    pub failures: usize,
}

/// Simulates the standardized statistic `replications` times at `x` and
/// compares it with its Gaussian limit.
pub fn normality_check(
    model: &HeavyTailModel,
    x: &Curve<f64>,
    statistic: &LimitStatistic,
    plan: &LimitLawPlan,
) -> Result<NormalityReport> {
    if plan.replications < 2 {
        return Err(Error::invalid("N", "need at least two replications"));
    }
    if !(plan.alpha > 0.0 && plan.alpha < 1.0) {
        return Err(Error::invalid("alpha", "must lie in (0, 1)"));
    }
    plan.config.validate()?;
    let gamma = model.gamma(x);
    let taus = plan.spec.taus();
    let theory_cov: Vec<Vec<f64>> = match statistic {
        LimitStatistic::Csf { levels } => {
            if levels.is_empty() || levels.iter().any(|&a| !(a >= 1.0)) {
                return Err(Error::invalid("levels", "need levels a_j >= 1"));
            }
            levels
                .iter()
                .map(|&a| levels.iter().map(|&b| a.min(b).powf(1.0 / gamma)).collect())
                .collect()
        }
        LimitStatistic::Quantile => plan
            .spec
            .sigma()
            .into_iter()
            .map(|row| row.into_iter().map(|s| gamma * gamma * s).collect())
            .collect(),
        LimitStatistic::Gamma => vec![vec![plan.spec.asymptotic_variance(gamma)]],
        LimitStatistic::Weissman { beta_ratio } => {
            if !(*beta_ratio > 0.0 && *beta_ratio < 1.0) {
                return Err(Error::invalid("beta_ratio", "must lie in (0, 1)"));
            }
            vec![vec![plan.spec.asymptotic_variance(gamma)]]
        }
    };
    let dim = theory_cov.len();

    let draws: Vec<Option<Vec<f64>>> = (0..plan.replications)
        .into_par_iter()
        .map(|r| one_draw(model, x, statistic, plan, gamma, taus, r as u64))
        .collect();
    let ok: Vec<Vec<f64>> = draws.iter().flatten().cloned().collect();
    let failures = draws.len() - ok.len();
    if ok.len() < 2 {
        return Err(Error::invalid("N", "fewer than two successful replications"));
    }
    let columns: Vec<Vec<f64>> = (0..dim).map(|k| ok.iter().map(|v| v[k]).collect()).collect();
    let empirical_sd: Vec<f64> = columns.iter().map(|c| covariance(c, c).sqrt()).collect();
    let theoretical_sd: Vec<f64> = (0..dim).map(|k| theory_cov[k][k].sqrt()).collect();
    let sd_ratios = empirical_sd
        .iter()
        .zip(&theoretical_sd)
        .map(|(e, t)| e / t)
        .collect();
    let empirical_corr = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| if a == b { 1.0 } else { correlation(&columns[a], &columns[b]) })
                .collect()
        })
        .collect();
    let theoretical_corr = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| theory_cov[a][b] / (theoretical_sd[a] * theoretical_sd[b]))
                .collect()
        })
        .collect();
    let ks = columns
        .iter()
        .zip(&theoretical_sd)
        .map(|(c, &sd)| ks_statistic(c, sd))
        .collect::<Result<_>>()?;
    Ok(NormalityReport {
        statistic: statistic.name(),
        empirical_mean: columns.iter().map(|c| mean(c)).collect(),
        empirical_sd,
        theoretical_sd,
        sd_ratios,
        empirical_corr,
        theoretical_corr,
        ks,
        completed: ok.len(),
        failures,
    })
}

fn one_draw(
    model: &HeavyTailModel,
    x: &Curve<f64>,
    statistic: &LimitStatistic,
    plan: &LimitLawPlan,
    gamma: f64,
    taus: &[f64],
    r: u64,
) -> Option<Vec<f64>> {
    let mut rng = stream_rng(plan.seed, r);
    let mut distances = Vec::with_capacity(plan.n);
    let mut ys = Vec::with_capacity(plan.n);
    for _ in 0..plan.n {
        match &plan.design {
            CovariateDesign::Repeated => {
                distances.push(0.0);
                ys.push(model.sample(x, &mut rng));
            }
            CovariateDesign::Cosine(process) => {
                let xi = process.curve(process.sample_z(&mut rng));
                distances.push(plan.config.semimetric.distance(&xi, x, process.grid()).ok()?);
                ys.push(model.sample(&xi, &mut rng));
            }
        }
    }
    let fit = LocalFit::from_distances(&distances, &ys, &plan.config).ok()?;
    let alpha = plan.alpha;
    let sigma = || fit.standardization(Level::Order(alpha)).ok()?.sigma_n;
    match statistic {
        LimitStatistic::Csf { levels } => {
            let y_n = model.quantile(alpha, x);
            let rate = fit.standardization(Level::Survival(alpha)).ok()?.lambda_n?;
            Some(
                levels
                    .iter()
                    .map(|&a| {
                        let y = a * y_n;
                        (fit.csf(y) / model.survival(y, x) - 1.0) / rate
                    })
                    .collect(),
            )
        }
        LimitStatistic::Quantile => {
            let s = sigma()?;
            taus.iter()
                .map(|&t| {
                    let q = fit.quantile(t * alpha).ok()?;
                    Some((q / model.quantile(t * alpha, x) - 1.0) / s)
                })
                .collect()
        }
        LimitStatistic::Gamma => {
            let s = sigma()?;
            let g = plan.spec.estimate(&fit, alpha).ok()?;
            Some(vec![(g - gamma) / s])
        }
        LimitStatistic::Weissman { beta_ratio } => {
            let s = sigma()?;
            let beta = alpha * beta_ratio;
            let qs = plan.spec.local_quantiles(&fit, alpha).ok()?;
            let g = plan.spec.gamma_from_quantiles(&qs, alpha).ok()?;
            let q = extrapolate(qs[0], alpha, beta, g).ok()?;
            Some(vec![(q / model.quantile(beta, x) - 1.0) / (s * (alpha / beta).ln())])
        }
    }
}

/// Kolmogorov-Smirnov distance between the sample and `N(0, sd^2)`.
pub fn ks_statistic(sample: &[f64], sd: f64) -> Result<f64> {
    let normal = Normal::new(0.0, sd).map_err(|e| Error::invalid("sd", e.to_string()))?;
    let mut v = sample.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len() as f64;
    Ok(v.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = normal.cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    }))
}
