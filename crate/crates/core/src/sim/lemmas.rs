use rand::Rng;
use rayon::prelude::*;

use crate::data::Curve;
use crate::error::{Error, Result};
use crate::semimetric::SemiMetricKind;

use super::{stream_rng, CosineCovariateProcess, HeavyTailModel};

/// Small-ball probability `P(d(X, x) <= h)` under the cosine process, by
/// midpoint quadrature over `Z` with `nodes` points.
pub fn small_ball_probability(
    process: &CosineCovariateProcess,
    x: &Curve<f64>,
    semimetric: SemiMetricKind,
    h: f64,
    nodes: usize,
) -> Result<f64> {
    joint(process, x, semimetric, h, nodes, |_| 1.0)
}

/// `P(d(X, x) <= h, Y > y)` under the cosine process, same quadrature.
pub fn presence_probability(
    model: &HeavyTailModel,
    process: &CosineCovariateProcess,
    x: &Curve<f64>,
    semimetric: SemiMetricKind,
    h: f64,
    y: f64,
    nodes: usize,
) -> Result<f64> {
    joint(process, x, semimetric, h, nodes, |c| model.survival(y, c))
}

fn joint(
    process: &CosineCovariateProcess,
    x: &Curve<f64>,
    semimetric: SemiMetricKind,
    h: f64,
    nodes: usize,
    weight: impl Fn(&Curve<f64>) -> f64,
) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::invalid("nodes", "need at least one node"));
    }
    let width = CosineCovariateProcess::Z_MAX - CosineCovariateProcess::Z_MIN;
    let mut total = 0.0;
    for k in 0..nodes {
        let z = CosineCovariateProcess::Z_MIN + width * (k as f64 + 0.5) / nodes as f64;
        let c = process.curve(z);
        if semimetric.distance(&c, x, process.grid())? <= h {
            total += weight(&c);
        }
    }
    Ok(total / nodes as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresencePoint {
    pub n: usize,
    pub h: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresenceEstimate {
    pub point: PresencePoint,
    /// `phi_x(h)`.
    pub phi: f64,
    /// `F(y|x)` at the query curve.
    pub survival: f64,
    /// `P(X in B(x,h), Y > y)`.
    pub joint: f64,
    /// `1 - (1 - joint)^n`.
    pub exact: f64,
    /// `1 - exp(-n phi F(y|x))`.
    pub approx: f64,
    /// Monte Carlo frequency of at least one point in the ball above `y`.
    pub presence: f64,
    /// Binomial sd of `presence` around `exact`.
    pub binomial_sd: f64,
    pub replications: usize,
}

/// Monte Carlo presence probabilities along `points`.
pub fn lemma4_presence_curve(
    model: &HeavyTailModel,
    process: &CosineCovariateProcess,
    x: &Curve<f64>,
    semimetric: SemiMetricKind,
    points: &[PresencePoint],
    replications: usize,
    seed: u64,
    nodes: usize,
) -> Result<Vec<PresenceEstimate>> {
    if replications == 0 {
        return Err(Error::invalid("N", "need at least one replication"));
    }
    points
        .iter()
        .enumerate()
        .map(|(k, &point)| {
            let phi = small_ball_probability(process, x, semimetric, point.h, nodes)?;
            let joint = presence_probability(model, process, x, semimetric, point.h, point.y, nodes)?;
            let survival = model.survival(point.y, x);
            let n = point.n as f64;
            let exact = -(n * (-joint).ln_1p()).exp_m1();
            let approx = -(-n * phi * survival).exp_m1();
            let hits: Vec<bool> = (0..replications)
                .into_par_iter()
                .map(|r| -> Result<bool> {
                    let mut rng = stream_rng(seed, ((k as u64) << 32) | r as u64);
                    for _ in 0..point.n {
                        let c = process.curve(process.sample_z(&mut rng));
                        let u: f64 = rng.random();
                        if semimetric.distance(&c, x, process.grid())? <= point.h
                            && model.sample_conditional(&c, 1.0 - u) > point.y
                        {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                })
                .collect::<Result<_>>()?;
            let presence = hits.iter().filter(|&&b| b).count() as f64 / replications as f64;
            Ok(PresenceEstimate {
                point,
                phi,
                survival,
                joint,
                exact,
                approx,
                presence,
                binomial_sd: (exact * (1.0 - exact) / replications as f64).sqrt(),
                replications,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma2Row {
    pub alpha: f64,
    pub beta: f64,
    /// `|log q(beta|x) - log q(alpha|x) + gamma log(beta/alpha)|`.
    pub lhs: f64,
    /// `log(alpha/beta) |eps(q(alpha|x)|x)|`.
    pub driver: f64,
    /// `lhs / driver`, 0 when both vanish.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Report {
    pub rows: Vec<Lemma2Row>,
    pub max_lhs: f64,
    pub max_ratio: f64,
}

/// Second-order quantile expansion residuals over all `alpha` and
/// `beta = alpha * ratio` combinations.
pub fn lemma2_expansion_check(
    model: &HeavyTailModel,
    x: &Curve<f64>,
    alphas: &[f64],
    beta_ratios: &[f64],
) -> Result<Lemma2Report> {
    let gamma = model.gamma(x);
    let mut rows = Vec::new();
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        for &ratio in beta_ratios {
            if !(ratio > 0.0 && ratio <= 1.0) {
                return Err(Error::invalid("beta", format!("ratio must lie in (0, 1], got {ratio}")));
            }
            let beta = alpha * ratio;
            let qa = model.quantile(alpha, x);
            let qb = model.quantile(beta, x);
            let lhs = (qb.ln() - qa.ln() + gamma * (beta / alpha).ln()).abs();
            let driver = (alpha / beta).ln() * model.epsilon(qa, x).abs();
            let ratio = if lhs == 0.0 { 0.0 } else { lhs / driver };
            rows.push(Lemma2Row {
                alpha,
                beta,
                lhs,
                driver,
                ratio,
            });
        }
    }
    let max_lhs = rows.iter().map(|r| r.lhs).fold(0.0, f64::max);
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(Lemma2Report {
        rows,
        max_lhs,
        max_ratio,
    })
}
