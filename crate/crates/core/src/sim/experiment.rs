use rayon::prelude::*;

use crate::bandwidth::{cv_bandwidth_with, BandwidthGrid};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimator::{EstimatorConfig, LocalFit};
use crate::extrapolation::{extrapolate, WeissmanQuery};
use crate::kernel::CovariateKernel;
use crate::semimetric::{DistanceMatrix, SemiMetricKind};
use crate::stats::quantile;
use crate::tail_index::{power_taus, TailIndexSpec};

use super::{stream_rng, CosineCovariateProcess, HeavyTailModel};

/// Replicated Burr study on the cosine covariate process.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub replications: usize,
    pub n: usize,
    /// Target order is `beta_factor / n`.
    pub beta_factor: f64,
    /// Anchor constants: `alpha = c log(n) / n`.
    pub cs: Vec<f64>,
    /// Weight exponents: `tau_j = (1/j)^s`.
    pub ss: Vec<f64>,
    /// Numbers of weights `J` in the Hill estimator.
    pub js: Vec<usize>,
    pub semimetrics: Vec<SemiMetricKind>,
    pub seed: u64,
    pub lambda: f64,
    pub kernel: CovariateKernel,
    pub h_grid: BandwidthGrid<f64>,
    /// Discretization points of each curve.
    pub m: usize,
}

impl ExperimentPlan {
    /// Full-size study: N = 200 replications of n = 500, beta = 5/n.
    pub fn table2(seed: u64) -> Self {
        Self {
            replications: 200,
            n: 500,
            beta_factor: 5.0,
            cs: vec![5.0, 10.0, 15.0, 20.0],
            ss: vec![1.0, 2.0, 3.0, 10.0],
            js: vec![5],
            semimetrics: vec![SemiMetricKind::L2, SemiMetricKind::NormDiff],
            seed,
            lambda: 0.1,
            kernel: CovariateKernel::Paper,
            h_grid: BandwidthGrid::standard(),
            m: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::invalid("N", "need at least one replication"));
        }
        if self.n < 2 {
            return Err(Error::invalid("n", "need at least two observations"));
        }
        if self.cs.is_empty() || self.ss.is_empty() || self.js.is_empty() || self.semimetrics.is_empty() {
            return Err(Error::invalid("plan", "c, s, J and semimetric lists must be nonempty"));
        }
        if self.js.iter().any(|&j| j < 2) {
            return Err(Error::invalid("J", "need at least two weights"));
        }
        if self.ss.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::invalid("s", "must be positive"));
        }
        let beta = self.beta();
        for &c in &self.cs {
            let alpha = self.alpha(c);
            WeissmanQuery::new(alpha, beta).map_err(|_| {
                Error::invalid(
                    "c",
                    format!("c = {c} gives alpha = {alpha}, need beta = {beta} < alpha < 1"),
                )
            })?;
        }
        EstimatorConfig::new(1.0, self.lambda)?;
        Ok(())
    }

    pub fn alpha(&self, c: f64) -> f64 {
        WeissmanQuery::<f64>::anchor_from_c(c, self.n)
    }

    pub fn beta(&self) -> f64 {
        self.beta_factor / self.n as f64
    }

    /// Cells in output order: semimetric, then J, then s, then c.
    pub fn cells(&self) -> Vec<(SemiMetricKind, usize, f64, f64)> {
        let mut out = Vec::new();
        for &d in &self.semimetrics {
            for &j in &self.js {
                for &s in &self.ss {
                    for &c in &self.cs {
                        out.push((d, j, s, c));
                    }
                }
            }
        }
        out
    }
}

/// Summary of `Delta = sum_i (q_W(beta|X_i) - q(beta|X_i))^2` for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub semimetric: SemiMetricKind,
    pub j: usize,
    pub s: f64,
    pub c: f64,
    pub median: f64,
    pub q10: f64,
    pub q90: f64,
    pub completed: usize,
    /// Replications where some curve could not be estimated.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub cells: Vec<CellResult>,
    /// Median cross-validated bandwidth per semimetric, in plan order.
    pub median_h: Vec<(SemiMetricKind, f64)>,
}

struct Replication {
    /// One entry per cell, `None` on failure.
    deltas: Vec<Option<f64>>,
    h: Vec<Option<f64>>,
}

pub fn burr_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let process = CosineCovariateProcess::new(plan.m)?;
    let model = HeavyTailModel::cosine_burr(process.grid())?;
    let cells = plan.cells();
    let reps: Vec<Replication> = (0..plan.replications)
        .into_par_iter()
        .map(|r| replicate(plan, &process, &model, r as u64))
        .collect::<Result<_>>()?;

    let results = cells
        .iter()
        .enumerate()
        .map(|(k, &(semimetric, j, s, c))| {
            let ok: Vec<f64> = reps.iter().filter_map(|r| r.deltas[k]).collect();
            let (median, q10, q90) = if ok.is_empty() {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                (quantile(&ok, 0.5), quantile(&ok, 0.1), quantile(&ok, 0.9))
            };
            CellResult {
                semimetric,
                j,
                s,
                c,
                median,
                q10,
                q90,
                completed: ok.len(),
                failures: reps.len() - ok.len(),
            }
        })
        .collect();
    let median_h = plan
        .semimetrics
        .iter()
        .enumerate()
        .map(|(k, &d)| {
            let hs: Vec<f64> = reps.iter().filter_map(|r| r.h[k]).collect();
            (d, if hs.is_empty() { f64::NAN } else { quantile(&hs, 0.5) })
        })
        .collect();
    Ok(ExperimentReport {
        cells: results,
        median_h,
    })
}

fn replicate(
    plan: &ExperimentPlan,
    process: &CosineCovariateProcess,
    model: &HeavyTailModel,
    r: u64,
) -> Result<Replication> {
    let mut rng = stream_rng(plan.seed, r);
    let mut curves = Vec::with_capacity(plan.n);
    let mut ys = Vec::with_capacity(plan.n);
    for _ in 0..plan.n {
        let x = process.curve(process.sample_z(&mut rng));
        ys.push(model.sample(&x, &mut rng));
        curves.push(x);
    }
    let beta = plan.beta();
    let truth: Vec<f64> = curves.iter().map(|x| model.quantile(beta, x)).collect();
    let dataset = Dataset::new(process.grid().clone(), curves, ys)?;

    let specs: Vec<TailIndexSpec<f64>> = plan
        .js
        .iter()
        .flat_map(|&j| plan.ss.iter().map(move |&s| TailIndexSpec::hill(power_taus(j, s))))
        .collect::<Result<_>>()?;
    let per_metric = specs.len() * plan.cs.len();
    let mut deltas = Vec::with_capacity(per_metric * plan.semimetrics.len());
    let mut hs = Vec::with_capacity(plan.semimetrics.len());

    for &kind in &plan.semimetrics {
        let base = EstimatorConfig::new(1.0, plan.lambda)?
            .with_kernel(plan.kernel)
            .with_semimetric(kind);
        let distances = DistanceMatrix::build(&dataset, kind)?;
        let h = match cv_bandwidth_with(&distances, dataset.responses(), &plan.h_grid, &base) {
            Ok(cv) => cv.h_opt,
            Err(_) => {
                hs.push(None);
                deltas.extend(std::iter::repeat_n(None, per_metric));
                continue;
            }
        };
        hs.push(Some(h));
        let cfg = base.with_h(h)?;
        // accumulated squared errors per (J, s, c), None once any curve fails
        let mut acc: Vec<Option<f64>> = vec![Some(0.0); per_metric];
        for (i, &q_true) in truth.iter().enumerate() {
            let fit = match LocalFit::from_distances(distances.row(i), dataset.responses(), &cfg) {
                Ok(f) => f,
                Err(_) => {
                    acc.iter_mut().for_each(|a| *a = None);
                    break;
                }
            };
            for (si, spec) in specs.iter().enumerate() {
                for (ci, &c) in plan.cs.iter().enumerate() {
                    let slot = &mut acc[si * plan.cs.len() + ci];
                    if slot.is_none() {
                        continue;
                    }
                    let alpha = plan.alpha(c);
                    let est = spec
                        .local_quantiles(&fit, alpha)
                        .and_then(|qs| {
                            let g = spec.gamma_from_quantiles(&qs, alpha)?;
                            extrapolate(qs[0], alpha, beta, g)
                        });
                    *slot = match est {
                        Ok(q) if q.is_finite() => slot.map(|a| a + (q - q_true) * (q - q_true)),
                        _ => None,
                    };
                }
            }
        }
        deltas.extend(acc);
    }
    Ok(Replication { deltas, h: hs })
}
