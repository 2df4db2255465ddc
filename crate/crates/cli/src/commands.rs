use fextq::bandwidth::{cv_bandwidth, BandwidthGrid};
use fextq::data::load_dataset;
use fextq::extrapolation::weissman_local;
use fextq::sim::{burr_experiment, ExperimentPlan};
use fextq::tail_index::power_taus;
use fextq::{
    Curve, Dataset, DistanceMatrix, EstimatorConfig, LocalFit, TailIndexSpec, WeissmanQuery,
};
use serde_json::{json, Value};

use crate::args::{
    parse_grid, AnchorArgs, CvArgs, DataArgs, EstimateArgs, GammaEstimator, QueryArgs, ScanArgs,
    SimulateArgs, SmoothingArgs, TailArgs, WeissmanArgs,
};
use crate::output::{emit, report, warn};
use crate::CliError;

fn load(data: &DataArgs) -> Result<Dataset<f64>, CliError> {
    let ds = load_dataset(&data.curves, &data.responses)?;
    Ok(ds.transform_response(data.transform.into())?)
}

fn query_curve(ds: &Dataset<f64>, query: &QueryArgs) -> Result<(Curve<f64>, Value), CliError> {
    if let Some(i) = query.x_row {
        let x = ds.curve(i).ok_or_else(|| {
            CliError::usage(format!("--x-row {i} out of range for {} curves", ds.len()))
        })?;
        return Ok((x.clone(), json!({ "row": i })));
    }
    let path = query
        .x_file
        .as_ref()
        .expect("clap enforces one query source");
    let (_, curves) = fextq::data::load_curves::<f64>(path)?;
    let x = curves
        .into_iter()
        .next()
        .ok_or_else(|| CliError::usage(format!("{} holds no curve", path.display())))?;
    ds.check_query(&x)?;
    Ok((x, json!({ "file": path.display().to_string() })))
}

fn cv_grid(ds: &Dataset<f64>, s: &SmoothingArgs) -> Result<BandwidthGrid<f64>, CliError> {
    if s.auto_grid {
        let dm = DistanceMatrix::build(ds, s.semimetric)?;
        Ok(BandwidthGrid::auto(&dm, s.grid_size)?)
    } else if let Some(spec) = &s.grid {
        parse_grid(spec)
    } else {
        Ok(BandwidthGrid::standard())
    }
}

fn base_config(s: &SmoothingArgs) -> Result<EstimatorConfig<f64>, CliError> {
    let mut cfg = EstimatorConfig::new(s.h.unwrap_or(1.0), s.lambda)?
        .with_kernel(s.kernel)
        .with_semimetric(s.semimetric);
    cfg.response_kernel = s.qkernel;
    Ok(cfg)
}

/// Estimator configuration with `h` from the flag or from cross-validation.
fn resolve_config(
    ds: &Dataset<f64>,
    s: &SmoothingArgs,
) -> Result<(EstimatorConfig<f64>, Value), CliError> {
    let cfg = base_config(s)?;
    let (cfg, source) = match s.h {
        Some(_) => (cfg, "flag"),
        None => {
            let cv = cv_bandwidth(ds, &cv_grid(ds, s)?, &cfg)?;
            (cfg.with_h(cv.h_opt)?, "cv")
        }
    };
    let meta = json!({
        "h": cfg.h,
        "h_source": source,
        "lambda": cfg.lambda,
        "kernel": cfg.kernel.name(),
        "qkernel": cfg.response_kernel.name(),
        "semimetric": cfg.semimetric.name(),
    });
    Ok((cfg, meta))
}

fn resolve_spec(t: &TailArgs) -> Result<TailIndexSpec<f64>, CliError> {
    let taus = || match &t.taus {
        Some(v) => v.clone(),
        None => power_taus(t.j, t.s),
    };
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| CliError::usage(format!("--gamma-estimator needs --{flag}")))
    };
    let spec = match t.gamma_estimator {
        GammaEstimator::Hill => TailIndexSpec::hill(taus())?,
        GammaEstimator::Pickands => TailIndexSpec::pickands()?,
        GammaEstimator::PhiP => TailIndexSpec::phi_p(taus(), need(t.p, "p")?)?,
        GammaEstimator::PhiPqr => {
            TailIndexSpec::phi_pqr(taus(), need(t.p, "p")?, need(t.q, "q")?, need(t.r, "r")?)?
        }
    };
    Ok(spec)
}

fn anchor(a: &AnchorArgs, n: usize) -> Result<f64, CliError> {
    let alpha = a
        .alpha
        .unwrap_or_else(|| WeissmanQuery::<f64>::anchor_from_c(a.alpha_c, n));
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(fextq::Error::InvalidParameter {
            name: "alpha",
            reason: format!("must lie in (0, 1), got {alpha}"),
        }
        .into());
    }
    Ok(alpha)
}

/// Few expected exceedances in the ball: the estimate rests on almost no data.
fn presence_warning(fit: &LocalFit<f64>, alpha: f64, warnings: &mut Vec<String>) {
    let expected = fit.sample_size() as f64 * fit.phi_hat() * alpha;
    if expected < 1.0 {
        warn(
            warnings,
            format!("n * phi_hat * alpha = {expected:.3} < 1: few sample points are expected above the quantile"),
        );
    }
}

fn fit_summary(fit: &LocalFit<f64>) -> Value {
    json!({ "n": fit.sample_size(), "in_ball": fit.in_ball(), "phi_hat": fit.phi_hat() })
}

struct Prepared {
    ds: Dataset<f64>,
    fit: LocalFit<f64>,
    meta: Value,
}

fn prepare(a: &EstimateArgs) -> Result<Prepared, CliError> {
    let ds = load(&a.data)?;
    let (x, query) = query_curve(&ds, &a.query)?;
    let (cfg, mut meta) = resolve_config(&ds, &a.smoothing)?;
    let fit = LocalFit::new(&ds, &x, &cfg)?;
    meta["query"] = query;
    meta["fit"] = fit_summary(&fit);
    Ok(Prepared { ds, fit, meta })
}

pub fn csf(a: &EstimateArgs) -> Result<(), CliError> {
    let y = a.y.ok_or_else(|| CliError::usage("csf needs --y"))?;
    let p = prepare(a)?;
    let value = p.fit.csf(y);
    emit(None, &format!("{value}\n"))?;
    let mut meta = p.meta;
    meta["y"] = json!(y);
    meta["value"] = json!(value);
    report(a.report.as_deref(), "csf", meta)?;
    Ok(())
}

pub fn quantile(a: &EstimateArgs) -> Result<(), CliError> {
    let p = prepare(a)?;
    let alpha = anchor(&a.anchor, p.ds.len())?;
    let mut warnings = Vec::new();
    presence_warning(&p.fit, alpha, &mut warnings);
    let value = p.fit.quantile(alpha)?;
    emit(None, &format!("{value}\n"))?;
    let mut meta = p.meta;
    meta["alpha"] = json!(alpha);
    meta["value"] = json!(value);
    meta["warnings"] = json!(warnings);
    report(a.report.as_deref(), "quantile", meta)?;
    Ok(())
}

pub fn gamma(a: &EstimateArgs) -> Result<(), CliError> {
    let p = prepare(a)?;
    let spec = resolve_spec(&a.tail)?;
    let alpha = anchor(&a.anchor, p.ds.len())?;
    let mut warnings = Vec::new();
    presence_warning(&p.fit, alpha, &mut warnings);
    let value = spec.estimate(&p.fit, alpha)?;
    emit(None, &format!("{value}\n"))?;
    let mut meta = p.meta;
    meta["alpha"] = json!(alpha);
    meta["estimator"] = json!(spec.name());
    meta["taus"] = json!(spec.taus());
    meta["value"] = json!(value);
    meta["asymptotic_variance"] = json!(spec.asymptotic_variance(value));
    meta["warnings"] = json!(warnings);
    report(a.report.as_deref(), "gamma", meta)?;
    Ok(())
}

pub fn weissman(a: &WeissmanArgs) -> Result<(), CliError> {
    let p = prepare(&a.base)?;
    let spec = resolve_spec(&a.base.tail)?;
    let n = p.ds.len();
    let alpha = anchor(&a.base.anchor, n)?;
    let beta = a.beta.unwrap_or(5.0 / n as f64);
    let mut query = WeissmanQuery::new(alpha, beta)?;
    if let Some(g) = a.gamma {
        query = query.with_gamma(g)?;
    }
    let mut warnings = Vec::new();
    presence_warning(&p.fit, alpha, &mut warnings);
    let est = weissman_local(&p.fit, &query, &spec)?;
    emit(None, &format!("{}\n", est.quantile))?;
    let mut meta = p.meta;
    meta["alpha"] = json!(alpha);
    meta["beta"] = json!(beta);
    meta["estimator"] = json!(spec.name());
    meta["taus"] = json!(spec.taus());
    meta["gamma"] = json!(est.gamma);
    meta["gamma_source"] = json!(if a.gamma.is_some() {
        "flag"
    } else {
        "estimated"
    });
    meta["anchor_quantile"] = json!(est.anchor_quantile);
    meta["value"] = json!(est.quantile);
    meta["relative_variance"] = json!(est.relative_variance);
    meta["warnings"] = json!(warnings);
    report(a.base.report.as_deref(), "weissman", meta)?;
    Ok(())
}

pub fn cv(a: &CvArgs) -> Result<(), CliError> {
    let ds = load(&a.data)?;
    let cfg = base_config(&a.smoothing)?;
    let grid = cv_grid(&ds, &a.smoothing)?;
    let result = cv_bandwidth(&ds, &grid, &cfg)?;
    let mut csv = String::from("h,score\n");
    for (h, s) in grid.values().iter().zip(&result.scores) {
        csv.push_str(&format!("{h},{s}\n"));
    }
    emit(a.out.as_deref(), &csv)?;
    report(
        a.report.as_deref(),
        "cv",
        json!({
            "n": ds.len(),
            "semimetric": cfg.semimetric.name(),
            "lambda": cfg.lambda,
            "grid": grid.values(),
            "scores": result.scores,
            "h_opt": result.h_opt,
        }),
    )?;
    Ok(())
}

fn ci_mode() -> bool {
    std::env::var("CI").is_ok_and(|v| !v.is_empty() && v != "0" && !v.eq_ignore_ascii_case("false"))
}

pub const DEFAULT_SEED: u64 = 1;

pub fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    if !a.table2 {
        return Err(CliError::usage("simulate needs --table2"));
    }
    let seed = match a.seed {
        Some(s) => s,
        None if ci_mode() => return Err(CliError::usage("--seed is required when CI is set")),
        None => DEFAULT_SEED,
    };
    let plan = ExperimentPlan {
        replications: a.replications,
        n: a.n,
        beta_factor: a.beta_factor,
        cs: a.c.clone(),
        ss: a.s.clone(),
        js: a.j.clone(),
        semimetrics: a.semimetric.clone(),
        seed,
        lambda: a.lambda,
        kernel: a.kernel,
        h_grid: parse_grid(&a.grid)?,
        m: a.m,
    };
    let result = burr_experiment(&plan)?;
    let mut csv = String::from("semimetric,J,s,c,median,q10,q90,completed,failures\n");
    for c in &result.cells {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            c.semimetric, c.j, c.s, c.c, c.median, c.q10, c.q90, c.completed, c.failures
        ));
    }
    emit(a.out.as_deref(), &csv)?;
    let failures: usize = result.cells.iter().map(|c| c.failures).sum();
    if failures > 0 {
        eprintln!("warning: {failures} cell replications failed; see the failures column");
    }
    report(
        a.report.as_deref(),
        "simulate",
        json!({
            "seed": seed,
            "N": plan.replications,
            "n": plan.n,
            "alpha": plan.cs.iter().map(|&c| plan.alpha(c)).collect::<Vec<_>>(),
            "beta": plan.beta(),
            "lambda": plan.lambda,
            "kernel": plan.kernel.name(),
            "median_h": result.median_h.iter().map(|(d, h)| json!({ "semimetric": d.name(), "h": h })).collect::<Vec<_>>(),
            "cells": result.cells.iter().map(|c| json!({
                "semimetric": c.semimetric.name(),
                "J": c.j, "s": c.s, "c": c.c,
                "median": c.median, "q10": c.q10, "q90": c.q90,
                "completed": c.completed, "failures": c.failures,
            })).collect::<Vec<_>>(),
        }),
    )?;
    Ok(())
}

pub fn scan(a: &ScanArgs) -> Result<(), CliError> {
    let ds = load(&a.data)?;
    let n = ds.len();
    let (i0, i1) = match (a.i0, a.i1) {
        (Some(i0), Some(i1)) => (i0, i1),
        _ => DistanceMatrix::build(&ds, a.smoothing.semimetric)?
            .argmax_pair()
            .ok_or_else(|| CliError::usage("scan needs at least two curves"))?,
    };
    let start = ds
        .curve(i0)
        .ok_or_else(|| CliError::usage(format!("--i0 {i0} out of range for {n} curves")))?
        .clone();
    let end = ds
        .curve(i1)
        .ok_or_else(|| CliError::usage(format!("--i1 {i1} out of range for {n} curves")))?
        .clone();
    if a.xi_steps == 0 {
        return Err(CliError::usage("--xi-steps must be at least 1"));
    }
    let (cfg, mut meta) = resolve_config(&ds, &a.smoothing)?;
    let spec = resolve_spec(&a.tail)?;
    let alpha = anchor(&a.anchor, n)?;
    let beta = a.beta.unwrap_or(5.0 / n as f64);
    let query = WeissmanQuery::new(alpha, beta)?;
    let mut warnings = Vec::new();
    let mut csv = String::from("xi,q_weissman,gamma\n");
    for k in 0..a.xi_steps {
        let xi = if a.xi_steps == 1 {
            0.0
        } else {
            k as f64 / (a.xi_steps - 1) as f64
        };
        let x = start.lerp(&end, xi)?;
        let fit = LocalFit::new(&ds, &x, &cfg)?;
        let expected = fit.sample_size() as f64 * fit.phi_hat() * alpha;
        if expected < 1.0 {
            warn(
                &mut warnings,
                format!("xi = {xi}: n * phi_hat * alpha = {expected:.3} < 1"),
            );
        }
        let est = weissman_local(&fit, &query, &spec)?;
        csv.push_str(&format!("{xi},{},{}\n", est.quantile, est.gamma));
    }
    emit(a.out.as_deref(), &csv)?;
    meta["i0"] = json!(i0);
    meta["i1"] = json!(i1);
    meta["alpha"] = json!(alpha);
    meta["beta"] = json!(beta);
    meta["estimator"] = json!(spec.name());
    meta["taus"] = json!(spec.taus());
    meta["xi_steps"] = json!(a.xi_steps);
    meta["warnings"] = json!(warnings);
    report(a.report.as_deref(), "scan", meta)?;
    Ok(())
}
