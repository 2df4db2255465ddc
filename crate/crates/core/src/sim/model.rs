use std::fmt;
use std::sync::Arc;

use rand::distr::Open01;
use rand::Rng;

use crate::data::{Curve, Grid};
use crate::error::{Error, Result};

use super::CosineCovariateProcess;

/// Parameter as a function of the covariate curve.
pub type ParamMap = Arc<dyn Fn(&Curve<f64>) -> f64 + Send + Sync>;

fn constant(v: f64) -> ParamMap {
    Arc::new(move |_| v)
}

/// Conditional heavy-tailed response distribution, closed form throughout.
#[derive(Clone)]
pub enum HeavyTailModel {
    /// Survival `y^-theta` on `y >= 1`.
    Pareto { theta: ParamMap },
    /// Survival `1 - exp(-y^-theta)`.
    Frechet { theta: ParamMap },
    /// Survival `(1 + y^tau)^-lambda`.
    Burr { tau: ParamMap, lambda: ParamMap },
}

impl fmt::Debug for HeavyTailModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family())
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

impl HeavyTailModel {
    pub fn pareto(theta: f64) -> Result<Self> {
        check_positive("theta", theta)?;
        Ok(Self::Pareto { theta: constant(theta) })
    }

    pub fn frechet(theta: f64) -> Result<Self> {
        check_positive("theta", theta)?;
        Ok(Self::Frechet { theta: constant(theta) })
    }

    pub fn burr(tau: f64, lambda: f64) -> Result<Self> {
        check_positive("tau", tau)?;
        check_positive("lambda", lambda)?;
        Ok(Self::Burr {
            tau: constant(tau),
            lambda: constant(lambda),
        })
    }

    /// Burr with `tau = 2` and `lambda(x) = 2 / (8 ||x||^2 - 3)`, the squared
    /// norm taken by trapezoid quadrature on `grid`.
    ///
    /// Checks that `||X||^2 > 3/8` over the cosine process support, so
    /// `lambda` stays positive for every curve the process can produce.
    pub fn cosine_burr(grid: &Grid<f64>) -> Result<Self> {
        let process_grid = grid.clone();
        let worst = (0..=10_000)
            .map(|k| {
                let z = CosineCovariateProcess::Z_MIN
                    + (CosineCovariateProcess::Z_MAX - CosineCovariateProcess::Z_MIN) * k as f64 / 10_000.0;
                CosineCovariateProcess::closed_norm_sq(z)
            })
            .fold(f64::INFINITY, f64::min);
        if !(worst > 0.375) {
            return Err(Error::invalid("lambda", format!("||X||^2 reaches {worst} <= 3/8")));
        }
        let lambda: ParamMap = Arc::new(move |x: &Curve<f64>| {
            let sq: Vec<f64> = x.values().iter().map(|v| v * v).collect();
            2.0 / (8.0 * process_grid.integrate(&sq) - 3.0)
        });
        Ok(Self::Burr {
            tau: constant(2.0),
            lambda,
        })
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Pareto { .. } => "pareto",
            Self::Frechet { .. } => "frechet",
            Self::Burr { .. } => "burr",
        }
    }

    /// `theta(x)` or `(tau(x), lambda(x))`.
    pub fn parameters(&self, x: &Curve<f64>) -> (f64, Option<f64>) {
        match self {
            Self::Pareto { theta } | Self::Frechet { theta } => (theta(x), None),
            Self::Burr { tau, lambda } => (tau(x), Some(lambda(x))),
        }
    }

    pub fn survival(&self, y: f64, x: &Curve<f64>) -> f64 {
        match self {
            Self::Pareto { theta } => {
                if y <= 1.0 {
                    1.0
                } else {
                    y.powf(-theta(x))
                }
            }
            Self::Frechet { theta } => {
                if y <= 0.0 {
                    1.0
                } else {
                    -(-y.powf(-theta(x))).exp_m1()
                }
            }
            Self::Burr { tau, lambda } => {
                if y <= 0.0 {
                    1.0
                } else {
                    (-lambda(x) * y.powf(tau(x)).ln_1p()).exp()
                }
            }
        }
    }

    /// `q(alpha|x)`, the inverse of the survival function, `alpha` in (0, 1).
    pub fn quantile(&self, alpha: f64, x: &Curve<f64>) -> f64 {
        match self {
            Self::Pareto { theta } => alpha.powf(-1.0 / theta(x)),
            Self::Frechet { theta } => (-(-alpha).ln_1p()).powf(-1.0 / theta(x)),
            Self::Burr { tau, lambda } => (-alpha.ln() / lambda(x)).exp_m1().powf(1.0 / tau(x)),
        }
    }

    pub fn gamma(&self, x: &Curve<f64>) -> f64 {
        match self {
            Self::Pareto { theta } | Self::Frechet { theta } => 1.0 / theta(x),
            Self::Burr { tau, lambda } => 1.0 / (lambda(x) * tau(x)),
        }
    }

    /// `c(x)` in `F(y|x) = c(x) exp(-int_1^y (1/gamma(x) - eps(u|x)) du/u)`,
    /// which is the survival at `y = 1`.
    pub fn scale(&self, x: &Curve<f64>) -> f64 {
        match self {
            Self::Pareto { .. } => 1.0,
            Self::Frechet { .. } => 1.0 - (-1.0f64).exp(),
            Self::Burr { lambda, .. } => 2f64.powf(-lambda(x)),
        }
    }

    /// Leading-order second-order term `eps(y|x)`.
    pub fn epsilon(&self, y: f64, x: &Curve<f64>) -> f64 {
        match self {
            Self::Pareto { .. } => 0.0,
            Self::Frechet { theta } => {
                let t = theta(x);
                0.5 * t * y.powf(-t)
            }
            Self::Burr { tau, lambda } => {
                let t = tau(x);
                lambda(x) * t * y.powf(-t)
            }
        }
    }

    /// Inversion sampling: `Y = q(u|x)` for `u` in (0, 1).
    pub fn sample_conditional(&self, x: &Curve<f64>, u: f64) -> f64 {
        self.quantile(u, x)
    }

    pub fn sample<R: Rng + ?Sized>(&self, x: &Curve<f64>, rng: &mut R) -> f64 {
        self.sample_conditional(x, rng.sample(Open01))
    }
}
