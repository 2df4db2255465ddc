//! Covariate kernel `K` and response kernel pair `(Q', Q)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::Scalar;

/// Kernel on `[0, 1]` bounded between `C1 > 0` and `C2 < inf`, zero outside,
/// integrating to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CovariateKernel {
    /// Piecewise linear `K(t) = 1.9 - 1.8 t`.
    #[default]
    Paper,
    /// `K = 1` on `[0, 1]`.
    Uniform,
}

impl CovariateKernel {
    #[inline]
    pub fn eval<T: Scalar>(self, t: T) -> T {
        if !(t >= T::zero() && t <= T::one()) {
            return T::zero();
        }
        match self {
            CovariateKernel::Paper => T::lit(1.9) - T::lit(1.8) * t,
            CovariateKernel::Uniform => T::one(),
        }
    }

    /// `(C1, C2)`: the infimum and supremum of `K` on its support.
    pub fn bounds<T: Scalar>(self) -> (T, T) {
        match self {
            CovariateKernel::Paper => (T::lit(0.1), T::lit(1.9)),
            CovariateKernel::Uniform => (T::one(), T::one()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CovariateKernel::Paper => "paper",
            CovariateKernel::Uniform => "uniform",
        }
    }
}

impl fmt::Display for CovariateKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CovariateKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(CovariateKernel::Paper),
            "uniform" => Ok(CovariateKernel::Uniform),
            other => Err(Error::invalid(
                "kernel",
                format!("unknown `{other}` (expected paper or uniform)"),
            )),
        }
    }
}

/// Density `Q'` supported on `[-1, 1]` with its distribution function `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResponseKernel {
    /// `Q'(u) = 1 - |u|`.
    #[default]
    Triangular,
}

impl ResponseKernel {
    #[inline]
    pub fn density<T: Scalar>(self, u: T) -> T {
        match self {
            ResponseKernel::Triangular => {
                let a = u.abs();
                if a >= T::one() {
                    T::zero()
                } else {
                    T::one() - a
                }
            }
        }
    }

    #[inline]
    pub fn cdf<T: Scalar>(self, u: T) -> T {
        match self {
            ResponseKernel::Triangular => {
                let half = T::lit(0.5);
                if u <= -T::one() {
                    T::zero()
                } else if u >= T::one() {
                    T::one()
                } else if u <= T::zero() {
                    let v = T::one() + u;
                    half * v * v
                } else {
                    let v = T::one() - u;
                    T::one() - half * v * v
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ResponseKernel::Triangular => "triangular",
        }
    }
}

impl fmt::Display for ResponseKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ResponseKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangular" => Ok(ResponseKernel::Triangular),
            other => Err(Error::invalid(
                "qkernel",
                format!("unknown `{other}` (expected triangular)"),
            )),
        }
    }
}
