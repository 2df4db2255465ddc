//! Kernel estimators of extreme conditional quantiles for a heavy-tailed
//! response given a functional (curve-valued) covariate.
//!
//! The pipeline is:
//!
//! 1. [`data`]: discretized curves plus scalar responses.
//! 2. [`semimetric`]: distances between curves (L2, squared-norm difference,
//!    discrete second derivative).
//! 3. [`kernel`]: the covariate kernel `K` and the response kernel pair `(Q', Q)`.
//! 4. [`estimator`]: the kernel conditional survival function, its generalized
//!    inverse, and the empirical standardization quantities.
//! 5. [`tail_index`]: the invariant-function family of tail-index estimators
//!    (Hill, Pickands, power-mean, aggregated) and their asymptotic variances.
//! 6. [`extrapolation`]: Weissman extrapolation to arbitrarily small orders.
//! 7. [`bandwidth`]: leave-one-out cross-validation of the covariate bandwidth.
//! 8. [`sim`]: generators, the Burr replication study, and Monte Carlo checks
//!    of the limit laws.
//!
//! Everything except the simulation lab is generic over the floating point
//! type through [`Scalar`]; the `*64` / `*32` aliases below name the common
//! instantiations.

// `!(a > b)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandwidth;
pub mod data;
pub mod error;
pub mod estimator;
pub mod extrapolation;
pub mod kernel;
pub mod scalar;
pub mod semimetric;
pub mod sim;
pub mod stats;
pub mod tail_index;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use bandwidth::{cv_bandwidth, BandwidthGrid, CvResult};
pub use data::{Curve, Dataset, Grid, ResponseTransform};
pub use estimator::{EstimatorConfig, Level, LocalFit, LocalWeights, Standardization};
pub use extrapolation::{WeissmanEstimate, WeissmanQuery};
pub use kernel::{CovariateKernel, ResponseKernel};
pub use semimetric::{DistanceMatrix, SemiMetricKind};
pub use tail_index::{PhiKind, TailIndexSpec};

pub type Grid64 = Grid<f64>;
pub type Curve64 = Curve<f64>;
pub type Dataset64 = Dataset<f64>;
pub type EstimatorConfig64 = EstimatorConfig<f64>;
pub type LocalFit64 = LocalFit<f64>;
pub type TailIndexSpec64 = TailIndexSpec<f64>;
pub type DistanceMatrix64 = DistanceMatrix<f64>;

pub type Grid32 = Grid<f32>;
pub type Curve32 = Curve<f32>;
pub type Dataset32 = Dataset<f32>;
pub type EstimatorConfig32 = EstimatorConfig<f32>;
pub type TailIndexSpec32 = TailIndexSpec<f32>;
