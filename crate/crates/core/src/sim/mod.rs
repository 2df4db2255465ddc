//! Monte Carlo lab: heavy-tailed generators, the cosine covariate process,
//! the Burr replication study, and numerical checks of the limit laws.
//!
//! All randomness flows from one root seed split into independent ChaCha
//! streams (one per replication), so results do not depend on how work is
//! scheduled across threads.

mod covariate;
mod experiment;
mod lemmas;
mod limit_law;
mod model;
mod rng;

pub use covariate::CosineCovariateProcess;
pub use experiment::{burr_experiment, CellResult, ExperimentPlan, ExperimentReport};
pub use lemmas::{
    lemma2_expansion_check, lemma4_presence_curve, presence_probability, small_ball_probability,
    Lemma2Report, Lemma2Row, PresenceEstimate, PresencePoint,
};
pub use limit_law::{
    ks_statistic, normality_check, CovariateDesign, LimitLawPlan, LimitStatistic, NormalityReport,
};
pub use model::{HeavyTailModel, ParamMap};
pub use rng::stream_rng;
