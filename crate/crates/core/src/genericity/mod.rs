//! Censuses and Monte Carlo estimates of how often random tuples of
//! cyclically reduced words have the properties used in small cancellation
//! constructions.

mod decay;
mod experiment;
mod property;

pub use decay::{fit_decay, fit_decay_points, DecayFit, ZeroPolicy};
pub use experiment::{
    run_experiment, ExperimentConfig, ExperimentReport, Mode, ReportRow, DEFAULT_BUDGET, WORKERS_ENV,
};
pub use property::{evaluate_tuple, Evaluator, Property, Verdict};
