//! Weighted space-time norms, the data functional and Monte Carlo
//! maximal-regularity ratios.

mod budget;
mod data;
mod experiment;
mod spec;
mod time_norm;

pub use budget::{perturbation_budget, BudgetReport};
pub use data::{data_functional, trace_norm, DataNorms, DataSpec, FieldLaw, ForcingLaw};
pub use experiment::{
    heat_mode_bound, path_inputs, percentile, smr_experiment, ExperimentSpec, PathRecord, RandomProfile, RatioReport, CSV_COLUMNS,
    SCHEMA_VERSION,
};
pub use spec::NormSpec;
pub use time_norm::{weighted_integral, weighted_lp, weighted_time_norm};
