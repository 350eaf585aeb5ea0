//! Coefficient fields of the operator pair `(A, B)` and the stochastic
//! parabolicity condition.

mod generate;
mod parabolicity;
mod profile;
mod set;

pub use generate::{generate_holder_field, generate_holder_field_banded, random_field};
pub use parabolicity::{
    evaluate_form, parabolicity_margin, sample_directions, sample_points, sample_times, ParabolicityReport,
    SampleCounts, Sampling, Witness,
};
pub use profile::TimeProfile;
pub use set::{
    freeze_coefficients, psi_matrix, CoefficientSet, CoefficientSpec, PointCoefficients, RandomCoefficients,
    SMOOTH_EXPONENT,
};
