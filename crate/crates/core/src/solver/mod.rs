//! Fourier-Galerkin / semi-implicit Euler-Maruyama solver for
//! `du + A u dt = f dt + sum_n (B_n u + g_n) dw_n` on the torus.

mod dump;
mod operator;
mod oracle;
mod scheme;
mod time;

pub use dump::{read_trajectory, write_trajectory, DumpHeader};
pub use operator::{apply_a, apply_b, check_regularity, OperatorForm, PseudoSpectralOperator};
pub use oracle::{exact_mode_on_grid, exact_mode_oracle};
pub use scheme::{solve, solve_observed, step, PathData, SchemeInfo, SeparableTerm, TimeSeries, Trajectory};
pub use time::{grading_exponent, BrownianIncrements, TimeGrid};
