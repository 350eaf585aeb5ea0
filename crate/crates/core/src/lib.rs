//! A pseudo-spectral laboratory for linear second-order stochastic PDE systems
//! with gradient noise on the periodic torus `[-1/2, 1/2]^d`.
//!
//! * [`spectral`]: fields on a Fourier lattice, Littlewood-Paley blocks and
//!   fractional norms.
//! * [`paraproduct`]: Bony decomposition, multiplication-inequality probes,
//!   the local extension operator, covers and partitions of unity.
//! * [`coefficients`]: coefficient fields and the stochastic parabolicity margin.
//! * [`solver`]: Fourier-Galerkin / semi-implicit Euler-Maruyama stepping and an
//!   exact per-mode oracle.
//! * [`harness`]: weighted space-time norms and Monte Carlo regularity ratios.

pub mod coefficients;
pub mod error;
pub mod harness;
pub mod paraproduct;
pub mod rng;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/paraproduct.md")]
    mod paraproduct {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    mod coefficients {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
