//! Fourier representation of periodic fields and the fractional norms built on it.

mod dealias;
mod fft;
mod field;
mod lattice;
mod littlewood_paley;
mod norms;

pub use dealias::{inner_product, product, product_on, PaddedGrid};
pub use field::{dft, dft_complex, idft, SpectralField};
pub use lattice::{torus_distance, torus_offset, wrap_half, wrap_point, Lattice};
pub use littlewood_paley::{chi, lp_blocks, LPDecomposition, LPPartition};
pub use norms::{besov_norm, bessel_norm, bessel_potential, holder_norm, lq_norm, square_function_norm};

