//! Bony's decomposition `fg = T_f g + R(f, g) + T_g f`.
//!
//! With `Psi_k = sum_{j <= k} psi_j`,
//!
//! ```text
//! T_f g  = sum_{k >= 5} Psi_{k-5}(D) f  psi_k(D) g
//! R(f,g) = sum_{|j-k| <= 4} psi_j(D) f  psi_k(D) g
//! ```
//!
//! so the three terms cover the pairs `k - j >= 5`, `|j - k| <= 4` and
//! `j - k >= 5` of `sum_{j,k} psi_j(D) f psi_k(D) g` exactly once. All
//! products are formed on the padded grid and projected once per term.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{LPPartition, PaddedGrid, SpectralField};

/// The three Bony terms of a product.
#[derive(Clone, Debug)]
pub struct BonyTriple {
    /// `T_f g`: low frequencies of `f` against high frequencies of `g`.
    pub t_fg: SpectralField,
    /// `R(f, g)`: comparable frequencies.
    pub r_fg: SpectralField,
    /// `T_g f`: low frequencies of `g` against high frequencies of `f`.
    pub t_gf: SpectralField,
}

impl BonyTriple {
    pub fn sum(&self) -> SpectralField {
        let mut s = self.t_fg.clone();
        s.axpy(1.0, &self.r_fg).expect("terms share a shape");
        s.axpy(1.0, &self.t_gf).expect("terms share a shape");
        s
    }
}

enum Pairing {
    /// broadcast product, output shape (components, n_seq)
    Product(usize, usize),
    /// sum over all channels
    Inner,
}

fn padded_blocks(grid: &PaddedGrid, part: &LPPartition, f: &SpectralField) -> Result<Vec<Vec<Vec<Complex64>>>> {
    (0..part.block_count())
        .map(|j| Ok(grid.values(&part.block(f, j)?)))
        .collect()
}

fn accumulate(acc: &mut [Vec<Complex64>], a: &[Vec<Complex64>], b: &[Vec<Complex64>], pairing: &Pairing) {
    match pairing {
        Pairing::Product(..) => {
            for (c, out) in acc.iter_mut().enumerate() {
                let x = &a[if a.len() == 1 { 0 } else { c }];
                let y = &b[if b.len() == 1 { 0 } else { c }];
                for ((o, u), v) in out.iter_mut().zip(x).zip(y) {
                    *o += u * v;
                }
            }
        }
        Pairing::Inner => {
            let out = &mut acc[0];
            for (x, y) in a.iter().zip(b) {
                for ((o, u), v) in out.iter_mut().zip(x).zip(y) {
                    *o += u * v;
                }
            }
        }
    }
}

fn decompose(f: &SpectralField, g: &SpectralField, pairing: Pairing) -> Result<BonyTriple> {
    if f.lattice() != g.lattice() {
        return Err(Error::LatticeMismatch("Bony operands live on different lattices".into()));
    }
    let lattice = *f.lattice();
    let part = LPPartition::new(lattice);
    let grid = PaddedGrid::new(lattice);
    let fb = padded_blocks(&grid, &part, f)?;
    let gb = padded_blocks(&grid, &part, g)?;
    let (m, s) = match pairing {
        Pairing::Product(m, s) => (m, s),
        Pairing::Inner => (1, 0),
    };
    let channels = m * s.max(1);
    let zeros = || vec![vec![Complex64::new(0.0, 0.0); grid.len()]; channels];
    let blocks = part.block_count();

    // running low-pass sums Psi_{k-5} f and Psi_{k-5} g
    let mut low_f: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; fb[0].len()];
    let mut low_g: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; gb[0].len()];
    let mut t_fg = zeros();
    let mut t_gf = zeros();
    let mut r_fg = zeros();
    for k in 5..blocks {
        add_into(&mut low_f, &fb[k - 5]);
        add_into(&mut low_g, &gb[k - 5]);
        accumulate(&mut t_fg, &low_f, &gb[k], &pairing);
        accumulate(&mut t_gf, &fb[k], &low_g, &pairing);
    }
    for j in 0..blocks {
        let lo = j.saturating_sub(4);
        let hi = (j + 4).min(blocks - 1);
        let mut band: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; gb[0].len()];
        for gk in &gb[lo..=hi] {
            add_into(&mut band, gk);
        }
        accumulate(&mut r_fg, &fb[j], &band, &pairing);
    }
    Ok(BonyTriple {
        t_fg: grid.project(t_fg, m, s)?,
        r_fg: grid.project(r_fg, m, s)?,
        t_gf: grid.project(t_gf, m, s)?,
    })
}

fn add_into(acc: &mut [Vec<Complex64>], x: &[Vec<Complex64>]) {
    for (a, b) in acc.iter_mut().zip(x) {
        a.iter_mut().zip(b).for_each(|(u, v)| *u += v);
    }
}

/// Bony decomposition of the broadcast product `f g`.
///
/// A single-channel operand broadcasts over the channels of the other, which
/// covers scalar `f` against `l^2`-valued `g`.
pub fn bony_decompose(f: &SpectralField, g: &SpectralField) -> Result<BonyTriple> {
    let shape = if f.channels() == 1 {
        (g.components(), g.n_seq())
    } else if g.channels() == 1 || (f.components() == g.components() && f.n_seq() == g.n_seq()) {
        (f.components(), f.n_seq())
    } else {
        return Err(Error::invalid("Bony operands have incompatible channel layouts"));
    };
    decompose(f, g, Pairing::Product(shape.0, shape.1))
}

/// Bony decomposition of the channel inner product `(f, g)_H`.
pub fn bony_decompose_inner(f: &SpectralField, g: &SpectralField) -> Result<BonyTriple> {
    f.check_shape(g)?;
    decompose(f, g, Pairing::Inner)
}
