//! Dyadic Littlewood-Paley decomposition on the lattice.
//!
//! Blocks are built from the radial profile `chi`, equal to one on `|xi| <= 1`,
//! zero on `|xi| >= 3/2`, with a quintic smoothstep in between. With
//! `psi_0 = chi` and `psi_j(xi) = chi(2^-j xi) - chi(2^(1-j) xi)`, block `j >= 1`
//! lives on `2^(j-1) < |xi| < 3 2^(j-1)`. The frequency variable is the angular
//! wavenumber `xi = 2 pi k`, the variable of the symbol `|xi|^2` of `-Laplacian`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::SpectralField;
use super::lattice::Lattice;
use crate::error::{Error, Result};

/// The cutoff profile `chi`.
pub fn chi(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 1.5 {
        0.0
    } else {
        let t = (r - 1.0) * 2.0;
        1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

/// Sampled partition `(psi_j)_{j <= J}` on a lattice.
#[derive(Clone, Debug)]
pub struct LPPartition {
    lattice: Lattice,
    /// sparse support of each block: (mode index, weight)
    blocks: Vec<Vec<(usize, f64)>>,
}

impl LPPartition {
    pub fn new(lattice: Lattice) -> Self {
        let radii: Vec<f64> = (0..lattice.len())
            .map(|i| 2.0 * PI * lattice.wavenumber_sq(i).sqrt())
            .collect();
        let top = 2.0 * PI * lattice.max_wavenumber();
        // smallest J with chi(2^-J |xi|) = 1 on the whole lattice
        let mut j_max = 0usize;
        while (2f64).powi(j_max as i32) < top {
            j_max += 1;
        }
        let mut blocks = Vec::with_capacity(j_max + 1);
        for j in 0..=j_max {
            let mut entries = Vec::new();
            for (i, &r) in radii.iter().enumerate() {
                let w = Self::weight(j, r);
                if w != 0.0 {
                    entries.push((i, w));
                }
            }
            blocks.push(entries);
        }
        LPPartition { lattice, blocks }
    }

    fn weight(j: usize, r: f64) -> f64 {
        if j == 0 {
            chi(r)
        } else {
            let s = (2f64).powi(-(j as i32));
            chi(r * s) - chi(r * 2.0 * s)
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Index of the top block.
    pub fn j_max(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Dense samples of `psi_j` in storage order.
    pub fn psi(&self, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.lattice.len()];
        if let Some(b) = self.blocks.get(j) {
            for &(i, w) in b {
                out[i] = w;
            }
        }
        out
    }

    /// Dense samples of `Psi_k = sum_{j <= k} psi_j`, zero for negative `k`.
    pub fn big_psi(&self, k: i64) -> Vec<f64> {
        let mut out = vec![0.0; self.lattice.len()];
        if k < 0 {
            return out;
        }
        for j in 0..=(k as usize).min(self.j_max()) {
            for &(i, w) in &self.blocks[j] {
                out[i] += w;
            }
        }
        out
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        if *f.lattice() != self.lattice {
            return Err(Error::LatticeMismatch("partition built for another lattice".into()));
        }
        Ok(())
    }

    /// `psi_j(D) f`.
    pub fn block(&self, f: &SpectralField, j: usize) -> Result<SpectralField> {
        self.check(f)?;
        let mut out = SpectralField::zeros(self.lattice, f.components(), f.n_seq());
        if let Some(b) = self.blocks.get(j) {
            for c in 0..f.channels() {
                let src = f.channel(c);
                let dst = out.channel_mut(c);
                for &(i, w) in b {
                    dst[i] = src[i] * w;
                }
            }
        }
        Ok(out)
    }

    /// `Psi_k(D) f`.
    pub fn low_pass(&self, f: &SpectralField, k: i64) -> Result<SpectralField> {
        self.check(f)?;
        let symbol = self.big_psi(k);
        Ok(f.apply_symbol_values(&symbol))
    }

    /// All blocks of `f`.
    pub fn decompose(&self, f: &SpectralField) -> Result<LPDecomposition> {
        let blocks = (0..self.block_count()).map(|j| self.block(f, j)).collect::<Result<Vec<_>>>()?;
        Ok(LPDecomposition { blocks })
    }

    /// Grid values of each block, restricted to blocks touching the support of `f`.
    pub(crate) fn block_grids(&self, f: &SpectralField) -> Result<Vec<Option<Vec<Complex64>>>> {
        self.check(f)?;
        (0..self.block_count())
            .map(|j| {
                let b = self.block(f, j)?;
                if b.max_abs_coefficient() == 0.0 {
                    Ok(None)
                } else {
                    Ok(Some(b.to_grid()))
                }
            })
            .collect()
    }
}

/// The blocks `psi_j(D) f`, `j = 0..=J`.
#[derive(Clone, Debug)]
pub struct LPDecomposition {
    pub blocks: Vec<SpectralField>,
}

impl LPDecomposition {
    /// `sum_j psi_j(D) f`.
    pub fn reconstruct(&self) -> SpectralField {
        let mut acc = self.blocks[0].clone();
        for b in &self.blocks[1..] {
            acc.axpy(1.0, b).expect("blocks share a shape");
        }
        acc
    }
}

/// Decomposition of `f` with a freshly built partition.
pub fn lp_blocks(f: &SpectralField, part: &LPPartition) -> Result<LPDecomposition> {
    part.decompose(f)
}
