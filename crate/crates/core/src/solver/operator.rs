//! Pseudo-spectral evaluation of
//! `A u = -sum_{i,j} d_i (a^{i,j} d_j u)` (divergence form),
//! `A u = -sum_{i,j} a^{i,j} d_i d_j u` (non-divergence form) and
//! `(B_n u)_k = sum_j b^j_{k,n} d_j u_k`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientSet;
use crate::error::{Error, Result};
use crate::spectral::{PaddedGrid, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorForm {
    Divergence,
    NonDivergence,
}

/// Checks the regularity metadata against `sigma`: `alpha > |1 + sigma|`,
/// and for the non-divergence form also that `beta` is present with `beta > |sigma|`.
pub fn check_regularity(coeffs: &CoefficientSet, form: OperatorForm, sigma: f64) -> Result<()> {
    if !(coeffs.alpha() > (1.0 + sigma).abs()) {
        return Err(Error::range(format!("alpha > |1 + sigma| (alpha = {}, sigma = {sigma})", coeffs.alpha())));
    }
    if form == OperatorForm::NonDivergence {
        match coeffs.beta() {
            None => return Err(Error::range("non-divergence form requires beta")),
            Some(b) if !(b > sigma.abs()) => {
                return Err(Error::range(format!("beta > |sigma| (beta = {b}, sigma = {sigma})")))
            }
            _ => {}
        }
    }
    Ok(())
}

/// `A` and `B` for one coefficient set, with coefficient values cached on
/// the padded grid.
#[derive(Clone, Debug)]
pub struct PseudoSpectralOperator {
    coeffs: CoefficientSet,
    form: OperatorForm,
    grid: PaddedGrid,
    /// per `(i, j)`: `m * m` channels of padded values
    a_vals: Vec<Vec<Vec<f64>>>,
    /// per `j`: `m * N` channels of padded values
    b_vals: Vec<Vec<Vec<f64>>>,
    nu: f64,
}

impl PseudoSpectralOperator {
    pub fn new(coeffs: &CoefficientSet, form: OperatorForm) -> Result<Self> {
        if form == OperatorForm::NonDivergence && coeffs.beta().is_none() {
            return Err(Error::range("non-divergence form requires beta"));
        }
        let grid = PaddedGrid::new(*coeffs.lattice());
        let a_vals: Vec<Vec<Vec<f64>>> = coeffs.a_fields().iter().map(|f| grid.real_values(f)).collect();
        let b_vals = coeffs.b_fields().iter().map(|f| grid.real_values(f)).collect();
        let nu = stabilisation(coeffs, &a_vals, grid.len());
        Ok(Self { coeffs: coeffs.clone(), form, grid, a_vals, b_vals, nu })
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coeffs
    }

    pub fn form(&self) -> OperatorForm {
        self.form
    }

    /// `nu = rho_max * max_x lambda_max(sym a(x))` over the padded grid,
    /// with `a(x)` read as a `dm x dm` matrix.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn grid(&self) -> &PaddedGrid {
        &self.grid
    }

    fn check(&self, u: &SpectralField) -> Result<()> {
        if u.lattice() != self.coeffs.lattice() {
            return Err(Error::LatticeMismatch("field and coefficients live on different lattices".into()));
        }
        if u.components() != self.coeffs.m() || u.n_seq() != 0 {
            return Err(Error::ShapeMismatch { expected: self.coeffs.m(), got: u.components() });
        }
        Ok(())
    }

    /// `sum_h a^{i,j}_{k,h} v_h` on the padded grid.
    fn contract(&self, i: usize, j: usize, v: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let m = self.coeffs.m();
        let a = &self.a_vals[i * self.coeffs.dim() + j];
        (0..m)
            .map(|k| {
                let mut acc = vec![Complex64::new(0.0, 0.0); self.grid.len()];
                for h in 0..m {
                    for ((o, &c), x) in acc.iter_mut().zip(&a[k * m + h]).zip(&v[h]) {
                        *o += c * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// `A(t) u`.
    pub fn apply_a(&self, t: f64, u: &SpectralField) -> Result<SpectralField> {
        self.check(u)?;
        let d = self.coeffs.dim();
        let m = self.coeffs.m();
        let mut out = SpectralField::zeros(*u.lattice(), m, 0);
        match self.form {
            OperatorForm::Divergence => {
                let du: Vec<Vec<Vec<Complex64>>> = (0..d).map(|j| self.grid.values(&u.derivative(j))).collect();
                for i in 0..d {
                    let mut flux = vec![vec![Complex64::new(0.0, 0.0); self.grid.len()]; m];
                    for (j, duj) in du.iter().enumerate() {
                        for (acc, part) in flux.iter_mut().zip(self.contract(i, j, duj)) {
                            acc.iter_mut().zip(part).for_each(|(o, x)| *o += x);
                        }
                    }
                    let w = self.grid.project(flux, m, 0)?;
                    out.axpy(1.0, &w.derivative(i))?;
                }
            }
            OperatorForm::NonDivergence => {
                let mut acc = vec![vec![Complex64::new(0.0, 0.0); self.grid.len()]; m];
                for i in 0..d {
                    let di = u.derivative(i);
                    for j in 0..d {
                        let dij = self.grid.values(&di.derivative(j));
                        for (a, part) in acc.iter_mut().zip(self.contract(i, j, &dij)) {
                            a.iter_mut().zip(part).for_each(|(o, x)| *o += x);
                        }
                    }
                }
                out = self.grid.project(acc, m, 0)?;
            }
        }
        Ok(out.scale(-self.coeffs.rho(t)))
    }

    /// `(B_n(t) u)_n`, an `m`-component field with `N_noise` sequence entries.
    pub fn apply_b(&self, t: f64, u: &SpectralField) -> Result<SpectralField> {
        self.check(u)?;
        let d = self.coeffs.dim();
        let m = self.coeffs.m();
        let nn = self.coeffs.n_noise();
        let mut acc = vec![vec![Complex64::new(0.0, 0.0); self.grid.len()]; m * nn];
        for j in 0..d {
            let duj = self.grid.values(&u.derivative(j));
            for k in 0..m {
                for n in 0..nn {
                    let b = &self.b_vals[j][k * nn + n];
                    for ((o, &c), x) in acc[k * nn + n].iter_mut().zip(b).zip(&duj[k]) {
                        *o += c * x;
                    }
                }
            }
        }
        Ok(self.grid.project(acc, m, nn)?.scale(self.coeffs.rho(t).sqrt()))
    }
}

fn stabilisation(coeffs: &CoefficientSet, a_vals: &[Vec<Vec<f64>>], points: usize) -> f64 {
    let d = coeffs.dim();
    let m = coeffs.m();
    let n = d * m;
    let mut top: f64 = 0.0;
    let mut mat = DMatrix::<f64>::zeros(n, n);
    for p in 0..points {
        for i in 0..d {
            for j in 0..d {
                let a = &a_vals[i * d + j];
                for k in 0..m {
                    for h in 0..m {
                        mat[(i * m + k, j * m + h)] = a[k * m + h][p];
                    }
                }
            }
        }
        let sym = (&mat + mat.transpose()) * 0.5;
        let lam = if n == 1 { sym[(0, 0)] } else { sym.symmetric_eigenvalues().max() };
        top = top.max(lam);
    }
    top * coeffs.profile().bounds().1
}

/// `A(t) u` for a one-off evaluation.
pub fn apply_a(coeffs: &CoefficientSet, form: OperatorForm, t: f64, u: &SpectralField) -> Result<SpectralField> {
    PseudoSpectralOperator::new(coeffs, form)?.apply_a(t, u)
}

/// `(B_n(t) u)_n` for a one-off evaluation.
pub fn apply_b(coeffs: &CoefficientSet, t: f64, u: &SpectralField) -> Result<SpectralField> {
    PseudoSpectralOperator::new(coeffs, OperatorForm::Divergence)?.apply_b(t, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{CoefficientSet, TimeProfile};
    use crate::spectral::Lattice;
    use std::f64::consts::PI;

    #[test]
    fn identity_gives_minus_laplacian() {
        let l = Lattice::new(1, 16).unwrap();
        let c = CoefficientSet::identity(l, 1).unwrap();
        let u = SpectralField::from_fn(l, |x| (2.0 * PI * x[0]).sin());
        for form in [OperatorForm::Divergence, OperatorForm::NonDivergence] {
            let au = apply_a(&c, form, 0.0, &u).unwrap();
            assert!(au.sub(&u.scale(4.0 * PI * PI)).unwrap().max_abs_coefficient() < 1e-10);
        }
    }

    #[test]
    fn constant_symbol() {
        let l = Lattice::new(1, 16).unwrap();
        let c = CoefficientSet::scalar_constant(l, 2.0, &[0.0]).unwrap();
        let k = 5.0;
        let u = SpectralField::from_fn(l, |x| (2.0 * PI * k * x[0]).cos());
        let au = apply_a(&c, OperatorForm::Divergence, 0.0, &u).unwrap();
        assert!(au.sub(&u.scale(8.0 * PI * PI * k * k)).unwrap().max_abs_coefficient() < 1e-9);
    }

    #[test]
    fn single_derivative_noise() {
        let l = Lattice::new(1, 16).unwrap();
        let c = CoefficientSet::scalar_constant(l, 1.0, &[1.0]).unwrap();
        let u = SpectralField::from_fn(l, |x| (2.0 * PI * x[0]).sin());
        let bu = apply_b(&c, 0.0, &u).unwrap();
        let expected = SpectralField::from_fn(l, |x| 2.0 * PI * (2.0 * PI * x[0]).cos());
        let bu_n = SpectralField::from_coefficients(l, 1, 0, bu.channel(0).to_vec()).unwrap();
        assert!(bu_n.sub(&expected).unwrap().max_abs_coefficient() < 1e-12);
    }

    #[test]
    fn noise_is_diagonal_in_components() {
        let l = Lattice::new(1, 8).unwrap();
        let c = CoefficientSet::constant(l, 2, 1, &[1.0, 0.0, 0.0, 1.0], &[0.7, 0.3]).unwrap();
        let u = SpectralField::from_fn(l, |x| x[0].sin());
        let mut u2 = SpectralField::zeros(l, 2, 0);
        u2.channel_mut(0).copy_from_slice(u.channel(0));
        let mut v2 = u2.clone();
        v2.channel_mut(1).copy_from_slice(u.scale(3.0).channel(0));
        let a = apply_b(&c, 0.0, &u2).unwrap();
        let b = apply_b(&c, 0.0, &v2).unwrap();
        assert_eq!(a.channel(0), b.channel(0));
    }

    #[test]
    fn profile_scales_both_operators() {
        let l = Lattice::new(1, 8).unwrap();
        let prof = TimeProfile::Piecewise { knots: vec![0.0, 0.5], values: vec![1.0, 4.0] };
        let c = CoefficientSet::scalar_constant(l, 1.0, &[1.0]).unwrap().with_profile(prof).unwrap();
        let op = PseudoSpectralOperator::new(&c, OperatorForm::Divergence).unwrap();
        let u = SpectralField::from_fn(l, |x| (2.0 * PI * x[0]).sin());
        let a0 = op.apply_a(0.1, &u).unwrap();
        let a1 = op.apply_a(0.7, &u).unwrap();
        assert!(a1.sub(&a0.scale(4.0)).unwrap().max_abs_coefficient() < 1e-10);
        let b0 = op.apply_b(0.1, &u).unwrap();
        let b1 = op.apply_b(0.7, &u).unwrap();
        assert!(b1.sub(&b0.scale(2.0)).unwrap().max_abs_coefficient() < 1e-12);
        assert!((op.nu() - 4.0).abs() < 1e-12);
    }
}
