//! Commutator `[A, phi] u = A(phi u) - phi A u` against a lower-order norm of `u`.

use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientSet;
use crate::error::{Error, Result};
use crate::solver::{OperatorForm, PseudoSpectralOperator};
use crate::spectral::{bessel_norm, product_on, SpectralField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    /// `||[A, phi] u||_{H^{sigma,q}}`
    pub norm_commutator: f64,
    /// `||u||_{H^{2+sigma-eps,q}}`
    pub norm_lower: f64,
    pub ratio: f64,
    pub epsilon: f64,
}

/// Midpoint of the admissible `eps` interval: `(0, min{1, alpha + sigma + 1})`
/// for `sigma <= -1`, `(0, min{1 + sigma, 1})` for `sigma > -1`.
pub fn commutator_epsilon(alpha: f64, sigma: f64) -> Result<f64> {
    let upper = if sigma <= -1.0 {
        let room = alpha + sigma + 1.0;
        if !(room > 0.0) {
            return Err(Error::range(format!(
                "alpha > -sigma - 1 + eps needs alpha + sigma + 1 > 0 (alpha = {alpha}, sigma = {sigma})"
            )));
        }
        room.min(1.0)
    } else {
        (1.0 + sigma).min(1.0)
    };
    Ok(0.5 * upper)
}

/// The commutator `[A(t), phi] u` itself.
pub fn commutator(op: &PseudoSpectralOperator, t: f64, phi: &SpectralField, u: &SpectralField) -> Result<SpectralField> {
    if phi.channels() != 1 {
        return Err(Error::invalid("phi must be a scalar field"));
    }
    let grid = op.grid();
    let phi_u = product_on(grid, phi, u)?;
    let a_phi_u = op.apply_a(t, &phi_u)?;
    let phi_a_u = product_on(grid, phi, &op.apply_a(t, u)?)?;
    a_phi_u.sub(&phi_a_u)
}

/// Measures `[A, phi] u` in `H^{sigma,q}` and `u` in `H^{2+sigma-eps,q}`.
#[allow(clippy::too_many_arguments)]
pub fn commutator_probe(
    coeffs: &CoefficientSet,
    form: OperatorForm,
    phi: &SpectralField,
    u: &SpectralField,
    sigma: f64,
    q: f64,
    t: f64,
) -> Result<CommutatorReport> {
    let epsilon = commutator_epsilon(coeffs.alpha(), sigma)?;
    let op = PseudoSpectralOperator::new(coeffs, form)?;
    let c = commutator(&op, t, phi, u)?;
    let norm_commutator = bessel_norm(&c, sigma, q)?;
    let norm_lower = bessel_norm(u, 2.0 + sigma - epsilon, q)?;
    let ratio = if norm_lower > 0.0 { norm_commutator / norm_lower } else { 0.0 };
    Ok(CommutatorReport { norm_commutator, norm_lower, ratio, epsilon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Lattice;
    use std::f64::consts::PI;

    #[test]
    fn constant_phi_commutes() {
        let l = Lattice::new(1, 16).unwrap();
        let c = CoefficientSet::identity(l, 1).unwrap();
        let one = SpectralField::constant(l, 1, 0, &[1.0]).unwrap();
        let u = SpectralField::from_fn(l, |x| (6.0 * PI * x[0]).sin());
        let r = commutator_probe(&c, OperatorForm::Divergence, &one, &u, 0.0, 2.0, 0.0).unwrap();
        assert!(r.norm_commutator < 1e-12);
    }

    #[test]
    fn matches_hand_expansion() {
        let l = Lattice::new(1, 16).unwrap();
        let c = CoefficientSet::identity(l, 1).unwrap();
        let w = 2.0 * PI;
        let phi = SpectralField::from_fn(l, |x| (w * x[0]).cos());
        let u = SpectralField::from_fn(l, |x| (3.0 * w * x[0]).sin());
        // -phi'' u - 2 phi' u'
        let expected = SpectralField::from_fn(l, |x| {
            let y = x[0];
            w * w * (w * y).cos() * (3.0 * w * y).sin() + 2.0 * w * (w * y).sin() * 3.0 * w * (3.0 * w * y).cos()
        });
        for form in [OperatorForm::Divergence, OperatorForm::NonDivergence] {
            let op = PseudoSpectralOperator::new(&c, form).unwrap();
            let got = commutator(&op, 0.0, &phi, &u).unwrap();
            assert!(got.sub(&expected).unwrap().max_abs_coefficient() < 1e-8);
        }
    }

    #[test]
    fn epsilon_cases() {
        assert!((commutator_epsilon(1.5, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((commutator_epsilon(1.5, -0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((commutator_epsilon(0.6, -1.5).unwrap() - 0.05).abs() < 1e-15);
        let err = commutator_epsilon(0.4, -1.5).unwrap_err();
        assert!(err.to_string().contains("alpha + sigma + 1 > 0"));
    }
}
