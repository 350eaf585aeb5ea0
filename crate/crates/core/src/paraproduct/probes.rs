//! Numerical probes of the pointwise multiplication estimates.
//!
//! Each probe evaluates both sides of one inequality with the norms of
//! [`crate::spectral`] and reports `LHS / RHS`. The inequalities only hold up
//! to unspecified constants, so the ratios are meant for refinement studies:
//! boundedness shows up as a ratio that settles as the lattice grows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{bessel_norm, lq_norm, product, LPPartition, SpectralField};

/// Which multiplication estimate to probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MultiplicationCase {
    /// `||fg||_{H^{s,q}} <~ ||f||_{H^{s,q1}} ||g||_{L^{q2}} + ||g||_{H^{s,r1}} ||f||_{L^{r2}}`
    P1,
    /// `||fg||_{H^{s,q}} <~ ||f||_{H^{s,q}} ||g||_{L^inf} + ||g||_{C^tau} ||f||_{L^q}`
    P2,
    /// `||fg||_{H^{-s,q}} <~ ||f||_{H^{-s,q}} ||g||_{L^inf} + ||g||_{H^{tau,zeta}} ||f||_{H^{-s-eps,q}}`
    P3,
    /// `||fg||_{H^{-s,q}} <~ ||f||_{H^{-s,q}} ||g||_{L^inf} + ||g||_{C^tau} ||f||_{H^{-s-eps,q}}`
    P4,
    /// `||fg||_{H^{s,q}} <~ ||f||_{H^{s,q}} ||g||_{L^inf} + ||f||_{H^{s-eps,q}} ||g||_{H^{eta,xi}}`
    Cor,
}

impl MultiplicationCase {
    pub const ALL: [MultiplicationCase; 5] = [Self::P1, Self::P2, Self::P3, Self::P4, Self::Cor];

    pub fn label(&self) -> &'static str {
        match self {
            Self::P1 => "P1",
            Self::P2 => "P2",
            Self::P3 => "P3",
            Self::P4 => "P4",
            Self::Cor => "COR",
        }
    }
}

/// Parameters of a probe. Unused fields are ignored by the chosen case.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProbeParams {
    pub s: f64,
    pub q: f64,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default)]
    pub zeta: Option<f64>,
    #[serde(default)]
    pub xi: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
    /// `P1` exponent `q1`; `q2` follows from `1/q1 + 1/q2 = 1/q`. Defaults to `2q`.
    #[serde(default)]
    pub q1: Option<f64>,
    /// `P1` exponent `r1`; defaults to `2q`.
    #[serde(default)]
    pub r1: Option<f64>,
    /// Explicit `eps` for `P4` (any value in `(0, tau - s)`).
    #[serde(default)]
    pub epsilon: Option<f64>,
}

/// Result of one probe evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub case: MultiplicationCase,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Lower-order gain used on the right-hand side, when the case has one.
    pub epsilon: Option<f64>,
    /// Auxiliary `delta` of the case `zeta >= d/s` in `P3`.
    pub delta: Option<f64>,
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::range(format!("{name} is required for this case")))
}

fn require(cond: bool, constraint: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::range(constraint))
    }
}

/// Conjugate exponent of `q1` relative to `q`: `1/q2 = 1/q - 1/q1`.
fn complementary(q: f64, q1: f64) -> f64 {
    let inv = 1.0 / q - 1.0 / q1;
    if inv <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / inv
    }
}

/// The `eps` (and `delta`) of `P3`, following the two cases of its proof.
///
/// For `zeta >= d/s`, `eps = (tau - s)/2` and `delta` is halved from 1 until
/// `tau - s - eps >= d/zeta - d/(zeta + delta)`. For `zeta < d/s`,
/// `eps = tau - d/zeta`.
pub fn p3_epsilon(d: usize, s: f64, tau: f64, zeta: f64) -> (f64, Option<f64>) {
    let d = d as f64;
    if zeta >= d / s {
        let eps = 0.5 * (tau - s);
        let mut delta = 1.0;
        while tau - s - eps < d / zeta - d / (zeta + delta) {
            delta *= 0.5;
        }
        (eps, Some(delta))
    } else {
        (tau - d / zeta, None)
    }
}

/// The `eps` of the corollary: midpoint of `(0, s - d/q)` when `s > d/q`,
/// otherwise midpoint of `(0, min(s, eta - d/xi))`.
pub fn corollary_epsilon(d: usize, s: f64, q: f64, xi: f64, eta: f64) -> f64 {
    let d = d as f64;
    if s - d / q > 0.0 {
        0.5 * (s - d / q)
    } else {
        0.5 * s.min(eta - d / xi)
    }
}

/// Evaluates `LHS / RHS` of the chosen estimate for the pair `(f, g)`.
///
/// `f` must be scalar; `g` may carry components and a sequence index, in
/// which case its norms are the Hilbert-space valued ones.
pub fn probe_multiplication(
    case: MultiplicationCase,
    f: &SpectralField,
    g: &SpectralField,
    params: &ProbeParams,
) -> Result<ProbeOutcome> {
    if f.channels() != 1 {
        return Err(Error::invalid("probe expects a scalar f"));
    }
    if f.lattice() != g.lattice() {
        return Err(Error::LatticeMismatch("probe operands live on different lattices".into()));
    }
    let d = f.lattice().dim();
    let s = params.s;
    let q = params.q;
    require(s > 0.0, "s > 0")?;
    require(q > 1.0 && q.is_finite(), "q in (1, inf)")?;
    let part = LPPartition::new(*f.lattice());
    let fg = product(f, g)?;
    let sup_g = lq_norm(g, f64::INFINITY)?;

    let (lhs, rhs, epsilon, delta) = match case {
        MultiplicationCase::P1 => {
            let q1 = params.q1.unwrap_or(2.0 * q);
            let r1 = params.r1.unwrap_or(2.0 * q);
            require(q1 >= q && q1.is_finite(), "q1 in [q, inf) so that q2 in (1, inf]")?;
            require(r1 >= q && r1.is_finite(), "r1 in [q, inf) so that r2 in (1, inf]")?;
            let q2 = complementary(q, q1);
            let r2 = complementary(q, r1);
            let lhs = bessel_norm(&fg, s, q)?;
            let rhs = bessel_norm(f, s, q1)? * lq_norm(g, q2)? + bessel_norm(g, s, r1)? * lq_norm(f, r2)?;
            (lhs, rhs, None, None)
        }
        MultiplicationCase::P2 => {
            let tau = need(params.tau, "tau")?;
            require(tau > s, "tau > s")?;
            require(tau.fract() != 0.0, "tau not an integer (dyadic Hoelder norm)")?;
            let lhs = bessel_norm(&fg, s, q)?;
            let rhs = bessel_norm(f, s, q)? * sup_g + part.holder_norm(g, tau)? * lq_norm(f, q)?;
            (lhs, rhs, None, None)
        }
        MultiplicationCase::P3 => {
            let tau = need(params.tau, "tau")?;
            let zeta = need(params.zeta, "zeta")?;
            require(tau > s, "tau > s")?;
            let q_conj = q / (q - 1.0);
            require(zeta >= q_conj && zeta.is_finite(), "zeta in [q', inf)")?;
            require(tau > d as f64 / zeta, "tau > d / zeta")?;
            let (eps, delta) = p3_epsilon(d, s, tau, zeta);
            let lhs = bessel_norm(&fg, -s, q)?;
            let rhs = bessel_norm(f, -s, q)? * sup_g + bessel_norm(g, tau, zeta)? * bessel_norm(f, -s - eps, q)?;
            (lhs, rhs, Some(eps), delta)
        }
        MultiplicationCase::P4 => {
            let tau = need(params.tau, "tau")?;
            require(tau > s, "tau > s")?;
            require(tau.fract() != 0.0, "tau not an integer (dyadic Hoelder norm)")?;
            let eps = params.epsilon.unwrap_or(0.5 * (tau - s));
            require(eps > 0.0 && eps < tau - s, "eps in (0, tau - s)")?;
            let lhs = bessel_norm(&fg, -s, q)?;
            let rhs = bessel_norm(f, -s, q)? * sup_g + part.holder_norm(g, tau)? * bessel_norm(f, -s - eps, q)?;
            (lhs, rhs, Some(eps), None)
        }
        MultiplicationCase::Cor => {
            let xi = need(params.xi, "xi")?;
            let eta = need(params.eta, "eta")?;
            let dd = d as f64;
            require(xi > 1.0 && xi <= q, "xi in (1, q]")?;
            require(eta >= s, "eta >= s")?;
            require(eta > dd / xi, "eta > d / xi")?;
            require(eta - dd / xi >= s - dd / q, "eta - d/xi >= s - d/q")?;
            let eps = corollary_epsilon(d, s, q, xi, eta);
            let lhs = bessel_norm(&fg, s, q)?;
            let rhs = bessel_norm(f, s, q)? * sup_g + bessel_norm(f, s - eps, q)? * bessel_norm(g, eta, xi)?;
            (lhs, rhs, Some(eps), None)
        }
    };
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    Ok(ProbeOutcome { case, lhs, rhs, ratio, epsilon, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Lattice;

    fn params_p2() -> ProbeParams {
        ProbeParams { s: 1.0, q: 2.0, tau: Some(1.5), ..Default::default() }
    }

    #[test]
    fn constants_in_p2_give_one_half() {
        let l = Lattice::new(1, 32).unwrap();
        let one = SpectralField::from_fn(l, |_| 1.0);
        let out = probe_multiplication(MultiplicationCase::P2, &one, &one, &params_p2()).unwrap();
        assert!((out.lhs - 1.0).abs() < 1e-12);
        assert!((out.rhs - 2.0).abs() < 1e-12);
        assert!((out.ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_f_gives_zero_ratio() {
        let l = Lattice::new(1, 16).unwrap();
        let zero = SpectralField::zeros(l, 1, 0);
        let g = SpectralField::from_fn(l, |x| x[0].sin());
        for case in MultiplicationCase::ALL {
            let p = ProbeParams {
                s: 0.5,
                q: 2.0,
                tau: Some(1.5),
                zeta: Some(2.0),
                xi: Some(2.0),
                eta: Some(1.5),
                ..Default::default()
            };
            let out = probe_multiplication(case, &zero, &g, &p).unwrap();
            assert_eq!(out.ratio, 0.0);
        }
    }

    #[test]
    fn range_violations_name_the_constraint() {
        let l = Lattice::new(1, 16).unwrap();
        let f = SpectralField::from_fn(l, |x| x[0].cos());
        let p = ProbeParams { s: 1.0, q: 2.0, tau: Some(0.5), ..Default::default() };
        let err = probe_multiplication(MultiplicationCase::P2, &f, &f, &p).unwrap_err();
        assert!(err.to_string().contains("tau > s"));
        let p = ProbeParams { s: 1.0, q: 2.0, tau: Some(2.0), ..Default::default() };
        assert!(probe_multiplication(MultiplicationCase::P4, &f, &f, &p).is_err());
        let p = ProbeParams { s: 1.0, q: 2.0, xi: Some(3.0), eta: Some(2.0), ..Default::default() };
        let err = probe_multiplication(MultiplicationCase::Cor, &f, &f, &p).unwrap_err();
        assert!(err.to_string().contains("xi in (1, q]"));
    }

    #[test]
    fn epsilon_case_split() {
        // zeta >= d/s
        let (eps, delta) = p3_epsilon(1, 0.5, 1.5, 2.0);
        assert_eq!(eps, 0.5);
        let delta = delta.unwrap();
        assert!(1.5 - 0.5 - eps >= 0.5 - 1.0 / (2.0 + delta));
        // zeta < d/s
        let (eps, delta) = p3_epsilon(2, 0.5, 1.5, 2.0);
        assert!((eps - 0.5).abs() < 1e-15);
        assert!(delta.is_none());
        assert!((corollary_epsilon(1, 1.0, 2.0, 2.0, 1.5) - 0.25).abs() < 1e-15);
        assert!((corollary_epsilon(2, 0.5, 2.0, 2.0, 1.5) - 0.25).abs() < 1e-15);
    }
}
