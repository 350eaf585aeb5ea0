use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integrability and smoothness parameters of a maximal-regularity estimate.
///
/// Admissible: `p in (2, inf)`, `q in [2, inf)`, `kappa in [0, p/2 - 1)`, or
/// `p = q = 2` with `kappa = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub p: f64,
    pub q: f64,
    pub sigma: f64,
    pub kappa: f64,
}

impl NormSpec {
    pub fn new(p: f64, q: f64, sigma: f64, kappa: f64) -> Result<Self> {
        let s = NormSpec { p, q, sigma, kappa };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let NormSpec { p, q, sigma, kappa } = *self;
        if !sigma.is_finite() {
            return Err(Error::range("sigma must be finite"));
        }
        if p == 2.0 {
            if q != 2.0 {
                return Err(Error::range(format!("q = 2 when p = 2, got q = {q}")));
            }
            if kappa != 0.0 {
                return Err(Error::range(format!("kappa = 0 when p = 2, got kappa = {kappa}")));
            }
            return Ok(());
        }
        if !(p > 2.0 && p.is_finite()) {
            return Err(Error::range(format!("p in (2, inf) or p = q = 2, got p = {p}")));
        }
        if !(q >= 2.0 && q.is_finite()) {
            return Err(Error::range(format!("q in [2, inf), got q = {q}")));
        }
        if !(kappa >= 0.0 && kappa < p / 2.0 - 1.0) {
            return Err(Error::range(format!("kappa in [0, p/2 - 1) = [0, {}), got kappa = {kappa}", p / 2.0 - 1.0)));
        }
        Ok(())
    }

    /// Whether this is the Hilbert case `p = q = 2`.
    pub fn is_hilbert(&self) -> bool {
        self.p == 2.0 && self.q == 2.0
    }

    /// Smoothness of the trace space `B^{2 + sigma - 2(1 + kappa)/p}_{q,p}`.
    pub fn trace_exponent(&self) -> f64 {
        2.0 + self.sigma - 2.0 * (1.0 + self.kappa) / self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region() {
        assert!(NormSpec::new(2.0, 2.0, 0.0, 0.0).is_ok());
        let e = NormSpec::new(2.0, 2.0, 0.0, 0.1).unwrap_err();
        assert!(e.to_string().contains("kappa = 0 when p = 2"));
        assert!(NormSpec::new(2.0, 4.0, 0.0, 0.0).is_err());
        assert!(NormSpec::new(4.0, 2.0, 0.0, 0.99).is_ok());
        assert!(NormSpec::new(4.0, 2.0, 0.0, 1.0).is_err());
        assert!(NormSpec::new(4.0, 1.5, 0.0, 0.0).is_err());
        assert!(NormSpec::new(1.5, 2.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn trace_exponent() {
        assert_eq!(NormSpec::new(4.0, 2.0, 0.0, 0.0).unwrap().trace_exponent(), 1.5);
        assert_eq!(NormSpec::new(2.0, 2.0, 0.0, 0.0).unwrap().trace_exponent(), 1.0);
    }
}
