//! Scalar time profiles `rho(t)` that modulate coefficients: `a -> rho a`,
//! `b -> sqrt(rho) b`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeProfile {
    #[default]
    Constant,
    /// `1 + amplitude sin(2 pi t / period + phase)` with `|amplitude| < 1`.
    Harmonic { amplitude: f64, period: f64, phase: f64 },
    /// `values[i]` on `[knots[i], knots[i+1])`; `values[0]` before the first
    /// knot and the last value after the last one.
    Piecewise { knots: Vec<f64>, values: Vec<f64> },
}

impl TimeProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            TimeProfile::Constant => Ok(()),
            TimeProfile::Harmonic { amplitude, period, phase } => {
                if !(amplitude.abs() < 1.0) || !(*period > 0.0) || !phase.is_finite() {
                    return Err(Error::range("harmonic profile needs |amplitude| < 1 and period > 0"));
                }
                Ok(())
            }
            TimeProfile::Piecewise { knots, values } => {
                if knots.is_empty() || knots.len() != values.len() {
                    return Err(Error::invalid("piecewise profile needs matching non-empty knots and values"));
                }
                if knots.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::invalid("piecewise knots must be strictly increasing"));
                }
                if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(Error::range("piecewise profile values must be positive"));
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Constant => 1.0,
            TimeProfile::Harmonic { amplitude, period, phase } => {
                1.0 + amplitude * (2.0 * std::f64::consts::PI * t / period + phase).sin()
            }
            TimeProfile::Piecewise { knots, values } => {
                let i = knots.partition_point(|&k| k <= t);
                values[i.saturating_sub(1)]
            }
        }
    }

    /// `(rho_min, rho_max)`.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            TimeProfile::Constant => (1.0, 1.0),
            TimeProfile::Harmonic { amplitude, .. } => (1.0 - amplitude.abs(), 1.0 + amplitude.abs()),
            TimeProfile::Piecewise { values, .. } => (
                values.iter().copied().fold(f64::INFINITY, f64::min),
                values.iter().copied().fold(0.0, f64::max),
            ),
        }
    }

    /// A random piecewise-constant profile on `[s, t_end]` with `pieces`
    /// equal intervals and values uniform in `[lo, hi]`.
    pub fn random_piecewise(seed: u64, pieces: usize, lo: f64, hi: f64, s: f64, t_end: f64) -> Result<Self> {
        if pieces == 0 || !(lo > 0.0 && hi >= lo) || !(t_end > s) {
            return Err(Error::range("pieces >= 1, 0 < lo <= hi and s < T"));
        }
        let mut rng = stream(seed);
        let h = (t_end - s) / pieces as f64;
        let knots = (0..pieces).map(|i| s + i as f64 * h).collect();
        let values = (0..pieces).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
        Ok(TimeProfile::Piecewise { knots, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_lookup() {
        let p = TimeProfile::Piecewise { knots: vec![0.0, 0.5], values: vec![1.0, 2.0] };
        p.validate().unwrap();
        assert_eq!(p.value(-1.0), 1.0);
        assert_eq!(p.value(0.25), 1.0);
        assert_eq!(p.value(0.5), 2.0);
        assert_eq!(p.value(9.0), 2.0);
        assert_eq!(p.bounds(), (1.0, 2.0));
    }

    #[test]
    fn random_profile_in_range() {
        let p = TimeProfile::random_piecewise(3, 8, 0.5, 1.5, 0.0, 1.0).unwrap();
        p.validate().unwrap();
        let (lo, hi) = p.bounds();
        assert!(lo >= 0.5 && hi <= 1.5);
        assert_eq!(p, TimeProfile::random_piecewise(3, 8, 0.5, 1.5, 0.0, 1.0).unwrap());
        assert!(TimeProfile::Harmonic { amplitude: 1.0, period: 1.0, phase: 0.0 }.validate().is_err());
    }
}
