//! Random data `(u_s, f, g)` and the data functional `J_{p,q,kappa}`.

use serde::{Deserialize, Serialize};

use super::spec::NormSpec;
use super::time_norm::weighted_lp;
use crate::coefficients::random_field;
use crate::error::Result;
use crate::rng::mix;
use crate::solver::{PathData, SeparableTerm, TimeGrid, TimeSeries};
use crate::spectral::{bessel_norm, Lattice, LPPartition, SpectralField};

/// Law of a random field: coefficients `amplitude |k|^{-decay} z_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldLaw {
    pub amplitude: f64,
    pub decay: f64,
    #[serde(default)]
    pub band: Option<usize>,
}

/// Law of a random forcing `sum_l F_l(x) cos(2 pi l t)` with independent
/// fields `F_l` drawn from the field law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForcingLaw {
    pub amplitude: f64,
    pub decay: f64,
    #[serde(default)]
    pub band: Option<usize>,
    #[serde(default = "one")]
    pub temporal_modes: usize,
}

fn one() -> usize {
    1
}

/// Which data are random; absent entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DataSpec {
    #[serde(default)]
    pub u0: Option<FieldLaw>,
    #[serde(default)]
    pub f: Option<ForcingLaw>,
    #[serde(default)]
    pub g: Option<ForcingLaw>,
}

fn forcing(law: &ForcingLaw, lattice: Lattice, m: usize, n_seq: usize, seed: u64) -> Result<TimeSeries> {
    let mut terms = Vec::with_capacity(law.temporal_modes);
    for l in 0..law.temporal_modes {
        let mut field = random_field(lattice, m, n_seq, law.decay, law.amplitude, mix(seed, l as u64), law.band)?;
        if n_seq > 0 {
            for k in 0..m {
                for n in 0..n_seq {
                    let c = field.channel_index(k, n);
                    let w = 0.5f64.powi(n as i32);
                    field.channel_mut(c).iter_mut().for_each(|v| *v *= w);
                }
            }
        }
        terms.push(SeparableTerm { field, frequency: l as f64, phase: 0.0 });
    }
    Ok(TimeSeries::Separable(terms))
}

impl DataSpec {
    /// Data of one path. The `g` entries of sequence index `n` are damped by `2^{-n}`.
    pub fn generate(&self, lattice: Lattice, m: usize, n_noise: usize, seed: u64) -> Result<PathData> {
        let u0 = match &self.u0 {
            Some(law) => random_field(lattice, m, 0, law.decay, law.amplitude, mix(seed, 1), law.band)?,
            None => SpectralField::zeros(lattice, m, 0),
        };
        let f = match &self.f {
            Some(law) => forcing(law, lattice, m, 0, mix(seed, 2))?,
            None => TimeSeries::Zero,
        };
        let g = match &self.g {
            Some(law) => forcing(law, lattice, m, n_noise, mix(seed, 3))?,
            None => TimeSeries::Zero,
        };
        Ok(PathData { u0, f, g })
    }
}

/// The three terms of `J_{p,q,kappa}(u_s, f, g)` for one path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DataNorms {
    /// `||u_s||` in `B^{2+sigma-2(1+kappa)/p}_{q,p}` (`H^{1+sigma,2}` when `p = q = 2`)
    pub u0: f64,
    /// `||f||_{L^p(w_kappa; H^{sigma,q})}`
    pub f: f64,
    /// `||g||_{L^p(w_kappa; H^{1+sigma,q}(l^2))}`
    pub g: f64,
}

impl DataNorms {
    pub fn total(&self) -> f64 {
        self.u0 + self.f + self.g
    }
}

/// Norm of an initial value in the trace space of `spec`.
pub fn trace_norm(part: &LPPartition, u: &SpectralField, spec: &NormSpec) -> Result<f64> {
    if spec.is_hilbert() {
        bessel_norm(u, 1.0 + spec.sigma, 2.0)
    } else {
        part.besov_norm(u, spec.trace_exponent(), spec.q, spec.p)
    }
}

fn series_norm(series: &TimeSeries, grid: &TimeGrid, s: f64, spec: &NormSpec) -> Result<f64> {
    if series.is_zero() {
        return Ok(0.0);
    }
    let values = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(m, &t)| match series.at(m, t)? {
            Some(v) => bessel_norm(&v, s, spec.q),
            None => Ok(0.0),
        })
        .collect::<Result<Vec<_>>>()?;
    weighted_lp(&values, grid.nodes(), grid.start(), spec.p, spec.kappa)
}

/// `J_{p,q,kappa}(u_s, f, g)` with its three terms; `f` and `g` are
/// sampled on the nodes of `grid`.
pub fn data_functional(data: &PathData, spec: &NormSpec, grid: &TimeGrid) -> Result<DataNorms> {
    spec.validate()?;
    let part = LPPartition::new(*data.u0.lattice());
    data_functional_with(&part, data, spec, grid)
}

pub(crate) fn data_functional_with(part: &LPPartition, data: &PathData, spec: &NormSpec, grid: &TimeGrid) -> Result<DataNorms> {
    Ok(DataNorms {
        u0: trace_norm(part, &data.u0, spec)?,
        f: series_norm(&data.f, grid, spec.sigma, spec)?,
        g: series_norm(&data.g, grid, 1.0 + spec.sigma, spec)?,
    })
}
