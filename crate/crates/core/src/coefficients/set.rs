//! Coefficient fields `a^{i,j}` (matrix valued) and `b^j_{k,n}` (sequence valued).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::generate::random_field;
use super::profile::TimeProfile;
use crate::error::{Error, Result};
use crate::spectral::{Lattice, LPPartition, SpectralField};

/// Exponent used for the metadata of spatially constant coefficients.
pub const SMOOTH_EXPONENT: f64 = 4.5;

/// Coefficients of the operators `A` and `B`.
///
/// `a[i * d + j]` is `a^{i,j}` with `m * m` components, channel `k * m + h`
/// holding `a^{i,j}_{k,h}`. `b[j]` is `b^j` with `m` components and
/// `n_noise` sequence entries, channel `k * n_noise + n` holding `b^j_{k,n}`.
/// At time `t` both are modulated by the profile: `rho(t) a` and `sqrt(rho(t)) b`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    lattice: Lattice,
    m: usize,
    n_noise: usize,
    a: Vec<SpectralField>,
    b: Vec<SpectralField>,
    alpha: f64,
    beta: Option<f64>,
    c_ab: f64,
    profile: TimeProfile,
}

/// Point values of all coefficients at `(t, x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCoefficients {
    pub d: usize,
    pub m: usize,
    pub n_noise: usize,
    /// `a^{i,j}_{k,h}` at `((i * d + j) * m + k) * m + h`.
    pub a: Vec<f64>,
    /// `b^j_{k,n}` at `(j * m + k) * n_noise + n`.
    pub b: Vec<f64>,
}

impl PointCoefficients {
    pub fn a(&self, i: usize, j: usize, k: usize, h: usize) -> f64 {
        self.a[((i * self.d + j) * self.m + k) * self.m + h]
    }

    pub fn b(&self, j: usize, k: usize, n: usize) -> f64 {
        self.b[(j * self.m + k) * self.n_noise + n]
    }

    /// `(1/2) sum_n b^j_{l,n} b^i_{l,n}`, the `l`-th diagonal entry of `Psi^{i,j}`.
    pub fn psi(&self, i: usize, j: usize, l: usize) -> f64 {
        0.5 * (0..self.n_noise).map(|n| self.b(j, l, n) * self.b(i, l, n)).sum::<f64>()
    }

    /// The `m x m` matrix `sum_{i,j} xi_i xi_j (a^{i,j} - Psi^{i,j})`.
    pub fn form_matrix(&self, xi: &[f64]) -> Vec<f64> {
        let (d, m) = (self.d, self.m);
        let mut q = vec![0.0; m * m];
        for i in 0..d {
            for j in 0..d {
                let w = xi[i] * xi[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..m {
                    for h in 0..m {
                        let mut v = self.a(i, j, k, h);
                        if k == h {
                            v -= self.psi(i, j, k);
                        }
                        q[k * m + h] += w * v;
                    }
                }
            }
        }
        q
    }

    fn scaled_by(mut self, rho: f64) -> Self {
        let root = rho.sqrt();
        self.a.iter_mut().for_each(|v| *v *= rho);
        self.b.iter_mut().for_each(|v| *v *= root);
        self
    }
}

/// `eta^T Q eta` for a row-major `m x m` matrix.
pub(crate) fn quadratic(q: &[f64], eta: &[f64]) -> f64 {
    let m = eta.len();
    (0..m).map(|k| eta[k] * (0..m).map(|h| q[k * m + h] * eta[h]).sum::<f64>()).sum()
}

fn measure_holder(part: &LPPartition, f: &SpectralField, t: f64) -> Result<f64> {
    part.holder_norm(f, t)
}

impl CoefficientSet {
    /// Validates shapes, reality and finiteness. `c_ab = None` sets it to the
    /// measured bound (see [`CoefficientSet::measured_c_ab`]); an explicit
    /// value must dominate the measured one.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lattice: Lattice,
        m: usize,
        n_noise: usize,
        a: Vec<SpectralField>,
        b: Vec<SpectralField>,
        alpha: f64,
        beta: Option<f64>,
        c_ab: Option<f64>,
        profile: TimeProfile,
    ) -> Result<Self> {
        let d = lattice.dim();
        if m == 0 || n_noise == 0 {
            return Err(Error::range("m >= 1 and N_noise >= 1"));
        }
        if a.len() != d * d {
            return Err(Error::ShapeMismatch { expected: d * d, got: a.len() });
        }
        if b.len() != d {
            return Err(Error::ShapeMismatch { expected: d, got: b.len() });
        }
        for f in &a {
            if f.lattice() != &lattice || f.components() != m * m || f.n_seq() != 0 {
                return Err(Error::invalid("a^{i,j} must have m*m components on the coefficient lattice"));
            }
        }
        for f in &b {
            if f.lattice() != &lattice || f.components() != m || f.n_seq() != n_noise {
                return Err(Error::invalid("b^j must have m components and N_noise entries"));
            }
        }
        for f in a.iter().chain(&b) {
            if !f.is_finite() {
                return Err(Error::invalid("coefficients must be finite"));
            }
            if f.hermitian_defect() > 1e-12 * f.max_abs_coefficient().max(1.0) {
                return Err(Error::invalid("coefficients must be real valued"));
            }
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::range("alpha > 0"));
        }
        if let Some(bt) = beta {
            if !(bt > 0.0 && bt.is_finite()) {
                return Err(Error::range("beta > 0"));
            }
        }
        profile.validate()?;
        let mut set = CoefficientSet { lattice, m, n_noise, a, b, alpha, beta, c_ab: 0.0, profile };
        let measured = set.measured_c_ab()?;
        set.c_ab = match c_ab {
            None => measured,
            Some(c) if c >= measured * (1.0 - 1e-12) => c,
            Some(c) => {
                return Err(Error::range(format!("C_ab >= measured Hoelder bound {measured:.6e}, got {c}")))
            }
        };
        Ok(set)
    }

    /// Spatially constant coefficients. `a_values` is ordered `(i, j, k, h)`
    /// and `b_values` is ordered `(j, k, n)`.
    pub fn constant(lattice: Lattice, m: usize, n_noise: usize, a_values: &[f64], b_values: &[f64]) -> Result<Self> {
        let d = lattice.dim();
        if a_values.len() != d * d * m * m {
            return Err(Error::ShapeMismatch { expected: d * d * m * m, got: a_values.len() });
        }
        if b_values.len() != d * m * n_noise {
            return Err(Error::ShapeMismatch { expected: d * m * n_noise, got: b_values.len() });
        }
        let a = a_values
            .chunks(m * m)
            .map(|c| SpectralField::constant(lattice, m * m, 0, c))
            .collect::<Result<Vec<_>>>()?;
        let b = b_values
            .chunks(m * n_noise)
            .map(|c| SpectralField::constant(lattice, m, n_noise, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lattice, m, n_noise, a, b, SMOOTH_EXPONENT, Some(SMOOTH_EXPONENT), None, TimeProfile::Constant)
    }

    /// `a^{i,j} = delta_{ij} I_m`, `b = 0`.
    pub fn identity(lattice: Lattice, m: usize) -> Result<Self> {
        let d = lattice.dim();
        let mut a = vec![0.0; d * d * m * m];
        for i in 0..d {
            for k in 0..m {
                a[((i * d + i) * m + k) * m + k] = 1.0;
            }
        }
        Self::constant(lattice, m, 1, &a, &vec![0.0; d * m])
    }

    /// Scalar (`m = 1`) constants: `a^{i,j} = a delta_{ij}` and `b^j_n = b[j * N + n]`.
    pub fn scalar_constant(lattice: Lattice, a: f64, b: &[f64]) -> Result<Self> {
        let d = lattice.dim();
        if b.is_empty() || !b.len().is_multiple_of(d) {
            return Err(Error::invalid("b must hold d * N_noise values"));
        }
        let n_noise = b.len() / d;
        let mut av = vec![0.0; d * d];
        for i in 0..d {
            av[i * d + i] = a;
        }
        Self::constant(lattice, 1, n_noise, &av, b)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_noise(&self) -> usize {
        self.n_noise
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn c_ab(&self) -> f64 {
        self.c_ab
    }

    pub fn profile(&self) -> &TimeProfile {
        &self.profile
    }

    /// `a^{i,j}` without the time profile.
    pub fn a(&self, i: usize, j: usize) -> &SpectralField {
        &self.a[i * self.dim() + j]
    }

    /// `b^j` without the time profile.
    pub fn b(&self, j: usize) -> &SpectralField {
        &self.b[j]
    }

    pub fn a_fields(&self) -> &[SpectralField] {
        &self.a
    }

    pub fn b_fields(&self) -> &[SpectralField] {
        &self.b
    }

    /// `rho(t)`.
    pub fn rho(&self, t: f64) -> f64 {
        self.profile.value(t)
    }

    pub fn with_profile(mut self, profile: TimeProfile) -> Result<Self> {
        profile.validate()?;
        self.profile = profile;
        Ok(self)
    }

    /// Replaces the regularity metadata; `c_ab` is re-measured.
    pub fn with_regularity(self, alpha: f64, beta: Option<f64>) -> Result<Self> {
        let CoefficientSet { lattice, m, n_noise, a, b, profile, .. } = self;
        Self::new(lattice, m, n_noise, a, b, alpha, beta, None, profile)
    }

    /// Whether every coefficient is spatially constant.
    pub fn is_constant(&self) -> bool {
        let zero = self.lattice.index_of(&vec![0; self.dim()]).unwrap_or(0);
        self.a.iter().chain(&self.b).all(|f| {
            (0..f.channels()).all(|c| f.channel(c).iter().enumerate().all(|(i, v)| i == zero || v.norm() == 0.0))
        })
    }

    /// `max_{i,j,k} (||a^{i,j}||_{C^gamma} + ||(b^j_{k,n})_n||_{C^alpha(l^2)})`
    /// with `gamma = beta` when `beta` is set and `alpha` otherwise.
    pub fn measured_c_ab(&self) -> Result<f64> {
        let part = LPPartition::new(self.lattice);
        let ga = self.beta.unwrap_or(self.alpha);
        let d = self.dim();
        let mut worst: f64 = 0.0;
        let b_norms: Vec<Vec<f64>> = self
            .b
            .iter()
            .map(|bj| {
                (0..self.m)
                    .map(|k| {
                        let chans: Vec<Complex64> =
                            (0..self.n_noise).flat_map(|n| bj.channel(bj.channel_index(k, n)).to_vec()).collect();
                        let f = SpectralField::from_coefficients(self.lattice, 1, self.n_noise, chans)?;
                        measure_holder(&part, &f, self.alpha)
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        for i in 0..d {
            for j in 0..d {
                let na = measure_holder(&part, self.a(i, j), ga)?;
                for k in 0..self.m {
                    worst = worst.max(na + b_norms[j][k]);
                }
            }
        }
        Ok(worst)
    }

    /// Spatial values at `x` scaled by the profile at `t`.
    pub fn point_values(&self, t: f64, x: &[f64]) -> PointCoefficients {
        self.spatial_values(x).scaled_by(self.rho(t))
    }

    /// Spatial values at `x` without the time profile.
    pub fn spatial_values(&self, x: &[f64]) -> PointCoefficients {
        let a = self.a.iter().flat_map(|f| f.evaluate_real(x)).collect();
        let b = self.b.iter().flat_map(|f| f.evaluate_real(x)).collect();
        PointCoefficients { d: self.dim(), m: self.m, n_noise: self.n_noise, a, b }
    }

    /// `a -> lambda a`, `b -> sqrt(lambda) b`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::range("lambda > 0"));
        }
        let a = self.a.iter().map(|f| f.scale(lambda)).collect();
        let b = self.b.iter().map(|f| f.scale(lambda.sqrt())).collect();
        Self::new(self.lattice, self.m, self.n_noise, a, b, self.alpha, self.beta, None, self.profile.clone())
    }

    /// Relabels the noise index: entry `n` of the result is entry `perm[n]`.
    pub fn permute_noise(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n_noise];
        if perm.len() != self.n_noise || perm.iter().any(|&p| p >= self.n_noise || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid("perm must be a permutation of the noise indices"));
        }
        let b = self
            .b
            .iter()
            .map(|bj| {
                let mut out = bj.clone();
                for k in 0..self.m {
                    for (n, &p) in perm.iter().enumerate() {
                        out.channel_mut(bj.channel_index(k, n)).copy_from_slice(bj.channel(bj.channel_index(k, p)));
                    }
                }
                out
            })
            .collect();
        Self::new(self.lattice, self.m, self.n_noise, self.a.clone(), b, self.alpha, self.beta, Some(self.c_ab), self.profile.clone())
    }

    /// Keeps the first `n` noise entries.
    pub fn truncate_noise(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n_noise {
            return Err(Error::range("1 <= n <= N_noise"));
        }
        let b = self
            .b
            .iter()
            .map(|bj| {
                let coeffs: Vec<Complex64> = (0..self.m)
                    .flat_map(|k| (0..n).flat_map(move |s| bj.channel(bj.channel_index(k, s)).to_vec()))
                    .collect();
                SpectralField::from_coefficients(self.lattice, self.m, n, coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.lattice, self.m, n, self.a.clone(), b, self.alpha, self.beta, None, self.profile.clone())
    }

    /// The same coefficients on another lattice (modes are truncated or zero padded).
    pub fn on_lattice(&self, lattice: Lattice) -> Result<Self> {
        if lattice.dim() != self.dim() {
            return Err(Error::LatticeMismatch("dimension differs".into()));
        }
        let move_field = |f: &SpectralField| -> Result<SpectralField> {
            let mut out = SpectralField::zeros(lattice, f.components(), f.n_seq());
            let src = f.lattice();
            for c in 0..f.channels() {
                for idx in 0..src.len() {
                    if src.is_nyquist(idx) {
                        continue;
                    }
                    let k = src.frequency(idx);
                    if let Some(j) = lattice.index_of(&k) {
                        if !lattice.is_nyquist(j) {
                            out.channel_mut(c)[j] = f.channel(c)[idx];
                        }
                    }
                }
            }
            Ok(out)
        };
        let a = self.a.iter().map(move_field).collect::<Result<Vec<_>>>()?;
        let b = self.b.iter().map(move_field).collect::<Result<Vec<_>>>()?;
        Self::new(lattice, self.m, self.n_noise, a, b, self.alpha, self.beta, None, self.profile.clone())
    }

    /// `Psi^{i,j}(t, x)`.
    pub fn psi_matrix(&self, i: usize, j: usize, t: f64, x: &[f64]) -> DMatrix<f64> {
        psi_matrix(self, i, j, t, x)
    }
}

/// The diagonal `m x m` matrix `Psi^{i,j}(t, x)` with entries
/// `(1/2) sum_n b^j_{l,n} b^i_{l,n}`.
pub fn psi_matrix(coeffs: &CoefficientSet, i: usize, j: usize, t: f64, x: &[f64]) -> DMatrix<f64> {
    let p = coeffs.point_values(t, x);
    DMatrix::from_fn(coeffs.m(), coeffs.m(), |k, h| if k == h { p.psi(i, j, k) } else { 0.0 })
}

/// Coefficients frozen at `y`: every field replaced by the constant `field(y)`.
/// The time profile is kept.
pub fn freeze_coefficients(coeffs: &CoefficientSet, y: &[f64]) -> Result<CoefficientSet> {
    if y.len() != coeffs.dim() {
        return Err(Error::ShapeMismatch { expected: coeffs.dim(), got: y.len() });
    }
    let p = coeffs.spatial_values(y);
    let frozen = CoefficientSet::constant(*coeffs.lattice(), coeffs.m(), coeffs.n_noise(), &p.a, &p.b)?;
    frozen.with_profile(coeffs.profile().clone())
}

/// Random coefficients around constant means, for experiments.
///
/// `a^{i,j}_{k,h} = delta_{ij} delta_{kh} a_mean + a_amplitude G`, and
/// `b^j_{k,n} = w_n (b_mean + b_amplitude G)` with `w_n = (sqrt 3 / 2) 2^{-n}`
/// (`n` from 0), so that `sum_n w_n^2 = 1` for an infinite sequence. Each `G`
/// is an independent random field of decay `alpha + d/2 + 0.01`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomCoefficients {
    pub m: usize,
    pub n_noise: usize,
    pub a_mean: f64,
    pub a_amplitude: f64,
    pub b_mean: f64,
    pub b_amplitude: f64,
    pub alpha: f64,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub band: Option<usize>,
    pub seed: u64,
    #[serde(default)]
    pub profile: TimeProfile,
}

fn noise_weight(n: usize) -> f64 {
    0.75f64.sqrt() * 0.5f64.powi(n as i32)
}

impl RandomCoefficients {
    pub fn build(&self, lattice: Lattice) -> Result<CoefficientSet> {
        let d = lattice.dim();
        let (m, nn) = (self.m, self.n_noise);
        if m == 0 || nn == 0 {
            return Err(Error::range("m >= 1 and N_noise >= 1"));
        }
        let decay = self.alpha + d as f64 / 2.0 + 0.01;
        let mut a = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let seed = crate::rng::mix(self.seed, (i * d + j) as u64);
                let mut f = random_field(lattice, m * m, 0, decay, self.a_amplitude, seed, self.band)?;
                if i == j {
                    let zero = lattice.index_of(&vec![0; d]).unwrap_or(0);
                    for k in 0..m {
                        f.channel_mut(k * m + k)[zero] += Complex64::new(self.a_mean, 0.0);
                    }
                }
                a.push(f);
            }
        }
        let mut b = Vec::with_capacity(d);
        for j in 0..d {
            let seed = crate::rng::mix(self.seed ^ 0xB0B0_B0B0, j as u64);
            let mut f = random_field(lattice, m, nn, decay, self.b_amplitude, seed, self.band)?;
            let zero = lattice.index_of(&vec![0; d]).unwrap_or(0);
            for k in 0..m {
                for n in 0..nn {
                    let c = f.channel_index(k, n);
                    let w = noise_weight(n);
                    let ch = f.channel_mut(c);
                    ch[zero] += Complex64::new(self.b_mean, 0.0);
                    ch.iter_mut().for_each(|v| *v *= w);
                }
            }
            b.push(f);
        }
        CoefficientSet::new(lattice, m, nn, a, b, self.alpha, self.beta, None, self.profile.clone())
    }
}

/// How a coefficient set is described in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientSpec {
    /// `a^{i,j} = delta_{ij} I_m`, no noise.
    Identity { m: usize },
    /// Constants ordered `(i, j, k, h)` for `a` and `(j, k, n)` for `b`.
    Constant {
        m: usize,
        n_noise: usize,
        a: Vec<f64>,
        b: Vec<f64>,
        #[serde(default)]
        profile: TimeProfile,
    },
    Random(RandomCoefficients),
    /// A serialised [`CoefficientSet`].
    Inline(Box<CoefficientSet>),
}

impl CoefficientSpec {
    pub fn build(&self, lattice: Lattice) -> Result<CoefficientSet> {
        match self {
            CoefficientSpec::Identity { m } => CoefficientSet::identity(lattice, *m),
            CoefficientSpec::Constant { m, n_noise, a, b, profile } => {
                CoefficientSet::constant(lattice, *m, *n_noise, a, b)?.with_profile(profile.clone())
            }
            CoefficientSpec::Random(r) => r.build(lattice),
            CoefficientSpec::Inline(set) => {
                if set.lattice() == &lattice {
                    Ok((**set).clone())
                } else {
                    set.on_lattice(lattice)
                }
            }
        }
    }
}

/// Serialised form of a [`CoefficientSet`]: raw Fourier coefficients as
/// `[re, im]` pairs, channel after channel.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct CoefficientDocument {
    d: usize,
    #[serde(rename = "K")]
    k: usize,
    m: usize,
    n_noise: usize,
    alpha: f64,
    #[serde(default)]
    beta: Option<f64>,
    #[serde(default)]
    c_ab: Option<f64>,
    #[serde(default)]
    profile: TimeProfile,
    a: Vec<Vec<[f64; 2]>>,
    b: Vec<Vec<[f64; 2]>>,
}

fn pairs(f: &SpectralField) -> Vec<[f64; 2]> {
    f.coefficients().iter().map(|c| [c.re, c.im]).collect()
}

fn unpairs(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

impl Serialize for CoefficientSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoefficientDocument {
            d: self.dim(),
            k: self.lattice.cutoff(),
            m: self.m,
            n_noise: self.n_noise,
            alpha: self.alpha,
            beta: self.beta,
            c_ab: Some(self.c_ab),
            profile: self.profile.clone(),
            a: self.a.iter().map(pairs).collect(),
            b: self.b.iter().map(pairs).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoefficientSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = CoefficientDocument::deserialize(d)?;
        let build = || -> Result<CoefficientSet> {
            let lattice = Lattice::new(doc.d, doc.k)?;
            let a = doc
                .a
                .iter()
                .map(|v| SpectralField::from_coefficients(lattice, doc.m * doc.m, 0, unpairs(v)))
                .collect::<Result<Vec<_>>>()?;
            let b = doc
                .b
                .iter()
                .map(|v| SpectralField::from_coefficients(lattice, doc.m, doc.n_noise, unpairs(v)))
                .collect::<Result<Vec<_>>>()?;
            CoefficientSet::new(lattice, doc.m, doc.n_noise, a, b, doc.alpha, doc.beta, doc.c_ab, doc.profile.clone())
        };
        build().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn psi_of_single_noise() {
        let l = Lattice::new(1, 4).unwrap();
        let c = CoefficientSet::scalar_constant(l, 1.0, &[2f64.sqrt()]).unwrap();
        let p = psi_matrix(&c, 0, 0, 0.0, &[0.1]);
        assert!((p[(0, 0)] - 1.0).abs() < 1e-14);
        let z = CoefficientSet::identity(l, 2).unwrap();
        assert_eq!(psi_matrix(&z, 0, 0, 0.3, &[0.2]).iter().map(|v| v.abs()).sum::<f64>(), 0.0);
    }

    #[test]
    fn freeze_sin_at_origin() {
        let l = Lattice::new(1, 8).unwrap();
        let a = SpectralField::from_fn(l, |x| 2.0 + (2.0 * PI * x[0]).sin());
        let b = SpectralField::zeros(l, 1, 1);
        let c = CoefficientSet::new(l, 1, 1, vec![a], vec![b], 1.5, None, None, TimeProfile::Constant).unwrap();
        let f = freeze_coefficients(&c, &[0.0]).unwrap();
        assert!(f.is_constant());
        assert!((f.spatial_values(&[0.3]).a[0] - 2.0).abs() < 1e-12);
        let part = LPPartition::new(l);
        assert!(part.holder_seminorm(f.a(0, 0), 1.5).unwrap() < 1e-12);
        let again = freeze_coefficients(&f, &[0.4]).unwrap();
        assert!(again.a(0, 0).sub(f.a(0, 0)).unwrap().max_abs_coefficient() < 1e-14);
    }

    #[test]
    fn explicit_c_ab_must_dominate() {
        let l = Lattice::new(1, 4).unwrap();
        let a = SpectralField::constant(l, 1, 0, &[3.0]).unwrap();
        let b = SpectralField::zeros(l, 1, 1);
        assert!(CoefficientSet::new(l, 1, 1, vec![a.clone()], vec![b.clone()], 1.5, None, Some(1.0), TimeProfile::Constant).is_err());
        let c = CoefficientSet::new(l, 1, 1, vec![a], vec![b], 1.5, None, Some(5.0), TimeProfile::Constant).unwrap();
        assert_eq!(c.c_ab(), 5.0);
    }

    #[test]
    fn json_round_trip() {
        let l = Lattice::new(1, 8).unwrap();
        let spec = RandomCoefficients {
            m: 2,
            n_noise: 3,
            a_mean: 1.0,
            a_amplitude: 0.1,
            b_mean: 0.3,
            b_amplitude: 0.05,
            alpha: 1.5,
            beta: Some(0.5),
            band: None,
            seed: 11,
            profile: TimeProfile::Harmonic { amplitude: 0.2, period: 1.0, phase: 0.0 },
        };
        let c = spec.build(l).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: CoefficientSet = serde_json::from_str(&text).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn lattice_transfer_keeps_modes() {
        let spec = RandomCoefficients {
            m: 1,
            n_noise: 2,
            a_mean: 1.0,
            a_amplitude: 0.1,
            b_mean: 0.3,
            b_amplitude: 0.05,
            alpha: 1.5,
            beta: None,
            band: None,
            seed: 2,
            profile: TimeProfile::Constant,
        };
        let small = spec.build(Lattice::new(1, 8).unwrap()).unwrap();
        let big = spec.build(Lattice::new(1, 16).unwrap()).unwrap();
        assert_eq!(big.on_lattice(*small.lattice()).unwrap(), small);
    }
}
