//! Sampled stochastic parabolicity margin
//! `inf sum_{i,j} ([(a^{i,j} - Psi^{i,j}) eta] . eta) xi_i xi_j` over unit `xi`, `eta`.

use serde::{Deserialize, Serialize};

use super::set::{quadratic, CoefficientSet, PointCoefficients};

/// Sample counts. Directions are the coordinate axes followed by `n_xi`
/// (resp. `n_eta`) quasi-uniform points on the sphere. All four sample
/// sequences are nested: raising a count only appends samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub n_x: usize,
    pub n_t: usize,
    pub n_xi: usize,
    pub n_eta: usize,
    /// Interval the `t` samples are drawn from.
    #[serde(default = "default_t_range")]
    pub t_range: (f64, f64),
}

fn default_t_range() -> (f64, f64) {
    (0.0, 1.0)
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { n_x: 64, n_t: 8, n_xi: 64, n_eta: 64, t_range: default_t_range() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleCounts {
    pub t: usize,
    pub x: usize,
    pub xi: usize,
    pub eta: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParabolicityReport {
    pub margin: f64,
    pub theta_requested: f64,
    pub pass: bool,
    pub samples: SampleCounts,
    pub witness: Witness,
    /// `max |a^{i,j}_{k,h} - a^{j,i}_{h,k}|` over the `x` samples; only the
    /// symmetric part of `a` enters the margin.
    pub max_asymmetry: f64,
}

/// Fractional part of `0.5 + n g^{-(a+1)}` where `g^{s+1} = g + 1`.
fn kronecker(n: usize, dim: usize) -> Vec<f64> {
    let mut g = 2.0f64;
    for _ in 0..64 {
        g = (1.0 + g).powf(1.0 / (dim as f64 + 1.0));
    }
    (0..dim)
        .map(|a| {
            let step = g.powi(-(a as i32 + 1));
            (0.5 + n as f64 * step).fract()
        })
        .collect()
}

fn van_der_corput(mut n: usize) -> f64 {
    let mut v = 0.0;
    let mut denom = 1.0;
    while n > 0 {
        denom *= 2.0;
        v += (n & 1) as f64 / denom;
        n >>= 1;
    }
    v
}

/// Spatial samples in `[-1/2, 1/2)^d`.
pub fn sample_points(d: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count).map(|n| kronecker(n, d).into_iter().map(|v| v - 0.5).collect()).collect()
}

/// Time samples in `[t0, t1]`, starting at `t0`.
pub fn sample_times(range: (f64, f64), count: usize) -> Vec<f64> {
    (0..count).map(|n| range.0 + van_der_corput(n) * (range.1 - range.0)).collect()
}

/// Unit directions: the `dim` coordinate axes, then `extra` quasi-uniform points.
pub fn sample_directions(dim: usize, extra: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = (0..dim)
        .map(|a| {
            let mut e = vec![0.0; dim];
            e[a] = 1.0;
            e
        })
        .collect();
    let pairs = dim.div_ceil(2);
    for n in 0..extra {
        let u = kronecker(n + 1, 2 * pairs);
        let mut v: Vec<f64> = (0..pairs)
            .flat_map(|p| {
                let r = (-2.0 * (1.0 - u[2 * p]).max(1e-300).ln()).sqrt();
                let th = 2.0 * std::f64::consts::PI * u[2 * p + 1];
                [r * th.cos(), r * th.sin()]
            })
            .take(dim)
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            out.push(v);
        }
    }
    out
}

/// The form at one sample, normalised by `|xi|^2 |eta|^2`.
pub fn evaluate_form(coeffs: &CoefficientSet, t: f64, x: &[f64], xi: &[f64], eta: &[f64]) -> f64 {
    let p = coeffs.point_values(t, x);
    form_at(&p, xi, eta)
}

fn form_at(p: &PointCoefficients, xi: &[f64], eta: &[f64]) -> f64 {
    let q = p.form_matrix(xi);
    let scale = xi.iter().map(|v| v * v).sum::<f64>() * eta.iter().map(|v| v * v).sum::<f64>();
    quadratic(&q, eta) / scale
}

fn asymmetry(p: &PointCoefficients) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..p.d {
        for j in 0..p.d {
            for k in 0..p.m {
                for h in 0..p.m {
                    worst = worst.max((p.a(i, j, k, h) - p.a(j, i, h, k)).abs());
                }
            }
        }
    }
    worst
}

/// Sampled infimum of the parabolicity form; `pass` iff `margin >= theta` up to
/// a relative rounding slack of `1e-12`.
pub fn parabolicity_margin(coeffs: &CoefficientSet, theta: f64, sampling: &Sampling) -> ParabolicityReport {
    let d = coeffs.dim();
    let m = coeffs.m();
    let xs = sample_points(d, sampling.n_x.max(1));
    let ts = sample_times(sampling.t_range, sampling.n_t.max(1));
    let xis = sample_directions(d, sampling.n_xi);
    let etas = sample_directions(m, sampling.n_eta);
    let mut best = f64::INFINITY;
    let mut witness = Witness { t: ts[0], x: xs[0].clone(), xi: xis[0].clone(), eta: etas[0].clone() };
    let mut max_asym: f64 = 0.0;
    for x in &xs {
        max_asym = max_asym.max(asymmetry(&coeffs.spatial_values(x)));
        for &t in &ts {
            let p = coeffs.point_values(t, x);
            for xi in &xis {
                let q = p.form_matrix(xi);
                let xi2 = xi.iter().map(|v| v * v).sum::<f64>();
                for eta in &etas {
                    let scale = xi2 * eta.iter().map(|v| v * v).sum::<f64>();
                    let v = quadratic(&q, eta) / scale;
                    if v < best {
                        best = v;
                        witness = Witness { t, x: x.clone(), xi: xi.clone(), eta: eta.clone() };
                    }
                }
            }
        }
    }
    let total = xs.len() * ts.len() * xis.len() * etas.len();
    ParabolicityReport {
        margin: best,
        theta_requested: theta,
        pass: best >= theta - 1e-12 * theta.abs().max(1.0),
        samples: SampleCounts { t: ts.len(), x: xs.len(), xi: xis.len(), eta: etas.len(), total },
        witness,
        max_asymmetry: max_asym,
    }
}
