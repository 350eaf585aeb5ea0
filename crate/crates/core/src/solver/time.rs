//! Time grids and Brownian increments.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    s: f64,
    t_end: f64,
    nodes: Vec<f64>,
    gamma: f64,
}

impl TimeGrid {
    pub fn uniform(s: f64, t_end: f64, steps: usize) -> Result<Self> {
        Self::graded(s, t_end, steps, 1.0)
    }

    /// `t_m = s + (m / M)^gamma (T - s)`.
    pub fn graded(s: f64, t_end: f64, steps: usize, gamma: f64) -> Result<Self> {
        if !(s >= 0.0 && t_end > s && t_end.is_finite()) {
            return Err(Error::range(format!("0 <= s < T, got s = {s}, T = {t_end}")));
        }
        if steps == 0 {
            return Err(Error::range("M >= 1"));
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::range("gamma >= 1"));
        }
        let mut nodes: Vec<f64> = (0..=steps)
            .map(|m| s + (m as f64 / steps as f64).powf(gamma) * (t_end - s))
            .collect();
        nodes[steps] = t_end;
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("time nodes are not strictly increasing"));
        }
        Ok(TimeGrid { s, t_end, nodes, gamma })
    }

    /// Grid for a weighted norm with weight exponent `kappa`: graded with
    /// `gamma = min(4, max(1, 2 / (1 - 2 kappa / p)))` when `kappa > 0`,
    /// uniform otherwise.
    pub fn for_weight(s: f64, t_end: f64, steps: usize, kappa: f64, p: f64) -> Result<Self> {
        Self::graded(s, t_end, steps, grading_exponent(kappa, p))
    }

    pub fn start(&self) -> f64 {
        self.s
    }

    pub fn end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_graded(&self) -> bool {
        self.gamma != 1.0
    }

    pub fn dt(&self, m: usize) -> f64 {
        self.nodes[m + 1] - self.nodes[m]
    }

    /// Every `factor`-th node, as a grid of its own.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.steps().is_multiple_of(factor) {
            return Err(Error::range("factor must divide the step count"));
        }
        let nodes = self.nodes.iter().step_by(factor).copied().collect();
        Ok(TimeGrid { s: self.s, t_end: self.t_end, nodes, gamma: self.gamma })
    }
}

pub fn grading_exponent(kappa: f64, p: f64) -> f64 {
    if kappa > 0.0 {
        let g = 2.0 / (1.0 - 2.0 * kappa / p);
        if g.is_finite() && g > 0.0 {
            g.clamp(1.0, 4.0)
        } else {
            4.0
        }
    } else {
        1.0
    }
}

/// `Delta w_n(t_m)` for `n < N_noise`, stored step after step.
#[derive(Clone, Debug, PartialEq)]
pub struct BrownianIncrements {
    n_noise: usize,
    values: Vec<f64>,
}

impl BrownianIncrements {
    /// Independent `N(0, t_{m+1} - t_m)` increments from the stream of `seed`.
    pub fn generate(grid: &TimeGrid, n_noise: usize, seed: u64) -> Self {
        let mut rng = stream(seed);
        let mut values = Vec::with_capacity(grid.steps() * n_noise);
        for m in 0..grid.steps() {
            let sd = grid.dt(m).sqrt();
            for _ in 0..n_noise {
                let z: f64 = rng.sample(StandardNormal);
                values.push(sd * z);
            }
        }
        BrownianIncrements { n_noise, values }
    }

    pub fn zero(grid: &TimeGrid, n_noise: usize) -> Self {
        BrownianIncrements { n_noise, values: vec![0.0; grid.steps() * n_noise] }
    }

    pub fn from_values(n_noise: usize, values: Vec<f64>) -> Result<Self> {
        if n_noise == 0 || !values.len().is_multiple_of(n_noise) {
            return Err(Error::invalid("increment count must be a multiple of N_noise"));
        }
        Ok(BrownianIncrements { n_noise, values })
    }

    pub fn n_noise(&self) -> usize {
        self.n_noise
    }

    pub fn steps(&self) -> usize {
        self.values.len() / self.n_noise
    }

    /// Increments of step `m`.
    pub fn step(&self, m: usize) -> &[f64] {
        &self.values[m * self.n_noise..(m + 1) * self.n_noise]
    }

    /// Sums of `factor` consecutive increments: the same path on a coarser grid.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.steps().is_multiple_of(factor) {
            return Err(Error::range("factor must divide the step count"));
        }
        let n = self.n_noise;
        let mut values = Vec::with_capacity(self.values.len() / factor);
        for block in self.values.chunks(n * factor) {
            for c in 0..n {
                values.push((0..factor).map(|r| block[r * n + c]).sum());
            }
        }
        Ok(BrownianIncrements { n_noise: n, values })
    }

    /// `w_n(t_m) - w_n(t_0)` at every node.
    pub fn path(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n_noise]];
        for m in 0..self.steps() {
            let next: Vec<f64> = out[m].iter().zip(self.step(m)).map(|(a, b)| a + b).collect();
            out.push(next);
        }
        out
    }

    /// Keeps the first `n` noise channels.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n_noise {
            return Err(Error::range("1 <= n <= N_noise"));
        }
        let values = self.values.chunks(self.n_noise).flat_map(|c| c[..n].to_vec()).collect();
        Ok(BrownianIncrements { n_noise: n, values })
    }
}
