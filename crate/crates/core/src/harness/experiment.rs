//! Monte Carlo estimates of `||u|| / J` over independent paths.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::{data_functional_with, trace_norm, DataNorms, DataSpec};
use super::spec::NormSpec;
use super::time_norm::weighted_lp;
use crate::coefficients::{parabolicity_margin, CoefficientSet, Sampling, TimeProfile};
use crate::error::{Error, Result};
use crate::rng::{mix, path_seed};
use crate::solver::{check_regularity, solve_observed, BrownianIncrements, OperatorForm, PathData, PseudoSpectralOperator, TimeGrid};
use crate::spectral::{bessel_norm, LPPartition};

/// Per-path random piecewise-constant time profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomProfile {
    pub pieces: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub experiment_id: String,
    pub form: OperatorForm,
    pub norm: NormSpec,
    pub grid: TimeGrid,
    pub data: DataSpec,
    pub n_paths: usize,
    pub base_seed: u64,
    /// Offset of the late sup-norm window `[s + eps, T]`; defaults to `(T - s)/10`.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Margin below which the run is flagged exploratory.
    pub theta: f64,
    #[serde(default)]
    pub sampling: Option<Sampling>,
    #[serde(default)]
    pub random_profile: Option<RandomProfile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub path_id: usize,
    pub seed: u64,
    pub data: DataNorms,
    /// `J` of this path.
    pub j: f64,
    /// `||u||_{L^p(s,T, w_kappa; H^{2+sigma,q})}`
    pub sol_norm: f64,
    pub ratio: f64,
    /// `sup_{[s,T]} ||u(t)||` in the trace space
    pub sup_trace: f64,
    /// `sup_{[s+eps,T]} ||u(t)||_{B^{2+sigma-2/p}_{q,p}}`
    pub sup_late: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub experiment_id: String,
    pub form: OperatorForm,
    pub norm: NormSpec,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "M")]
    pub m_steps: usize,
    pub n_noise: usize,
    pub n_paths: usize,
    pub margin: f64,
    pub theta: f64,
    /// Set when the margin is below `theta` or the regularity metadata do
    /// not fit `sigma`.
    pub exploratory: bool,
    pub regularity_issue: Option<String>,
    /// `sum` over the data terms of `(E term^p)^{1/p}`
    pub j: f64,
    /// `(E ||u||^p)^{1/p}`
    pub sol_norm: f64,
    pub ratio: f64,
    pub ratio_p95: f64,
    pub ratio_max: f64,
    pub sup_trace_ratio: f64,
    pub sup_late_ratio: f64,
    pub epsilon: f64,
    pub paths: Vec<PathRecord>,
}

fn moment(values: impl Iterator<Item = f64>, p: f64, n: usize) -> f64 {
    let v: Vec<f64> = values.collect();
    let top = v.iter().fold(0.0f64, |a, b| a.max(*b));
    if top == 0.0 || n == 0 {
        return 0.0;
    }
    top * (v.iter().map(|x| (x / top).powf(p)).sum::<f64>() / n as f64).powf(1.0 / p)
}

/// Nearest-rank percentile of `values` (`frac` in `(0, 1]`).
pub fn percentile(values: &[f64], frac: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((frac * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

/// `max` that keeps NaN.
fn strict_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

/// Data and Brownian increments of the path with seed `seed`.
pub fn path_inputs(
    coeffs: &CoefficientSet,
    data: &DataSpec,
    grid: &TimeGrid,
    seed: u64,
) -> Result<(PathData, BrownianIncrements)> {
    let d = data.generate(*coeffs.lattice(), coeffs.m(), coeffs.n_noise(), mix(seed, 1))?;
    Ok((d, BrownianIncrements::generate(grid, coeffs.n_noise(), mix(seed, 2))))
}

struct Context<'a> {
    spec: &'a ExperimentSpec,
    coeffs: &'a CoefficientSet,
    shared: Option<PseudoSpectralOperator>,
    part: LPPartition,
    epsilon: f64,
}

fn run_path(ctx: &Context<'_>, index: usize) -> Result<PathRecord> {
    let spec = ctx.spec;
    let norm = &spec.norm;
    let seed = path_seed(spec.base_seed, index as u64);
    let c = ctx.coeffs;
    let local;
    let op = match (&ctx.shared, &spec.random_profile) {
        (Some(op), _) => op,
        (None, Some(rp)) => {
            let profile = TimeProfile::random_piecewise(mix(seed, 7), rp.pieces, rp.lo, rp.hi, spec.grid.start(), spec.grid.end())?;
            local = PseudoSpectralOperator::new(&c.clone().with_profile(profile)?, spec.form)?;
            &local
        }
        (None, None) => unreachable!("operator is shared without a random profile"),
    };
    let (data, noise) = path_inputs(c, &spec.data, &spec.grid, seed)?;
    let late_start = spec.grid.start() + ctx.epsilon;
    let late_s = 2.0 + norm.sigma - 2.0 / norm.p;
    let mut h_values = Vec::with_capacity(spec.grid.steps() + 1);
    let mut sup_trace: f64 = 0.0;
    let mut sup_late: f64 = 0.0;
    solve_observed(op, &spec.grid, &data, &noise, |_, t, u| {
        h_values.push(bessel_norm(u, 2.0 + norm.sigma, norm.q)?);
        sup_trace = strict_max(sup_trace, trace_norm(&ctx.part, u, norm)?);
        if t >= late_start - 1e-12 {
            sup_late = strict_max(sup_late, ctx.part.besov_norm(u, late_s, norm.q, norm.p)?);
        }
        Ok(())
    })
    .map_err(|e| match e {
        Error::BlowUp { step, time, .. } => Error::BlowUp { step, time, seed: Some(seed) },
        other => other,
    })?;
    let sol_norm = weighted_lp(&h_values, spec.grid.nodes(), spec.grid.start(), norm.p, norm.kappa)?;
    if !(sol_norm.is_finite() && sup_trace.is_finite() && sup_late.is_finite()) {
        return Err(Error::BlowUp { step: spec.grid.steps(), time: spec.grid.end(), seed: Some(seed) });
    }
    let dn = data_functional_with(&ctx.part, &data, norm, &spec.grid)?;
    let j = dn.total();
    Ok(PathRecord { path_id: index, seed, data: dn, j, sol_norm, ratio: ratio(sol_norm, j), sup_trace, sup_late })
}

/// Runs `n_paths` independent paths in parallel and reduces them in path order.
pub fn smr_experiment(coeffs: &CoefficientSet, spec: &ExperimentSpec) -> Result<RatioReport> {
    spec.norm.validate()?;
    if spec.n_paths == 0 {
        return Err(Error::range("n_paths >= 1"));
    }
    let span = spec.grid.end() - spec.grid.start();
    let epsilon = spec.epsilon.unwrap_or(span / 10.0);
    if !(epsilon > 0.0 && epsilon < span) {
        return Err(Error::range(format!("epsilon in (0, T - s), got {epsilon}")));
    }
    if let Some(rp) = &spec.random_profile {
        if rp.pieces == 0 || !(rp.lo > 0.0 && rp.hi >= rp.lo) {
            return Err(Error::range("random profile needs pieces >= 1 and 0 < lo <= hi"));
        }
    }
    let mut sampling = spec.sampling.clone().unwrap_or_default();
    sampling.t_range = (spec.grid.start(), spec.grid.end());
    let mut margin = parabolicity_margin(coeffs, spec.theta, &sampling).margin;
    if let Some(rp) = &spec.random_profile {
        // the profile multiplies the whole form
        margin *= if margin >= 0.0 { rp.lo } else { rp.hi };
    }
    let regularity_issue = check_regularity(coeffs, spec.form, spec.norm.sigma).err().map(|e| e.to_string());
    let shared = match spec.random_profile {
        Some(_) => None,
        None => Some(PseudoSpectralOperator::new(coeffs, spec.form)?),
    };
    let ctx = Context { spec, coeffs, shared, part: LPPartition::new(*coeffs.lattice()), epsilon };
    let results: Vec<Result<PathRecord>> = (0..spec.n_paths).into_par_iter().map(|i| run_path(&ctx, i)).collect();
    let paths = results.into_iter().collect::<Result<Vec<_>>>()?;

    let p = spec.norm.p;
    let n = paths.len();
    let j = moment(paths.iter().map(|r| r.data.u0), p, n)
        + moment(paths.iter().map(|r| r.data.f), p, n)
        + moment(paths.iter().map(|r| r.data.g), p, n);
    let sol_norm = moment(paths.iter().map(|r| r.sol_norm), p, n);
    let sup_trace = moment(paths.iter().map(|r| r.sup_trace), p, n);
    let sup_late = moment(paths.iter().map(|r| r.sup_late), p, n);
    let ratios: Vec<f64> = paths.iter().map(|r| r.ratio).collect();
    Ok(RatioReport {
        experiment_id: spec.experiment_id.clone(),
        form: spec.form,
        norm: spec.norm,
        k: coeffs.lattice().cutoff(),
        m_steps: spec.grid.steps(),
        n_noise: coeffs.n_noise(),
        n_paths: n,
        margin,
        theta: spec.theta,
        exploratory: !(margin >= spec.theta - 1e-12 * spec.theta.abs().max(1.0) && spec.theta > 0.0)
            || regularity_issue.is_some(),
        regularity_issue,
        j,
        sol_norm,
        ratio: ratio(sol_norm, j),
        ratio_p95: percentile(&ratios, 0.95),
        ratio_max: ratios.iter().copied().fold(0.0, f64::max),
        sup_trace_ratio: ratio(sup_trace, j),
        sup_late_ratio: ratio(sup_late, j),
        epsilon,
        paths,
    })
}

/// Energy bound for the heat equation `du = (Delta u + f) dt` from zero:
/// `||u||_{L^2(0,T;H^2)} <= C ||f||_{L^2(0,T;L^2)}` with
/// `C = max_k (1 + xi_k^2) min(T, 1/xi_k^2)`, each mode being a scalar ODE.
pub fn heat_mode_bound(lattice: &crate::spectral::Lattice, horizon: f64) -> f64 {
    (0..lattice.len())
        .filter(|&i| !lattice.is_nyquist(i))
        .map(|i| {
            let x2 = lattice.laplace_symbol(i);
            let decay = if x2 > 0.0 { horizon.min(1.0 / x2) } else { horizon };
            (1.0 + x2) * decay
        })
        .fold(0.0, f64::max)
}

/// Column header of the per-path CSV.
pub const CSV_COLUMNS: [&str; 13] =
    ["experiment_id", "path_id", "p", "q", "sigma", "kappa", "K", "M", "N_noise", "margin", "J", "sol_norm", "ratio"];

impl RatioReport {
    /// Per-path CSV. A `# generated_at=...` line is written first when
    /// `generated_at` is given.
    pub fn to_csv(&self, generated_at: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(ts) = generated_at {
            out.push_str(&format!("# generated_at={ts}\n"));
        }
        out.push_str(&CSV_COLUMNS.join(","));
        out.push('\n');
        let s = &self.norm;
        for r in &self.paths {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                self.experiment_id, r.path_id, s.p, s.q, s.sigma, s.kappa, self.k, self.m_steps, self.n_noise,
                self.margin, r.j, r.sol_norm, r.ratio
            ));
        }
        out
    }

    /// Aggregate summary without the per-path records.
    pub fn summary(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).unwrap_or(serde_json::Value::Null);
        if let serde_json::Value::Object(map) = &mut v {
            map.remove("paths");
            map.insert("schema_version".into(), serde_json::Value::from(SCHEMA_VERSION));
        }
        v
    }
}

pub const SCHEMA_VERSION: u32 = 1;
