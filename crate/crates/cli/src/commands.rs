use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use smrlab::coefficients::parabolicity_margin;
use smrlab::coefficients::generate_holder_field;
use smrlab::harness::{path_inputs, perturbation_budget, smr_experiment, weighted_time_norm, ExperimentSpec, RatioReport};
use smrlab::paraproduct::probe_multiplication;
use smrlab::rng::path_seed;
use smrlab::solver::{solve, write_trajectory, PseudoSpectralOperator};
use smrlab::spectral::{Lattice, LPPartition, SpectralField};

use crate::config::{require, Config, NormTable, Subcommand, SCHEMA_VERSION};
use crate::failure::Failure;
use crate::svg::{line_chart, Series};

pub struct Run<'a> {
    pub cfg: &'a Config,
    pub sub: Subcommand,
    pub out_dir: PathBuf,
    pub reproducible: bool,
}

/// Paths of the files a run wrote, in order.
pub type Artifacts = Vec<PathBuf>;

fn versioned(v: impl Serialize) -> Value {
    let mut v = serde_json::to_value(v).unwrap_or(Value::Null);
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), SCHEMA_VERSION.into());
    }
    v
}

impl Run<'_> {
    pub fn execute(&self) -> Result<(Value, Artifacts), Failure> {
        match self.sub {
            Subcommand::CheckParabolicity => self.check_parabolicity(),
            Subcommand::Norms => self.norms(),
            Subcommand::VerifyMultiplication => self.verify_multiplication(),
            Subcommand::Solve => self.solve(),
            Subcommand::SmrExperiment => self.smr_experiment(),
            Subcommand::PerturbationBudget => self.perturbation_budget(),
        }
    }

    fn generated_at(&self) -> Option<String> {
        if self.reproducible {
            return None;
        }
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Some(format!("unix:{secs}"))
    }

    fn stamp(&self, mut v: Value) -> Value {
        if let (Some(ts), Value::Object(map)) = (self.generated_at(), &mut v) {
            map.insert("generated_at".into(), ts.into());
        }
        v
    }

    fn write(&self, name: &str, bytes: &[u8], artifacts: &mut Artifacts) -> Result<(), Failure> {
        std::fs::create_dir_all(&self.out_dir).map_err(|e| Failure::io(&self.out_dir, e))?;
        let path = self.out_dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| Failure::io(&path, e))?;
        artifacts.push(path);
        Ok(())
    }

    fn write_json(&self, name: &str, v: &Value, artifacts: &mut Artifacts) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(v).map_err(|e| Failure::json(&e))?;
        text.push('\n');
        self.write(name, text.as_bytes(), artifacts)
    }

    fn check_parabolicity(&self) -> Result<(Value, Artifacts), Failure> {
        let cfg = self.cfg;
        let lattice = cfg.lattice(self.sub)?;
        let coeffs = cfg.coefficients(lattice, self.sub)?;
        let theta = *require(&cfg.theta, "theta", self.sub)?;
        let sampling = cfg.sampling.clone().unwrap_or_default();
        let report = parabolicity_margin(&coeffs, theta, &sampling);
        let v = self.stamp(versioned(&report));
        let mut out = Vec::new();
        self.write_json("parabolicity.json", &v, &mut out)?;
        Ok((v, out))
    }

    fn norms(&self) -> Result<(Value, Artifacts), Failure> {
        let field = self.cfg.field(self.sub)?;
        let table = self.cfg.norms.clone().unwrap_or_default();
        let rows = norm_rows(&field, &table)?;
        let l = field.lattice();
        let mut csv = String::from("norm,s,q,p,value\n");
        for r in &rows {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            csv.push_str(&format!("{},{},{},{},{}\n", r.norm, r.s, opt(r.q), opt(r.p), r.value));
        }
        let v = self.stamp(versioned(json!({
            "field": {"d": l.dim(), "K": l.cutoff(), "components": field.components(), "n_seq": field.n_seq()},
            "rows": rows,
        })));
        let mut out = Vec::new();
        self.write("norms.csv", csv.as_bytes(), &mut out)?;
        self.write_json("norms.json", &v, &mut out)?;
        Ok((v, out))
    }

    fn verify_multiplication(&self) -> Result<(Value, Artifacts), Failure> {
        let cfg = self.cfg;
        let lattice = cfg.lattice(self.sub)?;
        let pc = require(&cfg.probes, "probes", self.sub)?;
        if pc.pairs == 0 || pc.cases.is_empty() {
            return Err(Failure::config("probes", "need pairs >= 1 and at least one case"));
        }
        let fields: Vec<(SpectralField, SpectralField)> = (0..pc.pairs)
            .into_par_iter()
            .map(|i| {
                let f = generate_holder_field(lattice, pc.alpha_f, pc.amplitude, path_seed(pc.seed, 2 * i as u64))?;
                let g = generate_holder_field(lattice, pc.alpha_g, pc.amplitude, path_seed(pc.seed, 2 * i as u64 + 1))?;
                Ok((f, g))
            })
            .collect::<smrlab::Result<_>>()?;
        let mut csv = String::from("case,pair,lhs,rhs,ratio,epsilon\n");
        let mut cases = Vec::new();
        for pcase in &pc.cases {
            let outcomes = fields
                .par_iter()
                .map(|(f, g)| probe_multiplication(pcase.case, f, g, &pcase.params))
                .collect::<smrlab::Result<Vec<_>>>()?;
            for (i, o) in outcomes.iter().enumerate() {
                let eps = o.epsilon.map(|e| e.to_string()).unwrap_or_default();
                csv.push_str(&format!("{},{},{},{},{},{}\n", pcase.case.label(), i, o.lhs, o.rhs, o.ratio, eps));
            }
            let max = outcomes.iter().map(|o| o.ratio).fold(0.0, f64::max);
            let mean = outcomes.iter().map(|o| o.ratio).sum::<f64>() / outcomes.len() as f64;
            cases.push(json!({
                "case": pcase.case,
                "params": pcase.params,
                "max_ratio": max,
                "mean_ratio": mean,
                "epsilon": outcomes[0].epsilon,
                "delta": outcomes[0].delta,
            }));
        }
        let v = self.stamp(versioned(json!({
            "K": lattice.cutoff(),
            "d": lattice.dim(),
            "pairs": pc.pairs,
            "cases": cases,
        })));
        let mut out = Vec::new();
        self.write("multiplication.csv", csv.as_bytes(), &mut out)?;
        self.write_json("multiplication.json", &v, &mut out)?;
        Ok((v, out))
    }

    fn solve(&self) -> Result<(Value, Artifacts), Failure> {
        let cfg = self.cfg;
        let sub = self.sub;
        let lattice = cfg.lattice(sub)?;
        let coeffs = cfg.coefficients(lattice, sub)?;
        let form = *require(&cfg.form, "form", sub)?;
        let time = require(&cfg.time, "time", sub)?;
        let base = *require(&cfg.base_seed, "base_seed", sub)?;
        let data = cfg.data.clone().unwrap_or_default();
        let grid = time.grid(time.steps, cfg.norm.as_ref())?;
        let seed = path_seed(base, 0);
        let op = PseudoSpectralOperator::new(&coeffs, form)?;
        let (path, noise) = path_inputs(&coeffs, &data, &grid, seed)?;
        let traj = solve(&op, &grid, &path, &noise).map_err(|e| match e {
            smrlab::Error::BlowUp { step, time, .. } => smrlab::Error::BlowUp { step, time, seed: Some(seed) },
            other => other,
        })?;
        let mut dump = Vec::new();
        write_trajectory(&mut dump, &traj)?;
        let last = traj.last();
        let sol_norm = match &cfg.norm {
            Some(n) => Some(weighted_time_norm(&traj, n, 2.0 + n.sigma)?),
            None => None,
        };
        let v = self.stamp(versioned(json!({
            "seed": seed,
            "K": lattice.cutoff(),
            "M": grid.steps(),
            "n_noise": coeffs.n_noise(),
            "nu": traj.info.nu,
            "graded": grid.is_graded(),
            "final_l2": smrlab::spectral::lq_norm(last, 2.0)?,
            "final_h1": smrlab::spectral::bessel_norm(last, 1.0, 2.0)?,
            "sol_norm": sol_norm,
            "trajectory": "trajectory.bin",
        })));
        let mut out = Vec::new();
        self.write("trajectory.bin", &dump, &mut out)?;
        self.write_json("solve.json", &v, &mut out)?;
        Ok((v, out))
    }

    fn smr_experiment(&self) -> Result<(Value, Artifacts), Failure> {
        let cfg = self.cfg;
        let sub = self.sub;
        let lc = require(&cfg.lattice, "lattice", sub)?;
        cfg.lattice(sub)?;
        let form = *require(&cfg.form, "form", sub)?;
        let norm = *require(&cfg.norm, "norm", sub)?;
        let time = require(&cfg.time, "time", sub)?;
        let n_paths = *require(&cfg.n_paths, "n_paths", sub)?;
        let base_seed = *require(&cfg.base_seed, "base_seed", sub)?;
        let data = require(&cfg.data, "data", sub)?;
        let theta = *require(&cfg.theta, "theta", sub)?;
        require(&cfg.coefficients, "coefficients", sub)?;
        let (levels, path_factor) = cfg.refinement.as_ref().map(|r| (r.levels, r.path_factor)).unwrap_or((1, 1));
        if levels == 0 || path_factor == 0 {
            return Err(Failure::config("refinement", "levels >= 1 and path_factor >= 1"));
        }
        let mut reports: Vec<RatioReport> = Vec::with_capacity(levels);
        for level in 0..levels {
            let scale = 1usize << level;
            let lattice = Lattice::new(lc.d, lc.k * scale)?;
            let coeffs = cfg.coefficients(lattice, sub)?;
            let spec = ExperimentSpec {
                experiment_id: cfg.experiment_id.clone().unwrap_or_else(|| "experiment".into()),
                form,
                norm,
                grid: time.grid(time.steps * scale, Some(&norm))?,
                data: data.clone(),
                n_paths: n_paths * path_factor.pow(level as u32),
                base_seed,
                epsilon: cfg.epsilon,
                theta,
                sampling: cfg.sampling.clone(),
                random_profile: cfg.random_profile.clone(),
            };
            reports.push(smr_experiment(&coeffs, &spec)?);
        }
        let generated_at = self.generated_at();
        let mut csv = String::new();
        for (i, r) in reports.iter().enumerate() {
            let block = r.to_csv(if i == 0 { generated_at.as_deref() } else { None });
            let skip = if i == 0 { 0 } else { 1 };
            for line in block.lines().skip(skip) {
                csv.push_str(line);
                csv.push('\n');
            }
        }
        let ticks: Vec<(f64, String)> =
            reports.iter().enumerate().map(|(i, r)| (i as f64, format!("K={} M={}", r.k, r.m_steps))).collect();
        let pts = |f: fn(&RatioReport) -> f64| reports.iter().enumerate().map(|(i, r)| (i as f64, f(r))).collect();
        let svg = line_chart(
            &format!("{}: ratio under refinement", reports[0].experiment_id),
            "refinement level",
            "||u|| / J",
            &ticks,
            &[
                Series { label: "aggregate", colour: "#1f77b4", points: pts(|r| r.ratio) },
                Series { label: "p95 per path", colour: "#d62728", points: pts(|r| r.ratio_p95) },
            ],
        );
        let mut v = versioned(json!({
            "experiment_id": reports[0].experiment_id,
            "levels": reports.iter().map(|r| r.summary()).collect::<Vec<_>>(),
        }));
        if let (Some(ts), Value::Object(map)) = (generated_at, &mut v) {
            map.insert("generated_at".into(), ts.into());
        }
        let mut out = Vec::new();
        self.write("ratios.csv", csv.as_bytes(), &mut out)?;
        self.write_json("summary.json", &v, &mut out)?;
        self.write("ratio.svg", svg.as_bytes(), &mut out)?;
        Ok((v, out))
    }

    fn perturbation_budget(&self) -> Result<(Value, Artifacts), Failure> {
        let b = require(&self.cfg.budget, "budget", self.sub)?;
        let report = perturbation_budget(b.c_det, b.c_sto, b.c_a, b.c_b, b.l_a, b.l_b, b.epsilon)?;
        let v = self.stamp(versioned(&report));
        let mut out = Vec::new();
        self.write_json("budget.json", &v, &mut out)?;
        Ok((v, out))
    }
}

#[derive(Debug, Serialize)]
pub struct NormRow {
    pub norm: &'static str,
    pub s: f64,
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub value: f64,
}

pub fn norm_rows(field: &SpectralField, table: &NormTable) -> Result<Vec<NormRow>, Failure> {
    let part = LPPartition::new(*field.lattice());
    let mut rows = Vec::new();
    for &[s, q] in &table.bessel {
        let value = smrlab::spectral::bessel_norm(field, s, q)?;
        rows.push(NormRow { norm: "bessel", s, q: Some(q), p: None, value });
    }
    for &[s, q, p] in &table.besov {
        let value = part.besov_norm(field, s, q, p)?;
        rows.push(NormRow { norm: "besov", s, q: Some(q), p: Some(p), value });
    }
    for &t in &table.holder {
        let value = part.holder_norm(field, t)?;
        rows.push(NormRow { norm: "holder", s: t, q: None, p: None, value });
    }
    Ok(rows)
}

pub fn out_dir(flag: Option<&Path>, cfg: &Config) -> PathBuf {
    match (flag, &cfg.out_dir) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => cfg.resolve(p),
        (None, None) => PathBuf::from("."),
    }
}
