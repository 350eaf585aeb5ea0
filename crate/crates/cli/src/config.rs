use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use smrlab::coefficients::{CoefficientSet, CoefficientSpec, Sampling};
use smrlab::harness::{DataSpec, NormSpec, RandomProfile};
use smrlab::paraproduct::{MultiplicationCase, ProbeParams};
use smrlab::solver::{OperatorForm, TimeGrid};
use smrlab::spectral::{dft, Lattice, SpectralField};
use smrlab::coefficients::generate_holder_field;
use num_complex::Complex64;

use crate::failure::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    CheckParabolicity,
    Norms,
    VerifyMultiplication,
    Solve,
    SmrExperiment,
    PerturbationBudget,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] = [
        Subcommand::CheckParabolicity,
        Subcommand::Norms,
        Subcommand::VerifyMultiplication,
        Subcommand::Solve,
        Subcommand::SmrExperiment,
        Subcommand::PerturbationBudget,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::CheckParabolicity => "check-parabolicity",
            Subcommand::Norms => "norms",
            Subcommand::VerifyMultiplication => "verify-multiplication",
            Subcommand::Solve => "solve",
            Subcommand::SmrExperiment => "smr-experiment",
            Subcommand::PerturbationBudget => "perturbation-budget",
        }
    }

    pub fn parse(name: &str) -> Result<Self, Failure> {
        Subcommand::ALL.into_iter().find(|s| s.name() == name).ok_or_else(|| Failure {
            kind: "unknown_subcommand",
            field: "subcommand".into(),
            reason: format!(
                "unknown subcommand {name:?}; expected one of {}",
                Subcommand::ALL.map(|s| s.name()).join(", ")
            ),
            code: crate::failure::EXIT_VALIDATION,
        })
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub d: usize,
    #[serde(rename = "K")]
    pub k: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub s: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    #[serde(rename = "M")]
    pub steps: usize,
    /// Grade the nodes towards `s` with the exponent matched to the weight.
    #[serde(default)]
    pub graded: bool,
    /// Explicit grading exponent; overrides `graded`.
    #[serde(default)]
    pub gamma: Option<f64>,
}

impl TimeConfig {
    pub fn grid(&self, steps: usize, norm: Option<&NormSpec>) -> Result<TimeGrid, Failure> {
        let grid = match (self.gamma, self.graded, norm) {
            (Some(g), _, _) => TimeGrid::graded(self.s, self.t_end, steps, g)?,
            (None, true, Some(n)) => TimeGrid::for_weight(self.s, self.t_end, steps, n.kappa, n.p)?,
            (None, true, None) => return Err(Failure::config("time.graded", "grading from the weight needs norm")),
            (None, false, _) => TimeGrid::uniform(self.s, self.t_end, steps)?,
        };
        Ok(grid)
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum CoefficientSource {
    File { file: PathBuf },
    Spec(CoefficientSpec),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSource {
    /// A field document (see [`FieldDocument`]).
    File(PathBuf),
    /// A random scalar Hölder field.
    Holder { alpha: f64, amplitude: f64, seed: u64 },
}

/// Field file: either raw coefficients per channel as `[re, im]` pairs or
/// real grid samples per channel.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDocument {
    pub d: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub components: usize,
    #[serde(default)]
    pub n_seq: usize,
    #[serde(default)]
    pub coefficients: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    pub values: Option<Vec<Vec<f64>>>,
}

impl FieldDocument {
    pub fn field(&self) -> Result<SpectralField, Failure> {
        let lattice = Lattice::new(self.d, self.k)?;
        match (&self.coefficients, &self.values) {
            (Some(c), None) => {
                let flat = c.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
                Ok(SpectralField::from_coefficients(lattice, self.components, self.n_seq, flat)?)
            }
            (None, Some(v)) => {
                let flat: Vec<f64> = v.iter().flatten().copied().collect();
                Ok(dft(lattice, self.components, self.n_seq, &flat)?)
            }
            _ => Err(Failure::config("coefficients", "give exactly one of coefficients and values")),
        }
    }
}

/// Which norms the `norms` subcommand tabulates.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NormTable {
    /// `(s, q)` pairs for `H^{s,q}`.
    #[serde(default)]
    pub bessel: Vec<[f64; 2]>,
    /// `(s, q, p)` triples for `B^s_{q,p}`.
    #[serde(default)]
    pub besov: Vec<[f64; 3]>,
    /// Non-integer Hölder exponents.
    #[serde(default)]
    pub holder: Vec<f64>,
}

impl Default for NormTable {
    fn default() -> Self {
        NormTable { bessel: vec![[0.0, 2.0], [1.0, 2.0]], besov: vec![[1.0, 2.0, 2.0]], holder: vec![0.5] }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeCase {
    pub case: MultiplicationCase,
    pub params: ProbeParams,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub pairs: usize,
    pub seed: u64,
    /// Hölder exponents of the random `f` and `g`.
    pub alpha_f: f64,
    pub alpha_g: f64,
    #[serde(default = "unit")]
    pub amplitude: f64,
    pub cases: Vec<ProbeCase>,
}

fn unit() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub c_det: f64,
    pub c_sto: f64,
    pub c_a: f64,
    pub c_b: f64,
    #[serde(default)]
    pub l_a: f64,
    #[serde(default)]
    pub l_b: f64,
    pub epsilon: f64,
}

/// Refinement study: level `l` uses `K 2^l`, `M 2^l` and
/// `n_paths * path_factor^l` paths.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Refinement {
    pub levels: usize,
    #[serde(default = "one")]
    pub path_factor: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub schema_version: Option<u32>,
    #[serde(default)]
    pub subcommand: Option<String>,
    #[serde(default)]
    pub experiment_id: Option<String>,
    #[serde(default)]
    pub lattice: Option<LatticeConfig>,
    #[serde(default)]
    pub form: Option<OperatorForm>,
    #[serde(default)]
    pub coefficients: Option<CoefficientSource>,
    #[serde(default)]
    pub norm: Option<NormSpec>,
    #[serde(default)]
    pub time: Option<TimeConfig>,
    #[serde(default)]
    pub n_paths: Option<usize>,
    #[serde(default)]
    pub base_seed: Option<u64>,
    #[serde(default)]
    pub data: Option<DataSpec>,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub sampling: Option<Sampling>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub random_profile: Option<RandomProfile>,
    #[serde(default)]
    pub refinement: Option<Refinement>,
    #[serde(default)]
    pub field: Option<FieldSource>,
    #[serde(default)]
    pub norms: Option<NormTable>,
    #[serde(default)]
    pub probes: Option<ProbeConfig>,
    #[serde(default)]
    pub budget: Option<BudgetConfig>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    /// Directory of the config file; relative paths resolve against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

pub const SCHEMA_VERSION: u32 = 1;

pub fn require<'a, T>(v: &'a Option<T>, field: &str, sub: Subcommand) -> Result<&'a T, Failure> {
    v.as_ref().ok_or_else(|| Failure::missing(field, sub.name()))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let mut cfg = Config::parse(&read(path)?)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    /// Parses and validates the parameter region; no numerical work happens here.
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Failure::json(&e))?;
        if let Some(v) = cfg.schema_version {
            if v != SCHEMA_VERSION {
                return Err(Failure::config("schema_version", format!("unsupported schema_version {v}")));
            }
        }
        if let Some(n) = &cfg.norm {
            n.validate()?;
        }
        if let Some(l) = &cfg.lattice {
            Lattice::new(l.d, l.k)?;
        }
        if let Some(t) = &cfg.theta {
            if !(*t > 0.0) {
                return Err(Failure::from(smrlab::Error::ParameterRange { constraint: format!("theta > 0, got {t}") }));
            }
        }
        if cfg.n_paths == Some(0) {
            return Err(Failure::from(smrlab::Error::ParameterRange { constraint: "n_paths >= 1".into() }));
        }
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn lattice(&self, sub: Subcommand) -> Result<Lattice, Failure> {
        let l = require(&self.lattice, "lattice", sub)?;
        Ok(Lattice::new(l.d, l.k)?)
    }

    pub fn coefficients(&self, lattice: Lattice, sub: Subcommand) -> Result<CoefficientSet, Failure> {
        match require(&self.coefficients, "coefficients", sub)? {
            CoefficientSource::Spec(spec) => Ok(spec.build(lattice)?),
            CoefficientSource::File { file } => {
                let path = self.resolve(file);
                let set: CoefficientSet = serde_json::from_str(&read(&path)?).map_err(|e| Failure::json(&e))?;
                Ok(if set.lattice() == &lattice { set } else { set.on_lattice(lattice)? })
            }
        }
    }

    pub fn field(&self, sub: Subcommand) -> Result<SpectralField, Failure> {
        match require(&self.field, "field", sub)? {
            FieldSource::File(p) => {
                let path = self.resolve(p);
                let doc: FieldDocument = serde_json::from_str(&read(&path)?).map_err(|e| Failure::json(&e))?;
                doc.field()
            }
            FieldSource::Holder { alpha, amplitude, seed } => {
                Ok(generate_holder_field(self.lattice(sub)?, *alpha, *amplitude, *seed)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_rule_rejected_at_parse() {
        let e = Config::parse(r#"{"norm": {"p": 2, "q": 2, "sigma": 0, "kappa": 0.1}}"#).unwrap_err();
        assert_eq!(e.kind, "parameter_range");
        assert_eq!(e.field, "kappa");
        assert_eq!(e.code, 2);
    }

    #[test]
    fn norm_fields_have_no_defaults() {
        let e = Config::parse(r#"{"norm": {"p": 2, "q": 2, "kappa": 0}}"#).unwrap_err();
        assert_eq!(e.field, "sigma");
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Config::parse(r#"{"lattise": {"d": 1, "K": 8}}"#).is_err());
    }

    #[test]
    fn subcommand_names_round_trip() {
        for s in Subcommand::ALL {
            assert_eq!(Subcommand::parse(s.name()).unwrap(), s);
        }
        assert_eq!(Subcommand::parse("frobnicate").unwrap_err().kind, "unknown_subcommand");
    }

    #[test]
    fn coefficient_sources() {
        let c = Config::parse(r#"{"lattice": {"d": 1, "K": 8}, "coefficients": {"kind": "identity", "m": 1}}"#).unwrap();
        let l = c.lattice(Subcommand::Solve).unwrap();
        assert!(c.coefficients(l, Subcommand::Solve).unwrap().is_constant());
        let c = Config::parse(r#"{"coefficients": {"file": "c.json"}}"#).unwrap();
        assert!(matches!(c.coefficients, Some(CoefficientSource::File { .. })));
    }

    #[test]
    fn field_document_values() {
        let doc = FieldDocument { d: 1, k: 2, components: 1, n_seq: 0, coefficients: None, values: Some(vec![vec![1.0; 4]]) };
        let f = doc.field().unwrap();
        assert!((f.coefficient(0, &[0]).unwrap().re - 1.0).abs() < 1e-14);
    }
}
