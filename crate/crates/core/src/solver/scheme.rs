//! Semi-implicit Euler-Maruyama stepping
//!
//! `(I + dt nu (-Delta)) u^{m+1} = u^m + dt (nu (-Delta) u^m - A(t_m) u^m + f(t_m))
//!                                + sum_n (B_n(t_m) u^m + g_n(t_m)) dw_n`.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use super::operator::PseudoSpectralOperator;
use super::time::{BrownianIncrements, TimeGrid};
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// One term `field * cos(2 pi frequency t + phase)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableTerm {
    pub field: SpectralField,
    pub frequency: f64,
    pub phase: f64,
}

/// Time-dependent forcing.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum TimeSeries {
    #[default]
    Zero,
    Constant(SpectralField),
    Separable(Vec<SeparableTerm>),
    /// One field per time node.
    Nodal(Vec<SpectralField>),
}

impl TimeSeries {
    pub fn is_zero(&self) -> bool {
        match self {
            TimeSeries::Zero => true,
            TimeSeries::Separable(v) => v.is_empty(),
            _ => false,
        }
    }

    /// Value at node `m` (time `t`); `None` stands for zero.
    pub fn at(&self, m: usize, t: f64) -> Result<Option<Cow<'_, SpectralField>>> {
        Ok(match self {
            TimeSeries::Zero => None,
            TimeSeries::Constant(f) => Some(Cow::Borrowed(f)),
            TimeSeries::Nodal(v) => Some(Cow::Borrowed(
                v.get(m).ok_or_else(|| Error::invalid(format!("nodal series has no node {m}")))?,
            )),
            TimeSeries::Separable(terms) => {
                let mut it = terms.iter();
                let Some(first) = it.next() else { return Ok(None) };
                let mut acc = first.field.scale(temporal(first, t));
                for term in it {
                    acc.axpy(temporal(term, t), &term.field)?;
                }
                Some(Cow::Owned(acc))
            }
        })
    }

    pub fn scaled(&self, lambda: f64) -> TimeSeries {
        match self {
            TimeSeries::Zero => TimeSeries::Zero,
            TimeSeries::Constant(f) => TimeSeries::Constant(f.scale(lambda)),
            TimeSeries::Nodal(v) => TimeSeries::Nodal(v.iter().map(|f| f.scale(lambda)).collect()),
            TimeSeries::Separable(v) => TimeSeries::Separable(
                v.iter()
                    .map(|t| SeparableTerm { field: t.field.scale(lambda), frequency: t.frequency, phase: t.phase })
                    .collect(),
            ),
        }
    }

    fn as_terms(&self) -> Option<Vec<SeparableTerm>> {
        match self {
            TimeSeries::Zero => Some(Vec::new()),
            TimeSeries::Constant(f) => Some(vec![SeparableTerm { field: f.clone(), frequency: 0.0, phase: 0.0 }]),
            TimeSeries::Separable(v) => Some(v.clone()),
            TimeSeries::Nodal(_) => None,
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &TimeSeries) -> Result<TimeSeries> {
        match (self, other) {
            (TimeSeries::Zero, x) | (x, TimeSeries::Zero) => Ok(x.clone()),
            (TimeSeries::Nodal(a), TimeSeries::Nodal(b)) => {
                if a.len() != b.len() {
                    return Err(Error::ShapeMismatch { expected: a.len(), got: b.len() });
                }
                Ok(TimeSeries::Nodal(a.iter().zip(b).map(|(x, y)| x.add(y)).collect::<Result<_>>()?))
            }
            _ => match (self.as_terms(), other.as_terms()) {
                (Some(mut a), Some(b)) => {
                    a.extend(b);
                    Ok(TimeSeries::Separable(a))
                }
                _ => Err(Error::invalid("cannot add nodal and separable series")),
            },
        }
    }

    fn fields(&self) -> Vec<&SpectralField> {
        match self {
            TimeSeries::Zero => Vec::new(),
            TimeSeries::Constant(f) => vec![f],
            TimeSeries::Separable(v) => v.iter().map(|t| &t.field).collect(),
            TimeSeries::Nodal(v) => v.iter().collect(),
        }
    }
}

fn temporal(term: &SeparableTerm, t: f64) -> f64 {
    (2.0 * std::f64::consts::PI * term.frequency * t + term.phase).cos()
}

/// Initial value and forcing of one path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathData {
    pub u0: SpectralField,
    pub f: TimeSeries,
    pub g: TimeSeries,
}

impl PathData {
    pub fn zero(lattice: crate::spectral::Lattice, m: usize) -> Self {
        PathData { u0: SpectralField::zeros(lattice, m, 0), f: TimeSeries::Zero, g: TimeSeries::Zero }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        PathData { u0: self.u0.scale(lambda), f: self.f.scaled(lambda), g: self.g.scaled(lambda) }
    }

    pub fn add(&self, other: &PathData) -> Result<Self> {
        Ok(PathData { u0: self.u0.add(&other.u0)?, f: self.f.add(&other.f)?, g: self.g.add(&other.g)? })
    }

    fn validate(&self, op: &PseudoSpectralOperator) -> Result<()> {
        let c = op.coefficients();
        let l = c.lattice();
        let (m, nn) = (c.m(), c.n_noise());
        let ok = |f: &SpectralField, comps: usize, seq: usize| f.lattice() == l && f.components() == comps && f.n_seq() == seq;
        if !ok(&self.u0, m, 0) {
            return Err(Error::invalid("u0 must be an m-component field on the coefficient lattice"));
        }
        if !self.f.fields().into_iter().all(|f| ok(f, m, 0)) {
            return Err(Error::invalid("f must be an m-component field on the coefficient lattice"));
        }
        if !self.g.fields().into_iter().all(|g| ok(g, m, nn)) {
            return Err(Error::invalid("g must have m components and N_noise sequence entries"));
        }
        Ok(())
    }
}

/// Scheme metadata carried with a solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeInfo {
    pub nu: f64,
    pub steps: usize,
    pub n_noise: usize,
    pub cutoff: usize,
    pub graded: bool,
}

/// States at every node of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<SpectralField>,
    pub info: SchemeInfo,
}

impl Trajectory {
    pub fn last(&self) -> &SpectralField {
        &self.states[self.states.len() - 1]
    }
}

/// One step from `t` to `t + dt`.
#[allow(clippy::too_many_arguments)]
pub fn step(
    op: &PseudoSpectralOperator,
    laplace: &[f64],
    u: &SpectralField,
    t: f64,
    dt: f64,
    f: Option<&SpectralField>,
    g: Option<&SpectralField>,
    dw: &[f64],
) -> Result<SpectralField> {
    let nu = op.nu();
    let c = op.coefficients();
    let (m, nn) = (c.m(), c.n_noise());
    let mut rhs = u.clone();
    let stab: Vec<f64> = laplace.iter().map(|l| dt * nu * l).collect();
    rhs.axpy(1.0, &u.apply_symbol_values(&stab))?;
    rhs.axpy(-dt, &op.apply_a(t, u)?)?;
    if let Some(f) = f {
        rhs.axpy(dt, f)?;
    }
    let noisy = dw.iter().any(|w| *w != 0.0);
    if noisy {
        let bu = op.apply_b(t, u)?;
        for k in 0..m {
            for (n, &w) in dw.iter().enumerate().take(nn) {
                if w == 0.0 {
                    continue;
                }
                let src = bu.channel(bu.channel_index(k, n));
                let dst = rhs.channel_mut(k);
                dst.iter_mut().zip(src).for_each(|(o, v)| *o += w * v);
                if let Some(g) = g {
                    let gs = g.channel(g.channel_index(k, n));
                    rhs.channel_mut(k).iter_mut().zip(gs).for_each(|(o, v)| *o += w * v);
                }
            }
        }
    }
    let inv: Vec<f64> = stab.iter().map(|s| 1.0 / (1.0 + s)).collect();
    Ok(rhs.apply_symbol_values(&inv))
}

/// Runs the scheme, calling `observe(m, t_m, u^m)` at every node, and
/// returns the final state.
pub fn solve_observed(
    op: &PseudoSpectralOperator,
    grid: &TimeGrid,
    data: &PathData,
    noise: &BrownianIncrements,
    mut observe: impl FnMut(usize, f64, &SpectralField) -> Result<()>,
) -> Result<SpectralField> {
    data.validate(op)?;
    let nn = op.coefficients().n_noise();
    if noise.n_noise() != nn || noise.steps() != grid.steps() {
        return Err(Error::invalid("noise increments do not match the grid and N_noise"));
    }
    let laplace = op.coefficients().lattice().laplace_symbols();
    let nodes = grid.nodes();
    let mut u = data.u0.clone();
    observe(0, nodes[0], &u)?;
    for m in 0..grid.steps() {
        let t = nodes[m];
        let f = data.f.at(m, t)?;
        let g = data.g.at(m, t)?;
        u = step(op, &laplace, &u, t, grid.dt(m), f.as_deref(), g.as_deref(), noise.step(m))?;
        if !u.is_finite() {
            return Err(Error::BlowUp { step: m + 1, time: nodes[m + 1], seed: None });
        }
        observe(m + 1, nodes[m + 1], &u)?;
    }
    Ok(u)
}

/// Runs the scheme and keeps every state.
pub fn solve(
    op: &PseudoSpectralOperator,
    grid: &TimeGrid,
    data: &PathData,
    noise: &BrownianIncrements,
) -> Result<Trajectory> {
    let mut states = Vec::with_capacity(grid.steps() + 1);
    solve_observed(op, grid, data, noise, |_, _, u| {
        states.push(u.clone());
        Ok(())
    })?;
    let c = op.coefficients();
    let info = SchemeInfo {
        nu: op.nu(),
        steps: grid.steps(),
        n_noise: c.n_noise(),
        cutoff: c.lattice().cutoff(),
        graded: grid.is_graded(),
    };
    Ok(Trajectory { grid: grid.clone(), states, info })
}
