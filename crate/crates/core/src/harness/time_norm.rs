//! `L^p((s, T), (t - s)^kappa dt)` norms of sampled scalar functions.

use super::spec::NormSpec;
use crate::error::{Error, Result};
use crate::solver::Trajectory;
use crate::spectral::bessel_norm;

/// `(int_s^T phi(t) (t - s)^kappa dt)` for `phi` linear between nodes, with
/// the weight integrated exactly.
pub fn weighted_integral(phi: &[f64], nodes: &[f64], s: f64, kappa: f64) -> Result<f64> {
    if phi.len() != nodes.len() {
        return Err(Error::ShapeMismatch { expected: nodes.len(), got: phi.len() });
    }
    if !(kappa > -1.0) {
        return Err(Error::range("kappa > -1"));
    }
    let mut total = 0.0;
    for m in 0..nodes.len().saturating_sub(1) {
        let (t0, t1) = (nodes[m] - s, nodes[m + 1] - s);
        let h = t1 - t0;
        if !(h > 0.0) || t0 < 0.0 {
            return Err(Error::invalid("nodes must increase from s"));
        }
        let w0 = (t1.powf(kappa + 1.0) - t0.powf(kappa + 1.0)) / (kappa + 1.0);
        let w1 = (t1.powf(kappa + 2.0) - t0.powf(kappa + 2.0)) / (kappa + 2.0);
        let slope = (phi[m + 1] - phi[m]) / h;
        total += phi[m] * w0 + slope * (w1 - t0 * w0);
    }
    Ok(total)
}

/// `(int_s^T |v(t)|^p (t - s)^kappa dt)^{1/p}` from node values `v`.
pub fn weighted_lp(values: &[f64], nodes: &[f64], s: f64, p: f64, kappa: f64) -> Result<f64> {
    if values.iter().any(|v| v.is_nan()) {
        return Ok(f64::NAN);
    }
    let top = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if top.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if top == 0.0 {
        return Ok(0.0);
    }
    let phi: Vec<f64> = values.iter().map(|v| (v.abs() / top).powf(p)).collect();
    Ok(top * weighted_integral(&phi, nodes, s, kappa)?.max(0.0).powf(1.0 / p))
}

/// `||u||_{L^p((s,T), w_kappa; H^{spatial_s, q})}` of a trajectory.
pub fn weighted_time_norm(traj: &Trajectory, spec: &NormSpec, spatial_s: f64) -> Result<f64> {
    spec.validate()?;
    let values = traj
        .states
        .iter()
        .map(|u| bessel_norm(u, spatial_s, spec.q))
        .collect::<Result<Vec<_>>>()?;
    weighted_lp(&values, traj.grid.nodes(), traj.grid.start(), spec.p, spec.kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::TimeGrid;

    #[test]
    fn constants_are_exact() {
        let g = TimeGrid::graded(0.0, 2.0, 16, 2.0).unwrap();
        let ones = vec![3.0; 17];
        let v = weighted_lp(&ones, g.nodes(), 0.0, 2.0, 0.0).unwrap();
        assert!((v - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        let kappa = 0.4;
        let v = weighted_lp(&[1.0; 17], g.nodes(), 0.0, 4.0, kappa).unwrap();
        let exact = (2f64.powf(kappa + 1.0) / (kappa + 1.0)).powf(0.25);
        assert!((v / exact - 1.0).abs() < 1e-12);
        assert_eq!(weighted_lp(&[0.0; 17], g.nodes(), 0.0, 4.0, kappa).unwrap(), 0.0);
    }

    #[test]
    fn linear_integrand_is_exact() {
        let g = TimeGrid::uniform(1.0, 2.0, 7).unwrap();
        let phi: Vec<f64> = g.nodes().iter().map(|t| t - 1.0).collect();
        // int_0^1 tau * tau^0.5 = 1 / 2.5
        let v = weighted_integral(&phi, g.nodes(), 1.0, 0.5).unwrap();
        assert!((v - 0.4).abs() < 1e-12);
    }
}
