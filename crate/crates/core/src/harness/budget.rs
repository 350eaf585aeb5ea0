use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub pass: bool,
    /// `1 - C_det C_A - C_sto C_B`
    pub eta: f64,
    /// `C_det C_A + C_sto C_B`
    pub sum: f64,
    pub epsilon: f64,
    pub l_a: f64,
    pub l_b: f64,
}

/// Smallness bookkeeping for a perturbation `(A + A_1, B + B_1)`:
/// passes iff `C_det C_A + C_sto C_B < epsilon`. The lower-order constants
/// `L_A`, `L_B` are validated and carried along.
pub fn perturbation_budget(
    c_det: f64,
    c_sto: f64,
    c_a: f64,
    c_b: f64,
    l_a: f64,
    l_b: f64,
    epsilon: f64,
) -> Result<BudgetReport> {
    for (name, v) in [("C_det", c_det), ("C_sto", c_sto), ("C_A", c_a), ("C_B", c_b), ("L_A", l_a), ("L_B", l_b)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::range(format!("{name} >= 0, got {v}")));
        }
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::range(format!("epsilon in (0, 1), got {epsilon}")));
    }
    let sum = c_det * c_a + c_sto * c_b;
    Ok(BudgetReport { pass: sum < epsilon, eta: 1.0 - sum, sum, epsilon, l_a, l_b })
}
