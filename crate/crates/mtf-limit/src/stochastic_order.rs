//! Numerical test of stochastic dominance against the uniform law.
//!
//! For every example family the limiting search cost is stochastically
//! smaller than the uniform case of equal weights, i.e. `F(x) >= x` on
//! [0, 1]. Whether that holds for *every* weight distribution is open; this
//! module measures the worst margin on a grid so randomized sweeps can hunt
//! for counterexamples instead of asserting the conjecture away.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limit_law::LimitLaw;
use crate::weights::FamilyDescriptor;

/// Result of a dominance scan. `max_violation` is the largest value of
/// `x - F(x)` over the grid; dominance holds when it stays at or below the
/// tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    /// Human-readable family description.
    pub family: String,
    /// Machine-readable parameters, when the family is data-driven.
    pub descriptor: Option<FamilyDescriptor>,
    pub grid_size: usize,
    pub tolerance: f64,
    pub max_violation: f64,
    /// Grid point achieving the worst margin.
    pub worst_x: f64,
    pub pass: bool,
}

/// Scan `F(x) - x` on a uniform grid over [0, 1].
pub fn dominance_report(
    law: &LimitLaw,
    grid_size: usize,
    tolerance: f64,
) -> Result<DominanceReport> {
    if grid_size < 10 {
        return Err(Error::InvalidParameter(format!(
            "dominance grid needs at least 10 points, got {grid_size}"
        )));
    }
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dominance tolerance must be nonnegative, got {tolerance}"
        )));
    }
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst_x = 0.0;
    for i in 0..grid_size {
        let x = i as f64 / (grid_size - 1) as f64;
        let violation = x - law.cdf(x);
        if violation > max_violation {
            max_violation = violation;
            worst_x = x;
        }
    }
    Ok(DominanceReport {
        family: law.family().to_string(),
        descriptor: law.family().descriptor(),
        grid_size,
        tolerance,
        max_violation,
        worst_x,
        pass: max_violation <= tolerance,
    })
}
