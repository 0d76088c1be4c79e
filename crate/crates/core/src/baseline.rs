//! Classic single-player investment baseline.
//!
//! The baseline defender ignores attacker incentives and minimizes
//! `L * S(z, v) + d * z`: expected breach loss under a fixed threat plus the
//! spend itself. Its first-order condition in the hardened probability `s`
//! is `g(s) = d f(v) / L`, with a corner at zero investment when even the
//! first unit fails to pay. Comparing this against the strategic policy
//! shows where anticipating deterrence changes the answer: near the
//! deterrence threshold the strategic defender spends several times more,
//! while past the flip it spends nothing at all.

use crate::defender::{DefenderSolution, Scenario};
use crate::error::Result;
use crate::numerics::{bisect, ROOT_TOL};
use crate::{Error, PROB_FLOOR};

/// Baseline (non-strategic) investment plan.
#[derive(Debug, Clone, Copy)]
pub struct GlBaselineSolution {
    /// Optimal investment.
    pub z_gl: f64,
    /// Breach probability after investing.
    pub s_gl: f64,
    /// Expected breach loss at the optimum.
    pub expected_loss: f64,
    /// Expected loss plus spend.
    pub total_cost: f64,
    /// Spend as a fraction of the exposed value `v L`; at most `1/e` for
    /// log-convex breach families.
    pub bound_ratio: f64,
}

/// Minimize `L * S(z, v) + d * z` over `z >= 0`.
pub fn solve_gordon_loeb(scenario: &Scenario, v: f64) -> Result<GlBaselineSolution> {
    if !(0.0 < v && v < 1.0) {
        return Err(Error::OutOfDomain { name: "v", value: v, requirement: "0 < v < 1" });
    }
    let model = scenario.model();
    let loss = scenario.defender().loss;
    let unit_cost = scenario.defender().unit_cost;
    let target = unit_cost * model.vuln_factor(v)? / loss;

    let s_gl = if model.effort_factor(v)? <= target {
        // Marginal benefit at zero investment already trails the price.
        v
    } else {
        bisect(
            |s| model.effort_factor(s).unwrap_or(f64::NAN) - target,
            PROB_FLOOR,
            v,
            ROOT_TOL,
        )?
    };
    let z_gl = model.effort(s_gl, v)?;
    let expected_loss = loss * s_gl;
    Ok(GlBaselineSolution {
        z_gl,
        s_gl,
        expected_loss,
        total_cost: expected_loss + unit_cost * z_gl,
        bound_ratio: unit_cost * z_gl / (v * loss),
    })
}

/// Baseline and strategic plans for the same scenario, side by side.
#[derive(Debug, Clone)]
pub struct ModelComparison {
    pub vulnerability: f64,
    pub baseline: GlBaselineSolution,
    pub strategic: DefenderSolution,
    /// Strategic minus baseline investment; positive when playing the game
    /// demands more spend than the classic rule.
    pub investment_gap: f64,
}

/// Solve both models at one vulnerability.
pub fn compare_models(scenario: &Scenario, v: f64) -> Result<ModelComparison> {
    let baseline = solve_gordon_loeb(scenario, v)?;
    let strategic = scenario.solve_defender(v)?;
    Ok(ModelComparison {
        vulnerability: v,
        baseline,
        strategic,
        investment_gap: strategic.z_star - baseline.z_gl,
    })
}
