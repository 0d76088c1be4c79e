//! Defender objective and policy solver.
//!
//! The defender anticipates the attacker's best response and minimizes
//! expected total cost over the hardened breach probability `s` (equivalently
//! over investment `z = Z(s, v)`):
//!
//! ```text
//! cost(s, v) = L * T*(s) + d * Z(s, v)
//! ```
//!
//! where `L` is the loss on a successful breach, `d` the unit cost of
//! hardening, and `T*` the attacker's breach chance under best response
//! (zero at or below the deterrence threshold `s_P`).
//!
//! The first-order structure collapses onto a single profile
//! `D(s) = (1 - s) ln^2(1 - s) / g(s)`: stationary points of the objective
//! solve `D(s) = R / f(v)` with `R = (L/d) / (G/c)`. `D` is either an
//! inverted U with peak `s_hat` or strictly decreasing, which yields exactly
//! three kinds of optimal policy:
//!
//! * all in: harden to the deterrence threshold and shut the attacker out,
//! * some: stop at the interior stationary point `s1`,
//! * none: stay at `s = v` and absorb the attacker's pressure.

use crate::attacker::AttackerParams;
use crate::error::{Error, Result};
use crate::model::BreachModel;
use crate::numerics::{bisect, ROOT_TOL};
use crate::{PROB_CEIL, PROB_FLOOR};

/// Defender economics: breach loss `L` and unit hardening cost `d`.
#[derive(Debug, Clone, Copy)]
pub struct DefenderParams {
    pub loss: f64,
    pub unit_cost: f64,
}

impl DefenderParams {
    /// Requires positive finite loss and cost.
    pub fn new(loss: f64, unit_cost: f64) -> Result<Self> {
        for (name, value) in [("loss", loss), ("unit_cost", unit_cost)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::OutOfDomain { name, value, requirement: "positive finite" });
            }
        }
        Ok(DefenderParams { loss, unit_cost })
    }
}

/// Shape of the stationarity profile `D` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientShapeKind {
    /// Rises to a unique peak at `s_hat`, then falls to zero at 1.
    InvertedU,
    /// Diverges at 0 and falls monotonically; every level is hit once.
    StrictlyDecreasing,
}

/// Peak location and height of the stationarity profile.
#[derive(Debug, Clone, Copy)]
pub struct GradientShape {
    pub kind: GradientShapeKind,
    /// Peak abscissa; 0 for strictly decreasing profiles and for the
    /// degenerate inverted U whose peak sits at the left edge.
    pub s_hat: f64,
    /// Peak height `D(s_hat)`; `+inf` for strictly decreasing profiles.
    pub d_hat: f64,
}

/// Smallest vulnerability at which interior stationary points exist.
#[derive(Debug, Clone, Copy)]
pub struct StationaryThreshold {
    pub v_hat: f64,
    /// True when even `v -> 1` admits no stationary point, so `v_hat` was
    /// clamped to 1.
    pub clamped: bool,
}

/// Which decision interval the vulnerability falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionInterval {
    /// Below `v_hat`: no stationary point, deterrence is the only candidate.
    DI1,
    /// Stationary points exist but sit above `v`: deter or do nothing.
    DI2,
    /// Interior stationary point `s1` is feasible: deter or stop at `s1`.
    DI3,
}

impl std::fmt::Display for DecisionInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DecisionInterval::DI1 => "DI1",
            DecisionInterval::DI2 => "DI2",
            DecisionInterval::DI3 => "DI3",
        };
        f.write_str(s)
    }
}

/// Optimal policy type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    /// Harden to the deterrence threshold (or already below it).
    AllIn,
    /// Harden partway, to the interior stationary point.
    Some,
    /// No hardening; absorb the attacker's best response.
    None,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Decision::AllIn => "all_in",
            Decision::Some => "some",
            Decision::None => "none",
        };
        f.write_str(s)
    }
}

/// Solved defender policy at one vulnerability.
#[derive(Debug, Clone, Copy)]
pub struct DefenderSolution {
    pub interval: DecisionInterval,
    pub decision: Decision,
    /// Optimal hardened breach probability.
    pub s_star: f64,
    /// Optimal investment `Z(s_star, v)`.
    pub z_star: f64,
    /// Expected total cost at the optimum.
    pub expected_cost: f64,
    /// Interior stationary point on the falling branch of `D`, when it exists.
    pub s1: Option<f64>,
    /// Stationary point on the rising branch, when it exists.
    pub s2: Option<f64>,
}

/// A breach model plus both players' economics.
#[derive(Debug, Clone)]
pub struct Scenario {
    model: BreachModel,
    attacker: AttackerParams,
    defender: DefenderParams,
    ratio: f64,
}

/// Scale-free profile `xi(s) = (1 - s) ln^2(1 - s) / s` shared by every
/// model family; the stationarity profile of a class II model with
/// `alpha = 1` equals it exactly.
pub fn universal_xi(s: f64) -> f64 {
    let l = (-s).ln_1p();
    (1.0 - s) * l * l / s
}

/// Analytic slope of [`universal_xi`].
pub fn universal_xi_slope(s: f64) -> f64 {
    let l = (-s).ln_1p();
    -(l * l + 2.0 * l) / s - (1.0 - s) * l * l / (s * s)
}

impl Scenario {
    /// Combine a model with both players' economics. The cost ratio
    /// `R = (L/d) / (G/c)` is fixed at construction.
    pub fn new(model: BreachModel, attacker: AttackerParams, defender: DefenderParams) -> Self {
        let ratio = (defender.loss / defender.unit_cost) / (attacker.gain / attacker.unit_cost);
        Scenario { model, attacker, defender, ratio }
    }

    pub fn model(&self) -> &BreachModel {
        &self.model
    }

    pub fn attacker(&self) -> &AttackerParams {
        &self.attacker
    }

    pub fn defender(&self) -> &DefenderParams {
        &self.defender
    }

    /// Cost ratio `R = (L/d) / (G/c)`.
    pub fn cost_ratio(&self) -> f64 {
        self.ratio
    }

    /// Expected total cost of holding the breach probability at `s` against
    /// vulnerability `v`. Below the deterrence threshold only the hardening
    /// spend remains.
    pub fn objective(&self, s: f64, v: f64) -> Result<f64> {
        if !(0.0 < v && v < 1.0) {
            return Err(Error::OutOfDomain { name: "v", value: v, requirement: "0 < v < 1" });
        }
        if !(0.0 < s && s <= v) {
            return Err(Error::OutOfDomain { name: "s", value: s, requirement: "0 < s <= v" });
        }
        let response = self.attacker.best_response(s)?;
        let hardening = self.model.effort(s, v)?;
        Ok(self.defender.loss * response.breach_chance + self.defender.unit_cost * hardening)
    }

    /// Stationarity profile `D(s) = (1 - s) ln^2(1 - s) / g(s)`.
    pub fn gradient_function(&self, s: f64) -> Result<f64> {
        let g = self.model.effort_factor(s)?;
        let l = (-s).ln_1p();
        Ok((1.0 - s) * l * l / g)
    }

    /// Sign surrogate for the slope of `D`:
    /// `H(s) = -(2/ln(1-s) + 1/s) - gamma(s) (1/s - 1)`.
    pub fn hessian_surrogate(&self, s: f64) -> Result<f64> {
        let gamma = self.model.gamma(s)?;
        let l = (-s).ln_1p();
        Ok(-(2.0 / l + 1.0 / s) - gamma * (1.0 / s - 1.0))
    }

    /// Classify the stationarity profile and locate its peak.
    ///
    /// Fails with an unsupported-profile error when the elasticity profile
    /// falls outside the supported classes.
    pub fn gradient_shape(&self) -> Result<GradientShape> {
        use crate::model::GammaClassTag;
        let class = self.model.classify_gamma(256);
        if class.tag == GammaClassTag::Invalid {
            return Err(Error::UnsupportedProfile(
                "gradient shape is only defined for nonnegative single-crossover profiles".into(),
            ));
        }
        let g0 = self.model.gamma_at_zero();
        if g0 > 1.0 {
            return Ok(GradientShape {
                kind: GradientShapeKind::StrictlyDecreasing,
                s_hat: 0.0,
                d_hat: f64::INFINITY,
            });
        }
        let lo = PROB_FLOOR.max(1e-9);
        let hi = PROB_CEIL.min(1.0 - 1e-9);
        // gamma(0) = 1 collapses the peak onto the left edge: D starts at
        // its finite supremum and falls. H(lo) cannot distinguish this case
        // (the residual slope signal, of order s, drowns in rounding), so
        // catch it structurally; the probe below stays as a backstop.
        if (g0 - 1.0).abs() <= 1e-12 || self.hessian_surrogate(lo)? <= 0.0 {
            return Ok(GradientShape {
                kind: GradientShapeKind::InvertedU,
                s_hat: 0.0,
                d_hat: self.gradient_function(lo)?,
            });
        }
        let s_hat = bisect(|s| self.hessian_surrogate(s).unwrap_or(f64::NAN), lo, hi, ROOT_TOL)?;
        Ok(GradientShape {
            kind: GradientShapeKind::InvertedU,
            s_hat,
            d_hat: self.gradient_function(s_hat)?,
        })
    }

    /// Smallest vulnerability whose stationarity equation `D(s) = R / f(v)`
    /// has a solution. Zero for strictly decreasing profiles; clamped to 1
    /// when no vulnerability below 1 reaches the peak.
    pub fn v_hat(&self) -> Result<StationaryThreshold> {
        let shape = self.gradient_shape()?;
        if shape.kind == GradientShapeKind::StrictlyDecreasing {
            return Ok(StationaryThreshold { v_hat: 0.0, clamped: false });
        }
        match self.model.vuln_factor_inverse(self.ratio / shape.d_hat) {
            Ok(v) => Ok(StationaryThreshold { v_hat: v, clamped: false }),
            Err(_) => Ok(StationaryThreshold { v_hat: 1.0, clamped: true }),
        }
    }

    /// Stationary points `(s2, s1)` of the objective at vulnerability `v`:
    /// `s2` on the rising branch of `D`, `s1` on the falling branch. Both
    /// are `None` below the stationarity threshold; they coincide at the
    /// peak when `v` sits exactly on it.
    pub fn stationary_points(&self, v: f64) -> Result<(Option<f64>, Option<f64>)> {
        if !(0.0 < v && v < 1.0) {
            return Err(Error::OutOfDomain { name: "v", value: v, requirement: "0 < v < 1" });
        }
        let shape = self.gradient_shape()?;
        let target = self.ratio / self.model.vuln_factor(v)?;
        let lo = PROB_FLOOR.max(1e-9);
        let hi = PROB_CEIL.min(1.0 - 1e-9);
        let profile = |s: f64| self.gradient_function(s).unwrap_or(f64::NAN) - target;

        // A peak collapsed onto the left edge leaves only the falling
        // branch, same as a strictly decreasing profile.
        if shape.kind == GradientShapeKind::StrictlyDecreasing || shape.s_hat == 0.0 {
            if profile(lo) <= 0.0 {
                // Root sits below the probability floor; the objective rises
                // across the whole feasible range.
                return Ok((None, None));
            }
            if profile(hi) >= 0.0 {
                // Root sits beyond the ceiling; the objective falls all the
                // way to s = v. Clamp so interval classification stays sane.
                return Ok((None, Some(hi)));
            }
            let s1 = bisect(profile, lo, hi, ROOT_TOL)?;
            return Ok((None, Some(s1)));
        }
        if target > shape.d_hat {
            return Ok((None, None));
        }
        let anchor = shape.s_hat.max(lo);
        if target == shape.d_hat || profile(anchor) < 0.0 {
            // Tangent (or within rounding of it): both roots collapse onto
            // the peak.
            return Ok((Some(shape.s_hat), Some(shape.s_hat)));
        }
        let s1 = if profile(hi) >= 0.0 {
            hi
        } else {
            bisect(profile, anchor, hi, ROOT_TOL)?
        };
        let s2 = if shape.s_hat > lo && profile(lo) < 0.0 {
            Some(bisect(profile, lo, anchor, ROOT_TOL)?)
        } else {
            None
        };
        Ok((s2, Some(s1)))
    }

    /// Optimal defender policy at vulnerability `v`.
    ///
    /// Vulnerabilities at or below the deterrence threshold need no
    /// investment at all and come back as a zero-cost all-in decision.
    /// Exact ties between candidate policies resolve to all-in.
    pub fn solve_defender(&self, v: f64) -> Result<DefenderSolution> {
        if !(0.0 < v && v < 1.0) {
            return Err(Error::OutOfDomain { name: "v", value: v, requirement: "0 < v < 1" });
        }
        let s_p = self.attacker.deterrence_threshold();
        let (s2, s1) = self.stationary_points(v)?;
        let threshold = self.v_hat()?;
        let interval = if s1.is_none() || v <= threshold.v_hat {
            DecisionInterval::DI1
        } else if v <= s1.unwrap() {
            DecisionInterval::DI2
        } else {
            DecisionInterval::DI3
        };

        if v <= s_p {
            return Ok(DefenderSolution {
                interval,
                decision: Decision::AllIn,
                s_star: v,
                z_star: 0.0,
                expected_cost: 0.0,
                s1,
                s2,
            });
        }

        let all_in_cost = self.objective(s_p, v)?;
        let (decision, s_star) = match interval {
            DecisionInterval::DI1 => (Decision::AllIn, s_p),
            DecisionInterval::DI2 => {
                let none_cost = self.objective(v, v)?;
                if all_in_cost <= none_cost {
                    (Decision::AllIn, s_p)
                } else {
                    (Decision::None, v)
                }
            }
            DecisionInterval::DI3 => {
                let s1 = s1.expect("DI3 implies a feasible stationary point");
                let some_cost = self.objective(s1, v)?;
                if all_in_cost <= some_cost {
                    (Decision::AllIn, s_p)
                } else {
                    (Decision::Some, s1)
                }
            }
        };
        let z_star = self.model.effort(s_star, v)?;
        let expected_cost = self.objective(s_star, v)?;
        Ok(DefenderSolution { interval, decision, s_star, z_star, expected_cost, s1, s2 })
    }
}
