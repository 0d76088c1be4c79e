//! Attacker best response.
//!
//! The attacker sees the hardened breach probability `s`, values a successful
//! breach at `G`, and pays `c` per unit of effort. Each unit of effort is an
//! independent probe, so `y` units succeed with probability
//! `T(s, y) = 1 - (1 - s)^y` and the attacker maximizes `G T(s, y) - c y`
//! over `y >= 0`.
//!
//! The optimum has a sharp structure: below the deterrence threshold
//! `s_P = 1 - exp(-c/G)` probing never pays and the attacker abstains;
//! above it the first-order condition gives a closed-form effort which rises
//! from zero, peaks, and falls back toward zero as `s -> 1` (an almost-sure
//! breach needs only a token probe).

use crate::error::{Error, Result};
use crate::model::BreachModel;

/// Attacker economics: breach value `G` and unit probing cost `c`.
#[derive(Debug, Clone, Copy)]
pub struct AttackerParams {
    pub gain: f64,
    pub unit_cost: f64,
}

/// Best response at one breach probability.
#[derive(Debug, Clone, Copy)]
pub struct AttackerResponse {
    /// Deterrence threshold `s_P` for these economics.
    pub deterrence_threshold: f64,
    /// Optimal probing effort `y*`; zero at or below the threshold.
    pub effort: f64,
    /// Breach probability `T*` under the optimal effort.
    pub breach_chance: f64,
    /// Attacker surplus `G T* - c y*`; never negative since abstaining is free.
    pub net_gain: f64,
}

/// Cost for the defender to harden all the way down to the deterrence
/// threshold, from [`price_of_deterrence`].
#[derive(Debug, Clone, Copy)]
pub struct DeterrencePrice {
    /// Investment `Z(s_P, v)`; zero when no hardening is needed.
    pub effort: f64,
    /// False when the intrinsic vulnerability already sits at or below the
    /// threshold, so deterrence is free.
    pub hardening_required: bool,
}

impl AttackerParams {
    /// Requires positive finite gain and cost.
    pub fn new(gain: f64, unit_cost: f64) -> Result<Self> {
        for (name, value) in [("gain", gain), ("unit_cost", unit_cost)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::OutOfDomain { name, value, requirement: "positive finite" });
            }
        }
        Ok(AttackerParams { gain, unit_cost })
    }

    /// Gain-to-cost ratio `G / c`.
    pub fn gain_ratio(&self) -> f64 {
        self.gain / self.unit_cost
    }

    /// Breach probability below which probing cannot pay:
    /// `s_P = 1 - exp(-c/G)`.
    pub fn deterrence_threshold(&self) -> f64 {
        1.0 - (-self.unit_cost / self.gain).exp()
    }

    /// Optimal effort, breach chance, and surplus at breach probability `s`.
    ///
    /// `s` must lie strictly inside `(0, 1)`. Within `1e-12` of the
    /// deterrence threshold the response is rounded to abstention.
    pub fn best_response(&self, s: f64) -> Result<AttackerResponse> {
        if !(0.0 < s && s < 1.0) {
            return Err(Error::OutOfDomain { name: "s", value: s, requirement: "0 < s < 1" });
        }
        let s_p = self.deterrence_threshold();
        if s <= s_p + 1e-12 {
            return Ok(AttackerResponse {
                deterrence_threshold: s_p,
                effort: 0.0,
                breach_chance: 0.0,
                net_gain: 0.0,
            });
        }
        let ratio = self.gain_ratio();
        // First-order condition: (-ln(1-s)) (1-s)^y = c/G. Solving in logs
        // avoids the overflow-prone power form.
        let nl = -(-s).ln_1p();
        let effort = (ratio * nl).ln() / nl;
        let breach_chance = 1.0 - 1.0 / (ratio * nl);
        let net_gain = self.gain * breach_chance - self.unit_cost * effort;
        Ok(AttackerResponse { deterrence_threshold: s_p, effort, breach_chance, net_gain })
    }

    /// Location and height of the effort peak:
    /// `s_+ = 1 - exp(-e c / G)`, `y_+ = (G/c) / e`.
    pub fn peak_effort(&self) -> (f64, f64) {
        let s_plus = 1.0 - (-std::f64::consts::E * self.unit_cost / self.gain).exp();
        let y_plus = self.gain_ratio() / std::f64::consts::E;
        (s_plus, y_plus)
    }

    /// Raw attacker payoff `G T(s, y) - c y`, exposed for oracles and plots.
    pub fn payoff(&self, s: f64, y: f64) -> f64 {
        self.gain * (1.0 - (1.0 - s).powf(y)) - self.unit_cost * y
    }
}

/// Investment needed to harden vulnerability `v` down to the deterrence
/// threshold of `params` under `model`.
pub fn price_of_deterrence(
    model: &BreachModel,
    params: &AttackerParams,
    v: f64,
) -> Result<DeterrencePrice> {
    if !(0.0 < v && v < 1.0) {
        return Err(Error::OutOfDomain { name: "v", value: v, requirement: "0 < v < 1" });
    }
    let s_p = params.deterrence_threshold();
    if v <= s_p {
        return Ok(DeterrencePrice { effort: 0.0, hardening_required: false });
    }
    Ok(DeterrencePrice { effort: model.effort(s_p, v)?, hardening_required: true })
}
