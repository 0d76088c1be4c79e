//! Flat `key = value` scenario files.
//!
//! One scenario per file. `#` starts a comment, blank lines are skipped,
//! and every error carries the line it came from:
//!
//! ```text
//! # attacker and defender economics
//! family  = gl1
//! alpha   = 1e-4
//! beta    = 1.1
//! G = 70000
//! c = 3500
//! L = 100000
//! d = 1
//!
//! # optional sweep section
//! variable = v
//! range    = 0.01:0.99:197
//! outputs  = policy, attacker, baseline, fixed_points
//! title    = power family, R = 5000
//! ```
//!
//! `family` is `gl1` (power decay, needs `beta`), `gl2` (log decay), or
//! `custom` (needs `gamma_poly`, ascending polynomial coefficients of the
//! elasticity profile). `variable` is `v`, `R`, or `s`; sweeps over `s`
//! fix the vulnerability with `v = ...`.

use std::collections::BTreeSet;
use std::path::Path;

use crate::attacker::AttackerParams;
use crate::defender::{DefenderParams, Scenario};
use crate::error::{Error, Result};
use crate::model::{BreachFamily, BreachModel};

/// Quantity a sweep walks over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Vulnerability `v` on (0, 1).
    Vulnerability,
    /// Cost ratio `R`; the sweep rescales the loss `L` to hit each value.
    CostRatio,
    /// Hardened breach probability `s` at a fixed vulnerability.
    Hardening,
}

/// Which record blocks a sweep emits.
#[derive(Debug, Clone, Copy)]
pub struct SweepOutputs {
    pub policy: bool,
    pub attacker: bool,
    pub baseline: bool,
    pub fixed_points: bool,
}

impl Default for SweepOutputs {
    fn default() -> Self {
        SweepOutputs { policy: true, attacker: true, baseline: true, fixed_points: true }
    }
}

/// Parsed scenario file.
#[derive(Debug, Clone)]
pub struct Config {
    pub family: BreachFamily,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub gamma_poly: Option<Vec<f64>>,
    pub gain: f64,
    pub attack_cost: f64,
    pub loss: f64,
    pub defense_cost: f64,
    pub variable: Option<SweepVariable>,
    pub range: Option<(f64, f64, usize)>,
    pub outputs: SweepOutputs,
    pub fixed_v: Option<f64>,
    pub title: Option<String>,
}

fn fail(line: usize, msg: impl Into<String>) -> Error {
    Error::Config { line, msg: msg.into() }
}

fn parse_f64(line: usize, key: &str, raw: &str) -> Result<f64> {
    let value: f64 = raw
        .parse()
        .map_err(|_| fail(line, format!("{key}: expected a number, got `{raw}`")))?;
    if !value.is_finite() {
        return Err(fail(line, format!("{key}: must be finite")));
    }
    Ok(value)
}

fn parse_positive(line: usize, key: &str, raw: &str) -> Result<f64> {
    let value = parse_f64(line, key, raw)?;
    if value <= 0.0 {
        return Err(fail(line, format!("{key}: must be positive, got {value}")));
    }
    Ok(value)
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut family = None;
        let mut alpha = None;
        let mut beta = None;
        let mut gamma_poly = None;
        let mut gain = None;
        let mut attack_cost = None;
        let mut loss = None;
        let mut defense_cost = None;
        let mut variable = None;
        let mut range = None;
        let mut outputs = None;
        let mut fixed_v = None;
        let mut title = None;
        let mut seen = BTreeSet::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| fail(line, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                return Err(fail(line, format!("{key}: empty value")));
            }
            if !seen.insert(key.to_string()) {
                return Err(fail(line, format!("duplicate key `{key}`")));
            }

            match key {
                "family" => {
                    family = Some(match value {
                        "gl1" => BreachFamily::ClassOne,
                        "gl2" => BreachFamily::ClassTwo,
                        "custom" => BreachFamily::CustomDecay,
                        other => {
                            return Err(fail(
                                line,
                                format!("family: expected gl1, gl2, or custom, got `{other}`"),
                            ))
                        }
                    });
                }
                "alpha" => alpha = Some(parse_positive(line, key, value)?),
                "beta" => beta = Some((parse_positive(line, key, value)?, line)),
                "gamma_poly" => {
                    let coeffs: Result<Vec<f64>> = value
                        .split(',')
                        .map(|c| parse_f64(line, key, c.trim()))
                        .collect();
                    gamma_poly = Some((coeffs?, line));
                }
                "G" => gain = Some(parse_positive(line, key, value)?),
                "c" => attack_cost = Some(parse_positive(line, key, value)?),
                "L" => loss = Some(parse_positive(line, key, value)?),
                "d" => defense_cost = Some(parse_positive(line, key, value)?),
                "variable" => {
                    variable = Some(match value {
                        "v" => SweepVariable::Vulnerability,
                        "R" => SweepVariable::CostRatio,
                        "s" => SweepVariable::Hardening,
                        other => {
                            return Err(fail(
                                line,
                                format!("variable: expected v, R, or s, got `{other}`"),
                            ))
                        }
                    });
                }
                "range" => {
                    let parts: Vec<&str> = value.split(':').collect();
                    if parts.len() != 3 {
                        return Err(fail(line, "range: expected `lo:hi:n`"));
                    }
                    let lo = parse_f64(line, "range lo", parts[0].trim())?;
                    let hi = parse_f64(line, "range hi", parts[1].trim())?;
                    let n: usize = parts[2]
                        .trim()
                        .parse()
                        .map_err(|_| fail(line, "range: sample count must be an integer"))?;
                    if !(lo < hi) {
                        return Err(fail(line, format!("range: need lo < hi, got {lo}:{hi}")));
                    }
                    if n < 2 {
                        return Err(fail(line, "range: need at least 2 samples"));
                    }
                    range = Some((lo, hi, n));
                }
                "outputs" => {
                    let mut out = SweepOutputs {
                        policy: false,
                        attacker: false,
                        baseline: false,
                        fixed_points: false,
                    };
                    for token in value.split(',') {
                        match token.trim() {
                            "policy" => out.policy = true,
                            "attacker" => out.attacker = true,
                            "baseline" => out.baseline = true,
                            "fixed_points" => out.fixed_points = true,
                            other => {
                                return Err(fail(
                                    line,
                                    format!(
                                        "outputs: unknown block `{other}` (policy, attacker, \
                                         baseline, fixed_points)"
                                    ),
                                ))
                            }
                        }
                    }
                    outputs = Some(out);
                }
                "v" => {
                    let v = parse_f64(line, key, value)?;
                    if !(0.0 < v && v < 1.0) {
                        return Err(fail(line, format!("v: must lie in (0, 1), got {v}")));
                    }
                    fixed_v = Some(v);
                }
                "title" => title = Some(value.to_string()),
                other => return Err(fail(line, format!("unknown key `{other}`"))),
            }
        }

        let family = family.ok_or_else(|| fail(0, "missing key `family`"))?;
        let require = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| fail(0, format!("missing key `{name}`")))
        };
        let alpha = require("alpha", alpha)?;
        let gain = require("G", gain)?;
        let attack_cost = require("c", attack_cost)?;
        let loss = require("L", loss)?;
        let defense_cost = require("d", defense_cost)?;

        let beta = match (family, beta) {
            (BreachFamily::ClassOne, None) => {
                return Err(fail(0, "family gl1 requires `beta`"))
            }
            (BreachFamily::ClassOne, Some((b, _))) => Some(b),
            (_, None) => None,
            (_, Some((_, line))) => {
                return Err(fail(line, "beta only applies to family gl1"))
            }
        };
        let gamma_poly = match (family, gamma_poly) {
            (BreachFamily::CustomDecay, None) => {
                return Err(fail(0, "family custom requires `gamma_poly`"))
            }
            (BreachFamily::CustomDecay, Some((coeffs, _))) => Some(coeffs),
            (_, None) => None,
            (_, Some((_, line))) => {
                return Err(fail(line, "gamma_poly only applies to family custom"))
            }
        };
        if variable == Some(SweepVariable::Hardening) && fixed_v.is_none() {
            return Err(fail(0, "sweeps over s require a fixed `v`"));
        }

        Ok(Config {
            family,
            alpha,
            beta,
            gamma_poly,
            gain,
            attack_cost,
            loss,
            defense_cost,
            variable,
            range,
            outputs: outputs.unwrap_or_default(),
            fixed_v,
            title,
        })
    }

    /// Load and parse a config file. An unreadable file is reported as a
    /// config error so callers can map it to the same exit path as a
    /// malformed one.
    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Config {
            line: 0,
            msg: format!("cannot read {}: {source}", path.display()),
        })?;
        Config::parse(&text)
    }

    pub fn build_model(&self) -> Result<BreachModel> {
        match self.family {
            BreachFamily::ClassOne => {
                BreachModel::class_one(self.alpha, self.beta.expect("validated at parse"))
            }
            BreachFamily::ClassTwo => BreachModel::class_two(self.alpha),
            BreachFamily::CustomDecay => BreachModel::custom_decay(
                self.alpha,
                self.gamma_poly.clone().expect("validated at parse"),
            ),
        }
    }

    pub fn build_scenario(&self) -> Result<Scenario> {
        Ok(Scenario::new(
            self.build_model()?,
            AttackerParams::new(self.gain, self.attack_cost)?,
            DefenderParams::new(self.loss, self.defense_cost)?,
        ))
    }
}
