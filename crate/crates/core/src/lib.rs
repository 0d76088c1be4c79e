//! Security-investment planning against a rational attacker.
//!
//! The crate models a two-player interaction: a defender invests `z` to push
//! the breach probability of an asset down from its intrinsic vulnerability
//! `v`, and an attacker observes the hardened probability `s` and chooses how
//! much effort `y` to spend probing it. Solvers cover both sides:
//!
//! * [`model`]: breach-probability families and their structural validators.
//! * [`attacker`]: the attacker's best response, deterrence threshold, and
//!   the price of deterrence.
//! * [`defender`]: the defender's expected-cost objective and the three-way
//!   policy decision (deter outright, harden partially, or accept the risk).
//! * [`fixed_point`]: self-targeting vulnerabilities where partial hardening
//!   stalls, and the induced decision-interval partition of `(0, 1)`.
//! * [`baseline`]: the classical passive-attacker investment rule, for
//!   comparison against the strategic solution.
//! * [`report`]: deterministic sweep tables, CSV emission, and standalone
//!   SVG figures.
//!
//! # Determinism
//!
//! Every solver is a pure function of its inputs. Sweeps may fan out across
//! threads but assemble results in index order, so repeated runs produce
//! byte-identical CSV and SVG artifacts.

pub mod attacker;
pub mod baseline;
pub mod config;
pub mod defender;
pub mod error;
pub mod fixed_point;
pub mod model;
pub mod numerics;
pub mod report;

pub use error::{Error, Result};

/// Lower clamp for probability-like quantities inside solvers.
pub const PROB_FLOOR: f64 = 1e-12;

/// Upper clamp for probability-like quantities inside solvers.
pub const PROB_CEIL: f64 = 1.0 - 1e-12;
