//! Breach-probability models.
//!
//! A breach model maps defensive investment `z` and intrinsic vulnerability
//! `v` to a post-investment breach probability `s = S(z, v)`, together with
//! the inverse map `z = Z(s, v)`. Every family here factors the marginal
//! effort as `dZ/ds = -f(v) / g(s)`: `f` captures how vulnerability scales
//! the work, `g` how quickly marginal hardening gets expensive as the target
//! probability drops.
//!
//! Three families are supported:
//!
//! * class I: `S(z, v) = v / (alpha * z + 1)^beta`
//! * class II: `S(z, v) = v^(alpha * z + 1)`
//! * custom decay: the elasticity profile `gamma(s) = s * g'(s)/g(s) - 1`
//!   is given directly as a polynomial and `g` is reconstructed from it by
//!   quadrature, anchored at `g(1) = 1`.
//!
//! The elasticity profile decides all of the downstream policy structure, so
//! the custom family exists to probe profiles the closed-form classes cannot
//! express (class I has constant `gamma = 1/beta`, class II constant `0`).

use crate::error::{Error, Result};
use crate::numerics::{bisect, bisect_to_value, simpson};
use crate::{PROB_CEIL, PROB_FLOOR};

/// Functional family of a breach model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreachFamily {
    ClassOne,
    ClassTwo,
    CustomDecay,
}

/// Classification of an elasticity profile `gamma(s)` over `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaClassTag {
    /// `0 <= gamma <= 1` everywhere and nondecreasing.
    Gamma1,
    /// `gamma > 1` everywhere.
    Gamma2,
    /// Starts in the Gamma1 regime and crosses above 1 exactly once.
    GammaGeneral,
    /// Negative somewhere, multiple crossings, or decreasing while below 1.
    Invalid,
}

/// Result of [`BreachModel::classify_gamma`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaClass {
    pub tag: GammaClassTag,
    /// Crossing point where `gamma` first exceeds 1, for `GammaGeneral` only.
    pub crossover: Option<f64>,
}

/// Outcome of one structural check in [`BreachModel::validate_assumptions`].
#[derive(Debug, Clone)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Worst dimensionless margin observed; comfortably positive when the
    /// requirement holds.
    pub worst: f64,
    /// `(z, v)` or `(s, v)` location of the worst margin.
    pub at: (f64, f64),
}

/// Structural validation report; never panics, records violations instead.
#[derive(Debug, Clone)]
pub struct AssumptionReport {
    pub checks: Vec<AssumptionCheck>,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AssumptionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Log-space table of the reconstructed effort factor for custom profiles.
///
/// Stores `P(u) = integral_u^0 (1 + gamma(e^t)) dt` on a uniform grid over
/// `[ln(PROB_FLOOR), 0]`, so `ln g(s) = -P(ln s)`. Off-node values are closed
/// with a short Simpson pass from the nearest node above, keeping quadrature
/// error far below the finite-difference tolerances used by the validators.
#[derive(Debug, Clone)]
struct DecayTable {
    u0: f64,
    step: f64,
    /// `prefix[i] = P(u0 + i * step)`; last entry is `P(0) = 0`.
    prefix: Vec<f64>,
    /// `effort_prefix[i] = Q(u0 + i * step)` where
    /// `Q(u) = integral_u^0 e^(t + P(t)) dt`, the unscaled effort integral.
    effort_prefix: Vec<f64>,
}

const TABLE_INTERVALS: usize = 8192;

impl DecayTable {
    fn build(coeffs: &[f64]) -> Self {
        let u0 = PROB_FLOOR.ln();
        let n = TABLE_INTERVALS;
        let step = -u0 / n as f64;
        let integrand = |u: f64| 1.0 + poly_eval(coeffs, u.exp());
        let mut prefix = vec![0.0; n + 1];
        for i in (0..n).rev() {
            let a = u0 + i as f64 * step;
            let b = a + step;
            prefix[i] = prefix[i + 1] + simpson(integrand, a, b, 4);
        }
        let mut table = DecayTable { u0, step, prefix, effort_prefix: Vec::new() };
        let mut q = vec![0.0; n + 1];
        for i in (0..n).rev() {
            let a = u0 + i as f64 * step;
            let b = a + step;
            q[i] = q[i + 1] + simpson(|t| (t + table.p(t, coeffs)).exp(), a, b, 4);
        }
        table.effort_prefix = q;
        table
    }

    /// `P(u)` for `u` in `[u0, 0]`.
    fn p(&self, u: f64, coeffs: &[f64]) -> f64 {
        if u >= 0.0 {
            return 0.0;
        }
        let u = u.max(self.u0);
        let k = ((u - self.u0) / self.step) as usize;
        let node = (k + 1).min(self.prefix.len() - 1);
        let node_u = self.u0 + node as f64 * self.step;
        let integrand = |t: f64| 1.0 + poly_eval(coeffs, t.exp());
        self.prefix[node] + simpson(integrand, u, node_u, 4)
    }

    /// `Q(u)` for `u` in `[u0, 0]`.
    fn q(&self, u: f64, coeffs: &[f64]) -> f64 {
        if u >= 0.0 {
            return 0.0;
        }
        let u = u.max(self.u0);
        let k = ((u - self.u0) / self.step) as usize;
        let node = (k + 1).min(self.effort_prefix.len() - 1);
        let node_u = self.u0 + node as f64 * self.step;
        self.effort_prefix[node] + simpson(|t| (t + self.p(t, coeffs)).exp(), u, node_u, 4)
    }
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Immutable breach-probability model. Construct through the family-specific
/// constructors; all operations borrow the model.
#[derive(Debug, Clone)]
pub struct BreachModel {
    family: BreachFamily,
    alpha: f64,
    beta: f64,
    gamma_coeffs: Vec<f64>,
    table: Option<DecayTable>,
}

impl BreachModel {
    /// Class I model `S(z, v) = v / (alpha z + 1)^beta`. Requires
    /// `alpha > 0` and `beta > 0`; beta below 1 is allowed and produces an
    /// always-diverging marginal-benefit profile.
    pub fn class_one(alpha: f64, beta: f64) -> Result<Self> {
        require_positive("alpha", alpha)?;
        require_positive("beta", beta)?;
        Ok(BreachModel {
            family: BreachFamily::ClassOne,
            alpha,
            beta,
            gamma_coeffs: Vec::new(),
            table: None,
        })
    }

    /// Class II model `S(z, v) = v^(alpha z + 1)`. Requires `alpha > 0`.
    pub fn class_two(alpha: f64) -> Result<Self> {
        require_positive("alpha", alpha)?;
        Ok(BreachModel {
            family: BreachFamily::ClassTwo,
            alpha,
            beta: 1.0,
            gamma_coeffs: Vec::new(),
            table: None,
        })
    }

    /// Custom model defined by a polynomial elasticity profile
    /// `gamma(s) = coeffs[0] + coeffs[1] s + ...` (lowest degree first).
    ///
    /// The effort factor is reconstructed from the profile with the anchor
    /// `g(1) = 1`, and the vulnerability factor is the identity `f(v) = v`;
    /// `alpha` is validated for uniformity with the other families but does
    /// not rescale the reconstructed factor.
    pub fn custom_decay(alpha: f64, coeffs: Vec<f64>) -> Result<Self> {
        require_positive("alpha", alpha)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidParams("empty decay-profile polynomial".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams("non-finite decay-profile coefficient".into()));
        }
        let table = DecayTable::build(&coeffs);
        Ok(BreachModel {
            family: BreachFamily::CustomDecay,
            alpha,
            beta: 1.0,
            gamma_coeffs: coeffs,
            table: Some(table),
        })
    }

    pub fn family(&self) -> BreachFamily {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Exponent of the class I family; 1 for the other families.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Characteristic investment scale: effort comparable to this moves the
    /// breach probability by an O(1) factor.
    pub fn effort_scale_hint(&self) -> f64 {
        match self.family {
            BreachFamily::CustomDecay => 1.0,
            _ => 1.0 / self.alpha,
        }
    }

    /// Breach probability `S(z, v)` after investing `z` against intrinsic
    /// vulnerability `v`.
    pub fn breach_probability(&self, z: f64, v: f64) -> Result<f64> {
        if !z.is_finite() || z < 0.0 {
            return Err(Error::OutOfDomain { name: "z", value: z, requirement: "z >= 0, finite" });
        }
        if !(0.0..1.0).contains(&v) {
            return Err(Error::OutOfDomain { name: "v", value: v, requirement: "0 <= v < 1" });
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        if z == 0.0 {
            return Ok(v);
        }
        match self.family {
            BreachFamily::ClassOne => Ok(v * (self.alpha * z + 1.0).powf(-self.beta)),
            BreachFamily::ClassTwo => Ok(((self.alpha * z + 1.0) * v.ln()).exp()),
            BreachFamily::CustomDecay => {
                // Invert the effort map on s; stopping on the function value
                // makes the inversion self-consistent with `effort`.
                let lo = PROB_FLOOR;
                if self.effort_unchecked(lo, v) < z {
                    return Ok(lo);
                }
                let target = |s: f64| self.effort_unchecked(s, v) - z;
                bisect_to_value(target, lo, v, 1e-12 * (1.0 + z))
            }
        }
    }

    /// Investment `Z(s, v)` required to push the breach probability down to
    /// `s` from intrinsic vulnerability `v`. Zero when `s = v`.
    pub fn effort(&self, s: f64, v: f64) -> Result<f64> {
        if !(0.0 < v && v < 1.0) {
            return Err(Error::OutOfDomain { name: "v", value: v, requirement: "0 < v < 1" });
        }
        if !(0.0 < s && s <= v) {
            return Err(Error::OutOfDomain { name: "s", value: s, requirement: "0 < s <= v" });
        }
        Ok(self.effort_unchecked(s, v))
    }

    pub(crate) fn effort_unchecked(&self, s: f64, v: f64) -> f64 {
        if s == v {
            return 0.0;
        }
        match self.family {
            BreachFamily::ClassOne => ((v / s).powf(1.0 / self.beta) - 1.0) / self.alpha,
            BreachFamily::ClassTwo => (s.ln() / v.ln() - 1.0) / self.alpha,
            BreachFamily::CustomDecay => {
                let table = self.table.as_ref().expect("custom model has a table");
                let coeffs = &self.gamma_coeffs;
                // Z(s, v) = f(v) * integral_s^v dt/g(t), taken in log space
                // against the precomputed effort integral.
                let q = table.q(s.ln(), coeffs) - table.q(v.ln(), coeffs);
                self.vuln_factor_unchecked(v) * q
            }
        }
    }

    /// Vulnerability-side marginal factor `f(v)`.
    pub fn vuln_factor(&self, v: f64) -> Result<f64> {
        if !(0.0 < v && v < 1.0) {
            return Err(Error::OutOfDomain { name: "v", value: v, requirement: "0 < v < 1" });
        }
        Ok(self.vuln_factor_unchecked(v))
    }

    pub(crate) fn vuln_factor_unchecked(&self, v: f64) -> f64 {
        match self.family {
            BreachFamily::ClassOne => v.powf(1.0 / self.beta),
            BreachFamily::ClassTwo => -1.0 / v.ln(),
            BreachFamily::CustomDecay => v,
        }
    }

    /// Inverse of [`BreachModel::vuln_factor`] on `(0, 1)`.
    ///
    /// Values at or above the `v -> 1` limit of `f` have no preimage inside
    /// the open interval and yield a domain error; the caller decides how to
    /// clamp.
    pub fn vuln_factor_inverse(&self, y: f64) -> Result<f64> {
        if !y.is_finite() || y <= 0.0 {
            return Err(Error::OutOfDomain { name: "f(v)", value: y, requirement: "positive finite" });
        }
        let v = match self.family {
            BreachFamily::ClassOne => y.powf(self.beta),
            BreachFamily::ClassTwo => (-1.0 / y).exp(),
            BreachFamily::CustomDecay => y,
        };
        if v >= 1.0 {
            return Err(Error::OutOfDomain { name: "f(v)", value: y, requirement: "below the v -> 1 limit of f" });
        }
        Ok(v.max(PROB_FLOOR))
    }

    /// Effort-side marginal factor `g(s)`, normalized so that
    /// `dZ/ds = -f(v) / g(s)`.
    pub fn effort_factor(&self, s: f64) -> Result<f64> {
        if !(0.0 < s && s < 1.0) {
            return Err(Error::OutOfDomain { name: "s", value: s, requirement: "0 < s < 1" });
        }
        Ok(self.effort_factor_unchecked(s))
    }

    pub(crate) fn effort_factor_unchecked(&self, s: f64) -> f64 {
        match self.family {
            BreachFamily::ClassOne => {
                self.alpha * self.beta * s.powf((self.beta + 1.0) / self.beta)
            }
            BreachFamily::ClassTwo => self.alpha * s,
            BreachFamily::CustomDecay => {
                let table = self.table.as_ref().expect("custom model has a table");
                (-table.p(s.ln(), &self.gamma_coeffs)).exp()
            }
        }
    }

    /// Both marginal factors `(f(v), g(s))` in one call.
    pub fn marginal_factors(&self, s: f64, v: f64) -> Result<(f64, f64)> {
        Ok((self.vuln_factor(v)?, self.effort_factor(s)?))
    }

    /// Elasticity profile `gamma(s) = s g'(s)/g(s) - 1`.
    pub fn gamma(&self, s: f64) -> Result<f64> {
        if !(0.0 < s && s < 1.0) {
            return Err(Error::OutOfDomain { name: "s", value: s, requirement: "0 < s < 1" });
        }
        Ok(self.gamma_unchecked(s))
    }

    pub(crate) fn gamma_unchecked(&self, s: f64) -> f64 {
        match self.family {
            BreachFamily::ClassOne => 1.0 / self.beta,
            BreachFamily::ClassTwo => 0.0,
            BreachFamily::CustomDecay => poly_eval(&self.gamma_coeffs, s),
        }
    }

    /// Limit of the elasticity profile at `s -> 0`.
    pub fn gamma_at_zero(&self) -> f64 {
        match self.family {
            BreachFamily::ClassOne => 1.0 / self.beta,
            BreachFamily::ClassTwo => 0.0,
            BreachFamily::CustomDecay => self.gamma_coeffs[0],
        }
    }

    /// Classify the elasticity profile over a grid of `grid_size` points.
    ///
    /// Gamma1 profiles sit in `[0, 1]` and never decrease; Gamma2 profiles
    /// stay strictly above 1; the general class crosses 1 exactly once from
    /// below. Anything else (negative values, multiple crossings, decay while
    /// below 1) is reported as `Invalid`.
    pub fn classify_gamma(&self, grid_size: usize) -> GammaClass {
        let n = grid_size.max(64);
        let margin = 1e-4;
        let xs: Vec<f64> = (0..n)
            .map(|i| margin + (1.0 - 2.0 * margin) * i as f64 / (n - 1) as f64)
            .collect();
        let gs: Vec<f64> = xs.iter().map(|s| self.gamma_unchecked(*s)).collect();

        const EQ_TOL: f64 = 1e-12;
        const MONO_TOL: f64 = 1e-10;
        let invalid = GammaClass { tag: GammaClassTag::Invalid, crossover: None };

        if gs.iter().any(|g| !g.is_finite() || *g < -EQ_TOL) {
            return invalid;
        }
        if gs.iter().all(|g| *g <= 1.0 + EQ_TOL) {
            let monotone = gs.windows(2).all(|w| w[1] >= w[0] - MONO_TOL);
            return if monotone {
                GammaClass { tag: GammaClassTag::Gamma1, crossover: None }
            } else {
                invalid
            };
        }
        if gs.iter().all(|g| *g > 1.0) {
            return GammaClass { tag: GammaClassTag::Gamma2, crossover: None };
        }

        // Mixed regime: require a single upward crossing of 1, no downward
        // crossings, and monotone growth wherever the profile is still <= 1.
        let mut upward = Vec::new();
        for i in 0..n - 1 {
            let above = gs[i] > 1.0;
            let next_above = gs[i + 1] > 1.0;
            if !above && next_above {
                upward.push(i);
            }
            if above && !next_above {
                return invalid;
            }
        }
        let monotone_below = (0..n - 1)
            .filter(|i| gs[*i] <= 1.0)
            .all(|i| gs[i + 1] >= gs[i] - MONO_TOL);
        if upward.len() != 1 || !monotone_below {
            return invalid;
        }
        let i = upward[0];
        let crossover = bisect(|s| self.gamma_unchecked(s) - 1.0, xs[i], xs[i + 1], 1e-12)
            .unwrap_or(0.5 * (xs[i] + xs[i + 1]));
        GammaClass { tag: GammaClassTag::GammaGeneral, crossover: Some(crossover) }
    }

    /// Run structural checks on the model over a sample budget of roughly
    /// `grid_size` points and return a per-check report.
    ///
    /// Checks: the no-vulnerability and no-investment identities, monotone
    /// decay in `z`, convexity and log-convexity in `z`, vanishing breach
    /// probability at deep investment, monotone growth in `v`, convex effort
    /// in `s`, the negative effort cross-partial, and nonnegativity of the
    /// elasticity profile. Margins are normalized to be dimensionless so one
    /// tolerance works across efficiency scales.
    pub fn validate_assumptions(&self, grid_size: usize) -> AssumptionReport {
        let per_axis = ((grid_size.max(36)) as f64).sqrt().ceil() as usize;
        let per_axis = per_axis.clamp(6, 64);
        let vs: Vec<f64> = (0..per_axis)
            .map(|i| 0.05 + 0.90 * i as f64 / (per_axis - 1) as f64)
            .collect();
        let scale = self.effort_scale_hint();
        let zs: Vec<f64> = std::iter::once(0.0)
            .chain((0..per_axis.saturating_sub(1)).map(|i| scale * 0.05 * 1.6f64.powi(i as i32)))
            .collect();

        let mut checks = Vec::new();
        let s_of = |z: f64, v: f64| self.breach_probability(z, v).unwrap_or(f64::NAN);
        let track = |worst: &mut f64, at: &mut (f64, f64), m: f64, here: (f64, f64)| {
            if m < *worst {
                *worst = m;
                *at = here;
            }
        };

        // S(z, 0) = 0 exactly.
        let (mut worst, mut at) = (f64::INFINITY, (0.0, 0.0));
        for z in &zs {
            track(&mut worst, &mut at, -s_of(*z, 0.0).abs(), (*z, 0.0));
        }
        checks.push(AssumptionCheck { name: "zero-vulnerability", passed: worst >= 0.0, worst, at });

        // S(0, v) = v exactly.
        let (mut worst, mut at) = (f64::INFINITY, (0.0, 0.0));
        for v in &vs {
            track(&mut worst, &mut at, -(s_of(0.0, *v) - v).abs(), (0.0, *v));
        }
        checks.push(AssumptionCheck { name: "no-investment-identity", passed: worst >= 0.0, worst, at });

        // Monotone decay, convexity, and log-convexity in z. A coarse step
        // keeps second-difference cancellation noise far below the
        // structural signals; margins are normalized by the local slope so
        // they are dimensionless.
        let (mut w_dec, mut a_dec) = (f64::INFINITY, (0.0, 0.0));
        let (mut w_cvx, mut a_cvx) = (f64::INFINITY, (0.0, 0.0));
        let (mut w_log, mut a_log) = (f64::INFINITY, (0.0, 0.0));
        for v in &vs {
            for z in &zs {
                let h = 0.05 * (z + scale);
                let z0 = z.max(h);
                let (sm, s0, sp) = (s_of(z0 - h, *v), s_of(z0, *v), s_of(z0 + h, *v));
                if !(s0 > 1e-9) || !sm.is_finite() || !sp.is_finite() || sp <= PROB_FLOOR {
                    continue;
                }
                let d1 = (sp - sm) / (2.0 * h);
                let d2 = (sp - 2.0 * s0 + sm) / (h * h);
                let dlog2 = (sp.ln() - 2.0 * s0.ln() + sm.ln()) / (h * h);
                track(&mut w_dec, &mut a_dec, -d1 * (z0 + scale) / s0, (z0, *v));
                track(&mut w_cvx, &mut a_cvx, d2 * s0 / (d1 * d1), (z0, *v));
                track(&mut w_log, &mut a_log, dlog2 * (s0 / d1).powi(2), (z0, *v));
            }
        }
        checks.push(AssumptionCheck { name: "decreasing-in-z", passed: w_dec > 1e-9, worst: w_dec, at: a_dec });
        checks.push(AssumptionCheck { name: "convex-in-z", passed: w_cvx > 1e-6, worst: w_cvx, at: a_cvx });
        checks.push(AssumptionCheck { name: "log-convex-in-z", passed: w_log > -1e-4, worst: w_log, at: a_log });

        // S -> 0 along a geometric investment ladder: monotone on the way
        // and below 1% of v by the end.
        let (mut w_van, mut a_van) = (f64::INFINITY, (0.0, 0.0));
        for v in &vs {
            let mut prev = *v;
            let mut z = scale;
            let mut last = *v;
            for _ in 0..24 {
                let s = s_of(z, *v);
                track(&mut w_van, &mut a_van, (prev - s) / v, (z, *v));
                prev = s;
                last = s;
                z *= 2.0;
            }
            track(&mut w_van, &mut a_van, (1e-2 * v - last) / v, (z, *v));
        }
        checks.push(AssumptionCheck { name: "vanishes-at-deep-investment", passed: w_van > -1e-12, worst: w_van, at: a_van });

        // Increasing in v. The symmetric relative difference is scale-free,
        // which matters for the steep families where S underflows at deep
        // investment; points that are structurally zero are skipped.
        let (mut w_inc, mut a_inc) = (f64::INFINITY, (0.0, 0.0));
        for v in &vs {
            for z in &zs {
                let h = crate::numerics::fd_step(*v);
                let (sm, s0, sp) = (s_of(*z, v - h), s_of(*z, *v), s_of(*z, v + h));
                if !(s0 > 1e-9) || !sm.is_finite() || !sp.is_finite() {
                    continue;
                }
                track(&mut w_inc, &mut a_inc, (sp - sm) / (sp + sm), (*z, *v));
            }
        }
        checks.push(AssumptionCheck { name: "increasing-in-v", passed: w_inc > 1e-9, worst: w_inc, at: a_inc });

        // Effort convex in s, and a negative cross-partial in (s, v). The
        // exact factored form provides the normalization, so the margins
        // approximate `1 + gamma(s)` and the vulnerability elasticity of f.
        let (mut w_zss, mut a_zss) = (f64::INFINITY, (0.0, 0.0));
        let (mut w_zsv, mut a_zsv) = (f64::INFINITY, (0.0, 0.0));
        for v in &vs {
            for frac in &vs {
                let s = frac * v * 0.95;
                if s < 1e-4 {
                    continue;
                }
                let f = self.vuln_factor_unchecked(*v);
                let g = self.effort_factor_unchecked(s);
                let hs = (0.02 * s).min(0.25 * (v - s).abs().max(1e-9));
                if hs < 1e-9 {
                    continue;
                }
                let z_at = |ss: f64, vv: f64| self.effort_unchecked(ss.min(vv), vv);
                let d2 = (z_at(s + hs, *v) - 2.0 * z_at(s, *v) + z_at(s - hs, *v)) / (hs * hs);
                track(&mut w_zss, &mut a_zss, d2 * s * g / f, (s, *v));
                let hv = (0.02 * v).min(0.25 * (1.0 - v));
                if s < v - hv {
                    let mixed = (z_at(s + hs, v + hv) - z_at(s + hs, v - hv)
                        - z_at(s - hs, v + hv)
                        + z_at(s - hs, v - hv))
                        / (4.0 * hs * hv);
                    track(&mut w_zsv, &mut a_zsv, -mixed * g * v / f, (s, *v));
                }
            }
        }
        checks.push(AssumptionCheck { name: "effort-convex-in-s", passed: w_zss > 1e-6, worst: w_zss, at: a_zss });
        checks.push(AssumptionCheck { name: "effort-cross-partial", passed: w_zsv > 1e-6, worst: w_zsv, at: a_zsv });

        // Elasticity profile nonnegative.
        let (mut w_g, mut a_g) = (f64::INFINITY, (0.0, 0.0));
        let n1 = grid_size.max(64);
        for i in 0..n1 {
            let s = 1e-4 + (1.0 - 2e-4) * i as f64 / (n1 - 1) as f64;
            track(&mut w_g, &mut a_g, self.gamma_unchecked(s), (s, 0.0));
        }
        checks.push(AssumptionCheck { name: "profile-nonnegative", passed: w_g >= 0.0, worst: w_g, at: a_g });

        AssumptionReport { checks }
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::OutOfDomain { name, value, requirement: "positive finite" });
    }
    Ok(())
}

/// Clamp a probability into the crate-wide open-interval window.
pub fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_FLOOR, PROB_CEIL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::central_diff;

    fn fig_profile() -> Vec<f64> {
        vec![0.875, 0.75, -0.5]
    }

    #[test]
    fn no_investment_returns_vulnerability() {
        let m = BreachModel::class_one(1.0, 1.0).unwrap();
        assert_eq!(m.breach_probability(0.0, 0.75).unwrap(), 0.75);
        let m2 = BreachModel::class_two(3.0).unwrap();
        assert_eq!(m2.breach_probability(0.0, 0.4).unwrap(), 0.4);
    }

    #[test]
    fn zero_vulnerability_never_breaches() {
        let m = BreachModel::class_one(2.0, 1.5).unwrap();
        assert_eq!(m.breach_probability(123.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn class_one_unit_case() {
        let m = BreachModel::class_one(1.0, 1.0).unwrap();
        let s = m.breach_probability(1.0, 0.8).unwrap();
        assert!((s - 0.4).abs() < 1e-15);
    }

    #[test]
    fn class_two_unit_case() {
        let m = BreachModel::class_two(1.0).unwrap();
        let s = m.breach_probability(1.0, 0.5).unwrap();
        assert!((s - 0.25).abs() < 1e-15);
    }

    #[test]
    fn effort_is_zero_at_no_hardening() {
        let m = BreachModel::class_one(0.7, 2.0).unwrap();
        assert_eq!(m.effort(0.3, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn class_one_effort_value() {
        let m = BreachModel::class_one(1.0, 1.0).unwrap();
        let z = m.effort(0.0952, 0.75).unwrap();
        assert!((z - (0.75 / 0.0952 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn class_two_effort_value() {
        let m = BreachModel::class_two(1e-4).unwrap();
        let z = m.effort(0.25, 0.5).unwrap();
        assert!((z - 10_000.0).abs() < 1e-9);
    }

    #[test]
    fn domain_errors_reported() {
        let m = BreachModel::class_one(1.0, 1.0).unwrap();
        assert!(m.breach_probability(-1.0, 0.5).is_err());
        assert!(m.breach_probability(1.0, 1.0).is_err());
        assert!(m.effort(0.6, 0.5).is_err());
        assert!(m.effort(0.0, 0.5).is_err());
        assert!(BreachModel::class_one(0.0, 1.0).is_err());
        assert!(BreachModel::class_one(1.0, -2.0).is_err());
        assert!(BreachModel::class_two(f64::NAN).is_err());
        assert!(BreachModel::custom_decay(1.0, vec![]).is_err());
        assert!(BreachModel::custom_decay(1.0, vec![0.5, f64::INFINITY]).is_err());
    }

    #[test]
    fn marginal_factor_values() {
        let m = BreachModel::class_one(1.0, 1.0).unwrap();
        assert!((m.vuln_factor(0.64).unwrap() - 0.64).abs() < 1e-15);
        let m2 = BreachModel::class_two(1.0).unwrap();
        let f = m2.vuln_factor((-1.0f64).exp()).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
        let m3 = BreachModel::class_one(2.0, 1.0).unwrap();
        let g = m3.effort_factor(0.5).unwrap();
        assert!((g - 2.0 * 0.5 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn vuln_factor_inverse_round_trip() {
        for m in [
            BreachModel::class_one(1e-4, 1.3).unwrap(),
            BreachModel::class_two(0.3).unwrap(),
            BreachModel::custom_decay(1.0, fig_profile()).unwrap(),
        ] {
            for v in [0.05, 0.3, 0.7, 0.95] {
                let y = m.vuln_factor(v).unwrap();
                let back = m.vuln_factor_inverse(y).unwrap();
                assert!((back - v).abs() < 1e-10, "family {:?} v {v}", m.family());
            }
        }
        let m = BreachModel::class_one(1.0, 1.0).unwrap();
        assert!(m.vuln_factor_inverse(1.5).is_err());
    }

    #[test]
    fn gamma_values_per_family() {
        let m = BreachModel::class_one(1e-4, 1.1).unwrap();
        assert!((m.gamma(0.3).unwrap() - 1.0 / 1.1).abs() < 1e-15);
        let m2 = BreachModel::class_two(5.0).unwrap();
        assert_eq!(m2.gamma(0.9).unwrap(), 0.0);
        let m3 = BreachModel::custom_decay(1.0, fig_profile()).unwrap();
        let sc = (3.0 - 5.0f64.sqrt()) / 4.0;
        assert!((m3.gamma(sc).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classify_constant_profiles() {
        let g1 = BreachModel::class_one(1.0, 1.2).unwrap().classify_gamma(256);
        assert_eq!(g1.tag, GammaClassTag::Gamma1);
        assert!(g1.crossover.is_none());
        let g2 = BreachModel::class_one(1.0, 0.9).unwrap().classify_gamma(256);
        assert_eq!(g2.tag, GammaClassTag::Gamma2);
        let gii = BreachModel::class_two(1.0).unwrap().classify_gamma(256);
        assert_eq!(gii.tag, GammaClassTag::Gamma1);
        // Exactly-1 profile is the closed boundary of Gamma1.
        let gb = BreachModel::class_one(1.0, 1.0).unwrap().classify_gamma(256);
        assert_eq!(gb.tag, GammaClassTag::Gamma1);
    }

    #[test]
    fn classify_single_crossover_profile() {
        let m = BreachModel::custom_decay(1.0, fig_profile()).unwrap();
        let c = m.classify_gamma(512);
        assert_eq!(c.tag, GammaClassTag::GammaGeneral);
        let sc = (3.0 - 5.0f64.sqrt()) / 4.0;
        assert!((c.crossover.unwrap() - sc).abs() < 1e-6);
    }

    #[test]
    fn classify_negative_profile_invalid() {
        let m = BreachModel::custom_decay(1.0, vec![-0.5]).unwrap();
        assert_eq!(m.classify_gamma(256).tag, GammaClassTag::Invalid);
    }

    #[test]
    fn classify_decreasing_below_one_invalid() {
        // Starts at 0.9 and decreases: inside [0, 1] but not monotone.
        let m = BreachModel::custom_decay(1.0, vec![0.9, -0.5]).unwrap();
        assert_eq!(m.classify_gamma(256).tag, GammaClassTag::Invalid);
    }

    #[test]
    fn validate_gl_families_pass() {
        for m in [
            BreachModel::class_one(1.0, 1.5).unwrap(),
            BreachModel::class_one(1e-4, 1.1).unwrap(),
            BreachModel::class_two(0.5).unwrap(),
            BreachModel::class_two(1e-4).unwrap(),
        ] {
            let r = m.validate_assumptions(256);
            assert!(
                r.all_passed(),
                "family {:?}: {:?}",
                m.family(),
                r.checks.iter().find(|c| !c.passed)
            );
        }
    }

    #[test]
    fn validate_flags_log_concave_profile() {
        let r = BreachModel::custom_decay(1.0, vec![-0.5]).unwrap().validate_assumptions(256);
        assert!(!r.check("log-convex-in-z").unwrap().passed);
        assert!(!r.check("profile-nonnegative").unwrap().passed);
        // Plain convexity still holds for profiles above -1.
        assert!(r.check("convex-in-z").unwrap().passed);
    }

    #[test]
    fn custom_profile_validates() {
        let r = BreachModel::custom_decay(1.0, fig_profile()).unwrap().validate_assumptions(128);
        assert!(r.all_passed(), "{:?}", r.checks.iter().find(|c| !c.passed));
    }

    #[test]
    fn effort_round_trip_all_families() {
        let models = [
            BreachModel::class_one(1e-4, 1.1).unwrap(),
            BreachModel::class_one(2.0, 0.9).unwrap(),
            BreachModel::class_two(1e-4).unwrap(),
            BreachModel::custom_decay(1.0, fig_profile()).unwrap(),
        ];
        for m in &models {
            for v in [0.1, 0.5, 0.9] {
                for z in [0.0, 0.3, 1.0, 7.0] {
                    let z = z * m.effort_scale_hint();
                    let s = m.breach_probability(z, v).unwrap();
                    if s <= PROB_FLOOR {
                        continue;
                    }
                    let back = m.effort(s, v).unwrap();
                    assert!(
                        (back - z).abs() <= 1e-9 * (1.0 + z),
                        "family {:?} v {v} z {z} -> s {s} -> {back}",
                        m.family()
                    );
                }
            }
        }
    }

    #[test]
    fn factored_form_matches_effort_slope() {
        let models = [
            BreachModel::class_one(1e-4, 1.1).unwrap(),
            BreachModel::class_two(0.7).unwrap(),
            BreachModel::custom_decay(1.0, fig_profile()).unwrap(),
        ];
        for m in &models {
            let v = 0.9;
            for i in 1..40 {
                let s = 0.02 + 0.85 * i as f64 / 40.0;
                let fd = central_diff(|x| m.effort_unchecked(x, v), s, 1e-6, v);
                let (f, g) = m.marginal_factors(s, v).unwrap();
                let expected = -f / g;
                assert!(
                    (fd - expected).abs() <= 1e-6 * expected.abs(),
                    "family {:?} s {s}: fd {fd} vs {expected}",
                    m.family()
                );
            }
        }
    }

    #[test]
    fn elasticity_profile_consistent_with_effort_factor() {
        // gamma(s) must equal s g'(s)/g(s) - 1 for the reconstructed factor.
        let m = BreachModel::custom_decay(1.0, fig_profile()).unwrap();
        for i in 1..30 {
            let s = 0.03 + 0.9 * i as f64 / 30.0;
            let gs = central_diff(|x| m.effort_factor_unchecked(x), s, 1e-6, 1.0 - 1e-6);
            let g = m.effort_factor_unchecked(s);
            let implied = s * gs / g - 1.0;
            let direct = m.gamma_unchecked(s);
            assert!((implied - direct).abs() < 1e-6, "s {s}: {implied} vs {direct}");
        }
    }

    #[test]
    fn effort_factor_power_law_exponent_near_zero() {
        // g(s) ~ s^(gamma(0) + 1) as s -> 0.
        for m in [
            BreachModel::class_one(1.0, 1.25).unwrap(),
            BreachModel::class_two(1.0).unwrap(),
            BreachModel::custom_decay(1.0, fig_profile()).unwrap(),
        ] {
            let pts: Vec<(f64, f64)> = (1..=24)
                .map(|k| {
                    let s = 1e-6 * 1.5f64.powi(k);
                    (s.ln(), m.effort_factor_unchecked(s).ln())
                })
                .collect();
            let slope = crate::numerics::ls_slope(&pts);
            let expected = m.gamma_at_zero() + 1.0;
            assert!(
                (slope - expected).abs() < 0.05,
                "family {:?}: slope {slope} vs {expected}",
                m.family()
            );
        }
    }

    #[test]
    fn custom_effort_factor_anchored_at_one() {
        let m = BreachModel::custom_decay(1.0, fig_profile()).unwrap();
        let g = m.effort_factor(1.0 - 1e-12).unwrap();
        assert!((g - 1.0).abs() < 1e-9);
    }
}
