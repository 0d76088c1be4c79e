//! Self-consistent vulnerabilities and the decision-interval partition.
//!
//! A vulnerability `x` is a fixed point when the interior stationary point
//! of the defender objective lands exactly on it: `s1(x) = x`, equivalently
//! `D(x) f(x) = R`. Fixed points split `(0, 1)` into bands with a constant
//! decision-interval label, which is what turns one scalar sweep into a
//! policy menu. This module locates the fixed points, counts them per model
//! family, finds the largest cost ratio that still admits one, and builds
//! the labelled partition.

use crate::defender::{universal_xi, universal_xi_slope, DecisionInterval, Scenario};
use crate::error::{Error, Result};
use crate::model::{AssumptionCheck, AssumptionReport, BreachFamily};
use crate::numerics::{bisect, edge_weighted_grid, golden_max, ROOT_TOL};

/// Domain edges for probability-valued searches in this module.
const EDGE: f64 = 1e-9;

/// Two fixed points closer than this merge into one tangent root.
const MERGE_TOL: f64 = 1e-6;

/// Relative closeness to zero (scaled by `1 + R`) at which a sign-preserving
/// near miss counts as a tangency.
const TANGENT_TOL: f64 = 1e-9;

/// Location and height of the peak of [`universal_xi`], found from its
/// analytic slope.
pub fn xi_peak() -> (f64, f64) {
    let s = bisect(universal_xi_slope, EDGE, 1.0 - EDGE, ROOT_TOL)
        .expect("the universal profile has one interior peak");
    (s, universal_xi(s))
}

/// Cost ratio at which `x` would be a fixed point: `D(x) f(x)`.
pub fn ratio_at(scenario: &Scenario, x: f64) -> Result<f64> {
    Ok(scenario.gradient_function(x)? * scenario.model().vuln_factor(x)?)
}

/// Number of fixed points a scenario admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointCount {
    None,
    One,
    Two,
}

/// Fixed-point count for a power-family model, from the closed-form
/// reduction: fixed points solve `xi(x) = R alpha beta` above the profile
/// peak `s_hat`.
///
/// Levels above the peak of `xi` admit none; levels between `xi(s_hat)` and
/// the peak admit two; lower levels cross only the falling side, one.
/// Boundary levels resolve to the tangent count of one.
pub fn fixed_point_count_class1(scenario: &Scenario) -> Result<FixedPointCount> {
    let model = scenario.model();
    if model.family() != BreachFamily::ClassOne {
        return Err(Error::WrongFamily { expected: "power-law breach family" });
    }
    let level = scenario.cost_ratio() * model.alpha() * model.beta();
    let (_, xi_hat) = xi_peak();
    let shape = scenario.gradient_shape()?;
    let left = if shape.s_hat > 0.0 { universal_xi(shape.s_hat) } else { 0.0 };
    Ok(if level > xi_hat {
        FixedPointCount::None
    } else if level > left && level < xi_hat {
        FixedPointCount::Two
    } else {
        FixedPointCount::One
    })
}

/// Fixed-point count for a log-family model: fixed points solve
/// `xi(x) / (-ln x) = alpha R` above the universal peak, and that quotient
/// climbs from its floor there toward infinity, so the count is zero or one.
pub fn fixed_point_count_class2(scenario: &Scenario) -> Result<FixedPointCount> {
    let model = scenario.model();
    if model.family() != BreachFamily::ClassTwo {
        return Err(Error::WrongFamily { expected: "log-law breach family" });
    }
    let level = scenario.cost_ratio() * model.alpha();
    let (s_peak, xi_hat) = xi_peak();
    let floor = xi_hat / (-s_peak.ln());
    Ok(if level < floor { FixedPointCount::None } else { FixedPointCount::One })
}

/// Largest cost ratio that still admits a fixed point.
#[derive(Debug, Clone, Copy)]
pub struct CriticalRatio {
    pub ratio: f64,
    /// Vulnerability attaining it.
    pub at: f64,
    /// True when the maximum sits on the clamped edge of the search domain
    /// rather than at an interior peak (log-family models diverge toward 1).
    pub boundary: bool,
}

/// Maximize `D(x) f(x)` over the falling branch `(s_hat, 1)`, clamped to
/// the working probability window.
pub fn critical_ratio(scenario: &Scenario) -> Result<CriticalRatio> {
    let shape = scenario.gradient_shape()?;
    let lo = shape.s_hat.max(EDGE);
    let hi = 1.0 - EDGE;
    let grid = edge_weighted_grid(lo, hi, 2048);
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &x) in grid.iter().enumerate() {
        let r = ratio_at(scenario, x)?;
        if r > best.1 {
            best = (i, r);
        }
    }
    let (i, coarse) = best;
    if i == 0 || i == grid.len() - 1 {
        return Ok(CriticalRatio { ratio: coarse, at: grid[i], boundary: true });
    }
    let probe = |x: f64| ratio_at(scenario, x).unwrap_or(f64::NEG_INFINITY);
    let (at, ratio) = golden_max(probe, grid[i - 1], grid[i + 1], ROOT_TOL);
    Ok(CriticalRatio { ratio, at, boundary: false })
}

/// One band of the vulnerability partition.
#[derive(Debug, Clone, Copy)]
pub struct PartitionCell {
    pub lo: f64,
    pub hi: f64,
    pub interval: DecisionInterval,
    /// Whether the interior stationary point sits above the vulnerability
    /// across this band; absent when no stationary point exists.
    pub s1_above_v: Option<bool>,
}

/// Full fixed-point analysis of one scenario.
#[derive(Debug, Clone)]
pub struct FixedPointReport {
    /// Peak of the stationarity profile.
    pub s_hat: f64,
    /// Vulnerability threshold below which no stationary point exists.
    pub v_hat: f64,
    /// Fixed points in ascending order.
    pub roots: Vec<f64>,
    /// True when two roots merged, or a sign-preserving near miss was close
    /// enough to count as a tangency.
    pub tangent: bool,
    pub critical: CriticalRatio,
    /// Bands of `(0, 1)` cut at `v_hat` and the roots, each probed at its
    /// midpoint.
    pub partition: Vec<PartitionCell>,
}

/// Locate all fixed points and build the labelled vulnerability partition.
pub fn solve_fpe(scenario: &Scenario) -> Result<FixedPointReport> {
    let shape = scenario.gradient_shape()?;
    let threshold = scenario.v_hat()?;
    let r = scenario.cost_ratio();
    let lo = (shape.s_hat + EDGE).max(EDGE);
    let hi = 1.0 - EDGE;

    let grid = edge_weighted_grid(lo, hi, 4096);
    let gap: Vec<f64> = grid
        .iter()
        .map(|&x| ratio_at(scenario, x).map(|q| q - r))
        .collect::<Result<_>>()?;

    let mut roots = Vec::new();
    for i in 0..grid.len() - 1 {
        if gap[i] == 0.0 {
            roots.push(grid[i]);
        } else if gap[i] * gap[i + 1] < 0.0 {
            let root = bisect(
                |x| ratio_at(scenario, x).unwrap_or(f64::NAN) - r,
                grid[i],
                grid[i + 1],
                ROOT_TOL,
            )?;
            roots.push(root);
        }
    }
    if *gap.last().unwrap() == 0.0 {
        roots.push(hi);
    }

    let mut tangent = false;
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|b, a| {
        let merge = (*b - *a).abs() < MERGE_TOL;
        if merge {
            tangent = true;
            *a = 0.5 * (*a + *b);
        }
        merge
    });

    if roots.is_empty() {
        // The level may graze the curve without a sign change. Refine the
        // closest approach and accept it as a tangent root when the gap is
        // negligible against the ratio's scale.
        let j = (0..grid.len())
            .min_by(|&a, &b| gap[a].abs().partial_cmp(&gap[b].abs()).unwrap())
            .unwrap();
        let a = grid[j.saturating_sub(1)];
        let b = grid[(j + 1).min(grid.len() - 1)];
        let (x, neg_gap) =
            golden_max(|x| -(ratio_at(scenario, x).unwrap_or(f64::NAN) - r).abs(), a, b, ROOT_TOL);
        if -neg_gap <= TANGENT_TOL * (1.0 + r.abs()) {
            roots.push(x);
            tangent = true;
        }
    }

    let mut bounds = Vec::new();
    if threshold.v_hat > 0.0 && threshold.v_hat < 1.0 {
        bounds.push(threshold.v_hat);
    }
    bounds.extend(roots.iter().copied());
    bounds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bounds.dedup_by(|b, a| (*b - *a).abs() < 1e-9);

    let mut partition = Vec::new();
    let mut left = 0.0;
    for bound in bounds.iter().copied().chain(std::iter::once(1.0)) {
        let mid = 0.5 * (left + bound);
        let sol = scenario.solve_defender(mid)?;
        partition.push(PartitionCell {
            lo: left,
            hi: bound,
            interval: sol.interval,
            s1_above_v: sol.s1.map(|s1| s1 > mid),
        });
        left = bound;
    }

    Ok(FixedPointReport {
        s_hat: shape.s_hat,
        v_hat: threshold.v_hat,
        roots,
        tangent,
        critical: critical_ratio(scenario)?,
        partition,
    })
}

/// Structural invariants tying the profile peak, the stationarity threshold
/// and the fixed points together. Checks whose precondition does not hold
/// pass vacuously with a zero margin.
pub fn invariant_report(scenario: &Scenario) -> Result<AssumptionReport> {
    let shape = scenario.gradient_shape()?;
    let (s_peak, _) = xi_peak();
    let report = solve_fpe(scenario)?;
    let mut checks = Vec::new();

    // The profile peak always sits left of the universal peak: the slope of
    // xi at s_hat must match gamma(s_hat) xi(s_hat) / s_hat, which is
    // nonnegative there.
    let margin = s_peak - shape.s_hat;
    checks.push(AssumptionCheck {
        name: "peak-left-of-universal",
        passed: margin >= 0.0,
        worst: margin,
        at: (shape.s_hat, s_peak),
    });

    if shape.s_hat > 0.0 && shape.d_hat.is_finite() {
        let xi = universal_xi(shape.s_hat);
        let slope = universal_xi_slope(shape.s_hat);
        let gamma = scenario.model().gamma(shape.s_hat)?;
        let residual = (slope * shape.s_hat - gamma * xi).abs() / xi;
        checks.push(AssumptionCheck {
            name: "peak-slope-identity",
            passed: residual <= 1e-6,
            worst: 1e-6 - residual,
            at: (shape.s_hat, 0.0),
        });
    } else {
        checks.push(vacuous("peak-slope-identity"));
    }

    // Above the ratio attained at the peak itself, the stationarity
    // threshold moves past the peak.
    if shape.s_hat > 0.0 && shape.d_hat.is_finite() {
        let at_peak = ratio_at(scenario, shape.s_hat)?;
        if scenario.cost_ratio() > at_peak && !report.roots.is_empty() {
            let margin = report.v_hat - shape.s_hat;
            checks.push(AssumptionCheck {
                name: "threshold-after-peak",
                passed: margin > 0.0,
                worst: margin,
                at: (shape.s_hat, report.v_hat),
            });
        } else {
            checks.push(vacuous("threshold-after-peak"));
        }
    } else {
        checks.push(vacuous("threshold-after-peak"));
    }

    if report.roots.len() == 2 {
        let margin = (s_peak - report.roots[0]).min(report.roots[1] - s_peak);
        checks.push(AssumptionCheck {
            name: "roots-bracket-universal-peak",
            passed: margin > 0.0,
            worst: margin,
            at: (report.roots[0], report.roots[1]),
        });
    } else {
        checks.push(vacuous("roots-bracket-universal-peak"));
    }

    if let Some(&first) = report.roots.first() {
        let margin = first - report.v_hat;
        checks.push(AssumptionCheck {
            name: "threshold-below-roots",
            passed: margin >= -1e-9,
            worst: margin,
            at: (report.v_hat, first),
        });
    } else {
        checks.push(vacuous("threshold-below-roots"));
    }

    Ok(AssumptionReport { checks })
}

fn vacuous(name: &'static str) -> AssumptionCheck {
    AssumptionCheck { name, passed: true, worst: 0.0, at: (0.0, 0.0) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacker::AttackerParams;
    use crate::defender::DefenderParams;
    use crate::model::BreachModel;

    fn power_scenario(loss: f64) -> Scenario {
        Scenario::new(
            BreachModel::class_one(1e-4, 1.1).unwrap(),
            AttackerParams::new(70_000.0, 3_500.0).unwrap(),
            DefenderParams::new(loss, 1.0).unwrap(),
        )
    }

    fn log_scenario(loss: f64) -> Scenario {
        Scenario::new(
            BreachModel::class_two(1.0).unwrap(),
            AttackerParams::new(1_000.0, 100.0).unwrap(),
            DefenderParams::new(loss, 100.0).unwrap(),
        )
    }

    #[test]
    fn universal_peak_constants() {
        let (s, x) = xi_peak();
        assert!((s - 0.79681213002002).abs() < 1e-9, "peak at {s}");
        assert!((x - 0.6476102378919149).abs() < 1e-12, "height {x}");
        let floor = x / (-s.ln());
        assert!((floor - 2.851195942777054).abs() < 1e-9, "existence floor {floor}");
    }

    #[test]
    fn power_family_fixed_points_and_partition() {
        let report = solve_fpe(&power_scenario(100_000.0)).unwrap();
        assert_eq!(report.roots.len(), 2, "roots: {:?}", report.roots);
        assert!((report.roots[0] - 0.5867341954447021).abs() < 1e-8);
        assert!((report.roots[1] - 0.9222607749794637).abs() < 1e-8);
        assert!(!report.tangent);
        assert!((report.v_hat - 0.5796659430814738).abs() < 1e-8);

        assert!(!report.critical.boundary);
        assert!((report.critical.ratio - 5887.365799017408).abs() < 1e-6 * 5887.0);
        assert!((report.critical.at - 0.79681213002002).abs() < 1e-7);

        let labels: Vec<_> = report.partition.iter().map(|c| c.interval).collect();
        assert_eq!(
            labels,
            [
                DecisionInterval::DI1,
                DecisionInterval::DI3,
                DecisionInterval::DI2,
                DecisionInterval::DI3
            ]
        );
        let above: Vec<_> = report.partition.iter().map(|c| c.s1_above_v).collect();
        assert_eq!(above, [None, Some(false), Some(true), Some(false)]);
        assert!((report.partition[1].lo - report.v_hat).abs() < 1e-12);
        assert!((report.partition[2].lo - report.roots[0]).abs() < 1e-12);
        assert!((report.partition[3].lo - report.roots[1]).abs() < 1e-12);
        assert_eq!(report.partition[3].hi, 1.0);
    }

    #[test]
    fn power_family_count_transitions() {
        assert_eq!(
            fixed_point_count_class1(&power_scenario(100_000.0)).unwrap(),
            FixedPointCount::Two
        );
        assert_eq!(
            fixed_point_count_class1(&power_scenario(120_000.0)).unwrap(),
            FixedPointCount::None
        );
        assert_eq!(
            fixed_point_count_class1(&power_scenario(80_000.0)).unwrap(),
            FixedPointCount::One
        );
    }

    #[test]
    fn single_root_when_level_undercuts_the_peak() {
        let report = solve_fpe(&power_scenario(80_000.0)).unwrap();
        assert_eq!(report.roots.len(), 1, "roots: {:?}", report.roots);
        assert!((report.roots[0] - 0.9581339227541008).abs() < 1e-8);
        let labels: Vec<_> = report.partition.iter().map(|c| c.interval).collect();
        assert_eq!(
            labels,
            [DecisionInterval::DI1, DecisionInterval::DI2, DecisionInterval::DI3]
        );
    }

    #[test]
    fn log_family_counts_and_root() {
        assert_eq!(fixed_point_count_class2(&log_scenario(1_000.0)).unwrap(), FixedPointCount::None);
        let busy = log_scenario(3_500.0);
        assert_eq!(fixed_point_count_class2(&busy).unwrap(), FixedPointCount::One);

        let report = solve_fpe(&busy).unwrap();
        assert_eq!(report.roots.len(), 1, "roots: {:?}", report.roots);
        assert!((report.roots[0] - 0.8323153804735281).abs() < 1e-8);
        assert!((report.v_hat - 0.8310781073545872).abs() < 1e-8);
        let labels: Vec<_> = report.partition.iter().map(|c| c.interval).collect();
        assert_eq!(
            labels,
            [DecisionInterval::DI1, DecisionInterval::DI3, DecisionInterval::DI2]
        );
    }

    #[test]
    fn log_family_critical_ratio_is_clamped() {
        let crit = critical_ratio(&log_scenario(1_000.0)).unwrap();
        assert!(crit.boundary);
        assert!(crit.at > 1.0 - 2e-9);
        assert!((crit.ratio - 429.45374716347711).abs() < 1e-6 * 429.0);
    }

    #[test]
    fn counts_reject_the_wrong_family() {
        assert!(matches!(
            fixed_point_count_class1(&log_scenario(1_000.0)),
            Err(Error::WrongFamily { .. })
        ));
        assert!(matches!(
            fixed_point_count_class2(&power_scenario(100_000.0)),
            Err(Error::WrongFamily { .. })
        ));
    }

    #[test]
    fn grazing_level_reports_a_tangent_root() {
        let rc = 5887.365799017408;
        let shaved = Scenario::new(
            BreachModel::class_one(1e-4, 1.1).unwrap(),
            AttackerParams::new(1.0, 1.0).unwrap(),
            DefenderParams::new(rc * (1.0 + 1e-12), 1.0).unwrap(),
        );
        let report = solve_fpe(&shaved).unwrap();
        assert!(report.tangent);
        assert_eq!(report.roots.len(), 1);
        assert!((report.roots[0] - 0.79681213002002).abs() < 1e-3);

        let clear_miss = Scenario::new(
            BreachModel::class_one(1e-4, 1.1).unwrap(),
            AttackerParams::new(1.0, 1.0).unwrap(),
            DefenderParams::new(rc * (1.0 + 1e-4), 1.0).unwrap(),
        );
        let report = solve_fpe(&clear_miss).unwrap();
        assert!(!report.tangent);
        assert!(report.roots.is_empty());

        let just_below = Scenario::new(
            BreachModel::class_one(1e-4, 1.1).unwrap(),
            AttackerParams::new(1.0, 1.0).unwrap(),
            DefenderParams::new(rc * (1.0 - 1e-6), 1.0).unwrap(),
        );
        let report = solve_fpe(&just_below).unwrap();
        assert!(!report.tangent);
        assert_eq!(report.roots.len(), 2);
        assert!(report.roots[0] < 0.79681213002002 && 0.79681213002002 < report.roots[1]);
        assert!(report.roots[1] - report.roots[0] < 3e-3);
    }

    #[test]
    fn invariants_hold_across_families() {
        for sc in [power_scenario(100_000.0), power_scenario(80_000.0), log_scenario(3_500.0)] {
            let report = invariant_report(&sc).unwrap();
            for check in &report.checks {
                assert!(check.passed, "{} failed: worst {}", check.name, check.worst);
            }
        }
        let steep = Scenario::new(
            BreachModel::class_one(1e-4, 0.8).unwrap(),
            AttackerParams::new(70_000.0, 3_500.0).unwrap(),
            DefenderParams::new(100_000.0, 1.0).unwrap(),
        );
        assert!(invariant_report(&steep).unwrap().all_passed());
    }
}
