//! Shared numeric kernel: bracketing root search, golden-section optimization,
//! finite differences, and composite Simpson quadrature.
//!
//! Everything here works on plain `f64` closures. Solvers in the rest of the
//! crate only ever root-find on monotone branches or optimize unimodal
//! functions, so bracketing methods are sufficient and keep convergence
//! unconditional.

use crate::error::{Error, Result};

/// Default absolute tolerance for bisection on probability-like variables.
pub const ROOT_TOL: f64 = 1e-10;

/// Iteration cap for bisection; 200 halvings exhaust f64 resolution many times over.
pub const MAX_ITER: usize = 200;

/// Bisection on `[lo, hi]` for a continuous `f` with a sign change.
///
/// Accepts either orientation. Converges to `tol` in `x` or stops early when
/// the function value at the midpoint is exactly zero.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() {
        return Err(Error::RootSearch { lo, hi, reason: "NaN at bracket endpoint" });
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootSearch { lo, hi, reason: "no sign change over bracket" });
    }
    let mut iters = 0;
    while hi - lo > tol && iters < MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection that stops on the function value instead of the interval width.
///
/// Used to invert monotone maps self-consistently: the returned `x` satisfies
/// `|f(x)| <= f_tol` whenever the bracket admits it, so a round trip through
/// the forward map reproduces the target to `f_tol` regardless of how
/// accurately `f` itself is computed.
pub fn bisect_to_value<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, f_tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo);
    let fhi = f(hi);
    if flo.abs() <= f_tol {
        return Ok(lo);
    }
    if fhi.abs() <= f_tol {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootSearch { lo, hi, reason: "no sign change over bracket" });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= f_tol || (hi - lo) < f64::EPSILON * (1.0 + mid.abs()) {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
///
/// Returns `(argmax, max)`. For non-unimodal inputs it still converges, to a
/// local maximum inside the bracket.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Step size for central differences at `x`: `max(1e-6, 1e-4 * |x|)`.
pub fn fd_step(x: f64) -> f64 {
    (1e-4 * x.abs()).max(1e-6)
}

/// Central first difference with the default step, clamped so both probe
/// points stay inside `(lo, hi)`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, lo: f64, hi: f64) -> f64 {
    let mut h = fd_step(x);
    let room = (x - lo).min(hi - x);
    if room < h {
        h = 0.5 * room;
    }
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Composite Simpson quadrature of `f` over `[a, b]` with `2 * half_panels` panels.
///
/// `panels` is rounded up to the next even count. Exact for cubics per panel.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Sorted scan grid on `[lo, hi]` mixing uniform coverage with geometric
/// clusters at both endpoints, for sign-scanning functions that only move
/// near a boundary.
pub fn edge_weighted_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(8);
    let span = hi - lo;
    let mut pts = Vec::with_capacity(n + 2);
    let interior = n / 2;
    for i in 0..=interior {
        pts.push(lo + span * i as f64 / interior as f64);
    }
    // Geometric offsets reaching from each endpoint toward the middle.
    let cluster = n / 4;
    let ratio = (0.5f64).ln() - (1e-12f64).ln();
    for i in 0..cluster {
        let t = i as f64 / cluster as f64;
        let off = span * (1e-12f64.ln() + ratio * t).exp();
        pts.push(lo + off);
        pts.push(hi - off);
    }
    pts.retain(|x| *x >= lo && *x <= hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// Least-squares slope of `y` against `x`.
///
/// Used to estimate power-law exponents from (log x, log y) samples.
pub fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in points {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 2.0f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn bisect_accepts_descending_orientation() {
        let r = bisect(|x| 1.0 - x, 0.0, 3.0, 1e-12).unwrap();
        assert!((r - 1.0).abs() < 1e-11);
    }

    #[test]
    fn bisect_to_value_hits_function_tolerance() {
        let f = |x: f64| x.exp() - 5.0;
        let r = bisect_to_value(f, 0.0, 3.0, 1e-13).unwrap();
        assert!(f(r).abs() <= 1e-13);
    }

    #[test]
    fn golden_max_peak_of_parabola() {
        // Position is limited by the comparison noise plateau around a flat
        // peak, roughly sqrt(ulp) of the function scale. The value itself is
        // second-order accurate.
        let (x, fx) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 7.0, 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 5e-7);
        assert!((fx - 7.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_integrates_cubic_exactly() {
        let v = simpson(|x| x * x * x, 0.0, 2.0, 8);
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_empty_interval_is_zero() {
        assert_eq!(simpson(|x| x, 1.5, 1.5, 512), 0.0);
    }

    #[test]
    fn edge_grid_is_sorted_and_clustered() {
        let g = edge_weighted_grid(0.0, 1.0, 64);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.first().copied().unwrap() <= 1e-10);
        assert!(*g.last().unwrap() >= 1.0 - 1e-12);
        // Denser near the endpoints than in the middle.
        assert!(g[1] - g[0] < 1e-6);
    }

    #[test]
    fn slope_of_line_recovered() {
        let pts: Vec<(f64, f64)> = (1..40).map(|i| (i as f64, 3.5 * i as f64 - 2.0)).collect();
        assert!((ls_slope(&pts) - 3.5).abs() < 1e-12);
    }
}
