//! Composite Gauss-Legendre quadrature over level heights.
//!
//! Height integrals `∫ F(t) dt` over `(0, 1]` are mapped through
//! `t = exp(-w²)`; in the variable `w` every supported radius profile is
//! smooth, including the square-root behaviour of Gaussian level radii.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes per panel.
pub const NODES: usize = 64;
/// Cap on nodes per adaptive integration (2^14).
pub const MAX_NODES: usize = 1 << 14;
/// Target relative difference between successive refinements.
pub const REL_TOL: f64 = 1e-10;

static PANEL_CAP: AtomicUsize = AtomicUsize::new(MAX_NODES / NODES);

/// Process-wide cap on panels per adaptive integration, clamped to
/// `1..=MAX_NODES / NODES`.
pub fn set_panel_cap(panels: usize) {
    PANEL_CAP.store(panels.clamp(1, MAX_NODES / NODES), Ordering::Relaxed);
}

pub fn panel_cap() -> usize {
    PANEL_CAP.load(Ordering::Relaxed)
}

fn legendre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES))
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Fixed composite rule with `panels` equal panels on `[a, b]`.
pub fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = legendre_rule();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + h * (p as f64 + 0.5);
        let half = 0.5 * h;
        let s: f64 = x.iter().zip(w).map(|(xi, wi)| wi * f(mid + half * xi)).sum();
        total += s * half;
    }
    total
}

/// Doubles the panel count until two successive estimates agree.
///
/// Returns the estimate and the last successive difference.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_floor: f64) -> (f64, f64) {
    let cap = panel_cap();
    let mut panels = 1;
    let mut prev = composite(f, a, b, panels);
    loop {
        if panels >= cap {
            return (prev, f64::INFINITY);
        }
        panels *= 2;
        let cur = composite(f, a, b, panels);
        let diff = (cur - prev).abs();
        if diff <= REL_TOL * cur.abs() || diff <= abs_floor || panels >= cap {
            return (cur, diff);
        }
        prev = cur;
    }
}

/// `∫_{lo}^{hi} F(t) dt` for `0 <= lo < hi <= 1`.
///
/// With `lo = 0` the `w` axis is covered in doubling chunks until a chunk
/// contributes less than `1e-15` of the running total.
pub fn integrate_levels<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
        return Err(Error::InvalidInput(format!("height range [{lo}, {hi}]")));
    }
    if hi <= lo {
        return Ok(0.0);
    }
    let g = |w: f64| {
        let t = (-w * w).exp();
        if t <= 0.0 {
            return 0.0;
        }
        2.0 * w * t * f(t)
    };
    let w_hi = (-hi.ln()).max(0.0).sqrt();
    let check = |v: f64| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::DivergentIntegral("non-finite integrand".into()))
        }
    };
    if lo > 0.0 {
        let w_lo = (-lo.ln()).sqrt();
        let (v, _) = adaptive(&g, w_hi, w_lo, 0.0);
        return check(v);
    }
    let mut total: f64 = 0.0;
    let mut a = w_hi;
    let mut width = 1.0;
    let mut small = 0;
    while a < 64.0 {
        let b = a + width;
        let (v, _) = adaptive(&g, a, b, 1e-16 * total.abs());
        let v = check(v)?;
        total += v;
        if v.abs() <= 1e-15 * total.abs() {
            small += 1;
            if small >= 2 {
                return Ok(total);
            }
        } else {
            small = 0;
        }
        a = b;
        width *= 2.0;
    }
    // exp(-64²) underflows, so reaching here means the integrand kept growing
    Err(Error::DivergentIntegral("height integral did not settle".into()))
}

/// `∫_0^∞ f(x) dx` for integrands with at most exponential-type decay,
/// covered in doubling chunks; used by profile moment checks.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F) -> Result<f64> {
    let mut total: f64 = 0.0;
    let mut a = 0.0;
    let mut width = 0.5;
    let mut small = 0;
    while a < 1e6 {
        let b = a + width;
        let (v, _) = adaptive(&f, a, b, 1e-16 * total.abs());
        if !v.is_finite() {
            return Err(Error::DivergentIntegral("non-finite integrand".into()));
        }
        total += v;
        if v.abs() <= 1e-15 * total.abs() {
            small += 1;
            if small >= 2 {
                return Ok(total);
            }
        } else {
            small = 0;
        }
        a = b;
        width *= 2.0;
    }
    Err(Error::DivergentIntegral("half-line integral did not settle".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(NODES);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((m - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn log_powers() {
        // ∫_0^1 (log 1/t)^k dt = k!
        for (k, fact) in [(1, 1.0), (2, 2.0), (3, 6.0)] {
            let v = integrate_levels(|t: f64| (-t.ln()).powi(k), 0.0, 1.0).unwrap();
            assert!((v - fact).abs() < 1e-12 * fact, "{k}: {v}");
        }
        let half = integrate_levels(|t: f64| (-t.ln()).sqrt(), 0.0, 1.0).unwrap();
        assert!((half - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn partial_ranges() {
        let v = integrate_levels(|t| t, 0.25, 0.5).unwrap();
        assert!((v - (0.125 - 0.03125)).abs() < 1e-14);
    }

    #[test]
    fn divergence_is_reported() {
        assert!(integrate_levels(|t: f64| 1.0 / (t * t), 0.0, 1.0).is_err());
    }

    #[test]
    fn half_line() {
        let v = integrate_half_line(|x: f64| x * x * (-x).exp()).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }
}
