//! Decreasing radial profiles `h : [0, ∞) -> [0, 1]` with `h(0) = 1`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `e^{-c r}`
    Exp { c: f64 },
    /// `e^{-c r²}`
    Gaussian { c: f64 },
    /// `e^{-c r^p}`, `p > 0`
    PowerExp { c: f64, p: f64 },
    /// `(1 + r/s)^{-a}`
    PowerLaw { a: f64, s: f64 },
    /// Piecewise linear through `(knots[i], values[i])`, zero past the last knot.
    Table { knots: Vec<f64>, values: Vec<f64> },
    /// `1` on `[0, radius]`, `0` beyond.
    Indicator { radius: f64 },
    /// Level radii add: `r(t) = Σ r_i(t)`.
    Sum { terms: Vec<Profile> },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {v}")))
    }
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::Exp { c } | Profile::Gaussian { c } => positive("c", *c),
            Profile::PowerExp { c, p } => {
                positive("c", *c)?;
                positive("p", *p)
            }
            Profile::PowerLaw { a, s } => {
                positive("s", *s)?;
                if *a > 2.0 && a.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!("power-law exponent must exceed 2, got {a}")))
                }
            }
            Profile::Indicator { radius } => positive("radius", *radius),
            Profile::Table { knots, values } => {
                let ok = knots.len() >= 2
                    && knots.len() == values.len()
                    && knots[0] == 0.0
                    && values[0] == 1.0
                    && *values.last().unwrap() == 0.0
                    && knots.windows(2).all(|w| w[1] > w[0])
                    && values.windows(2).all(|w| w[1] <= w[0])
                    && values.iter().all(|v| (0.0..=1.0).contains(v))
                    && knots.iter().all(|k| k.is_finite());
                if ok {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(
                        "table needs increasing knots from 0 and nonincreasing values from 1 to 0".into(),
                    ))
                }
            }
            Profile::Sum { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidInput("empty profile sum".into()));
                }
                terms.iter().try_for_each(Profile::validate)
            }
        }
    }

    /// `h(r)`.
    pub fn height(&self, r: f64) -> f64 {
        let r = r.max(0.0);
        match self {
            Profile::Exp { c } => (-c * r).exp(),
            Profile::Gaussian { c } => (-c * r * r).exp(),
            Profile::PowerExp { c, p } => (-c * r.powf(*p)).exp(),
            Profile::PowerLaw { a, s } => (1.0 + r / s).powf(-a),
            Profile::Indicator { radius } => {
                if r <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Table { knots, values } => {
                let k = knots.partition_point(|&x| x <= r);
                if k >= knots.len() {
                    return 0.0;
                }
                let (x0, x1) = (knots[k - 1], knots[k]);
                let (y0, y1) = (values[k - 1], values[k]);
                y0 + (y1 - y0) * (r - x0) / (x1 - x0)
            }
            Profile::Sum { .. } => {
                // sup{t : r(t) >= r}, by bisection on log t
                if self.radius(1.0) >= r {
                    return 1.0;
                }
                let (mut lo, mut hi) = (-745.0f64, 0.0f64);
                if self.radius(lo.exp()) < r {
                    return 0.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.radius(mid.exp()) >= r {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo.exp()
            }
        }
    }

    /// Level radius `r(t) = max{r : h(r) >= t}` for `t` in `(0, 1]`.
    pub fn radius(&self, t: f64) -> f64 {
        let l = -t.ln();
        match self {
            Profile::Exp { c } => l / c,
            Profile::Gaussian { c } => (l / c).sqrt(),
            Profile::PowerExp { c, p } => (l / c).powf(1.0 / p),
            Profile::PowerLaw { a, s } => s * (t.powf(-1.0 / a) - 1.0),
            Profile::Indicator { radius } => *radius,
            Profile::Table { knots, values } => {
                let last = values.iter().rposition(|&v| v >= t).unwrap_or(0);
                if last + 1 >= values.len() {
                    return knots[last];
                }
                let (v0, v1) = (values[last], values[last + 1]);
                knots[last] + (v0 - t) / (v0 - v1) * (knots[last + 1] - knots[last])
            }
            Profile::Sum { terms } => terms.iter().map(|p| p.radius(t)).sum(),
        }
    }

    /// `∫_0^1 r(t)^j dt` in closed form where one is known.
    pub fn level_moment_closed(&self, j: f64) -> Option<f64> {
        if j == 0.0 {
            return Some(1.0);
        }
        match self {
            Profile::Exp { c } => Some(gamma(j + 1.0) / c.powf(j)),
            Profile::Gaussian { c } => Some(gamma(j / 2.0 + 1.0) / c.powf(j / 2.0)),
            Profile::PowerExp { c, p } => Some(gamma(j / p + 1.0) / c.powf(j / p)),
            Profile::PowerLaw { a, s } => {
                if *a > j {
                    Some(s.powf(j) * gamma(j + 1.0) * gamma(a - j) / gamma(*a))
                } else {
                    None
                }
            }
            Profile::Indicator { radius } => Some(radius.powf(j)),
            _ => None,
        }
    }

    /// `∫_0^1 r(t)^j dt` by quadrature over heights.
    pub fn level_moment_quadrature(&self, j: f64) -> Result<f64> {
        if let Profile::PowerLaw { a, .. } = self {
            if *a <= j {
                return Err(Error::DivergentIntegral(format!(
                    "power-law tail with exponent {a} is not integrable against r^{j}"
                )));
            }
        }
        quadrature::integrate_levels(|t| self.radius(t).powf(j), 0.0, 1.0)
    }

    /// `∫_0^1 r(t)^j dt`, closed form first.
    pub fn level_moment(&self, j: f64) -> Result<f64> {
        if let Profile::PowerLaw { a, .. } = self {
            if *a <= j {
                return Err(Error::DivergentIntegral(format!(
                    "power-law tail with exponent {a} is not integrable against r^{j}"
                )));
            }
        }
        match self.level_moment_closed(j) {
            Some(v) => Ok(v),
            None => self.level_moment_quadrature(j),
        }
    }

    /// `∫_0^∞ x^p h(x) dx` for `p > -1`.
    pub fn moment(&self, p: f64) -> Result<f64> {
        if p <= -1.0 {
            return Err(Error::InvalidInput(format!("moment order {p} must exceed -1")));
        }
        // layer cake: ∫_0^1 r(t)^{p+1} dt = (p+1) ∫_0^∞ x^p h(x) dx
        Ok(self.level_moment(p + 1.0)? / (p + 1.0))
    }

    /// Whether `log h` is concave.
    pub fn is_log_concave(&self) -> bool {
        match self {
            Profile::Exp { .. } | Profile::Gaussian { .. } | Profile::Indicator { .. } => true,
            Profile::PowerExp { p, .. } => *p >= 1.0,
            Profile::PowerLaw { .. } => false,
            Profile::Table { knots, values } => {
                // linear pieces have concave logarithms; the kinks must bend down
                let slopes: Vec<f64> = knots
                    .windows(2)
                    .zip(values.windows(2))
                    .map(|(k, v)| (v[1] - v[0]) / (k[1] - k[0]))
                    .collect();
                slopes.windows(2).all(|s| s[1] <= s[0] + 1e-15)
            }
            // r(e^{-L}) concave in L is preserved under sums
            Profile::Sum { terms } => terms.iter().all(Profile::is_log_concave),
        }
    }

    /// Continuous, strictly decreasing and vanishing at infinity, so that
    /// level radii sweep all of `[0, ∞)`.
    pub fn is_regular(&self) -> bool {
        match self {
            Profile::Exp { .. }
            | Profile::Gaussian { .. }
            | Profile::PowerExp { .. }
            | Profile::PowerLaw { .. } => true,
            Profile::Table { .. } | Profile::Indicator { .. } => false,
            Profile::Sum { terms } => terms.iter().all(Profile::is_regular),
        }
    }

    /// Profile with every level radius multiplied by `rho > 0`.
    pub fn dilate(&self, rho: f64) -> Profile {
        match self {
            Profile::Exp { c } => Profile::Exp { c: c / rho },
            Profile::Gaussian { c } => Profile::Gaussian { c: c / (rho * rho) },
            Profile::PowerExp { c, p } => Profile::PowerExp {
                c: c / rho.powf(*p),
                p: *p,
            },
            Profile::PowerLaw { a, s } => Profile::PowerLaw { a: *a, s: s * rho },
            Profile::Table { knots, values } => Profile::Table {
                knots: knots.iter().map(|k| k * rho).collect(),
                values: values.clone(),
            },
            Profile::Indicator { radius } => Profile::Indicator { radius: radius * rho },
            Profile::Sum { terms } => Profile::Sum {
                terms: terms.iter().map(|p| p.dilate(rho)).collect(),
            },
        }
    }

    /// Adds level radii, flattening nested sums.
    pub fn sum(a: &Profile, b: &Profile) -> Profile {
        let mut terms = Vec::new();
        for p in [a, b] {
            match p {
                Profile::Sum { terms: t } => terms.extend(t.iter().cloned()),
                other => terms.push(other.clone()),
            }
        }
        Profile::Sum { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all() -> Vec<Profile> {
        vec![
            Profile::Exp { c: 1.3 },
            Profile::Gaussian { c: 0.7 },
            Profile::PowerExp { c: 2.0, p: 1.5 },
            Profile::PowerLaw { a: 3.5, s: 1.2 },
            Profile::Table {
                knots: vec![0.0, 0.5, 1.0, 2.0],
                values: vec![1.0, 1.0, 0.4, 0.0],
            },
            Profile::Indicator { radius: 0.8 },
            Profile::Sum {
                terms: vec![Profile::Exp { c: 1.0 }, Profile::Gaussian { c: 2.0 }],
            },
        ]
    }

    #[test]
    fn radius_inverts_height() {
        for p in all() {
            p.validate().unwrap();
            for &t in &[0.9, 0.5, 0.1, 0.01] {
                let r = p.radius(t);
                assert!(p.height(r) >= t - 1e-9, "{p:?} at {t}");
                assert!(p.height(r + 1e-6) < t || matches!(p, Profile::Indicator { .. }), "{p:?} at {t}");
            }
        }
    }

    #[test]
    fn plateau_takes_largest_radius() {
        let p = Profile::Table {
            knots: vec![0.0, 0.5, 1.0],
            values: vec![1.0, 1.0, 0.0],
        };
        assert_eq!(p.radius(1.0), 0.5);
        assert_eq!(Profile::Exp { c: 1.0 }.radius(1.0), 0.0);
    }

    #[test]
    fn closed_moments_match_quadrature() {
        for p in all() {
            for j in [1.0, 2.0, 3.0] {
                if let Some(c) = p.level_moment_closed(j) {
                    let q = p.level_moment_quadrature(j).unwrap();
                    assert!((c - q).abs() < 1e-9 * c, "{p:?} j={j}: {c} vs {q}");
                }
            }
        }
    }

    #[test]
    fn exponential_moments_are_gamma() {
        let p = Profile::Exp { c: 1.0 };
        for q in [0.0, 0.5, 1.0, 2.0, 5.0] {
            assert!((p.moment(q).unwrap() / gamma(q + 1.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn log_concavity_flags() {
        assert!(Profile::Exp { c: 1.0 }.is_log_concave());
        assert!(!Profile::PowerLaw { a: 3.0, s: 1.0 }.is_log_concave());
        assert!(!Profile::PowerExp { c: 1.0, p: 0.5 }.is_log_concave());
        let convex_kink = Profile::Table {
            knots: vec![0.0, 1.0, 2.0],
            values: vec![1.0, 0.2, 0.0],
        };
        assert!(!convex_kink.is_log_concave());
    }

    #[test]
    fn dilation_scales_radii() {
        for p in all() {
            let d = p.dilate(1.7);
            for &t in &[0.8, 0.3, 0.05] {
                assert!((d.radius(t) - 1.7 * p.radius(t)).abs() < 1e-12 * (1.0 + p.radius(t)));
            }
        }
    }

    #[test]
    fn divergent_tail() {
        let p = Profile::PowerLaw { a: 2.5, s: 1.0 };
        assert!(matches!(p.level_moment(3.0), Err(Error::DivergentIntegral(_))));
    }
}
