//! Brute-force sup-min convolution on an origin-centred lattice.
//!
//! `(f ⊕ g)(x) = sup_y min{f(y), g(x - y)}` is sampled with `y` and `x - y`
//! restricted to lattice points. This is the independent oracle for
//! [`super::oplus`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LevelStack, QCFunction};
use crate::convex_bodies::{self, minkowski_sum, ConvexBody, Point};
use crate::error::{Error, Result};

/// Default number of lattice points per axis.
pub const DEFAULT_POINTS: usize = 41;
/// Bounding boxes are inflated by this factor.
pub const INFLATION: f64 = 1.1;

/// `points` equally spaced coordinates on `[-half_width, half_width]` per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub dim: usize,
    pub half_width: f64,
    pub points: usize,
}

impl Lattice {
    pub fn new(dim: usize, half_width: f64, points: usize) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points < 3 || points % 2 == 0 {
            return Err(Error::GridTooCoarse(format!(
                "need an odd number of at least 3 points per axis, got {points}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::GridTooCoarse(format!("half width {half_width}")));
        }
        Ok(Lattice {
            dim,
            half_width,
            points,
        })
    }

    /// Lattice over the inflated box holding the supports of `f`, `g` and `f ⊕ g`.
    pub fn covering(f: &QCFunction, g: &QCFunction, points: usize) -> Result<Self> {
        Self::new(f.dim(), INFLATION * (f.extent() + g.extent()), points)
    }

    fn half(&self) -> usize {
        (self.points - 1) / 2
    }

    pub fn step(&self) -> f64 {
        self.half_width / self.half() as f64
    }

    /// Half the cell diagonal: every point of the box lies this close to the lattice.
    pub fn cover_radius(&self) -> f64 {
        0.5 * self.step() * (self.dim as f64).sqrt()
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed per-axis offsets from the centre for a flat index.
    fn offsets(&self, flat: usize) -> [i64; 2] {
        let h = self.half() as i64;
        let p = self.points;
        match self.dim {
            1 => [flat as i64 - h, 0],
            _ => [(flat / p) as i64 - h, (flat % p) as i64 - h],
        }
    }

    pub fn coords(&self, flat: usize) -> Point {
        let o = self.offsets(flat);
        let s = self.step();
        let mut x = [0.0; 3];
        for i in 0..self.dim {
            x[i] = o[i] as f64 * s;
        }
        x
    }
}

/// Values of a function at every lattice point, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledField {
    pub lattice: Lattice,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn sample<F: Fn(&[f64]) -> f64 + Sync>(lattice: Lattice, f: F) -> Self {
        let values = (0..lattice.len())
            .into_par_iter()
            .map(|i| f(&lattice.coords(i)[..lattice.dim]))
            .collect();
        SampledField { lattice, values }
    }

    pub fn max_abs_diff(&self, other: &SampledField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Sup-min convolution of two sampled functions; `x - y` runs over the
/// doubled lattice so no difference is ever clipped.
pub fn sup_min_closure<F, G>(lattice: Lattice, f: F, g: G) -> SampledField
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> f64 + Sync,
{
    let fv = SampledField::sample(lattice, &f).values;
    let h = lattice.half() as i64;
    let wide = Lattice {
        dim: lattice.dim,
        half_width: 2.0 * lattice.half_width,
        points: 4 * lattice.half() + 1,
    };
    let gv = SampledField::sample(wide, &g).values;
    let wp = wide.points as i64;
    let wide_index = |d: [i64; 2]| -> usize {
        match lattice.dim {
            1 => (d[0] + 2 * h) as usize,
            _ => ((d[0] + 2 * h) * wp + d[1] + 2 * h) as usize,
        }
    };
    let values = (0..lattice.len())
        .into_par_iter()
        .map(|xi| {
            let xo = lattice.offsets(xi);
            let mut best: f64 = 0.0;
            for (yi, &fy) in fv.iter().enumerate() {
                if fy <= best {
                    continue;
                }
                let yo = lattice.offsets(yi);
                let gd = gv[wide_index([xo[0] - yo[0], xo[1] - yo[1]])];
                best = best.max(fy.min(gd));
            }
            best
        })
        .collect();
    SampledField { lattice, values }
}

fn check_covers(f: &QCFunction, lattice: &Lattice) -> Result<()> {
    if f.dim() != lattice.dim {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim,
            found: f.dim(),
        });
    }
    if f.extent() > lattice.half_width {
        return Err(Error::GridTooCoarse(format!(
            "support extends to {} beyond the half width {}",
            f.extent(),
            lattice.half_width
        )));
    }
    Ok(())
}

/// `sup_y min{f(y), g(x - y)}` over lattice points `y`.
pub fn grid_sup_min(f: &QCFunction, g: &QCFunction, lattice: &Lattice) -> Result<SampledField> {
    check_covers(f, lattice)?;
    check_covers(g, lattice)?;
    Ok(sup_min_closure(*lattice, |x| f.evaluate(x), |x| g.evaluate(x)))
}

fn halfplane_clip(poly: &[[f64; 2]], n: &Point, b: f64) -> Vec<[f64; 2]> {
    let inside = |p: &[f64; 2]| n[0] * p[0] + n[1] * p[1] - b;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (dp, dq) = (inside(&p), inside(&q));
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let s = dp / (dp - dq);
            out.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
        }
    }
    out
}

/// Inner parallel body `{x : x + δB ⊆ K}`.
pub fn erode(body: &ConvexBody, delta: f64) -> Result<ConvexBody> {
    let dim = body.dim();
    match body {
        ConvexBody::Empty { .. } => Ok(body.clone()),
        ConvexBody::Ball { radius, .. } => {
            if *radius >= delta {
                ConvexBody::ball(dim, radius - delta)
            } else {
                Ok(ConvexBody::empty(dim))
            }
        }
        ConvexBody::Polytope(p) => {
            let facets = p.facets();
            if facets.is_empty() {
                return Ok(ConvexBody::empty(dim));
            }
            match dim {
                1 => {
                    let (lo, hi) = (p.vertices()[0][0] + delta, p.vertices()[1][0] - delta);
                    if lo > hi {
                        Ok(ConvexBody::empty(1))
                    } else {
                        ConvexBody::polytope(1, &[vec![lo], vec![hi]])
                    }
                }
                2 => {
                    let big = 2.0 * body.scale_len() + 1.0;
                    let mut poly = vec![[-big, -big], [big, -big], [big, big], [-big, big]];
                    for (n, b) in &facets {
                        poly = halfplane_clip(&poly, n, b - delta);
                        if poly.is_empty() {
                            return Ok(ConvexBody::empty(2));
                        }
                    }
                    let pts: Vec<Point> = poly.iter().map(|q| [q[0], q[1], 0.0]).collect();
                    ConvexBody::from_points(2, &pts)
                }
                _ => Err(Error::UnsupportedDimension(dim)),
            }
        }
    }
}

/// Rigorous bounds `lower <= grid_sup_min <= upper` for a pair of stacks.
///
/// `upper` is the exact sum. A point `x` of the lattice scores at least `t`
/// on the grid when `x ∈ K_t ∪ T_t` (take `y = x` or `y = 0`) or when
/// `x ∈ K_t^{-δ} + T_t^{-δ}` with `δ` the lattice cover radius (round the
/// first summand to its nearest lattice point).
pub fn sup_min_bounds(
    f: &LevelStack,
    g: &LevelStack,
    lattice: &Lattice,
) -> Result<(SampledField, SampledField)> {
    let ff = QCFunction::Stack(f.clone());
    let gg = QCFunction::Stack(g.clone());
    check_covers(&ff, lattice)?;
    check_covers(&gg, lattice)?;
    let sum = super::oplus(&ff, &gg)?;
    let upper = SampledField::sample(*lattice, |x| sum.evaluate(x));
    let delta = lattice.cover_radius();
    let mut heights = f.heights();
    heights.extend(g.heights());
    let heights = super::merge_heights(heights);
    let mut tiers = Vec::with_capacity(heights.len());
    for &t in &heights {
        let (k, tb) = (f.level_at(t), g.level_at(t));
        let inner = minkowski_sum(&erode(&k, delta)?, &erode(&tb, delta)?)?;
        tiers.push((t, k, tb, inner));
    }
    let lower = SampledField::sample(*lattice, |x| {
        let p = convex_bodies::point(x);
        tiers
            .iter()
            .find(|(_, k, tb, inner)| {
                k.contains_point(&p) || tb.contains_point(&p) || inner.contains_point(&p)
            })
            .map_or(0.0, |(t, ..)| *t)
    });
    Ok((lower, upper))
}

/// Outcome of the non-compact arctan pair in one dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArctanDemo {
    pub half_widths: Vec<f64>,
    /// Lattice sup-min at the origin for each half width.
    pub sup_min_at_origin: Vec<f64>,
    /// Largest sampled value of either function; stays below 1.
    pub max_operand_value: f64,
    /// Whether `{f >= 1} + {g >= 1}` is empty.
    pub top_level_sum_empty: bool,
}

/// `f(x) = 1/2 + arctan(x)/π` and `g(x) = 1/2 - arctan(x)/π` never reach 1,
/// yet `sup_y min{f(y), g(-y)} = sup_y f(y) = 1`. The top-level sets are
/// empty, so the level-set sum at height 1 is empty while the sup-min there
/// tends to 1 as the lattice widens.
pub fn arctan_demo(points: usize) -> Result<ArctanDemo> {
    use std::f64::consts::PI;
    let f = |x: &[f64]| 0.5 + x[0].atan() / PI;
    let g = |x: &[f64]| 0.5 - x[0].atan() / PI;
    let half_widths = vec![10.0, 100.0, 1000.0, 10000.0];
    let mut at_origin = Vec::new();
    let mut max_operand: f64 = 0.0;
    for &w in &half_widths {
        let lattice = Lattice::new(1, w, points)?;
        let field = sup_min_closure(lattice, f, g);
        at_origin.push(field.values[lattice.half()]);
        max_operand = max_operand.max(f(&[w])).max(g(&[-w]));
    }
    Ok(ArctanDemo {
        half_widths,
        sup_min_at_origin: at_origin,
        max_operand_value: max_operand,
        // arctan stays below π/2, so both top-level sets are empty
        top_level_sum_empty: max_operand < 1.0,
    })
}

/// Lattice points where an indicator grid value disagrees with `1_{K+T}`
/// outside the band `(K + T) \ (K^{-δ} + T^{-δ})`, `δ` the lattice cover
/// radius. Inside `K^{-δ} + T^{-δ}` a lattice point of `K` always pairs with
/// one of `T`, so the grid must report 1 there.
pub fn indicator_band_violations(
    k: &ConvexBody,
    t: &ConvexBody,
    field: &SampledField,
) -> Result<usize> {
    let sum = minkowski_sum(k, t)?;
    let delta = field.lattice.cover_radius();
    let inner = minkowski_sum(&erode(k, delta)?, &erode(t, delta)?)?;
    let mut bad = 0;
    for (i, &v) in field.values.iter().enumerate() {
        let p = field.lattice.coords(i);
        let want = if sum.contains_point(&p) { 1.0 } else { 0.0 };
        if v != want {
            // points outside the sum are never reported by the grid
            if want == 0.0 || inner.contains_point(&p) {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(h: f64) -> ConvexBody {
        ConvexBody::cube(2, -h, h).unwrap()
    }

    #[test]
    fn lattice_geometry() {
        let l = Lattice::new(2, 2.0, 5).unwrap();
        assert_eq!(l.len(), 25);
        assert_eq!(l.coords(0), [-2.0, -2.0, 0.0]);
        assert_eq!(l.coords(12), [0.0, 0.0, 0.0]);
        assert_eq!(l.coords(13), [0.0, 1.0, 0.0]);
        assert!(matches!(Lattice::new(2, 1.0, 4), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn erosion_of_square() {
        let e = erode(&square(1.0), 0.25).unwrap();
        assert!(e.approx_eq(&square(0.75), 1e-12));
        assert!(erode(&square(1.0), 1.5).unwrap().is_empty());
    }

    #[test]
    fn indicators_match_off_the_band() {
        let k = square(0.5);
        let t = ConvexBody::regular_polygon(5, 0.7, 0.2).unwrap();
        let f = QCFunction::indicator(k.clone()).unwrap();
        let g = QCFunction::indicator(t.clone()).unwrap();
        let lattice = Lattice::covering(&f, &g, DEFAULT_POINTS).unwrap();
        let field = grid_sup_min(&f, &g, &lattice).unwrap();
        assert_eq!(indicator_band_violations(&k, &t, &field).unwrap(), 0);
    }

    #[test]
    fn too_small_lattice_is_rejected() {
        let f = QCFunction::indicator(square(2.0)).unwrap();
        let l = Lattice::new(2, 1.0, 11).unwrap();
        assert!(matches!(grid_sup_min(&f, &f, &l), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn arctan_pair_approaches_one() {
        let d = arctan_demo(401).unwrap();
        assert!(d.sup_min_at_origin.windows(2).all(|w| w[1] > w[0]));
        assert!(d.sup_min_at_origin.iter().all(|&v| v < 1.0));
        assert!(1.0 - d.sup_min_at_origin.last().unwrap() < 1e-4);
        assert!(d.top_level_sum_empty);
    }
}
