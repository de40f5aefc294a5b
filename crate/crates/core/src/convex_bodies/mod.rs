//! Convex bodies in dimensions 1 to 3: polytopes in vertex form, centred
//! balls and the empty body.

pub mod hull;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use hull::{add, dot, mul, norm, Geometry};
pub use hull::Point;

/// Volume of the Euclidean unit ball in dimension `n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => PI.powf(n as f64 / 2.0) / statrs::function::gamma::gamma(n as f64 / 2.0 + 1.0),
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        })
    }
}

/// Pads a coordinate slice to a [`Point`].
pub fn point(coords: &[f64]) -> Point {
    let mut p = [0.0; 3];
    p[..coords.len()].copy_from_slice(coords);
    p
}

/// Convex hull of finitely many points, stored by its extreme points.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    geom: Arc<Geometry>,
}

impl Polytope {
    pub fn from_points(dim: usize, points: &[Point]) -> Result<Self> {
        check_dim(dim)?;
        if points.is_empty() {
            return Err(Error::InvalidInput("polytope needs at least one point".into()));
        }
        if points.iter().any(|p| p.iter().any(|c| !c.is_finite()) || p[dim..].iter().any(|&c| c != 0.0)) {
            return Err(Error::InvalidInput("non-finite or out-of-dimension coordinate".into()));
        }
        let (vertices, geom) = hull::build(points, dim);
        Ok(Polytope {
            dim,
            vertices,
            geom: Arc::new(geom),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn rank(&self) -> usize {
        self.geom.rank
    }

    pub(crate) fn geometry(&self) -> &Geometry {
        &self.geom
    }

    fn scaled(&self, s: f64) -> Polytope {
        if s == 0.0 {
            return Polytope::from_points(self.dim, &[[0.0; 3]]).expect("origin is a valid polytope");
        }
        Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| mul(v, s)).collect(),
            geom: Arc::new(self.geom.scaled(s)),
        }
    }

    fn support(&self, u: &Point) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v, u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Ambient outward unit normals and offsets; empty unless full-dimensional.
    pub fn facets(&self) -> Vec<(Point, f64)> {
        if self.geom.full() {
            self.geom.facets.iter().map(|f| (f.normal, f.offset)).collect()
        } else {
            Vec::new()
        }
    }

    pub fn volume(&self) -> f64 {
        if !self.geom.full() {
            return 0.0;
        }
        match self.dim {
            1 => self.vertices[1][0] - self.vertices[0][0],
            2 => hull::polygon_area(&self.vertices, &self.geom.polygon),
            _ => hull::mesh_volume(&self.vertices, &self.geom.triangles),
        }
    }

    fn scale_len(&self) -> f64 {
        self.vertices
            .iter()
            .flat_map(|p| p.iter())
            .fold(1.0f64, |m, c| m.max(c.abs()))
    }
}

/// Compact convex subset of R^n, n in {1, 2, 3}.
#[derive(Debug, Clone)]
pub enum ConvexBody {
    Empty { dim: usize },
    /// Euclidean ball centred at the origin; radius 0 is the singleton {0}.
    Ball { dim: usize, radius: f64 },
    Polytope(Polytope),
}

/// Unit vector in R^n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    dim: usize,
    v: Point,
}

impl Direction {
    pub fn new(coords: &[f64]) -> Result<Self> {
        check_dim(coords.len())?;
        let v = point(coords);
        if (norm(&v) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("direction has norm {}", norm(&v))));
        }
        Ok(Direction { dim: coords.len(), v })
    }

    pub fn normalized(coords: &[f64]) -> Result<Self> {
        check_dim(coords.len())?;
        let v = point(coords);
        let n = norm(&v);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("zero direction".into()));
        }
        Ok(Direction {
            dim: coords.len(),
            v: mul(&v, 1.0 / n),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_point(&self) -> &Point {
        &self.v
    }
}

/// Deterministic net of unit directions used for support-function sweeps.
pub fn direction_net(dim: usize, count: usize) -> Vec<Point> {
    match dim {
        1 => vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
        2 => (0..count)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / count as f64;
                [t.cos(), t.sin(), 0.0]
            })
            .collect(),
        _ => {
            // Fibonacci sphere
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    [r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
    }
}

impl ConvexBody {
    pub fn empty(dim: usize) -> Self {
        ConvexBody::Empty { dim }
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("ball radius {radius}")));
        }
        Ok(ConvexBody::Ball { dim, radius })
    }

    pub fn unit_ball(dim: usize) -> Self {
        ConvexBody::Ball { dim, radius: 1.0 }
    }

    pub fn polytope(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        let pts: Vec<Point> = points
            .iter()
            .map(|p| {
                if p.len() == dim {
                    Ok(point(p))
                } else {
                    Err(Error::DimensionMismatch {
                        expected: dim,
                        found: p.len(),
                    })
                }
            })
            .collect::<Result<_>>()?;
        Ok(ConvexBody::Polytope(Polytope::from_points(dim, &pts)?))
    }

    pub fn from_points(dim: usize, points: &[Point]) -> Result<Self> {
        Ok(ConvexBody::Polytope(Polytope::from_points(dim, points)?))
    }

    /// The box `[lo, hi]^n`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        check_dim(dim)?;
        let pts: Vec<Point> = (0..1usize << dim)
            .map(|mask| {
                let mut p = [0.0; 3];
                for (k, c) in p.iter_mut().enumerate().take(dim) {
                    *c = if mask >> k & 1 == 1 { hi } else { lo };
                }
                p
            })
            .collect();
        Self::from_points(dim, &pts)
    }

    /// conv{±r e_i}.
    pub fn cross_polytope(dim: usize, r: f64) -> Result<Self> {
        check_dim(dim)?;
        let mut pts = Vec::new();
        for k in 0..dim {
            for s in [-r, r] {
                let mut p = [0.0; 3];
                p[k] = s;
                pts.push(p);
            }
        }
        Self::from_points(dim, &pts)
    }

    /// Regular planar polygon with `k` vertices on the circle of radius `r`.
    pub fn regular_polygon(k: usize, r: f64, phase: f64) -> Result<Self> {
        let pts: Vec<Point> = (0..k)
            .map(|j| {
                let t = phase + 2.0 * PI * j as f64 / k as f64;
                [r * t.cos(), r * t.sin(), 0.0]
            })
            .collect();
        Self::from_points(2, &pts)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Empty { dim } | ConvexBody::Ball { dim, .. } => *dim,
            ConvexBody::Polytope(p) => p.dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ConvexBody::Empty { .. })
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            ConvexBody::Polytope(p) => Some(p),
            _ => None,
        }
    }

    /// Replaces the dimension of a ball; other variants must already match.
    pub fn conform(self, dim: usize) -> Result<Self> {
        match self {
            ConvexBody::Ball { radius, .. } => ConvexBody::ball(dim, radius),
            ConvexBody::Empty { .. } => Ok(ConvexBody::Empty { dim }),
            ConvexBody::Polytope(p) => {
                same_dim(dim, p.dim)?;
                Ok(ConvexBody::Polytope(p))
            }
        }
    }

    /// Largest absolute coordinate (or radius); at least 1.
    pub fn scale_len(&self) -> f64 {
        match self {
            ConvexBody::Empty { .. } => 1.0,
            ConvexBody::Ball { radius, .. } => radius.max(1.0),
            ConvexBody::Polytope(p) => p.scale_len(),
        }
    }

    /// Translate by `v`; balls are not translation-closed and are rejected.
    pub fn translate(&self, v: &[f64]) -> Result<Self> {
        same_dim(self.dim(), v.len())?;
        match self {
            ConvexBody::Empty { .. } => Ok(self.clone()),
            ConvexBody::Ball { .. } => Err(Error::UnsupportedMix),
            ConvexBody::Polytope(p) => {
                let t = point(v);
                let pts: Vec<Point> = p.vertices.iter().map(|q| add(q, &t)).collect();
                Self::from_points(p.dim, &pts)
            }
        }
    }

    /// Mean of the vertices (the centre for balls).
    pub fn vertex_centroid(&self) -> Option<Point> {
        match self {
            ConvexBody::Empty { .. } => None,
            ConvexBody::Ball { .. } => Some([0.0; 3]),
            ConvexBody::Polytope(p) => {
                let s = p.vertices.iter().fold([0.0; 3], |acc, v| add(&acc, v));
                Some(mul(&s, 1.0 / p.vertices.len() as f64))
            }
        }
    }

    pub(crate) fn scale_nonneg(&self, lambda: f64) -> ConvexBody {
        match self {
            ConvexBody::Empty { .. } => self.clone(),
            ConvexBody::Ball { dim, radius } => ConvexBody::Ball {
                dim: *dim,
                radius: radius * lambda,
            },
            ConvexBody::Polytope(p) => ConvexBody::Polytope(p.scaled(lambda)),
        }
    }

    /// Support function for a possibly unnormalized direction.
    pub(crate) fn support_raw(&self, u: &Point) -> f64 {
        match self {
            ConvexBody::Empty { .. } => f64::NEG_INFINITY,
            ConvexBody::Ball { radius, .. } => radius * norm(u),
            ConvexBody::Polytope(p) => p.support(u),
        }
    }

    /// Minkowski gauge `inf{s > 0 : x in sK}`; needs 0 in the interior.
    pub fn gauge(&self, x: &Point) -> Result<f64> {
        match self {
            ConvexBody::Ball { radius, .. } if *radius > 0.0 => Ok(norm(x) / radius),
            ConvexBody::Polytope(p) if interior_origin(p) => Ok(p
                .geom
                .facets
                .iter()
                .map(|f| dot(&f.normal, x) / f.offset)
                .fold(0.0, f64::max)),
            _ => Err(Error::OriginNotInterior),
        }
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        match self {
            ConvexBody::Empty { .. } => false,
            ConvexBody::Ball { radius, .. } => norm(x) <= radius * (1.0 + 1e-12) + 1e-12,
            ConvexBody::Polytope(p) => {
                p.geom.contains_point(&p.vertices, x, 1e-9 * p.scale_len())
            }
        }
    }

    /// Equality up to `tol` in every vertex (or the radius).
    pub fn approx_eq(&self, other: &ConvexBody, tol: f64) -> bool {
        match (self, other) {
            (ConvexBody::Empty { dim: a }, ConvexBody::Empty { dim: b }) => a == b,
            (ConvexBody::Ball { dim: a, radius: r }, ConvexBody::Ball { dim: b, radius: s }) => {
                a == b && (r - s).abs() <= tol
            }
            (ConvexBody::Polytope(p), ConvexBody::Polytope(q)) => {
                p.dim == q.dim
                    && p.vertices.len() == q.vertices.len()
                    && p.vertices
                        .iter()
                        .all(|v| q.vertices.iter().any(|w| norm(&hull::sub(v, w)) <= tol))
            }
            // a point polytope equals the radius-0 ball
            (ConvexBody::Ball { radius, .. }, ConvexBody::Polytope(p))
            | (ConvexBody::Polytope(p), ConvexBody::Ball { radius, .. }) => {
                *radius <= tol && p.vertices.iter().all(|v| norm(v) <= tol)
            }
            _ => false,
        }
    }
}

fn interior_origin(p: &Polytope) -> bool {
    p.geom.full() && p.geom.facets.iter().all(|f| f.offset > p.geom.tol)
}

/// Minkowski sum `a + b`.
pub fn minkowski_sum(a: &ConvexBody, b: &ConvexBody) -> Result<ConvexBody> {
    same_dim(a.dim(), b.dim())?;
    match (a, b) {
        (ConvexBody::Empty { .. }, _) | (_, ConvexBody::Empty { .. }) => Ok(ConvexBody::empty(a.dim())),
        (ConvexBody::Ball { dim, radius: r }, ConvexBody::Ball { radius: s, .. }) => {
            Ok(ConvexBody::Ball { dim: *dim, radius: r + s })
        }
        (ConvexBody::Ball { radius, .. }, ConvexBody::Polytope(p))
        | (ConvexBody::Polytope(p), ConvexBody::Ball { radius, .. }) => {
            // adding the singleton {0} is the only representable case
            if *radius == 0.0 {
                Ok(ConvexBody::Polytope(p.clone()))
            } else {
                Err(Error::UnsupportedMix)
            }
        }
        (ConvexBody::Polytope(p), ConvexBody::Polytope(q)) => {
            let (gp, gq) = (&p.geom, &q.geom);
            let pts: Vec<Point> = if p.dim == 2 && gp.rank == 2 && gq.rank == 2 {
                let cp: Vec<Point> = gp.polygon.iter().map(|&i| p.vertices[i]).collect();
                let cq: Vec<Point> = gq.polygon.iter().map(|&i| q.vertices[i]).collect();
                hull::polygon_sum(&cp, &cq)
            } else {
                let mut v = Vec::with_capacity(p.vertices.len() * q.vertices.len());
                for x in &p.vertices {
                    for y in &q.vertices {
                        v.push(add(x, y));
                    }
                }
                v
            };
            ConvexBody::from_points(p.dim, &pts)
        }
    }
}

/// Sum of a nonempty list of bodies.
pub fn minkowski_sum_all(bodies: &[&ConvexBody]) -> Result<ConvexBody> {
    let mut acc = bodies
        .first()
        .ok_or_else(|| Error::InvalidInput("empty sum".into()))?
        .to_owned()
        .clone();
    for b in &bodies[1..] {
        acc = minkowski_sum(&acc, b)?;
    }
    Ok(acc)
}

/// Homothet `lambda * a`.
pub fn scale(a: &ConvexBody, lambda: f64) -> Result<ConvexBody> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::NonpositiveScale(lambda));
    }
    Ok(a.scale_nonneg(lambda))
}

pub fn volume(a: &ConvexBody) -> f64 {
    match a {
        ConvexBody::Empty { .. } => 0.0,
        ConvexBody::Ball { dim, radius } => unit_ball_volume(*dim) * radius.powi(*dim as i32),
        ConvexBody::Polytope(p) => p.volume(),
    }
}

/// Support function `h_a(u)`; the empty body is rejected rather than
/// reported as minus infinity.
pub fn support(a: &ConvexBody, u: &Direction) -> Result<f64> {
    same_dim(a.dim(), u.dim)?;
    if a.is_empty() {
        return Err(Error::EmptyBody);
    }
    Ok(a.support_raw(&u.v))
}

/// Polar body `{x : <x, y> <= 1 for all y in a}`.
pub fn polar(a: &ConvexBody) -> Result<ConvexBody> {
    match a {
        ConvexBody::Ball { dim, radius } if *radius > 0.0 => Ok(ConvexBody::Ball {
            dim: *dim,
            radius: 1.0 / radius,
        }),
        ConvexBody::Polytope(p) if interior_origin(p) => {
            let pts: Vec<Point> = p
                .geom
                .facets
                .iter()
                .map(|f| mul(&f.normal, 1.0 / f.offset))
                .collect();
            ConvexBody::from_points(p.dim, &pts)
        }
        _ => Err(Error::OriginNotInterior),
    }
}

/// The body `{x : <n_j, x> <= b_j}` for offsets `b_j > 0`.
///
/// Computed as the polar of `conv{n_j / b_j}`; an unbounded intersection is
/// reported as [`Error::Unbounded`].
pub fn from_halfspaces(dim: usize, normals: &[Point], offsets: &[f64]) -> Result<ConvexBody> {
    check_dim(dim)?;
    if normals.len() != offsets.len() || offsets.iter().any(|&b| !(b > 0.0)) {
        return Err(Error::InvalidInput("half-space offsets must be positive".into()));
    }
    if normals.is_empty() {
        return Err(Error::Unbounded);
    }
    let pts: Vec<Point> = normals
        .iter()
        .zip(offsets)
        .map(|(n, b)| mul(n, 1.0 / b))
        .collect();
    let dual = ConvexBody::from_points(dim, &pts)?;
    polar(&dual).map_err(|_| Error::Unbounded)
}

/// How far `b` sticks out of `a`, measured by support functions: the
/// maximum over the facet normals of `a` of `h_b(u) - h_a(u)`.
///
/// Nonpositive exactly when `b` is contained in `a`.
pub fn containment_slack(a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
    same_dim(a.dim(), b.dim())?;
    Ok(match (a, b) {
        (_, ConvexBody::Empty { .. }) => f64::NEG_INFINITY,
        (ConvexBody::Empty { .. }, _) => f64::INFINITY,
        (ConvexBody::Ball { radius: r, .. }, ConvexBody::Ball { radius: s, .. }) => s - r,
        (ConvexBody::Ball { radius, .. }, ConvexBody::Polytope(q)) => {
            q.vertices.iter().map(norm).fold(0.0, f64::max) - radius
        }
        (ConvexBody::Polytope(p), _) => {
            let g = &p.geom;
            if g.full() {
                g.facets
                    .iter()
                    .map(|f| b.support_raw(&f.normal) - f.offset)
                    .fold(f64::NEG_INFINITY, f64::max)
            } else {
                let point_slack = |v: &Point| {
                    if g.rank == 0 {
                        return norm(&hull::sub(v, &p.vertices[0]));
                    }
                    let loc = g.frame.local(v);
                    g.facets
                        .iter()
                        .map(|f| dot(&f.normal, &loc) - f.offset)
                        .fold(g.frame.residual(v), f64::max)
                };
                match b {
                    ConvexBody::Ball { radius, .. } => point_slack(&[0.0; 3]).max(*radius),
                    ConvexBody::Polytope(q) => q
                        .vertices
                        .iter()
                        .map(point_slack)
                        .fold(f64::NEG_INFINITY, f64::max),
                    ConvexBody::Empty { .. } => unreachable!(),
                }
            }
        }
    })
}

/// Whether `b ⊆ a`, up to a tolerance relative to the size of the bodies.
pub fn contains(a: &ConvexBody, b: &ConvexBody) -> Result<bool> {
    let slack = containment_slack(a, b)?;
    Ok(slack <= 1e-9 * a.scale_len().max(b.scale_len()))
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Wire {
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    Ball {
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Empty {
        dim: usize,
    },
}

/// Dimension assumed for a ball whose JSON omits `"dim"`.
pub const DEFAULT_BALL_DIM: usize = 2;

impl Serialize for ConvexBody {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = match self {
            ConvexBody::Empty { dim } => Wire::Empty { dim: *dim },
            ConvexBody::Ball { dim, radius } => Wire::Ball {
                radius: *radius,
                dim: Some(*dim),
            },
            ConvexBody::Polytope(p) => Wire::Polytope {
                vertices: p.vertices.iter().map(|v| v[..p.dim].to_vec()).collect(),
            },
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexBody {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let body = match Wire::deserialize(d)? {
            Wire::Empty { dim } => {
                check_dim(dim).map_err(D::Error::custom)?;
                Ok(ConvexBody::Empty { dim })
            }
            Wire::Ball { radius, dim } => ConvexBody::ball(dim.unwrap_or(DEFAULT_BALL_DIM), radius),
            Wire::Polytope { vertices } => {
                let dim = vertices.first().map_or(0, Vec::len);
                ConvexBody::polytope(dim, &vertices)
            }
        };
        body.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> ConvexBody {
        ConvexBody::cube(2, 0.0, 1.0).unwrap()
    }

    #[test]
    fn interval_sum() {
        let a = ConvexBody::polytope(1, &[vec![0.0], vec![1.0]]).unwrap();
        let s = minkowski_sum(&a, &a).unwrap();
        let expect = ConvexBody::polytope(1, &[vec![0.0], vec![2.0]]).unwrap();
        assert!(s.approx_eq(&expect, 1e-12));
    }

    #[test]
    fn square_plus_square_is_doubled() {
        let s = minkowski_sum(&unit_square(), &unit_square()).unwrap();
        assert_eq!(s.as_polytope().unwrap().vertices().len(), 4);
        assert!(s.approx_eq(&ConvexBody::cube(2, 0.0, 2.0).unwrap(), 1e-12));
    }

    #[test]
    fn square_plus_diagonal_is_hexagon() {
        let seg = ConvexBody::polytope(2, &[vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let s = minkowski_sum(&unit_square(), &seg).unwrap();
        // oracle: hull of all eight pairwise sums
        let sq = unit_square();
        let mut pts = Vec::new();
        for v in sq.as_polytope().unwrap().vertices() {
            for w in seg.as_polytope().unwrap().vertices() {
                pts.push(add(v, w));
            }
        }
        let oracle = ConvexBody::from_points(2, &pts).unwrap();
        assert_eq!(s.as_polytope().unwrap().vertices().len(), 6);
        assert!(s.approx_eq(&oracle, 1e-12));
        assert!((volume(&s) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn ball_sums() {
        let a = ConvexBody::ball(3, 1.0).unwrap();
        let b = ConvexBody::ball(3, 0.5).unwrap();
        assert!(minkowski_sum(&a, &b).unwrap().approx_eq(&ConvexBody::ball(3, 1.5).unwrap(), 0.0));
        assert_eq!(minkowski_sum(&unit_square(), &ConvexBody::unit_ball(2)).unwrap_err(), Error::UnsupportedMix);
        assert!(matches!(
            minkowski_sum(&unit_square(), &ConvexBody::unit_ball(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(minkowski_sum(&unit_square(), &ConvexBody::empty(2)).unwrap().is_empty());
    }

    #[test]
    fn scaling() {
        assert!(scale(&ConvexBody::unit_ball(2), 2.0)
            .unwrap()
            .approx_eq(&ConvexBody::ball(2, 2.0).unwrap(), 0.0));
        assert!(scale(&unit_square(), 3.0)
            .unwrap()
            .approx_eq(&ConvexBody::cube(2, 0.0, 3.0).unwrap(), 1e-12));
        assert_eq!(scale(&unit_square(), 0.0).unwrap_err(), Error::NonpositiveScale(0.0));
    }

    #[test]
    fn volumes() {
        assert!((volume(&unit_square()) - 1.0).abs() < 1e-15);
        assert!((volume(&ConvexBody::unit_ball(2)) - PI).abs() < 1e-15);
        assert!((volume(&ConvexBody::cube(3, -1.0, 1.0).unwrap()) - 8.0).abs() < 1e-12);
        assert!((volume(&ConvexBody::cross_polytope(3, 1.0).unwrap()) - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(volume(&ConvexBody::empty(3)), 0.0);
    }

    #[test]
    fn supports() {
        let u = Direction::new(&[1.0, 0.0]).unwrap();
        assert_eq!(support(&unit_square(), &u).unwrap(), 1.0);
        assert_eq!(support(&ConvexBody::ball(2, 0.7).unwrap(), &u).unwrap(), 0.7);
        assert_eq!(support(&ConvexBody::empty(2), &u).unwrap_err(), Error::EmptyBody);
        assert!(Direction::new(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn polars() {
        assert!(polar(&ConvexBody::ball(2, 2.0).unwrap())
            .unwrap()
            .approx_eq(&ConvexBody::ball(2, 0.5).unwrap(), 1e-15));
        let sq = ConvexBody::cube(2, -1.0, 1.0).unwrap();
        assert!(polar(&sq).unwrap().approx_eq(&ConvexBody::cross_polytope(2, 1.0).unwrap(), 1e-12));
        assert_eq!(polar(&unit_square()).unwrap_err(), Error::OriginNotInterior);
        let cube = ConvexBody::cube(3, -1.0, 1.0).unwrap();
        assert!(polar(&cube).unwrap().approx_eq(&ConvexBody::cross_polytope(3, 1.0).unwrap(), 1e-12));
    }

    #[test]
    fn containment() {
        let sq = ConvexBody::cube(2, -1.0, 1.0).unwrap();
        let ball = ConvexBody::unit_ball(2);
        assert!(contains(&sq, &ball).unwrap());
        assert!(!contains(&ball, &sq).unwrap());
        assert!(contains(&sq, &sq).unwrap());
        assert!(contains(&scale(&sq, 2.0).unwrap(), &sq).unwrap());
        let seg = ConvexBody::polytope(2, &[vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(contains(&sq, &seg).unwrap());
        assert!(!contains(&seg, &sq).unwrap());
        assert!(contains(&seg, &scale(&seg, 0.5).unwrap()).unwrap());
    }

    #[test]
    fn coplanar_points_in_three_dimensions() {
        // cube + cube produces many coplanar and collinear candidates
        let c = ConvexBody::cube(3, 0.0, 1.0).unwrap();
        let s = minkowski_sum(&c, &c).unwrap();
        assert_eq!(s.as_polytope().unwrap().vertices().len(), 8);
        assert!((volume(&s) - 8.0).abs() < 1e-12);
        let flat = ConvexBody::polytope(3, &[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.5, 0.5, 0.0]]).unwrap();
        assert_eq!(flat.as_polytope().unwrap().rank(), 2);
        assert_eq!(flat.as_polytope().unwrap().vertices().len(), 4);
        assert!(contains(&c, &flat).unwrap());
        assert!(!contains(&flat, &c).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let bodies = vec![
            unit_square(),
            ConvexBody::ball(3, 1.5).unwrap(),
            ConvexBody::empty(2),
        ];
        for b in bodies {
            let s = serde_json::to_string(&b).unwrap();
            let back: ConvexBody = serde_json::from_str(&s).unwrap();
            assert!(b.approx_eq(&back, 0.0), "{s}");
        }
        let b: ConvexBody = serde_json::from_str(r#"{"type":"ball","radius":2}"#).unwrap();
        assert_eq!(b.dim(), 2);
        let p: ConvexBody =
            serde_json::from_str(r#"{"type":"polytope","vertices":[[0,0],[1,0],[0,1],[0.2,0.2]]}"#).unwrap();
        assert_eq!(p.as_polytope().unwrap().vertices().len(), 3);
    }
}
