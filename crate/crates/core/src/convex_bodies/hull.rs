//! Convex hulls and facet data for point sets in dimensions 1 to 3.
//!
//! Everything is computed in floating point with a single absolute tolerance
//! scaled by the magnitude of the input.

use std::collections::HashSet;

pub type Point = [f64; 3];

/// Relative tolerance for extreme-point filtering.
pub const TOL: f64 = 1e-10;

pub fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: &Point, b: &Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn mul(a: &Point, s: f64) -> Point {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: &Point) -> f64 {
    dot(a, a).sqrt()
}

pub fn lex_cmp(a: &Point, b: &Point) -> std::cmp::Ordering {
    a[0].total_cmp(&b[0])
        .then(a[1].total_cmp(&b[1]))
        .then(a[2].total_cmp(&b[2]))
}

/// Absolute tolerance used for a point set.
pub fn tolerance(points: &[Point]) -> f64 {
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(f64::MIN_POSITIVE, |m, c| m.max(c.abs()));
    TOL * scale
}

/// Orthonormal frame of the affine hull of a point set.
#[derive(Debug, Clone)]
pub struct Frame {
    pub origin: Point,
    pub basis: Vec<Point>,
}

impl Frame {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn local(&self, p: &Point) -> Point {
        let d = sub(p, &self.origin);
        let mut out = [0.0; 3];
        for (k, e) in self.basis.iter().enumerate() {
            out[k] = dot(&d, e);
        }
        out
    }

    /// Distance from `p` to the affine hull.
    pub fn residual(&self, p: &Point) -> f64 {
        let loc = self.local(p);
        let mut r = sub(p, &self.origin);
        for (k, e) in self.basis.iter().enumerate() {
            r = sub(&r, &mul(e, loc[k]));
        }
        norm(&r)
    }

    fn scaled(&self, s: f64) -> Frame {
        Frame {
            origin: mul(&self.origin, s),
            basis: self.basis.clone(),
        }
    }
}

pub fn affine_frame(points: &[Point], tol: f64) -> Frame {
    let origin = points[0];
    let mut frame = Frame {
        origin,
        basis: Vec::new(),
    };
    while frame.rank() < 3 {
        let mut best: Option<(f64, Point)> = None;
        for p in points {
            let loc = frame.local(p);
            let mut r = sub(p, &origin);
            for (k, e) in frame.basis.iter().enumerate() {
                r = sub(&r, &mul(e, loc[k]));
            }
            let d = norm(&r);
            if best.map_or(true, |(bd, _)| d > bd) {
                best = Some((d, r));
            }
        }
        match best {
            Some((d, r)) if d > tol => {
                // one more Gram-Schmidt pass against rounding drift
                let mut e = mul(&r, 1.0 / d);
                for b in &frame.basis {
                    e = sub(&e, &mul(b, dot(&e, b)));
                }
                let ne = norm(&e);
                frame.basis.push(mul(&e, 1.0 / ne));
            }
            _ => break,
        }
    }
    frame
}

/// A supporting hyperplane `<normal, x> = offset` with unit outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    pub normal: Point,
    pub offset: f64,
}

/// Combinatorial and metric data attached to a canonical vertex list.
///
/// When `rank == dim` the facets are ambient; otherwise they live in the
/// coordinates of `frame`.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub dim: usize,
    pub rank: usize,
    pub frame: Frame,
    pub facets: Vec<Facet>,
    /// Counter-clockwise cycle (in frame coordinates) when `rank == 2`.
    pub polygon: Vec<usize>,
    /// Outward-oriented triangulation of the boundary when `rank == 3`.
    pub triangles: Vec<[usize; 3]>,
    pub tol: f64,
}

impl Geometry {
    pub fn full(&self) -> bool {
        self.rank == self.dim
    }

    pub fn scaled(&self, s: f64) -> Geometry {
        let mut g = self.clone();
        g.frame = self.frame.scaled(s);
        for f in &mut g.facets {
            f.offset *= s;
        }
        g.tol = self.tol * s.max(1.0);
        g
    }

    pub fn contains_point(&self, vertices: &[Point], p: &Point, tol: f64) -> bool {
        if self.full() {
            return self.facets.iter().all(|f| dot(&f.normal, p) <= f.offset + tol);
        }
        if self.frame.residual(p) > tol {
            return false;
        }
        if self.rank == 0 {
            return norm(&sub(p, &vertices[0])) <= tol;
        }
        let loc = self.frame.local(p);
        self.facets.iter().all(|f| dot(&f.normal, &loc) <= f.offset + tol)
    }
}

fn dedupe(points: &[Point], tol: f64) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(lex_cmp);
    let mut out: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        let dup = out
            .iter()
            .rev()
            .take_while(|q| p[0] - q[0] <= tol)
            .any(|q| norm(&sub(&p, q)) <= tol);
        if !dup {
            out.push(p);
        }
    }
    out
}

/// Monotone chain on the first two coordinates; returns a CCW cycle of indices.
fn chain2(local: &[Point], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..local.len()).collect();
    idx.sort_by(|&a, &b| {
        local[a][0]
            .total_cmp(&local[b][0])
            .then(local[a][1].total_cmp(&local[b][1]))
    });
    let turn = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (&local[o], &local[a], &local[b]);
        let c = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
        let len = ((b[0] - o[0]).powi(2) + (b[1] - o[1]).powi(2)).sqrt();
        c > tol * len
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for &i in &idx {
        while hull.len() >= 2 && !turn(hull[hull.len() - 2], hull[hull.len() - 1], i) {
            hull.pop();
        }
        hull.push(i);
    }
    let lower = hull.len() + 1;
    for &i in idx.iter().rev().skip(1) {
        while hull.len() >= lower && !turn(hull[hull.len() - 2], hull[hull.len() - 1], i) {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    hull
}

struct Face {
    v: [usize; 3],
    n: Point,
    off: f64,
    alive: bool,
}

fn make_face(pts: &[Point], v: [usize; 3]) -> Face {
    let n = cross(&sub(&pts[v[1]], &pts[v[0]]), &sub(&pts[v[2]], &pts[v[0]]));
    let len = norm(&n);
    let n = if len > 0.0 { mul(&n, 1.0 / len) } else { n };
    Face {
        v,
        n,
        off: dot(&n, &pts[v[0]]),
        alive: true,
    }
}

/// Incremental 3-D hull of a full-rank point set.
fn hull3(pts: &[Point], tol: f64) -> Vec<[usize; 3]> {
    let i0 = (0..pts.len()).min_by(|&a, &b| lex_cmp(&pts[a], &pts[b])).unwrap();
    let far = |pred: &dyn Fn(&Point) -> f64| {
        (0..pts.len())
            .max_by(|&a, &b| pred(&pts[a]).total_cmp(&pred(&pts[b])))
            .unwrap()
    };
    let i1 = far(&|p| norm(&sub(p, &pts[i0])));
    let dir = {
        let d = sub(&pts[i1], &pts[i0]);
        mul(&d, 1.0 / norm(&d))
    };
    let i2 = far(&|p| {
        let d = sub(p, &pts[i0]);
        norm(&sub(&d, &mul(&dir, dot(&d, &dir))))
    });
    let pn = {
        let c = cross(&sub(&pts[i1], &pts[i0]), &sub(&pts[i2], &pts[i0]));
        mul(&c, 1.0 / norm(&c))
    };
    let i3 = far(&|p| dot(&sub(p, &pts[i0]), &pn).abs());

    let simplex = [i0, i1, i2, i3];
    let mut faces: Vec<Face> = Vec::new();
    for skip in 0..4 {
        let mut v = [0usize; 3];
        let mut k = 0;
        for (j, &s) in simplex.iter().enumerate() {
            if j != skip {
                v[k] = s;
                k += 1;
            }
        }
        let mut f = make_face(pts, v);
        if dot(&f.n, &pts[simplex[skip]]) > f.off {
            f = make_face(pts, [v[0], v[2], v[1]]);
        }
        faces.push(f);
    }

    let centre = mul(
        &simplex.iter().fold([0.0; 3], |acc, &i| add(&acc, &pts[i])),
        0.25,
    );
    let mut order: Vec<usize> = (0..pts.len()).filter(|i| !simplex.contains(i)).collect();
    order.sort_by(|&a, &b| {
        norm(&sub(&pts[b], &centre)).total_cmp(&norm(&sub(&pts[a], &centre)))
    });

    for i in order {
        let p = pts[i];
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && dot(&f.n, &p) - f.off > tol)
            .map(|(k, _)| k)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut edges = HashSet::with_capacity(visible.len() * 3);
        for &k in &visible {
            let v = faces[k].v;
            for e in 0..3 {
                edges.insert((v[e], v[(e + 1) % 3]));
            }
        }
        let mut horizon = Vec::new();
        for &k in &visible {
            let v = faces[k].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                if !edges.contains(&(b, a)) {
                    horizon.push((a, b));
                }
            }
            faces[k].alive = false;
        }
        for (a, b) in horizon {
            faces.push(make_face(pts, [a, b, i]));
        }
        if faces.len() > 8 * pts.len() + 64 {
            faces.retain(|f| f.alive);
        }
    }
    faces.into_iter().filter(|f| f.alive).map(|f| f.v).collect()
}

/// Vertices of a triangulated hull that are genuine extreme points.
///
/// The sum of the incident facet normals lies in the interior of a vertex's
/// normal cone exactly when that cone is full-dimensional.
fn extreme_in_mesh(pts: &[Point], tris: &[[usize; 3]], tol: f64) -> Vec<usize> {
    let mut used: Vec<usize> = tris.iter().flat_map(|t| t.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    let mut cone = vec![[0.0; 3]; pts.len()];
    for t in tris {
        let f = make_face(pts, *t);
        for &v in t {
            cone[v] = add(&cone[v], &f.n);
        }
    }
    used.iter()
        .copied()
        .filter(|&v| {
            let u = cone[v];
            let nu = norm(&u);
            if nu == 0.0 {
                return false;
            }
            let u = mul(&u, 1.0 / nu);
            used.iter()
                .all(|&w| w == v || dot(&sub(&pts[w], &pts[v]), &u) < -tol)
        })
        .collect()
}

fn merge_facets(pts: &[Point], tris: &[[usize; 3]], tol: f64) -> Vec<Facet> {
    let mut out: Vec<Facet> = Vec::new();
    for t in tris {
        let f = make_face(pts, *t);
        let same = out
            .iter()
            .any(|g| norm(&sub(&g.normal, &f.n)) < 1e-9 && (g.offset - f.off).abs() <= tol);
        if !same {
            out.push(Facet {
                normal: f.n,
                offset: f.off,
            });
        }
    }
    out
}

fn polygon_facets(local: &[Point], cycle: &[usize]) -> Vec<Facet> {
    let k = cycle.len();
    (0..k)
        .map(|e| {
            let a = local[cycle[e]];
            let b = local[cycle[(e + 1) % k]];
            let d = sub(&b, &a);
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            let normal = [d[1] / len, -d[0] / len, 0.0];
            Facet {
                normal,
                offset: dot(&normal, &a),
            }
        })
        .collect()
}

/// Canonical extreme points (lexicographically sorted) and their geometry.
pub fn build(points: &[Point], dim: usize) -> (Vec<Point>, Geometry) {
    let tol = tolerance(points);
    let pts = dedupe(points, tol);
    let frame = affine_frame(&pts, tol);
    let rank = frame.rank();
    let mut geom = Geometry {
        dim,
        rank,
        frame: frame.clone(),
        facets: Vec::new(),
        polygon: Vec::new(),
        triangles: Vec::new(),
        tol,
    };
    match rank {
        0 => (vec![pts[0]], geom),
        1 => {
            let s = |p: &Point| frame.local(p)[0];
            let lo = pts.iter().min_by(|a, b| s(a).total_cmp(&s(b))).unwrap();
            let hi = pts.iter().max_by(|a, b| s(a).total_cmp(&s(b))).unwrap();
            let mut verts = vec![*lo, *hi];
            verts.sort_by(lex_cmp);
            if dim == 1 {
                geom.facets = vec![
                    Facet { normal: [-1.0, 0.0, 0.0], offset: -verts[0][0] },
                    Facet { normal: [1.0, 0.0, 0.0], offset: verts[1][0] },
                ];
            } else {
                let (a, b) = (s(lo), s(hi));
                geom.facets = vec![
                    Facet { normal: [-1.0, 0.0, 0.0], offset: -a },
                    Facet { normal: [1.0, 0.0, 0.0], offset: b },
                ];
            }
            (verts, geom)
        }
        2 => {
            // In the plane the chain runs on ambient coordinates so the cycle
            // keeps its counter-clockwise orientation.
            let local: Vec<Point> = if dim == 2 {
                pts.clone()
            } else {
                pts.iter().map(|p| frame.local(p)).collect()
            };
            let cycle = chain2(&local, tol);
            let mut verts: Vec<Point> = cycle.iter().map(|&i| pts[i]).collect();
            verts.sort_by(lex_cmp);
            let pos = |p: &Point| verts.iter().position(|q| q == p).unwrap();
            geom.polygon = cycle.iter().map(|&i| pos(&pts[i])).collect();
            if dim == 2 {
                geom.facets = polygon_facets(&verts, &geom.polygon);
            } else {
                let vl: Vec<Point> = verts.iter().map(|p| frame.local(p)).collect();
                geom.facets = polygon_facets(&vl, &geom.polygon);
            }
            (verts, geom)
        }
        _ => {
            let tris = hull3(&pts, tol);
            let ext = extreme_in_mesh(&pts, &tris, tol);
            let mut verts: Vec<Point> = ext.iter().map(|&i| pts[i]).collect();
            verts.sort_by(lex_cmp);
            let tris = hull3(&verts, tol);
            geom.facets = merge_facets(&verts, &tris, tol);
            geom.triangles = tris;
            (verts, geom)
        }
    }
}

/// Area of a counter-clockwise polygon given in frame coordinates.
pub fn polygon_area(local: &[Point], cycle: &[usize]) -> f64 {
    let k = cycle.len();
    let mut s = 0.0;
    for e in 0..k {
        let a = local[cycle[e]];
        let b = local[cycle[(e + 1) % k]];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

pub fn polygon_perimeter(local: &[Point], cycle: &[usize]) -> f64 {
    let k = cycle.len();
    (0..k)
        .map(|e| norm(&sub(&local[cycle[(e + 1) % k]], &local[cycle[e]])))
        .sum()
}

pub fn mesh_volume(verts: &[Point], tris: &[[usize; 3]]) -> f64 {
    let c = mul(
        &verts.iter().fold([0.0; 3], |acc, p| add(&acc, p)),
        1.0 / verts.len() as f64,
    );
    tris.iter()
        .map(|t| {
            let a = sub(&verts[t[0]], &c);
            let b = sub(&verts[t[1]], &c);
            let d = sub(&verts[t[2]], &c);
            dot(&a, &cross(&b, &d)) / 6.0
        })
        .sum()
}

pub fn mesh_area(verts: &[Point], tris: &[[usize; 3]]) -> f64 {
    tris.iter()
        .map(|t| {
            0.5 * norm(&cross(
                &sub(&verts[t[1]], &verts[t[0]]),
                &sub(&verts[t[2]], &verts[t[0]]),
            ))
        })
        .sum()
}

/// Sum over boundary edges of length times exterior dihedral angle.
pub fn mesh_edge_curvature(verts: &[Point], tris: &[[usize; 3]]) -> f64 {
    use std::collections::HashMap;
    let normals: Vec<Point> = tris.iter().map(|t| make_face(verts, *t).n).collect();
    let mut owner = HashMap::with_capacity(tris.len() * 3);
    for (k, t) in tris.iter().enumerate() {
        for e in 0..3 {
            owner.insert((t[e], t[(e + 1) % 3]), k);
        }
    }
    let mut total = 0.0;
    for (&(a, b), &k) in &owner {
        if a < b {
            if let Some(&j) = owner.get(&(b, a)) {
                let (n1, n2) = (normals[k], normals[j]);
                let angle = norm(&cross(&n1, &n2)).atan2(dot(&n1, &n2));
                total += norm(&sub(&verts[b], &verts[a])) * angle;
            }
        }
    }
    total
}

/// Minkowski sum of two convex polygons given as CCW cycles.
pub fn polygon_sum(a: &[Point], b: &[Point]) -> Vec<Point> {
    let start = |p: &[Point]| {
        (0..p.len())
            .min_by(|&i, &j| p[i][1].total_cmp(&p[j][1]).then(p[i][0].total_cmp(&p[j][0])))
            .unwrap()
    };
    let (sa, sb) = (start(a), start(b));
    let (na, nb) = (a.len(), b.len());
    let mut out = Vec::with_capacity(na + nb);
    let (mut i, mut j) = (0, 0);
    while i < na || j < nb {
        let pa = a[(sa + i) % na];
        let pb = b[(sb + j) % nb];
        out.push(add(&pa, &pb));
        let angle = |e: Point| {
            let t = e[1].atan2(e[0]);
            if t < -1e-12 {
                t + std::f64::consts::TAU
            } else {
                t.max(0.0)
            }
        };
        let ta = angle(sub(&a[(sa + i + 1) % na], &pa));
        let tb = angle(sub(&b[(sb + j + 1) % nb], &pb));
        if j >= nb || (i < na && ta < tb - 1e-12) {
            i += 1;
        } else if i >= na || tb < ta - 1e-12 {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out
}
