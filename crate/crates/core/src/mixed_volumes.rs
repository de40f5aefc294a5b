//! Mixed volumes, Minkowski polynomials and quermassintegrals of bodies.
//!
//! Ball arguments never enter a Minkowski sum with a polytope. Instead the
//! quermassintegrals `W_k(P) = V(P[n-k], D[k])` are read off exact boundary
//! data (perimeter, surface area, edge lengths times exterior dihedral
//! angles), and mixed volumes with `k` balls are the polarization of `W_k`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::convex_bodies::{hull, minkowski_sum, unit_ball_volume, ConvexBody, Polytope};
use crate::error::{Error, Result};

fn polytope_quermass(p: &Polytope, i: usize) -> f64 {
    use std::f64::consts::PI;
    let n = p.dim();
    let g = p.geometry();
    let v = p.vertices();
    if i == 0 {
        return p.volume();
    }
    if i == n {
        return unit_ball_volume(n);
    }
    let seg_len = || hull::norm(&hull::sub(&v[1], &v[0]));
    let local = || -> Vec<hull::Point> { v.iter().map(|q| g.frame.local(q)).collect() };
    match (n, i, g.rank) {
        (2, 1, 2) => 0.5 * hull::polygon_perimeter(v, &g.polygon),
        (2, 1, 1) => seg_len(),
        (3, 1, 3) => hull::mesh_area(v, &g.triangles) / 3.0,
        (3, 1, 2) => 2.0 * hull::polygon_area(&local(), &g.polygon).abs() / 3.0,
        (3, 2, 3) => hull::mesh_edge_curvature(v, &g.triangles) / 6.0,
        (3, 2, 2) => PI * hull::polygon_perimeter(&local(), &g.polygon) / 6.0,
        (3, 2, 1) => PI * seg_len() / 3.0,
        _ => 0.0,
    }
}

/// Quermassintegral `W_i(K) = V(K[n-i], D[i])`.
pub fn quermassintegral_body(k: &ConvexBody, i: usize) -> Result<f64> {
    let n = k.dim();
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    Ok(match k {
        ConvexBody::Empty { .. } => 0.0,
        ConvexBody::Ball { radius, .. } => unit_ball_volume(n) * radius.powi((n - i) as i32),
        ConvexBody::Polytope(p) => polytope_quermass(p, i),
    })
}

/// Surface area `n * W_1(K)`.
pub fn surface_area_body(k: &ConvexBody) -> f64 {
    k.dim() as f64 * quermassintegral_body(k, 1).expect("W_1 exists for n >= 1")
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `Vol(P + r D)` by the Steiner formula.
pub fn steiner_volume(p: &ConvexBody, r: f64) -> Result<f64> {
    let n = p.dim();
    (0..=n)
        .map(|k| Ok(binomial(n, k) * quermassintegral_body(p, k)? * r.powi(k as i32)))
        .sum()
}

/// `Vol(Σ eps_i K_i)` with balls folded in through the Steiner formula.
pub fn volume_of_combination(bodies: &[&ConvexBody], eps: &[f64]) -> Result<f64> {
    if bodies.len() != eps.len() || bodies.is_empty() {
        return Err(Error::ArityMismatch {
            expected: bodies.len(),
            found: eps.len(),
        });
    }
    let n = bodies[0].dim();
    let mut radius = 0.0;
    let mut acc: Option<ConvexBody> = None;
    for (b, &e) in bodies.iter().zip(eps) {
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
        match b {
            ConvexBody::Empty { .. } => return Ok(0.0),
            ConvexBody::Ball { radius: r, .. } => radius += e * r,
            ConvexBody::Polytope(_) => {
                let s = b.scale_nonneg(e);
                acc = Some(match acc {
                    None => s,
                    Some(a) => minkowski_sum(&a, &s)?,
                });
            }
        }
    }
    match acc {
        None => Ok(unit_ball_volume(n) * radius.powi(n as i32)),
        Some(p) => steiner_volume(&p, radius),
    }
}

fn check_tuple(bodies: &[&ConvexBody]) -> Result<usize> {
    let n = bodies.first().map(|b| b.dim()).ok_or(Error::ArityMismatch {
        expected: 1,
        found: 0,
    })?;
    if bodies.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: bodies.len(),
        });
    }
    for b in bodies {
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
    }
    Ok(n)
}

/// Mixed volume `V(K_1, ..., K_n)` by inclusion-exclusion over subset sums.
pub fn mixed_volume(bodies: &[&ConvexBody]) -> Result<f64> {
    let n = check_tuple(bodies)?;
    if bodies.iter().any(|b| b.is_empty()) {
        return Ok(0.0);
    }
    // Multilinearity: each polytope is rescaled to unit size so sums of
    // bodies of very different sizes stay well conditioned.
    let mut radius_product = 1.0;
    let mut polys: Vec<ConvexBody> = Vec::new();
    for b in bodies {
        match b {
            ConvexBody::Ball { radius, .. } => radius_product *= radius,
            _ => {
                let size = b
                    .as_polytope()
                    .map_or(0.0, |p| p.vertices().iter().flatten().fold(0.0, |m: f64, c| m.max(c.abs())));
                if size == 0.0 {
                    return Ok(0.0);
                }
                radius_product *= size;
                polys.push(b.scale_nonneg(1.0 / size));
            }
        }
    }
    let j = polys.len();
    let k = n - j;
    if j == 0 {
        return Ok(radius_product * unit_ball_volume(n));
    }
    // sums[mask] = Σ_{i in mask} P_i, built from the mask without its lowest bit
    let mut sums: Vec<Option<ConvexBody>> = vec![None; 1 << j];
    let mut total = 0.0;
    for mask in 1usize..(1 << j) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let s = match &sums[rest] {
            None => polys[low].clone(),
            Some(r) => minkowski_sum(r, &polys[low])?,
        };
        let w = quermassintegral_body(&s, k)?;
        let sign = if (j - mask.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * w;
        sums[mask] = Some(s);
    }
    Ok(radius_product * (total / factorial(j)).max(0.0))
}

/// Homogeneous degree-`n` polynomial in `m` variables, keyed by the
/// sorted index multiset of each monomial.
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiPolynomial {
    pub dim: usize,
    pub args: usize,
    coefficients: BTreeMap<Vec<usize>, f64>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    indices: Vec<usize>,
    coefficient: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyWire {
    dim: usize,
    args: usize,
    terms: Vec<Term>,
}

impl Serialize for MinkowskiPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyWire {
            dim: self.dim,
            args: self.args,
            terms: self
                .coefficients
                .iter()
                .map(|(k, &c)| Term {
                    indices: k.clone(),
                    coefficient: c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Multisets of size `n` drawn from `0..m`, in lexicographic order.
pub fn monomials(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(n, m, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, 0, &mut Vec::new(), &mut out);
    out
}

/// `n! / Π mult!` for a sorted multiset.
pub fn multinomial(multiset: &[usize]) -> f64 {
    let mut denom = 1.0;
    let mut run = 1;
    for w in multiset.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    denom *= factorial(run);
    factorial(multiset.len()) / denom
}

fn monomial_value(mono: &[usize], eps: &[f64]) -> f64 {
    mono.iter().map(|&i| eps[i]).product()
}

impl MinkowskiPolynomial {
    pub fn evaluate(&self, eps: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .map(|(k, c)| c * monomial_value(k, eps))
            .sum()
    }

    /// Coefficient of the monomial `Π eps_i` over the multiset (any order).
    pub fn coefficient(&self, multiset: &[usize]) -> f64 {
        let mut key = multiset.to_vec();
        key.sort_unstable();
        self.coefficients.get(&key).copied().unwrap_or(0.0)
    }

    /// Coefficient divided by its multinomial weight: the mixed volume or
    /// mixed integral of the indexed arguments.
    pub fn mixed_value(&self, multiset: &[usize]) -> f64 {
        let mut key = multiset.to_vec();
        key.sort_unstable();
        self.coefficient(&key) / multinomial(&key)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &f64)> {
        self.coefficients.iter()
    }
}

fn grid_tuples(m: usize, top: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let total = top.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut t = vec![0.0; m];
        for slot in t.iter_mut().rev() {
            *slot = (c % top + 1) as f64;
            c /= top;
        }
        out.push(t);
    }
    out
}

fn select_full_rank(monos: &[Vec<usize>], tuples: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let need = monos.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut chosen = Vec::new();
    for t in tuples {
        let row: Vec<f64> = monos.iter().map(|m| monomial_value(m, t)).collect();
        let scale = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut r = row.clone();
        for b in &basis {
            let d: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in r.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        let nr = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nr > 1e-8 * scale {
            basis.push(r.iter().map(|x| x / nr).collect());
            chosen.push(t.clone());
            if chosen.len() == need {
                return Some(chosen);
            }
        }
    }
    None
}

fn solve_fit<F>(n: usize, m: usize, eval: &F, tuples: &[Vec<f64>]) -> Result<MinkowskiPolynomial>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let monos = monomials(n, m);
    let chosen = select_full_rank(&monos, tuples).ok_or(Error::SingularSystem)?;
    let k = monos.len();
    let a = DMatrix::from_fn(k, k, |r, c| monomial_value(&monos[c], &chosen[r]));
    let rhs: Vec<f64> = chosen.iter().map(|t| eval(t)).collect::<Result<_>>()?;
    let b = DVector::from_vec(rhs);
    let sol = a.lu().solve(&b).ok_or(Error::SingularSystem)?;
    if sol.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(MinkowskiPolynomial {
        dim: n,
        args: m,
        coefficients: monos.into_iter().zip(sol.iter().copied()).collect(),
    })
}

/// Fits a homogeneous degree-`n` polynomial in `m` variables from values on
/// the positive grid `{1, ..., n+1}^m`, retrying once on a jittered grid.
pub fn fit_homogeneous<F>(n: usize, m: usize, eval: F) -> Result<MinkowskiPolynomial>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if m == 0 {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    let tuples = grid_tuples(m, n + 1);
    match solve_fit(n, m, &eval, &tuples) {
        Err(Error::SingularSystem) => {
            let jittered: Vec<Vec<f64>> = tuples
                .iter()
                .enumerate()
                .map(|(r, t)| {
                    t.iter()
                        .enumerate()
                        .map(|(c, x)| x + 0.1 * (((r * 7 + c * 13) % 10) as f64 / 10.0))
                        .collect()
                })
                .collect();
            solve_fit(n, m, &eval, &jittered)
        }
        other => other,
    }
}

/// Minkowski polynomial `F(eps) = Vol(Σ eps_i K_i)` recovered by fitting.
pub fn minkowski_polynomial(bodies: &[&ConvexBody], dim: usize) -> Result<MinkowskiPolynomial> {
    for b in bodies {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
    }
    fit_homogeneous(dim, bodies.len(), |eps| volume_of_combination(bodies, eps))
}
