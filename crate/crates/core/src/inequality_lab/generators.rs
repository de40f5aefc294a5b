//! Seeded random inputs for the checks.
//!
//! Parameter ranges:
//! - polytopes: hulls of 4 to 10 uniform points in `[-1, 1]^n`, recentred at
//!   the vertex centroid, redrawn until the volume exceeds `0.05 * 2^n / n!`;
//! - stacks: 2 to 6 levels, each the hull of the previous level and 1 to 3
//!   new points, heights `q^k` with `q` in `[0.3, 0.8]`;
//! - profiles: `Exp` and `Gaussian` with `c` in `[0.5, 3]`, `PowerExp` with
//!   `c` in `[0.5, 2]` and `p` in `[1, 3]`, `PowerLaw` with `a` in
//!   `[n + 1, n + 4]` (integrable with room to spare) and `s` in `[0.5, 2]`.

use rand::Rng;

use crate::convex_bodies::{self, point, ConvexBody, Point};
use crate::convex_duality::GeomConvexFn;
use crate::error::Result;
use crate::qc_calculus::{LevelStack, Profile, QCFunction};

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn uniform_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, half: f64) -> Point {
    let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-half..=half)).collect();
    point(&c)
}

/// Full-dimensional polytope with the origin at its vertex centroid.
pub fn random_polytope<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<ConvexBody> {
    let floor = 0.05 * 2f64.powi(dim as i32) / factorial(dim);
    loop {
        let count = rng.gen_range(4..=10);
        let pts: Vec<Point> = (0..count).map(|_| uniform_point(rng, dim, 1.0)).collect();
        let body = ConvexBody::from_points(dim, &pts)?;
        if convex_bodies::volume(&body) < floor {
            continue;
        }
        let c = body.vertex_centroid().expect("polytope");
        let shift: Vec<f64> = c[..dim].iter().map(|x| -x).collect();
        return body.translate(&shift);
    }
}

/// Nested stack of 2 to 6 polytope levels.
pub fn random_stack<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<LevelStack> {
    let count = rng.gen_range(2..=6);
    let q: f64 = rng.gen_range(0.3..=0.8);
    let top = convex_bodies::scale(&random_polytope(rng, dim)?, rng.gen_range(0.3..=0.6))?;
    let mut levels = vec![(1.0, top)];
    for k in 1..count {
        let prev = &levels[k - 1].1;
        let mut pts: Vec<Point> = prev.as_polytope().expect("polytope").vertices().to_vec();
        let reach = 0.6 + 0.5 * k as f64;
        for _ in 0..rng.gen_range(1..=3) {
            pts.push(uniform_point(rng, dim, reach));
        }
        levels.push((q.powi(k as i32), ConvexBody::from_points(dim, &pts)?));
    }
    LevelStack::new(dim, levels)
}

/// Profile from all four parametric families, integrable in dimension `dim`.
pub fn random_profile<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Profile {
    let n = dim as f64;
    match rng.gen_range(0..4) {
        3 => Profile::PowerLaw {
            a: rng.gen_range(n + 1.0..=n + 4.0),
            s: rng.gen_range(0.5..=2.0),
        },
        _ => random_lc_profile(rng),
    }
}

/// Log-concave profile (`Exp`, `Gaussian` or `PowerExp` with `p >= 1`).
pub fn random_lc_profile<R: Rng + ?Sized>(rng: &mut R) -> Profile {
    match rng.gen_range(0..3) {
        0 => Profile::Exp {
            c: rng.gen_range(0.5..=3.0),
        },
        1 => Profile::Gaussian {
            c: rng.gen_range(0.5..=3.0),
        },
        _ => Profile::PowerExp {
            c: rng.gen_range(0.5..=2.0),
            p: rng.gen_range(1.0..=3.0),
        },
    }
}

/// Radial function on a random polytope or the unit ball.
pub fn random_radial<R: Rng + ?Sized>(rng: &mut R, dim: usize, log_concave: bool) -> Result<QCFunction> {
    let base = if rng.gen_bool(0.25) {
        ConvexBody::unit_ball(dim)
    } else {
        random_polytope(rng, dim)?
    };
    let profile = if log_concave {
        random_lc_profile(rng)
    } else {
        random_profile(rng, dim)
    };
    QCFunction::radial(base, profile)
}

/// Stack with probability `stack_share`, otherwise a radial function.
pub fn random_function<R: Rng + ?Sized>(rng: &mut R, dim: usize, stack_share: f64) -> Result<QCFunction> {
    if rng.gen_bool(stack_share) {
        Ok(random_stack(rng, dim)?.into())
    } else {
        random_radial(rng, dim, false)
    }
}

/// Positive piecewise-affine function: a scaled gauge of a random polytope,
/// up to two extra pieces with negative offsets, and sometimes a domain.
pub fn random_geom_convex_fn<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<GeomConvexFn> {
    let body = random_polytope(rng, dim)?;
    let p = body.as_polytope().expect("polytope");
    let factor: f64 = rng.gen_range(0.5..=2.0);
    let mut pieces: Vec<(Vec<f64>, f64)> = p
        .facets()
        .iter()
        .map(|(n, b)| (n[..dim].iter().map(|x| factor * x / b).collect(), 0.0))
        .collect();
    for _ in 0..rng.gen_range(0..=2) {
        let a: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..=3.0)).collect();
        pieces.push((a, -rng.gen_range(0.1..=1.0)));
    }
    let domain = if rng.gen_bool(0.3) {
        Some(convex_bodies::scale(&random_polytope(rng, dim)?, rng.gen_range(1.5..=3.0))?)
    } else {
        None
    };
    GeomConvexFn::new(dim, &pieces, domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_inputs_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [2, 3] {
            for _ in 0..20 {
                let p = random_polytope(&mut rng, dim).unwrap();
                assert!(p.contains_point(&[0.0; 3]));
                let s = random_stack(&mut rng, dim).unwrap();
                assert!((2..=6).contains(&s.levels().len()));
                assert!(random_lc_profile(&mut rng).is_log_concave());
                random_radial(&mut rng, dim, false).unwrap();
            }
        }
        for _ in 0..20 {
            let phi = random_geom_convex_fn(&mut rng, 2).unwrap();
            assert_eq!(phi.evaluate(&[0.0, 0.0]), 0.0);
            assert!(phi.evaluate(&[0.3, -0.2]) > 0.0);
        }
    }

    #[test]
    fn same_seed_same_input() {
        let a = random_stack(&mut ChaCha8Rng::seed_from_u64(9), 2).unwrap();
        let b = random_stack(&mut ChaCha8Rng::seed_from_u64(9), 2).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
