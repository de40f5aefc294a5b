//! Size functionals `Φ(A) = V(A[m], K_1, ..., K_{n-m})` and the ball
//! rearrangements they induce on bodies and on quasi-concave functions.

use serde::{Deserialize, Serialize};

use crate::convex_bodies::{self, ConvexBody};
use crate::error::{Error, Result};
use crate::mixed_volumes::{binomial, mixed_volume};
use crate::qc_calculus::{LevelStack, Profile, QCFunction, RadialQC, HEIGHT_TOL};
use crate::quadrature;

/// `Φ(A) = C · V(A[m], K_1, ..., K_{n-m})`.
///
/// With `weights`, reference `K_i` enters at height `t` as `r_i(t) K_i`
/// (the level sets of a radial function on `K_i`), and `C = ∫_0^1 Π r_i(t) dt`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SizeFunctional {
    dim: usize,
    degree: usize,
    refs: Vec<ConvexBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Profile>>,
    #[serde(skip)]
    constant: f64,
}

fn full_dimensional(k: &ConvexBody) -> bool {
    match k {
        ConvexBody::Ball { radius, .. } => *radius > 0.0,
        ConvexBody::Polytope(p) => p.rank() == p.dim(),
        ConvexBody::Empty { .. } => false,
    }
}

impl SizeFunctional {
    pub fn new(dim: usize, degree: usize, refs: Vec<ConvexBody>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if degree == 0 || degree > dim {
            return Err(Error::IndexOutOfRange {
                index: degree,
                max: dim,
            });
        }
        if refs.len() != dim - degree {
            return Err(Error::ArityMismatch {
                expected: dim - degree,
                found: refs.len(),
            });
        }
        let refs = refs
            .into_iter()
            .map(|k| k.conform(dim))
            .collect::<Result<Vec<_>>>()?;
        if let Some(k) = refs.iter().find(|k| !full_dimensional(k)) {
            return Err(Error::InvalidInput(format!(
                "reference bodies need interior points, got {k:?}"
            )));
        }
        Ok(SizeFunctional {
            dim,
            degree,
            refs,
            weights: None,
            constant: 1.0,
        })
    }

    pub fn volume(dim: usize) -> Result<Self> {
        Self::new(dim, dim, Vec::new())
    }

    /// `W_k`, of degree `n - k`.
    pub fn quermass(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: dim.saturating_sub(1),
            });
        }
        Self::new(dim, dim - k, vec![ConvexBody::unit_ball(dim); k])
    }

    /// The generalized form with homothetic reference levels.
    pub fn with_weights(mut self, weights: Vec<Profile>) -> Result<Self> {
        if weights.len() != self.refs.len() {
            return Err(Error::ArityMismatch {
                expected: self.refs.len(),
                found: weights.len(),
            });
        }
        for w in &weights {
            w.validate()?;
        }
        let constant = if weights.is_empty() {
            1.0
        } else if weights.iter().all(|w| *w == weights[0]) {
            weights[0].level_moment(weights.len() as f64)?
        } else {
            quadrature::integrate_levels(|t| weights.iter().map(|w| w.radius(t)).product(), 0.0, 1.0)?
        };
        if !(constant > 0.0 && constant.is_finite()) {
            return Err(Error::DivergentIntegral(format!("weight constant {constant}")));
        }
        self.weights = Some(weights);
        self.constant = constant;
        Ok(self)
    }

    /// Rebuilds the cached constant after deserialization.
    pub fn revalidate(self) -> Result<Self> {
        let weights = self.weights.clone();
        let base = Self::new(self.dim, self.degree, self.refs)?;
        match weights {
            Some(w) => base.with_weights(w),
            None => Ok(base),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn refs(&self) -> &[ConvexBody] {
        &self.refs
    }

    /// `C`; 1 without weights.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// The same functional without weights (the `Ψ` with `Φ = C Ψ`).
    pub fn unweighted(&self) -> SizeFunctional {
        SizeFunctional {
            weights: None,
            constant: 1.0,
            ..self.clone()
        }
    }

    /// References as functions: indicators, or radial functions for weights.
    pub fn ref_functions(&self) -> Result<Vec<QCFunction>> {
        match &self.weights {
            None => self.refs.iter().map(|k| QCFunction::indicator(k.clone())).collect(),
            Some(ws) => self
                .refs
                .iter()
                .zip(ws)
                .map(|(k, w)| QCFunction::radial(k.clone(), w.clone()))
                .collect(),
        }
    }

    fn check_dim(&self, a: &ConvexBody) -> Result<()> {
        if a.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.dim(),
            })
        }
    }

    /// `Φ(A)`.
    pub fn eval_body(&self, a: &ConvexBody) -> Result<f64> {
        self.check_dim(a)?;
        let mut args: Vec<&ConvexBody> = vec![a; self.degree];
        args.extend(self.refs.iter());
        Ok(self.constant * mixed_volume(&args)?)
    }

    /// `Φ(A + B)` by multilinear expansion, so ball and polytope summands mix freely.
    pub fn eval_sum(&self, a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let m = self.degree;
        let mut total = 0.0;
        for j in 0..=m {
            let mut args: Vec<&ConvexBody> = vec![a; j];
            args.extend(std::iter::repeat_n(b, m - j));
            args.extend(self.refs.iter());
            total += binomial(m, j) * mixed_volume(&args)?;
        }
        Ok(self.constant * total)
    }

    /// `Φ(D)` for the unit ball.
    pub fn unit_value(&self) -> Result<f64> {
        self.eval_body(&ConvexBody::unit_ball(self.dim))
    }

    /// Radius of the ball `rD` with `Φ(rD) = value`.
    pub fn radius_for(&self, value: f64) -> Result<f64> {
        Ok((value.max(0.0) / self.unit_value()?).powf(1.0 / self.degree as f64))
    }

    /// Radius of `A^Φ = (Φ(A)/Φ(D))^{1/m} D`.
    pub fn ball_radius(&self, a: &ConvexBody) -> Result<f64> {
        self.radius_for(self.eval_body(a)?)
    }

    /// `A^Φ`; a body with `Φ(A) = 0` maps to the radius-0 ball. Centred
    /// balls are returned as they are, so rearranging is idempotent bit for bit.
    pub fn ball_rearrange(&self, a: &ConvexBody) -> Result<ConvexBody> {
        if let ConvexBody::Ball { dim, .. } = a {
            if *dim == self.dim {
                return Ok(a.clone());
            }
        }
        ConvexBody::ball(self.dim, self.ball_radius(a)?)
    }

    /// `Φ(f) = ∫_0^1 Φ(K_t f) dt`.
    pub fn eval_fn(&self, f: &QCFunction) -> Result<f64> {
        self.check_fn(f)?;
        match f {
            QCFunction::Stack(s) => {
                let mut total = 0.0;
                for (i, l) in s.levels().iter().enumerate() {
                    let next = s.levels().get(i + 1).map_or(0.0, |m| m.t);
                    total += (l.t - next) * self.eval_body(&l.body)?;
                }
                Ok(total)
            }
            QCFunction::Radial(r) => {
                Ok(self.eval_body(r.base())? * r.profile().level_moment(self.degree as f64)?)
            }
        }
    }

    /// `Φ(f ⊕ g) = ∫_0^1 Φ(K_t f + K_t g) dt`, without forming the sum.
    pub fn eval_fn_sum(&self, f: &QCFunction, g: &QCFunction) -> Result<f64> {
        self.check_fn(f)?;
        self.check_fn(g)?;
        if let (QCFunction::Radial(a), QCFunction::Radial(b)) = (f, g) {
            if a.profile() == b.profile() {
                return Ok(self.eval_sum(a.base(), b.base())?
                    * a.profile().level_moment(self.degree as f64)?);
            }
        }
        let mut hs = vec![1.0];
        for h in [f, g] {
            if let QCFunction::Stack(s) = h {
                hs.extend(s.heights());
            }
        }
        hs.sort_by(|a, b| b.total_cmp(a));
        hs.dedup_by(|a, b| (*a - *b).abs() <= HEIGHT_TOL);
        let all_stacks = matches!(f, QCFunction::Stack(_)) && matches!(g, QCFunction::Stack(_));
        let mut total = 0.0;
        for (k, &hi) in hs.iter().enumerate() {
            let lo = hs.get(k + 1).copied().unwrap_or(0.0);
            if all_stacks {
                total += (hi - lo) * self.eval_sum(&f.level_set(hi)?, &g.level_set(hi)?)?;
                continue;
            }
            let at = |t: f64| -> Result<f64> {
                // stack levels are constant on (lo, hi]
                let pick = |h: &QCFunction| match h {
                    QCFunction::Stack(_) => h.level_set(hi),
                    QCFunction::Radial(_) => h.level_set(t),
                };
                self.eval_sum(&pick(f)?, &pick(g)?)
            };
            let failure = std::cell::RefCell::new(None);
            let v = quadrature::integrate_levels(
                |t| {
                    at(t).unwrap_or_else(|e| {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    })
                },
                lo,
                hi,
            )?;
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            total += v;
        }
        Ok(total)
    }

    fn check_fn(&self, f: &QCFunction) -> Result<()> {
        if f.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.dim(),
            })
        }
    }

    /// `f^Φ`: every level set replaced by its `Φ`-ball. Stacks keep their
    /// heights; radial functions keep their profile on a ball base.
    pub fn rearrange_fn(&self, f: &QCFunction) -> Result<QCFunction> {
        self.check_fn(f)?;
        match f {
            QCFunction::Stack(s) => {
                let levels = s
                    .levels()
                    .iter()
                    .map(|l| Ok((l.t, self.ball_rearrange(&l.body)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(QCFunction::Stack(LevelStack::new(self.dim, levels)?))
            }
            QCFunction::Radial(r) => Ok(QCFunction::Radial(RadialQC::new(
                self.ball_rearrange(r.base())?,
                r.profile().clone(),
            )?)),
        }
    }
}

/// `f^Φ`.
pub fn phi_rearrange(phi: &SizeFunctional, f: &QCFunction) -> Result<QCFunction> {
    phi.rearrange_fn(f)
}

/// Symmetric decreasing rearrangement `f*` (`Φ = Vol`).
pub fn sdr(f: &QCFunction) -> Result<QCFunction> {
    SizeFunctional::volume(f.dim())?.rearrange_fn(f)
}

/// `A^Φ`.
pub fn ball_rearrange(phi: &SizeFunctional, a: &ConvexBody) -> Result<ConvexBody> {
    phi.ball_rearrange(a)
}

/// `Φ(A)`.
pub fn eval_body(phi: &SizeFunctional, a: &ConvexBody) -> Result<f64> {
    phi.eval_body(a)
}

/// `Φ(f)`.
pub fn eval_fn(phi: &SizeFunctional, f: &QCFunction) -> Result<f64> {
    phi.eval_fn(f)
}

/// Radius of the `Φ`-ball of `K_t f` at each height.
pub fn level_radii(phi: &SizeFunctional, f: &QCFunction, heights: &[f64]) -> Result<Vec<f64>> {
    heights
        .iter()
        .map(|&t| phi.ball_radius(&f.level_set(t)?))
        .collect()
}

/// Heights on which two functions are compared: all stack heights, plus a
/// geometric grid down to `1e-3` when a radial function is involved.
pub fn comparison_heights(fs: &[&QCFunction]) -> Vec<f64> {
    let mut hs = vec![1.0];
    for f in fs {
        match f {
            QCFunction::Stack(s) => hs.extend(s.heights()),
            QCFunction::Radial(_) => hs.extend((1..=32).map(|k| 1e-3f64.powf(k as f64 / 32.0))),
        }
    }
    hs.sort_by(|a, b| b.total_cmp(a));
    hs.dedup_by(|a, b| (*a - *b).abs() <= HEIGHT_TOL);
    hs
}

/// Volume check used by the rearrangement tests.
pub fn volume_of(k: &ConvexBody) -> f64 {
    convex_bodies::volume(k)
}
