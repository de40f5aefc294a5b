//! Quasi-concave functions represented by their upper level sets.
//!
//! Two representations are supported: a finite [`LevelStack`] of nested
//! bodies (a step function in the height variable), and a [`RadialQC`]
//! whose level sets are the homothets `r(t) * base` of one body.

pub mod grid;
pub mod profile;

use serde::{Deserialize, Serialize};

use crate::convex_bodies::{self, hull, minkowski_sum, ConvexBody, Point};
use crate::error::{Error, Result};
use crate::mixed_volumes::{self, binomial, fit_homogeneous, MinkowskiPolynomial};
use crate::quadrature;
pub use profile::Profile;

/// Heights closer than this are merged.
pub const HEIGHT_TOL: f64 = 1e-12;
/// Geometric heights added when a radial function is discretized.
pub const RADIAL_SAMPLES: usize = 64;
/// Lowest height kept when a radial function is discretized.
pub const RADIAL_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Level {
    pub t: f64,
    pub body: ConvexBody,
}

/// Nested bodies `K_1 ⊆ ... ⊆ K_m` at heights `1 = t_1 > ... > t_m > 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "StackWire", into = "StackWire")]
pub struct LevelStack {
    dim: usize,
    levels: Vec<Level>,
}

#[derive(Serialize, Deserialize)]
struct StackWire {
    levels: Vec<Level>,
}

impl TryFrom<StackWire> for LevelStack {
    type Error = Error;
    fn try_from(mut w: StackWire) -> Result<Self> {
        // files may list levels in either order
        w.levels.sort_by(|a, b| b.t.total_cmp(&a.t));
        // balls written without a dimension follow the other bodies
        let dim = w
            .levels
            .iter()
            .find(|l| !matches!(l.body, ConvexBody::Ball { .. }))
            .or(w.levels.first())
            .map(|l| l.body.dim())
            .ok_or_else(|| Error::InvalidInput("stack without levels".into()))?;
        let levels = w
            .levels
            .into_iter()
            .map(|l| Ok((l.t, l.body.conform(dim)?)))
            .collect::<Result<Vec<_>>>()?;
        LevelStack::new(dim, levels)
    }
}

impl From<LevelStack> for StackWire {
    fn from(s: LevelStack) -> Self {
        StackWire { levels: s.levels }
    }
}

impl LevelStack {
    pub fn new(dim: usize, levels: Vec<(f64, ConvexBody)>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidInput("stack without levels".into()));
        }
        if (levels[0].0 - 1.0).abs() > HEIGHT_TOL {
            return Err(Error::InvalidInput(format!(
                "top height must be 1, got {}",
                levels[0].0
            )));
        }
        for w in levels.windows(2) {
            if !(w[1].0 < w[0].0 && w[1].0 > 0.0) {
                return Err(Error::InvalidInput(
                    "heights must decrease strictly inside (0, 1]".into(),
                ));
            }
        }
        for (_, b) in &levels {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: b.dim(),
                });
            }
        }
        if !levels[0].1.contains_point(&[0.0; 3]) {
            return Err(Error::InvalidInput(
                "top level must contain the origin".into(),
            ));
        }
        for w in levels.windows(2) {
            if !convex_bodies::contains(&w[1].1, &w[0].1)? {
                return Err(Error::InvalidInput(format!(
                    "level at {} is not contained in the level at {}",
                    w[0].0, w[1].0
                )));
            }
        }
        let mut levels: Vec<Level> = levels
            .into_iter()
            .map(|(t, body)| Level { t, body })
            .collect();
        levels[0].t = 1.0;
        Ok(LevelStack { dim, levels })
    }

    /// `1_K`.
    pub fn indicator(body: ConvexBody) -> Result<Self> {
        Self::new(body.dim(), vec![(1.0, body)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn heights(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.t).collect()
    }

    fn level_at(&self, t: f64) -> ConvexBody {
        match self.levels.iter().rposition(|l| l.t >= t - HEIGHT_TOL) {
            Some(i) => self.levels[i].body.clone(),
            None => ConvexBody::empty(self.dim),
        }
    }
}

/// Level sets `r(t) * base` for a radial profile `h` with `f(x) = h(‖x‖_base)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RadialWire", into = "RadialWire")]
pub struct RadialQC {
    base: ConvexBody,
    profile: Profile,
}

#[derive(Serialize, Deserialize)]
struct RadialWire {
    base: ConvexBody,
    profile: Profile,
}

impl TryFrom<RadialWire> for RadialQC {
    type Error = Error;
    fn try_from(w: RadialWire) -> Result<Self> {
        RadialQC::new(w.base, w.profile)
    }
}

impl From<RadialQC> for RadialWire {
    fn from(r: RadialQC) -> Self {
        RadialWire {
            base: r.base,
            profile: r.profile,
        }
    }
}

impl RadialQC {
    pub fn new(base: ConvexBody, profile: Profile) -> Result<Self> {
        profile.validate()?;
        base.gauge(&[0.0; 3])?;
        Ok(RadialQC { base, profile })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &ConvexBody {
        &self.base
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Radius of the base ball, if the base is one.
    pub fn ball_radius(&self) -> Option<f64> {
        match self.base {
            ConvexBody::Ball { radius, .. } => Some(radius),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum QCFunction {
    Stack(LevelStack),
    Radial(RadialQC),
}

impl From<LevelStack> for QCFunction {
    fn from(s: LevelStack) -> Self {
        QCFunction::Stack(s)
    }
}

impl From<RadialQC> for QCFunction {
    fn from(r: RadialQC) -> Self {
        QCFunction::Radial(r)
    }
}

fn outer_radius(body: &ConvexBody) -> f64 {
    match body {
        ConvexBody::Empty { .. } => 0.0,
        ConvexBody::Ball { radius, .. } => *radius,
        ConvexBody::Polytope(p) => p.vertices().iter().map(hull::norm).fold(0.0, f64::max),
    }
}

impl QCFunction {
    pub fn indicator(body: ConvexBody) -> Result<Self> {
        Ok(QCFunction::Stack(LevelStack::indicator(body)?))
    }

    pub fn radial(base: ConvexBody, profile: Profile) -> Result<Self> {
        Ok(QCFunction::Radial(RadialQC::new(base, profile)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            QCFunction::Stack(s) => s.dim,
            QCFunction::Radial(r) => r.dim(),
        }
    }

    /// Whether every level set is a centred ball.
    pub fn is_rotation_invariant(&self) -> bool {
        match self {
            QCFunction::Stack(s) => s
                .levels
                .iter()
                .all(|l| matches!(l.body, ConvexBody::Ball { .. })),
            QCFunction::Radial(r) => r.ball_radius().is_some(),
        }
    }

    /// Upper level set `{x : f(x) >= t}`.
    pub fn level_set(&self, t: f64) -> Result<ConvexBody> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::HeightOutOfRange(t));
        }
        Ok(match self {
            QCFunction::Stack(s) => s.level_at(t),
            QCFunction::Radial(r) => r.base.scale_nonneg(r.profile.radius(t)),
        })
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let p = convex_bodies::point(x);
        match self {
            QCFunction::Stack(s) => s
                .levels
                .iter()
                .find(|l| l.body.contains_point(&p))
                .map_or(0.0, |l| l.t),
            QCFunction::Radial(r) => {
                let g = r.base.gauge(&p).expect("base validated at construction");
                r.profile.height(g)
            }
        }
    }

    /// Largest absolute coordinate over the support (radial functions are
    /// cut at [`RADIAL_FLOOR`]).
    pub fn extent(&self) -> f64 {
        let body = match self {
            QCFunction::Stack(s) => s.levels.last().unwrap().body.clone(),
            QCFunction::Radial(r) => r.base.scale_nonneg(r.profile.radius(RADIAL_FLOOR)),
        };
        (0..self.dim())
            .flat_map(|i| {
                let mut e = [0.0; 3];
                e[i] = 1.0;
                let mut m = e;
                m[i] = -1.0;
                [body.support_raw(&e), body.support_raw(&m)]
            })
            .fold(0.0, f64::max)
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

/// Descending union of heights, merging near-duplicates.
fn merge_heights(mut hs: Vec<f64>) -> Vec<f64> {
    hs.sort_by(|a, b| b.total_cmp(a));
    hs.dedup_by(|a, b| (*a - *b).abs() <= HEIGHT_TOL);
    hs
}

fn radial_heights() -> Vec<f64> {
    (0..=RADIAL_SAMPLES)
        .map(|k| RADIAL_FLOOR.powf(k as f64 / RADIAL_SAMPLES as f64))
        .collect()
}

/// How far a discretized sum may sit below the exact one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    /// Hausdorff distance bound between exact and discretized level sets at
    /// heights at or above `height_floor`.
    pub level_gap: f64,
    /// Below this height the discretized function vanishes.
    pub height_floor: f64,
}

impl Discretization {
    pub const EXACT: Discretization = Discretization {
        level_gap: 0.0,
        height_floor: 0.0,
    };
}

fn discretize(r: &RadialQC, heights: &[f64]) -> Result<(LevelStack, f64)> {
    let radii: Vec<f64> = heights.iter().map(|&t| r.profile.radius(t)).collect();
    let gap = radii
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max)
        * outer_radius(&r.base);
    let levels = heights
        .iter()
        .zip(&radii)
        .map(|(&t, &rad)| (t, r.base.scale_nonneg(rad)))
        .collect();
    Ok((LevelStack::new(r.dim(), levels)?, gap))
}

fn stack_sum(f: &LevelStack, g: &LevelStack) -> Result<LevelStack> {
    let hs = merge_heights(f.heights().into_iter().chain(g.heights()).collect());
    let levels = hs
        .iter()
        .map(|&t| Ok((t, minkowski_sum(&f.level_at(t), &g.level_at(t))?)))
        .collect::<Result<Vec<_>>>()?;
    LevelStack::new(f.dim, levels)
}

/// Radial pair with homothetic ball bases or one shared base.
fn radial_sum(f: &RadialQC, g: &RadialQC) -> Option<RadialQC> {
    if let (Some(a), Some(b)) = (f.ball_radius(), g.ball_radius()) {
        let profile = Profile::sum(&f.profile.dilate(a), &g.profile.dilate(b));
        return Some(RadialQC {
            base: ConvexBody::unit_ball(f.dim()),
            profile,
        });
    }
    if f.base.approx_eq(&g.base, 1e-12) {
        return Some(RadialQC {
            base: f.base.clone(),
            profile: Profile::sum(&f.profile, &g.profile),
        });
    }
    None
}

/// `f ⊕ g` together with the discretization bound (zero when exact).
pub fn oplus_with_bound(f: &QCFunction, g: &QCFunction) -> Result<(QCFunction, Discretization)> {
    same_dim(f.dim(), g.dim())?;
    match (f, g) {
        (QCFunction::Stack(a), QCFunction::Stack(b)) => {
            Ok((stack_sum(a, b)?.into(), Discretization::EXACT))
        }
        (QCFunction::Radial(a), QCFunction::Radial(b)) => {
            if let Some(r) = radial_sum(a, b) {
                return Ok((r.into(), Discretization::EXACT));
            }
            let hs = radial_heights();
            let (sa, ga) = discretize(a, &hs)?;
            let (sb, gb) = discretize(b, &hs)?;
            Ok((
                stack_sum(&sa, &sb)?.into(),
                Discretization {
                    level_gap: ga + gb,
                    height_floor: RADIAL_FLOOR,
                },
            ))
        }
        (QCFunction::Stack(s), QCFunction::Radial(r)) | (QCFunction::Radial(r), QCFunction::Stack(s)) => {
            let hs = merge_heights(s.heights().into_iter().chain(radial_heights()).collect());
            let (sr, gap) = discretize(r, &hs)?;
            // stack heights below the floor keep the radial part at its last sample
            let floor = RADIAL_FLOOR.min(*hs.last().unwrap());
            Ok((
                stack_sum(s, &sr)?.into(),
                Discretization {
                    level_gap: gap,
                    height_floor: floor,
                },
            ))
        }
    }
}

/// `f ⊕ g`: level sets add in the Minkowski sense.
pub fn oplus(f: &QCFunction, g: &QCFunction) -> Result<QCFunction> {
    oplus_with_bound(f, g).map(|(h, _)| h)
}

/// `lambda ⊙ f`: every level set scaled by `lambda`.
pub fn odot(lambda: f64, f: &QCFunction) -> Result<QCFunction> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NonpositiveScale(lambda));
    }
    Ok(match f {
        QCFunction::Stack(s) => QCFunction::Stack(LevelStack {
            dim: s.dim,
            levels: s
                .levels
                .iter()
                .map(|l| Level {
                    t: l.t,
                    body: l.body.scale_nonneg(lambda),
                })
                .collect(),
        }),
        QCFunction::Radial(r) => QCFunction::Radial(RadialQC {
            base: r.base.scale_nonneg(lambda),
            profile: r.profile.clone(),
        }),
    })
}

/// `∫ f = ∫_0^1 Vol(K_t f) dt`.
pub fn integral(f: &QCFunction) -> Result<f64> {
    quermassintegral_fn(f, 0)
}

/// [`integral`] with radial profiles integrated by quadrature only.
pub fn integral_by_quadrature(f: &QCFunction) -> Result<f64> {
    match f {
        QCFunction::Stack(_) => integral(f),
        QCFunction::Radial(r) => Ok(convex_bodies::volume(&r.base)
            * r.profile.level_moment_quadrature(r.dim() as f64)?),
    }
}

/// Splits `(0, 1]` at the stack heights; each piece has constant stack levels.
fn height_intervals(fs: &[&QCFunction]) -> Vec<(f64, f64)> {
    let mut hs: Vec<f64> = vec![1.0];
    for f in fs {
        if let QCFunction::Stack(s) = f {
            hs.extend(s.heights());
        }
    }
    let hs = merge_heights(hs);
    hs.iter()
        .enumerate()
        .map(|(k, &hi)| (hs.get(k + 1).copied().unwrap_or(0.0), hi))
        .collect()
}

/// `∫_{lo}^{hi} Π r_i(t) dt` over the radial arguments.
fn radial_weight(profiles: &[&Profile], lo: f64, hi: f64) -> Result<f64> {
    if profiles.is_empty() {
        return Ok(hi - lo);
    }
    if lo == 0.0 && hi == 1.0 && profiles.iter().all(|p| *p == profiles[0]) {
        return profiles[0].level_moment(profiles.len() as f64);
    }
    quadrature::integrate_levels(|t| profiles.iter().map(|p| p.radius(t)).product(), lo, hi)
}

/// Mixed integral `V(f_1, ..., f_n) = ∫_0^1 V(K_t f_1, ..., K_t f_n) dt`.
///
/// Radial arguments contribute `r_i(t)` times their base, so each piece
/// between stack heights is one mixed volume times a height integral.
pub fn mixed_integral(fs: &[&QCFunction]) -> Result<f64> {
    let n = fs.first().map_or(0, |f| f.dim());
    if fs.len() != n || n == 0 {
        return Err(Error::ArityMismatch {
            expected: n.max(1),
            found: fs.len(),
        });
    }
    for f in fs {
        same_dim(n, f.dim())?;
    }
    let profiles: Vec<&Profile> = fs
        .iter()
        .filter_map(|f| match f {
            QCFunction::Radial(r) => Some(&r.profile),
            _ => None,
        })
        .collect();
    let mut total = 0.0;
    for (lo, hi) in height_intervals(fs) {
        let bodies: Vec<ConvexBody> = fs
            .iter()
            .map(|f| match f {
                QCFunction::Stack(s) => s.level_at(hi),
                QCFunction::Radial(r) => r.base.clone(),
            })
            .collect();
        let refs: Vec<&ConvexBody> = bodies.iter().collect();
        let v = mixed_volumes::mixed_volume(&refs)?;
        if v == 0.0 {
            continue;
        }
        total += v * radial_weight(&profiles, lo, hi)?;
    }
    Ok(total)
}

/// `∫ (ε_1 ⊙ f_1 ⊕ ... ⊕ ε_m ⊙ f_m)`, evaluated without polarization.
///
/// Zero weights drop their term. Stacks are summed level by level; radial
/// arguments are integrated over heights with the bodies summed at each
/// quadrature node (ball terms through the Steiner expansion).
pub fn combination_integral(fs: &[&QCFunction], eps: &[f64]) -> Result<f64> {
    if fs.len() != eps.len() {
        return Err(Error::ArityMismatch {
            expected: fs.len(),
            found: eps.len(),
        });
    }
    let n = fs.first().map_or(0, |f| f.dim());
    for f in fs {
        same_dim(n, f.dim())?;
    }
    let active: Vec<(&QCFunction, f64)> = fs
        .iter()
        .zip(eps)
        .filter(|(_, &e)| e != 0.0)
        .map(|(f, &e)| (*f, e))
        .collect();
    if active.is_empty() {
        return Ok(0.0);
    }
    // one exact shortcut: radials that add into a single radial function
    if active.iter().all(|(f, _)| matches!(f, QCFunction::Radial(_))) {
        let mut acc = odot(active[0].1, active[0].0)?;
        let mut exact = true;
        for (f, e) in &active[1..] {
            match (&acc, odot(*e, f)?) {
                (QCFunction::Radial(a), QCFunction::Radial(b)) => match radial_sum(a, &b) {
                    Some(r) => acc = r.into(),
                    None => {
                        exact = false;
                        break;
                    }
                },
                _ => unreachable!(),
            }
        }
        if exact {
            return integral(&acc);
        }
    }
    let fns: Vec<&QCFunction> = active.iter().map(|(f, _)| *f).collect();
    let weights: Vec<f64> = active.iter().map(|(_, e)| *e).collect();
    let mut total = 0.0;
    for (lo, hi) in height_intervals(&fns) {
        let volume_at = |t: f64| -> Result<f64> {
            let bodies: Vec<ConvexBody> = fns
                .iter()
                .map(|f| match f {
                    QCFunction::Stack(s) => s.level_at(hi),
                    QCFunction::Radial(r) => r.base.scale_nonneg(r.profile.radius(t)),
                })
                .collect();
            let refs: Vec<&ConvexBody> = bodies.iter().collect();
            mixed_volumes::volume_of_combination(&refs, &weights)
        };
        if fns.iter().all(|f| matches!(f, QCFunction::Stack(_))) {
            total += (hi - lo) * volume_at(hi)?;
        } else {
            let failure = std::cell::RefCell::new(None);
            let v = quadrature::integrate_levels(
                |t| match volume_at(t) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                },
                lo,
                hi,
            )?;
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            total += v;
        }
    }
    Ok(total)
}

/// Coefficients of `F(ε) = ∫ ⊕ ε_i ⊙ f_i`, fitted from direct evaluations.
pub fn minkowski_polynomial_fn(fs: &[&QCFunction]) -> Result<MinkowskiPolynomial> {
    let n = fs
        .first()
        .ok_or(Error::ArityMismatch {
            expected: 1,
            found: 0,
        })?
        .dim();
    fit_homogeneous(n, fs.len(), |eps| combination_integral(fs, eps))
}

/// `f ⊕ ε ⊙ 1_D`: every level set grows by `εD`.
pub fn epsilon_extension(f: &QCFunction, eps: f64) -> Result<QCFunction> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::NonpositiveScale(eps));
    }
    match f {
        QCFunction::Radial(r) => match r.ball_radius() {
            Some(rho) => Ok(QCFunction::Radial(RadialQC {
                base: r.base.clone(),
                profile: Profile::sum(&r.profile, &Profile::Indicator { radius: eps / rho }),
            })),
            None => Err(Error::UnsupportedMix),
        },
        QCFunction::Stack(_) => {
            let disc = QCFunction::indicator(ConvexBody::ball(f.dim(), eps)?)?;
            oplus(f, &disc)
        }
    }
}

/// `∫ f_ε = Σ_k C(n,k) W_k(f) ε^k`, valid for every representation.
pub fn epsilon_extension_integral(f: &QCFunction, eps: f64) -> Result<f64> {
    let n = f.dim();
    (0..=n)
        .map(|k| Ok(binomial(n, k) * quermassintegral_fn(f, k)? * eps.powi(k as i32)))
        .sum()
}

/// `W_k(f) = ∫_0^1 W_k(K_t f) dt`.
pub fn quermassintegral_fn(f: &QCFunction, k: usize) -> Result<f64> {
    let n = f.dim();
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    match f {
        QCFunction::Stack(s) => {
            let mut total = 0.0;
            for (i, l) in s.levels.iter().enumerate() {
                let next = s.levels.get(i + 1).map_or(0.0, |m| m.t);
                total += (l.t - next) * mixed_volumes::quermassintegral_body(&l.body, k)?;
            }
            Ok(total)
        }
        // W_k(r B) = r^{n-k} W_k(B)
        QCFunction::Radial(r) => Ok(mixed_volumes::quermassintegral_body(&r.base, k)?
            * r.profile.level_moment((n - k) as f64)?),
    }
}

/// `W_k(f)` as the mixed integral `V(f[n-k], 1_D[k])`.
pub fn quermassintegral_fn_mixed(f: &QCFunction, k: usize) -> Result<f64> {
    let n = f.dim();
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let disc = QCFunction::indicator(ConvexBody::unit_ball(n))?;
    let mut args: Vec<&QCFunction> = vec![f; n - k];
    args.extend(std::iter::repeat_n(&disc, k));
    mixed_integral(&args)
}

/// `S(f) = n W_1(f)`.
pub fn surface_area_fn(f: &QCFunction) -> Result<f64> {
    Ok(f.dim() as f64 * quermassintegral_fn(f, 1)?)
}

/// `V(f, ..., f, g)` for a rotation-invariant `g`.
pub fn generalized_surface_area(f: &QCFunction, g: &QCFunction) -> Result<f64> {
    same_dim(f.dim(), g.dim())?;
    if !g.is_rotation_invariant() {
        return Err(Error::NotRotationInvariant);
    }
    let mut args: Vec<&QCFunction> = vec![f; f.dim() - 1];
    args.push(g);
    mixed_integral(&args)
}

/// A geometric function multiplied by a constant height, `height * f`.
///
/// Level sets of `height * f` at `s` are those of `f` at `s / height`, so
/// every level-set integral scales by `height`.
#[derive(Debug, Clone)]
pub struct HeightScaled {
    pub height: f64,
    pub f: QCFunction,
}

impl HeightScaled {
    pub fn new(height: f64, f: QCFunction) -> Result<Self> {
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::NonpositiveScale(height));
        }
        Ok(HeightScaled { height, f })
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.height * self.f.evaluate(x)
    }

    pub fn integral(&self) -> Result<f64> {
        Ok(self.height * integral(&self.f)?)
    }

    pub fn quermassintegral(&self, k: usize) -> Result<f64> {
        Ok(self.height * quermassintegral_fn(&self.f, k)?)
    }

    pub fn surface_area(&self) -> Result<f64> {
        Ok(self.height * surface_area_fn(&self.f)?)
    }
}

/// Point helper for callers holding slices.
pub fn to_point(x: &[f64]) -> Point {
    convex_bodies::point(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn square(h: f64) -> ConvexBody {
        ConvexBody::cube(2, -h, h).unwrap()
    }

    fn exp_disc(c: f64) -> QCFunction {
        QCFunction::radial(ConvexBody::unit_ball(2), Profile::Exp { c }).unwrap()
    }

    fn sample_stack() -> QCFunction {
        LevelStack::new(
            2,
            vec![
                (1.0, square(0.5)),
                (0.6, ConvexBody::regular_polygon(6, 1.0, 0.0).unwrap()),
                (0.2, square(1.5)),
            ],
        )
        .unwrap()
        .into()
    }

    #[test]
    fn level_sets_and_values() {
        let f = exp_disc(1.0);
        let k = f.level_set((-1.0f64).exp()).unwrap();
        assert!(k.approx_eq(&ConvexBody::ball(2, 1.0).unwrap(), 1e-12));
        assert!((f.evaluate(&[2.0, 0.0]) - (-2.0f64).exp()).abs() < 1e-15);
        assert!(matches!(f.level_set(0.0), Err(Error::HeightOutOfRange(_))));
        let s = sample_stack();
        assert_eq!(s.evaluate(&[0.0, 0.0]), 1.0);
        assert_eq!(s.evaluate(&[0.9, 0.0]), 0.6);
        assert_eq!(s.evaluate(&[1.4, 1.4]), 0.2);
        assert_eq!(s.evaluate(&[1.6, 0.0]), 0.0);
        assert!(s.level_set(0.5).unwrap().approx_eq(&s.level_set(0.6).unwrap(), 0.0));
    }

    #[test]
    fn construction_rejects_bad_stacks() {
        assert!(LevelStack::new(2, vec![(0.9, square(1.0))]).is_err());
        assert!(LevelStack::new(2, vec![(1.0, square(1.0)), (0.5, square(0.5))]).is_err());
        let shifted = square(0.5).translate(&[2.0, 0.0]).unwrap();
        assert!(LevelStack::new(2, vec![(1.0, shifted)]).is_err());
        assert!(QCFunction::radial(square(1.0).translate(&[1.0, 0.0]).unwrap(), Profile::Exp { c: 1.0 }).is_err());
    }

    #[test]
    fn indicator_sum_is_indicator_of_sum() {
        let a = QCFunction::indicator(square(1.0)).unwrap();
        let b = QCFunction::indicator(ConvexBody::regular_polygon(5, 1.0, 0.3).unwrap()).unwrap();
        let s = oplus(&a, &b).unwrap();
        let want = minkowski_sum(&square(1.0), &ConvexBody::regular_polygon(5, 1.0, 0.3).unwrap()).unwrap();
        assert!(s.level_set(0.5).unwrap().approx_eq(&want, 1e-12));
    }

    #[test]
    fn doubling_matches_scaling() {
        let f = sample_stack();
        let sum = oplus(&f, &f).unwrap();
        let twice = odot(2.0, &f).unwrap();
        for t in [1.0, 0.7, 0.6, 0.3, 0.1] {
            assert!(sum.level_set(t).unwrap().approx_eq(&twice.level_set(t).unwrap(), 1e-12));
        }
        assert!((integral(&twice).unwrap() - 4.0 * integral(&f).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_integrals() {
        assert!((integral(&exp_disc(1.0)).unwrap() - 2.0 * PI).abs() < 1e-12);
        let a = 3.0f64;
        let s = ((a - 1.0) * (a - 2.0)).sqrt();
        let p = QCFunction::radial(ConvexBody::unit_ball(2), Profile::PowerLaw { a, s }).unwrap();
        assert!((integral(&p).unwrap() - 2.0 * PI).abs() < 1e-10);
        assert!((integral_by_quadrature(&p).unwrap() - 2.0 * PI).abs() < 1e-8);
        let want = 2.0 * PI * ((a - 2.0) / (a - 1.0)).sqrt();
        assert!((surface_area_fn(&p).unwrap() - want).abs() < 1e-10);
        // a² e^{-a|x|}
        let a = 2.5;
        let g = HeightScaled::new(a * a, exp_disc(a)).unwrap();
        assert!((g.integral().unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((g.surface_area().unwrap() - 2.0 * PI * a).abs() < 1e-12);
    }

    #[test]
    fn mixed_integral_of_homothetic_radials() {
        let k1 = square(1.0);
        let k2 = ConvexBody::regular_polygon(6, 1.0, 0.1).unwrap();
        let f1 = QCFunction::radial(k1.clone(), Profile::Exp { c: 1.0 }).unwrap();
        let f2 = QCFunction::radial(k2.clone(), Profile::Exp { c: 1.0 }).unwrap();
        let v = mixed_volumes::mixed_volume(&[&k1, &k2]).unwrap();
        assert!((mixed_integral(&[&f1, &f2]).unwrap() - 2.0 * v).abs() < 1e-12);
    }

    #[test]
    fn mixed_integral_diagonal_and_indicators() {
        let f = sample_stack();
        assert!((mixed_integral(&[&f, &f]).unwrap() - integral(&f).unwrap()).abs() < 1e-12);
        let a = QCFunction::indicator(square(1.0)).unwrap();
        let d = QCFunction::indicator(ConvexBody::unit_ball(2)).unwrap();
        assert!((mixed_integral(&[&a, &d]).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn quermass_closed_form_matches_mixed_route() {
        for f in [exp_disc(1.3), sample_stack()] {
            for k in 0..=2 {
                let a = quermassintegral_fn(&f, k).unwrap();
                let b = quermassintegral_fn_mixed(&f, k).unwrap();
                assert!((a - b).abs() < 1e-9 * a.max(1.0), "k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn epsilon_extension_polynomial() {
        let f = exp_disc(1.0);
        for eps in [0.25, 1.0, 2.0] {
            let want = 2.0 * PI + 2.0 * PI * eps + PI * eps * eps;
            let ext = epsilon_extension(&f, eps).unwrap();
            assert!((integral(&ext).unwrap() - want).abs() < 1e-9);
            assert!((epsilon_extension_integral(&f, eps).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_sums_are_exact() {
        let f = exp_disc(1.0);
        let g = QCFunction::radial(ConvexBody::ball(2, 2.0).unwrap(), Profile::Gaussian { c: 1.0 }).unwrap();
        let (h, bound) = oplus_with_bound(&f, &g).unwrap();
        assert_eq!(bound, Discretization::EXACT);
        for t in [0.9, 0.4, 0.01] {
            let r = -f64::ln(t) + 2.0 * (-f64::ln(t)).sqrt();
            match h.level_set(t).unwrap() {
                ConvexBody::Ball { radius, .. } => assert!((radius - r).abs() < 1e-12),
                _ => panic!(),
            }
        }
    }

    #[test]
    fn stack_plus_radial_is_bounded_below_exact() {
        let s = QCFunction::indicator(ConvexBody::unit_ball(2)).unwrap();
        let f = exp_disc(1.0);
        let (h, bound) = oplus_with_bound(&s, &f).unwrap();
        assert!(bound.level_gap > 0.0);
        for t in [0.9f64, 0.3, 0.01] {
            let exact = 1.0 - t.ln();
            let ConvexBody::Ball { radius, .. } = h.level_set(t).unwrap() else { panic!() };
            assert!(radius <= exact + 1e-12 && exact - radius <= bound.level_gap + 1e-12);
        }
    }

    #[test]
    fn polynomial_matches_mixed_integrals() {
        let f = sample_stack();
        let g: QCFunction = LevelStack::new(
            2,
            vec![(1.0, ConvexBody::regular_polygon(3, 0.8, 0.2).unwrap()), (0.45, square(1.2))],
        )
        .unwrap()
        .into();
        let poly = minkowski_polynomial_fn(&[&f, &g]).unwrap();
        let cross = mixed_integral(&[&f, &g]).unwrap();
        assert!((poly.mixed_value(&[0, 1]) - cross).abs() < 1e-8 * cross);
        assert!((poly.mixed_value(&[0, 0]) - integral(&f).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn generalized_surface_area_needs_rotation_invariance() {
        let f = sample_stack();
        let d = QCFunction::indicator(ConvexBody::unit_ball(2)).unwrap();
        let w1 = quermassintegral_fn(&f, 1).unwrap();
        assert!((generalized_surface_area(&f, &d).unwrap() - w1).abs() < 1e-12);
        assert!(matches!(
            generalized_surface_area(&f, &f),
            Err(Error::NotRotationInvariant)
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"type":"stack","levels":[{"t":1.0,"body":{"type":"ball","radius":1.0}},{"t":0.5,"body":{"type":"ball","radius":2.0}}]}"#;
        let f: QCFunction = serde_json::from_str(text).unwrap();
        assert!((integral(&f).unwrap() - 2.5 * PI).abs() < 1e-12);
        let back: QCFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert!((integral(&back).unwrap() - 2.5 * PI).abs() < 1e-12);
        let r: QCFunction = serde_json::from_str(
            r#"{"type":"radial","base":{"type":"ball","radius":1.0},"profile":{"kind":"exp","c":1.0}}"#,
        )
        .unwrap();
        assert!((integral(&r).unwrap() - 2.0 * PI).abs() < 1e-12);
        let bad = r#"{"type":"stack","levels":[{"t":0.5,"body":{"type":"ball","radius":1.0}}]}"#;
        assert!(serde_json::from_str::<QCFunction>(bad).is_err());
    }
}
