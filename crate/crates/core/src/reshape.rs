//! Rescalings `f ↦ α ∘ f` matching the size profile `t ↦ Φ(K_t f)` of one
//! function to another, and dilations of log-concave functions onto the
//! size profile of `M(x) = e^{-|x|}`.
//!
//! Regular functions are radial functions with a continuous, strictly
//! decreasing profile vanishing at infinity. For those, `α ∘ f` is again
//! radial on a dilate of the same base, so both operations are exact.

use serde::{Deserialize, Serialize};

use crate::convex_bodies::{self, ConvexBody};
use crate::error::{Error, Result};
use crate::inequality_lab::{certify_stack_log_concave, LogConcavityCertificate, Tolerances};
use crate::qc_calculus::{integral, mixed_integral, LevelStack, Profile, QCFunction, RadialQC};
use crate::rearrange::SizeFunctional;
use crate::report::{fnv1a, CheckReport};

/// Heights of the profile grid.
pub const PROFILE_GRID: usize = 256;
/// Smallest height of the profile grid.
pub const PROFILE_FLOOR: f64 = 1e-6;

/// `count` heights log-spaced from 1 down to `floor`.
pub fn log_heights(count: usize, floor: f64) -> Vec<f64> {
    let count = count.max(2);
    (0..count)
        .map(|k| floor.powf(k as f64 / (count - 1) as f64))
        .collect()
}

fn digest<T: Serialize>(x: &T) -> String {
    fnv1a(serde_json::to_string(x).unwrap_or_default().as_bytes())
}

fn regular(f: &QCFunction) -> Result<&RadialQC> {
    match f {
        QCFunction::Radial(r) if r.profile().is_regular() => Ok(r),
        QCFunction::Radial(r) => Err(Error::NotRegular(format!(
            "profile {:?} is not continuous and strictly decreasing",
            r.profile()
        ))),
        QCFunction::Stack(_) => Err(Error::NotRegular(
            "a level stack has a step size profile; dilate it instead".into(),
        )),
    }
}

/// Sampled `φ_f(t) = Φ(K_t f)` of a regular function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhiProfile {
    pub source_digest: String,
    pub phi_digest: String,
    pub heights: Vec<f64>,
    pub values: Vec<f64>,
    degree: usize,
    base_value: f64,
    profile: Profile,
}

impl PhiProfile {
    /// `φ_f(t) = Φ(B) r(t)^m`.
    pub fn value(&self, t: f64) -> f64 {
        self.base_value * self.profile.radius(t).powi(self.degree as i32)
    }

    /// `φ_f^{-1}(v) = h((v / Φ(B))^{1/m})`.
    pub fn inverse(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 1.0;
        }
        self.profile.height((v / self.base_value).powf(1.0 / self.degree as f64))
    }
}

/// `φ_f` on `grid`, each value measured on the level set itself. Fails
/// unless the samples strictly decrease as the height rises.
pub fn phi_profile(phi: &SizeFunctional, f: &QCFunction, grid: &[f64]) -> Result<PhiProfile> {
    let r = regular(f)?;
    let base_value = phi.eval_body(r.base())?;
    if !(base_value > 0.0) {
        return Err(Error::NotRegular("base body has zero size".into()));
    }
    let mut heights = grid.to_vec();
    heights.sort_by(f64::total_cmp);
    heights.dedup();
    let values = heights
        .iter()
        .map(|&t| phi.eval_body(&f.level_set(t)?))
        .collect::<Result<Vec<_>>>()?;
    if let Some(w) = values.windows(2).position(|w| !(w[1] < w[0])) {
        return Err(Error::NotRegular(format!(
            "size profile not strictly decreasing near t = {}",
            heights[w + 1]
        )));
    }
    Ok(PhiProfile {
        source_digest: digest(f),
        phi_digest: digest(phi),
        heights,
        values,
        degree: phi.degree(),
        base_value,
        profile: r.profile().clone(),
    })
}

/// Use of the free constant `c` in `f̃^Φ = c ⊙ g^Φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `c = 1`: `f̃^Φ = g^Φ`.
    #[default]
    Match,
    /// `Φ(f̃) = Φ(f)`.
    PreserveSize,
    /// `∫ f̃ = ∫ f`.
    PreserveIntegral,
}

/// `f̃ = α ∘ f` with `α(t) = h_g(r_f(t) / s)`, `s` the base scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Rescaled {
    pub function: QCFunction,
    /// `f̃ = Radial{s B_f, h_g}`.
    pub scale: f64,
    /// The constant `c` of `f̃^Φ = c ⊙ g^Φ`.
    pub c: f64,
    pub normalization: Normalization,
    /// `(t, α(t))` on the profile grid.
    pub alpha: Vec<(f64, f64)>,
    /// Largest `|Φ(K_t f̃) - c^m Φ(K_t g)| / (c^m Φ(K_t g))` over interior grid heights.
    pub profile_mismatch: f64,
    #[serde(skip)]
    source: Option<(Profile, Profile)>,
}

impl Rescaled {
    /// `α(t)`.
    pub fn alpha_at(&self, t: f64) -> f64 {
        let (hf, hg) = self.source.as_ref().expect("built by rescale_to_match");
        hg.height(hf.radius(t) / self.scale)
    }

    /// `α^{-1}(u) = h_f(s r_g(u))`.
    pub fn alpha_inverse(&self, u: f64) -> f64 {
        let (hf, hg) = self.source.as_ref().expect("built by rescale_to_match");
        hf.height(self.scale * hg.radius(u))
    }
}

/// The rescaling of `f` whose size profile is that of `c ⊙ g`.
pub fn rescale_to_match(
    phi: &SizeFunctional,
    f: &QCFunction,
    g: &QCFunction,
    normalization: Normalization,
) -> Result<Rescaled> {
    let (rf, rg) = (regular(f)?, regular(g)?);
    let m = phi.degree() as f64;
    let (bf, bg) = (phi.eval_body(rf.base())?, phi.eval_body(rg.base())?);
    if !(bf > 0.0 && bg > 0.0) {
        return Err(Error::NonInvertibleProfile("base body has zero size".into()));
    }
    let kappa = (bg / bf).powf(1.0 / m);
    let matched = QCFunction::radial(convex_bodies::scale(rf.base(), kappa)?, rg.profile().clone())?;
    let c = match normalization {
        Normalization::Match => 1.0,
        Normalization::PreserveSize => (phi.eval_fn(f)? / phi.eval_fn(g)?).powf(1.0 / m),
        Normalization::PreserveIntegral => (integral(f)? / integral(&matched)?).powf(1.0 / f.dim() as f64),
    };
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::NonInvertibleProfile(format!("normalizing constant {c}")));
    }
    let scale = c * kappa;
    let function = QCFunction::radial(convex_bodies::scale(rf.base(), scale)?, rg.profile().clone())?;
    let grid = log_heights(PROFILE_GRID, PROFILE_FLOOR);
    let mut mismatch: f64 = 0.0;
    for &t in &grid[1..] {
        let have = phi.eval_body(&function.level_set(t)?)?;
        let want = c.powf(m) * phi.eval_body(&g.level_set(t)?)?;
        mismatch = mismatch.max((have - want).abs() / want);
    }
    let mut out = Rescaled {
        function,
        scale,
        c,
        normalization,
        alpha: Vec::new(),
        profile_mismatch: mismatch,
        source: Some((rf.profile().clone(), rg.profile().clone())),
    };
    out.alpha = grid.iter().map(|&t| (t, out.alpha_at(t))).collect();
    Ok(out)
}

#[derive(Serialize)]
struct RescaleInput<'a> {
    phi: &'a SizeFunctional,
    f: &'a QCFunction,
    g: &'a QCFunction,
    normalization: Normalization,
}

/// `Φ(f̃ ⊕ g)^{1/m} >= Φ(f̃)^{1/m} + Φ(g)^{1/m}` for the matching rescaling.
pub fn rescaled_bm(
    phi: &SizeFunctional,
    f: &QCFunction,
    g: &QCFunction,
    normalization: Normalization,
    tol: &Tolerances,
) -> Result<(Rescaled, CheckReport)> {
    let r = rescale_to_match(phi, f, g, normalization)?;
    let k = 1.0 / phi.degree() as f64;
    let lhs = phi.eval_fn_sum(&r.function, g)?.powf(k);
    let rhs = phi.eval_fn(&r.function)?.powf(k) + phi.eval_fn(g)?.powf(k);
    let report = CheckReport::at_least(
        "rescaled-bm",
        "Phi(f~ + g)^{1/m} >= Phi(f~)^{1/m} + Phi(g)^{1/m}, f~^Phi = c g^Phi",
        vec![lhs],
        vec![rhs],
        tol.for_fns(&[&r.function, g]),
        &RescaleInput {
            phi,
            f,
            g,
            normalization,
        },
    );
    Ok((r, report))
}

/// The fixed anchor for rescaling several functions at once:
/// the Gaussian `e^{-|x|^2}` on the unit ball.
pub fn universal_anchor(dim: usize) -> Result<QCFunction> {
    QCFunction::radial(ConvexBody::unit_ball(dim), Profile::Gaussian { c: 1.0 })
}

#[derive(Serialize)]
struct AfInput<'a> {
    refs: &'a [ConvexBody],
    fs: &'a [QCFunction],
}

/// `V(f̃_1..f̃_m, 1_A..)^m >= Π V(f̃_i[m], 1_A..)` and, when `m = n`,
/// `V(f̃_1..f̃_n) >= (Π ∫ f̃_i)^{1/n}`.
fn af_report(
    name: &str,
    statement: &str,
    refs: &[ConvexBody],
    shaped: &[QCFunction],
    tol: f64,
    input: &AfInput,
) -> Result<CheckReport> {
    let m = shaped.len();
    let n = shaped[0].dim();
    let ref_fns = refs
        .iter()
        .map(|a| QCFunction::indicator(a.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mixed: Vec<&QCFunction> = shaped.iter().chain(ref_fns.iter()).collect();
    let lhs = mixed_integral(&mixed)?.powi(m as i32);
    let mut rhs = 1.0;
    for f in shaped {
        let mut args: Vec<&QCFunction> = vec![f; m];
        args.extend(ref_fns.iter());
        rhs *= mixed_integral(&args)?;
    }
    let mut lhs_all = vec![lhs];
    let mut rhs_all = vec![rhs];
    if m == n {
        let prod: f64 = shaped.iter().map(integral).collect::<Result<Vec<_>>>()?.iter().product();
        lhs_all.push(lhs.powf(1.0 / m as f64));
        rhs_all.push(prod.powf(1.0 / n as f64));
    }
    Ok(CheckReport::at_least(name, statement, lhs_all, rhs_all, tol, input))
}

fn size_functional_for(refs: &[ConvexBody], fs: &[QCFunction]) -> Result<SizeFunctional> {
    let first = fs
        .first()
        .ok_or_else(|| Error::InvalidInput("need at least one function".into()))?;
    let n = first.dim();
    for f in fs {
        if f.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.dim(),
            });
        }
    }
    if fs.len() + refs.len() != n {
        return Err(Error::ArityMismatch {
            expected: n - refs.len().min(n),
            found: fs.len(),
        });
    }
    SizeFunctional::new(n, fs.len(), refs.to_vec())
}

/// Rescales every `f_i` against [`universal_anchor`] for
/// `Φ(K) = V(K[m], A_1, ..., A_{n-m})` and checks the mixed inequality.
pub fn rescaled_af(
    refs: &[ConvexBody],
    fs: &[QCFunction],
    tol: &Tolerances,
) -> Result<(Vec<QCFunction>, CheckReport)> {
    let phi = size_functional_for(refs, fs)?;
    let anchor = universal_anchor(phi.dim())?;
    let shaped = fs
        .iter()
        .map(|f| Ok(rescale_to_match(&phi, f, &anchor, Normalization::Match)?.function))
        .collect::<Result<Vec<_>>>()?;
    let report = af_report(
        "rescaled-af",
        "V(f~_1..f~_m, 1_A..)^m >= prod V(f~_i[m], 1_A..)",
        refs,
        &shaped,
        tol.exact,
        &AfInput { refs, fs },
    )?;
    Ok((shaped, report))
}

/// Levels `L(t) (Φ(D)/Φ(K_t))^{1/m} K_t` with `L(t) = log(1/t)`; the level
/// at `t = 1` becomes the origin. Fails if the result is not nested.
pub fn dilate_levels(phi: &SizeFunctional, levels: &[(f64, ConvexBody)]) -> Result<LevelStack> {
    let unit = phi.unit_value()?;
    let m = phi.degree() as f64;
    let dilated = levels
        .iter()
        .map(|(t, k)| {
            let l = (1.0 / t).ln();
            if l <= 0.0 {
                return Ok((*t, ConvexBody::ball(phi.dim(), 0.0)?));
            }
            let size = phi.eval_body(k)?;
            if !(size > 0.0) {
                return Err(Error::InvalidInput(format!("level set at t = {t} has empty interior")));
            }
            Ok((*t, convex_bodies::scale(k, l * (unit / size).powf(1.0 / m))?))
        })
        .collect::<Result<Vec<_>>>()?;
    LevelStack::new(phi.dim(), dilated)
}

/// The dilation `f̃` of a geometric log-concave `f`: `Φ(K_t f̃) = Φ(K_t M)`
/// with each level homothetic to `K_t f`. Radial inputs give
/// `Radial{(Φ(D)/Φ(B))^{1/m} B, e^{-r}}`; stacks must pass the level-set
/// log-concavity certificate.
pub fn dilate_to_exponential(phi: &SizeFunctional, f: &QCFunction, tol: &Tolerances) -> Result<QCFunction> {
    match f {
        QCFunction::Radial(r) => {
            if !r.profile().is_log_concave() {
                return Err(Error::NotLogConcave(format!("profile {:?}", r.profile())));
            }
            let m = phi.degree() as f64;
            let kappa = (phi.unit_value()? / phi.eval_body(r.base())?).powf(1.0 / m);
            QCFunction::radial(convex_bodies::scale(r.base(), kappa)?, Profile::Exp { c: 1.0 })
        }
        QCFunction::Stack(s) => {
            let cert = certify_stack_log_concave(s, 400, 0x5eed, tol.exact)?;
            if !cert.log_concave {
                return Err(Error::NotLogConcave(format!(
                    "stack level combination sticks out by {}",
                    cert.worst_slack
                )));
            }
            let levels: Vec<(f64, ConvexBody)> = s.levels().iter().map(|l| (l.t, l.body.clone())).collect();
            Ok(dilate_levels(phi, &levels)?.into())
        }
    }
}

#[derive(Serialize)]
struct DilatedPairInput<'a> {
    phi: &'a SizeFunctional,
    f: &'a QCFunction,
    g: &'a QCFunction,
}

/// `Φ(f̃ ⊕ g̃)^{1/m} >= Φ(f̃)^{1/m} + Φ(g̃)^{1/m}` for the dilations.
pub fn dilated_bm(phi: &SizeFunctional, f: &QCFunction, g: &QCFunction, tol: &Tolerances) -> Result<CheckReport> {
    let (fd, gd) = (dilate_to_exponential(phi, f, tol)?, dilate_to_exponential(phi, g, tol)?);
    let k = 1.0 / phi.degree() as f64;
    let lhs = phi.eval_fn_sum(&fd, &gd)?.powf(k);
    let rhs = phi.eval_fn(&fd)?.powf(k) + phi.eval_fn(&gd)?.powf(k);
    let exact = matches!((&fd, &gd), (QCFunction::Radial(_), QCFunction::Radial(_)))
        || matches!((&fd, &gd), (QCFunction::Stack(_), QCFunction::Stack(_)));
    Ok(CheckReport::at_least(
        "dilated-bm",
        "Phi(f~ + g~)^{1/m} >= Phi(f~)^{1/m} + Phi(g~)^{1/m}, f~, g~ dilations",
        vec![lhs],
        vec![rhs],
        if exact { tol.exact } else { tol.quad },
        &DilatedPairInput { phi, f, g },
    ))
}

/// Dilates every `f_i` for `Φ(K) = V(K[m], A_1, ..., A_{n-m})` and checks
/// `V(f̃_1..f̃_m, 1_A..)^m >= Π V(f̃_i[m], 1_A..)`.
pub fn dilated_af(refs: &[ConvexBody], fs: &[QCFunction], tol: &Tolerances) -> Result<CheckReport> {
    let phi = size_functional_for(refs, fs)?;
    let shaped = fs
        .iter()
        .map(|f| dilate_to_exponential(&phi, f, tol))
        .collect::<Result<Vec<_>>>()?;
    af_report(
        "dilated-af",
        "V(f~_1..f~_m, 1_A..)^m >= prod V(f~_i[m], 1_A..), f~_i dilations",
        refs,
        &shaped,
        tol.exact,
        &AfInput { refs, fs },
    )
}

/// Polygon inscribed in `{|x| + y^2 <= c}` with vertices at `2 * half + 1`
/// equally spaced ordinates on each side. The map `(x, y) ↦ (x/c, y/√c)`
/// carries it onto the polygon for `c = 1`, so its relative area error
/// does not depend on `c`.
pub fn band_polygon(c: f64, half: usize) -> Result<ConvexBody> {
    let root = c.sqrt();
    let mut pts = Vec::with_capacity(4 * half + 2);
    for k in 0..=2 * half {
        let u = k as f64 / half as f64 - 1.0;
        let y = root * u;
        let x = c - y * y;
        pts.push(vec![x, y]);
        pts.push(vec![-x, y]);
    }
    ConvexBody::polytope(2, &pts)
}

/// `|{|x| + y^2 <= c}| = (8/3) c^{3/2}`.
pub fn band_area(c: f64) -> f64 {
    8.0 / 3.0 * c.powf(1.5)
}

/// Dilation of `f(x, y) = e^{-(|x| + y^2)}` under `Φ = Vol`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandDilation {
    pub heights: Vec<f64>,
    pub polygon_areas: Vec<f64>,
    pub exact_areas: Vec<f64>,
    pub dilated: LevelStack,
    /// `(x, t)` with `f̃(x, 0) = t`.
    pub section: Vec<(f64, f64)>,
    /// Fitted `q` in `f̃(x, 0) = e^{-C x^q}`.
    pub exponent: f64,
    pub certificate: LogConcavityCertificate,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Builds the band levels at `heights` (all below 1), dilates them, fits
/// the section exponent from `log log(1/t)` against `log x`, and runs the
/// log-concavity certificate on the dilated stack.
pub fn band_dilation(heights: &[f64], half: usize) -> Result<BandDilation> {
    let vol = SizeFunctional::volume(2)?;
    let mut hs: Vec<f64> = heights.iter().copied().filter(|t| *t < 1.0).collect();
    hs.sort_by(|a, b| b.total_cmp(a));
    let mut levels = vec![(1.0, ConvexBody::ball(2, 0.0)?)];
    let mut polygon_areas = Vec::new();
    let mut exact_areas = Vec::new();
    for &t in &hs {
        let c = (1.0 / t).ln();
        let k = band_polygon(c, half)?;
        polygon_areas.push(convex_bodies::volume(&k));
        exact_areas.push(band_area(c));
        levels.push((t, k));
    }
    let dilated = dilate_levels(&vol, &levels)?;
    let east = convex_bodies::Direction::new(&[1.0, 0.0])?;
    let section = dilated.levels()[1..]
        .iter()
        .map(|l| Ok((convex_bodies::support(&l.body, &east)?, l.t)))
        .collect::<Result<Vec<_>>>()?;
    let lx: Vec<f64> = section.iter().map(|(x, _)| x.ln()).collect();
    let ly: Vec<f64> = section.iter().map(|(_, t)| (1.0 / t).ln().ln()).collect();
    let exponent = fit_slope(&lx, &ly);
    let certificate = certify_stack_log_concave(&dilated, 400, 0x5eed, 1e-9)?;
    Ok(BandDilation {
        heights: hs,
        polygon_areas,
        exact_areas,
        dilated,
        section,
        exponent,
        certificate,
    })
}
