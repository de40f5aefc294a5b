//! Randomized trial runner: every named check on `trials` seeded inputs.
//!
//! Trial `k` of check `name` draws its inputs from a ChaCha8 stream seeded
//! by `(seed, name, k)`, so results do not depend on thread count or order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{
    random_function, random_geom_convex_fn, random_lc_profile, random_polytope, random_radial, random_stack,
};
use super::*;
use crate::convex_duality::{polarity_sandwich_check, sandwich_check};
use crate::qc_calculus::grid::{grid_sup_min, sup_min_bounds, Lattice, DEFAULT_POINTS};
use crate::report::{fnv1a, Verdict};
use crate::reshape::{dilated_af, dilated_bm, rescaled_af, rescaled_bm, Normalization};

/// Every check known to the runner, in report order.
pub const CHECK_NAMES: &[&str] = &[
    "isoperimetric",
    "bm-rearrangement",
    "gen-bm",
    "gen-bm-bodies",
    "alexandrov-rearrangement",
    "alexandrov-bodies",
    "af",
    "af-bodies",
    "moment-logconcavity",
    "lc-alexandrov",
    "lc-isoperimetric",
    "counterexamples",
    "oplus-oracle",
    "sandwich",
    "polarity-sandwich",
    "rescaled-bm",
    "rescaled-af",
    "dilated-bm",
    "dilated-af",
];

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub dim: usize,
    pub tol: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            trials: 100,
            dim: 2,
            tol: Tolerances::default(),
        }
    }
}

/// Per-check aggregate over its trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub trials: usize,
    pub min_margin: f64,
    pub equality_hits: usize,
    pub violations: usize,
}

fn trial_rng(seed: u64, name: &str, trial: usize) -> ChaCha8Rng {
    let tag = u64::from_str_radix(&fnv1a(name.as_bytes()), 16).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag);
    rng.set_stream(trial as u64);
    rng
}

/// Checks that draw no random input run once.
fn is_fixed(name: &str) -> bool {
    name == "counterexamples"
}

/// Sup-min convolution on the default lattice against the rigorous bounds
/// from the level-set sum.
pub fn oplus_oracle_check(f: &LevelStack, g: &LevelStack, points: usize) -> Result<CheckReport> {
    let (ff, gg) = (QCFunction::Stack(f.clone()), QCFunction::Stack(g.clone()));
    let lattice = Lattice::covering(&ff, &gg, points)?;
    let grid = grid_sup_min(&ff, &gg, &lattice)?;
    let (lower, upper) = sup_min_bounds(f, g, &lattice)?;
    let mut below = f64::INFINITY;
    let mut above = f64::INFINITY;
    for ((v, lo), hi) in grid.values.iter().zip(&lower.values).zip(&upper.values) {
        below = below.min(v - lo);
        above = above.min(hi - v);
    }
    #[derive(Serialize)]
    struct Input<'a> {
        f: &'a LevelStack,
        g: &'a LevelStack,
        points: usize,
    }
    Ok(CheckReport::new(
        "oplus-oracle",
        "lower(x) <= sup_y min(f(y), g(x-y)) <= (f+g)(x) on the lattice",
        vec![below],
        vec![above],
        below.min(above),
        1e-12,
        &Input { f, g, points },
    ))
}

fn pick_functional<R: Rng>(rng: &mut R, dim: usize, trial: usize) -> Result<SizeFunctional> {
    if dim == 1 || trial % 2 == 0 {
        SizeFunctional::volume(dim)
    } else if dim == 3 && rng.gen_bool(0.5) {
        SizeFunctional::new(dim, 2, vec![random_polytope(rng, dim)?])
    } else {
        SizeFunctional::quermass(dim, 1)
    }
}

fn index_pair(n: usize, trial: usize) -> Option<(usize, usize)> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    (!pairs.is_empty()).then(|| pairs[trial % pairs.len()])
}

fn af_refs<R: Rng>(rng: &mut R, dim: usize, trial: usize) -> Result<(Vec<ConvexBody>, usize)> {
    if trial % 2 == 0 || dim == 1 {
        Ok((Vec::new(), dim))
    } else {
        Ok((vec![random_polytope(rng, dim)?], dim - 1))
    }
}

/// One trial of one check.
pub fn run_trial(name: &str, cfg: &SuiteConfig, trial: usize) -> Result<CheckReport> {
    let mut rng = trial_rng(cfg.seed, name, trial);
    let rng = &mut rng;
    let n = cfg.dim;
    let tol = &cfg.tol;
    let planar = n.min(2);
    match name {
        "isoperimetric" => check_isoperimetric_qc(&random_function(rng, n, 0.75)?, tol),
        "bm-rearrangement" => {
            let (f, g) = (random_function(rng, n, 0.75)?, random_function(rng, n, 0.75)?);
            check_bm_rearrangement(&f, &g, tol)
        }
        "gen-bm" => {
            let phi = pick_functional(rng, n, trial)?;
            let (f, g) = (random_function(rng, n, 0.75)?, random_function(rng, n, 0.75)?);
            check_gen_bm(&phi, &f, &g, tol)
        }
        "gen-bm-bodies" => {
            let phi = pick_functional(rng, n, trial)?;
            check_gen_bm_bodies(&phi, &random_polytope(rng, n)?, &random_polytope(rng, n)?, tol)
        }
        "alexandrov-rearrangement" | "alexandrov-bodies" => {
            let (i, j) = index_pair(n, trial).ok_or(Error::UnsupportedDimension(n))?;
            if name == "alexandrov-bodies" {
                check_alexandrov_bodies(&random_polytope(rng, n)?, i, j, tol)
            } else {
                check_alexandrov_rearrangement(&random_function(rng, n, 0.75)?, i, j, tol)
            }
        }
        "af" => {
            let (refs, m) = af_refs(rng, n, trial)?;
            let phi = SizeFunctional::new(n, m, refs)?;
            let fs = (0..m)
                .map(|_| random_function(rng, n, 0.75))
                .collect::<Result<Vec<_>>>()?;
            check_af(&phi, &fs, tol)
        }
        "af-bodies" => {
            let (refs, m) = af_refs(rng, n, trial)?;
            let phi = SizeFunctional::new(n, m, refs)?;
            let bodies = (0..m).map(|_| random_polytope(rng, n)).collect::<Result<Vec<_>>>()?;
            check_af_bodies(&phi, &bodies, tol)
        }
        "moment-logconcavity" => {
            let mut grid = vec![-0.5, 0.0, 0.5, 1.0, 2.0, 5.0];
            grid.push(rng.gen_range(0.1..4.0));
            check_moment_logconcavity(&random_lc_profile(rng), &grid, tol)
        }
        "lc-alexandrov" => {
            let n = n.max(2);
            let (k, m) = index_pair(n, trial).expect("n >= 2");
            check_lc_alexandrov(&random_radial(rng, n, true)?, k, m, tol)
        }
        "lc-isoperimetric" => check_lc_isoperimetric(&random_radial(rng, n.max(2), true)?, tol),
        "counterexamples" => check_counterexamples(tol),
        "oplus-oracle" => oplus_oracle_check(&random_stack(rng, 2)?, &random_stack(rng, 2)?, DEFAULT_POINTS),
        "sandwich" => {
            let phis = vec![random_geom_convex_fn(rng, planar)?, random_geom_convex_fn(rng, planar)?];
            let lambdas = vec![rng.gen_range(0.5..=2.0), rng.gen_range(0.5..=2.0)];
            let reach = phis
                .iter()
                .zip(&lambdas)
                .filter_map(|(p, l)| p.domain().map(|d| d.scale_len() * l))
                .fold(2.0, f64::max);
            sandwich_check(&phis, &lambdas, &Lattice::new(planar, 1.1 * reach, 21)?)
        }
        "polarity-sandwich" => {
            let t = [0.5, 1.0, 2.0][trial % 3];
            polarity_sandwich_check(&random_geom_convex_fn(rng, planar)?, t)
        }
        "rescaled-bm" => {
            let phi = pick_functional(rng, n, trial)?;
            let (f, g) = (random_radial(rng, n, false)?, random_radial(rng, n, false)?);
            let norm = [Normalization::Match, Normalization::PreserveSize, Normalization::PreserveIntegral][trial % 3];
            let (r, report) = rescaled_bm(&phi, &f, &g, norm, tol)?;
            if r.profile_mismatch > 1e-8 {
                let mut bad = report;
                bad.margin = -r.profile_mismatch;
                bad.verdict = Verdict::Violated;
                return Ok(bad);
            }
            Ok(report)
        }
        "rescaled-af" => {
            let (refs, m) = af_refs(rng, n, trial)?;
            let fs = (0..m).map(|_| random_radial(rng, n, false)).collect::<Result<Vec<_>>>()?;
            Ok(rescaled_af(&refs, &fs, tol)?.1)
        }
        "dilated-bm" => {
            let phi = pick_functional(rng, n, trial)?;
            let (f, g) = (random_radial(rng, n, true)?, random_radial(rng, n, true)?);
            dilated_bm(&phi, &f, &g, tol)
        }
        "dilated-af" => {
            let (refs, m) = af_refs(rng, n, trial)?;
            let fs = (0..m)
                .map(|_| random_radial(rng, n, true))
                .collect::<Result<Vec<_>>>()?;
            dilated_af(&refs, &fs, tol)
        }
        other => Err(Error::InvalidInput(format!("unknown check {other}"))),
    }
}

/// All trials of one check, in trial order.
pub fn run_check(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    if !CHECK_NAMES.contains(&name) {
        return Err(Error::InvalidInput(format!("unknown check {name}")));
    }
    let trials = if is_fixed(name) { 1 } else { cfg.trials };
    (0..trials).into_par_iter().map(|k| run_trial(name, cfg, k)).collect()
}

/// Every check, grouped by name in [`CHECK_NAMES`] order.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let groups = CHECK_NAMES
        .par_iter()
        .map(|name| run_check(name, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(groups.into_iter().flatten().collect())
}

/// One row per check name, in first-seen order.
pub fn summarize(reports: &[CheckReport]) -> Vec<Summary> {
    let mut out: Vec<Summary> = Vec::new();
    for r in reports {
        let idx = match out.iter().position(|s| s.name == r.name) {
            Some(i) => i,
            None => {
                out.push(Summary {
                    name: r.name.clone(),
                    trials: 0,
                    min_margin: f64::INFINITY,
                    equality_hits: 0,
                    violations: 0,
                });
                out.len() - 1
            }
        };
        let s = &mut out[idx];
        s.trials += 1;
        s.min_margin = s.min_margin.min(r.margin);
        s.equality_hits += (r.verdict == Verdict::HoldsWithEquality) as usize;
        s.violations += (r.verdict == Verdict::Violated) as usize;
    }
    out
}
