//! Acceptance criteria, one PASS/FAIL line each. Expected values are
//! computed here from closed forms, independently of the library paths
//! under test where that is possible.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

use qcvx::convex_bodies::{minkowski_sum, volume, ConvexBody};
use qcvx::inequality_lab::generators::{random_lc_profile, random_polytope, random_profile, random_radial, random_stack};
use qcvx::inequality_lab::suite::{run_check, summarize, SuiteConfig};
use qcvx::inequality_lab::{
    check_af, check_alexandrov_rearrangement, check_bm_rearrangement, check_gen_bm, check_lc_alexandrov,
    check_lc_isoperimetric, check_moment_logconcavity, counterexample_cases, normalized_moment, Tolerances,
};
use qcvx::mixed_volumes::{minkowski_polynomial, mixed_volume};
use qcvx::qc_calculus::grid::{grid_sup_min, indicator_band_violations, Lattice, DEFAULT_POINTS};
use qcvx::qc_calculus::{
    combination_integral, minkowski_polynomial_fn, mixed_integral, surface_area_fn, LevelStack, Profile,
    QCFunction,
};
use qcvx::rearrange::SizeFunctional;
use qcvx::report::{CheckReport, Verdict};
use qcvx::reshape::{band_dilation, log_heights, rescale_to_match, rescaled_af, rescaled_bm, universal_anchor, Normalization};

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: qcvx::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_9700 ^ tag)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn counterexamples() -> Outcome {
    let start = Instant::now();
    let cases = lib(counterexample_cases())?;
    let mut worst: f64 = 0.0;
    for c in &cases {
        let want_s = match c.family.as_str() {
            "scaled-exponential" => 2.0 * PI * c.a,
            "power-law" => 2.0 * PI * ((c.a - 2.0) / (c.a - 1.0)).sqrt(),
            other => return Err(format!("unexpected family {other}")),
        };
        let e = rel(c.integral, 2.0 * PI).max(rel(c.surface_area, want_s));
        ensure(e <= 1e-6, || format!("{} a={}: rel err {e:.2e}", c.family, c.a))?;
        worst = worst.max(e);
    }
    let params: Vec<f64> = cases.iter().map(|c| c.a).collect();
    ensure(params == [0.5, 1.0, 2.0, 2.5, 3.0, 4.0], || format!("parameters {params:?}"))?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("6 cases, worst rel err {worst:.1e}, {took:.0?}"))
}

fn mixed_integral_normalization() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (k1, k2) = (lib(random_polytope(&mut r, 2))?, lib(random_polytope(&mut r, 2))?);
        // V(K1, K2) = (|K1 + K2| - |K1| - |K2|) / 2 in the plane
        let sum = lib(minkowski_sum(&k1, &k2))?;
        let mixed = 0.5 * (volume(&sum) - volume(&k1) - volume(&k2));
        for p in [1.0, 2.0] {
            let profile = Profile::PowerExp { c: 1.0, p };
            let f1 = lib(QCFunction::radial(k1.clone(), profile.clone()))?;
            let f2 = lib(QCFunction::radial(k2.clone(), profile))?;
            let got = lib(mixed_integral(&[&f1, &f2]))?;
            let e = rel(got, gamma(2.0 / p + 1.0) * mixed);
            ensure(e <= 1e-6, || format!("p={p}: rel err {e:.2e}"))?;
            worst = worst.max(e);
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("20 pairs x p in {{1,2}}, worst rel err {worst:.1e}, {took:.0?}"))
}

fn polynomiality() -> Outcome {
    let mut r = rng(3);
    let (mut worst_eval, mut worst_coef): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let f: QCFunction = lib(random_stack(&mut r, 2))?.into();
        let g: QCFunction = lib(random_stack(&mut r, 2))?.into();
        let poly = lib(minkowski_polynomial_fn(&[&f, &g]))?;
        for _ in 0..20 {
            let eps = [r.gen_range(0.05..3.0), r.gen_range(0.05..3.0)];
            let direct = lib(combination_integral(&[&f, &g], &eps))?;
            let e = rel(poly.evaluate(&eps), direct);
            ensure(e <= 1e-8, || format!("F{eps:?}: rel err {e:.2e}"))?;
            worst_eval = worst_eval.max(e);
        }
        for (idx, args) in [([0, 0], [&f, &f]), ([0, 1], [&f, &g]), ([1, 1], [&g, &g])] {
            let e = rel(poly.mixed_value(&idx), lib(mixed_integral(&args))?);
            ensure(e <= 1e-8, || format!("coefficient {idx:?}: rel err {e:.2e}"))?;
            worst_coef = worst_coef.max(e);
        }
    }
    Ok(format!(
        "20 stack pairs, worst evaluation err {worst_eval:.1e}, coefficient err {worst_coef:.1e}"
    ))
}

fn polarization_oracle() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let n = 2 + k % 2;
        let bodies = (0..n).map(|_| random_polytope(&mut r, n)).collect::<qcvx::Result<Vec<_>>>();
        let bodies = lib(bodies)?;
        let refs: Vec<&ConvexBody> = bodies.iter().collect();
        let direct = lib(mixed_volume(&refs))?;
        let fitted = lib(minkowski_polynomial(&refs, n))?.mixed_value(&(0..n).collect::<Vec<_>>());
        let e = rel(direct, fitted);
        ensure(e <= 1e-8, || format!("tuple {k} (n={n}): rel err {e:.2e}"))?;
        worst = worst.max(e);
    }
    Ok(format!("50 tuples in n=2,3, worst rel err {worst:.1e}"))
}

fn lc_alexandrov() -> Outcome {
    let tol = tol();
    let mut exact_cases = 0;
    for n in [2, 3] {
        for c in [0.5, 1.0, 3.0] {
            let f = lib(QCFunction::radial(ConvexBody::unit_ball(n), Profile::Exp { c }))?;
            for m in 1..n {
                for k in 0..m {
                    let rep = lib(check_lc_alexandrov(&f, k, m, &tol))?;
                    ensure(rep.verdict == Verdict::HoldsWithEquality && rep.margin.abs() <= 1e-9, || {
                        format!("exp c={c} n={n} (k,m)=({k},{m}): margin {:.2e}", rep.margin)
                    })?;
                    // both sides are the ratio 1/c
                    ensure(rel(rep.lhs[0], 1.0 / c) <= 1e-9, || format!("ratio {} != 1/{c}", rep.lhs[0]))?;
                    exact_cases += 1;
                }
            }
        }
    }
    let mut r = rng(5);
    let mut min_margin = f64::INFINITY;
    for trial in 0..50 {
        let n = 2 + trial % 2;
        let profile = if trial % 4 < 2 {
            Profile::Gaussian {
                c: r.gen_range(0.5..3.0),
            }
        } else {
            Profile::PowerExp {
                c: r.gen_range(0.5..2.0),
                p: r.gen_range(1.25..3.0),
            }
        };
        let base = if r.gen_bool(0.5) {
            ConvexBody::unit_ball(n)
        } else {
            lib(random_polytope(&mut r, n))?
        };
        let f = lib(QCFunction::radial(base, profile))?;
        let m = r.gen_range(1..n);
        let k = r.gen_range(0..m);
        let rep = lib(check_lc_alexandrov(&f, k, m, &tol))?;
        ensure(rep.verdict == Verdict::Holds && rep.margin > 0.0, || {
            format!("trial {trial}: verdict {:?} margin {:.2e}", rep.verdict, rep.margin)
        })?;
        min_margin = min_margin.min(rep.margin);
    }
    Ok(format!(
        "{exact_cases} exponential cases at equality, 50 strict cases, min margin {min_margin:.2e}"
    ))
}

fn sharp_isoperimetric() -> Outcome {
    let tol = tol();
    let f = lib(QCFunction::radial(ConvexBody::unit_ball(2), Profile::Exp { c: 1.0 }))?;
    let rep = lib(check_lc_isoperimetric(&f, &tol))?;
    ensure(rep.verdict == Verdict::HoldsWithEquality, || format!("exp verdict {:?}", rep.verdict))?;
    ensure(rel(rep.lhs[0], 2.0 * PI) <= 1e-9 && rel(rep.rhs[0], 2.0 * PI) <= 1e-9, || {
        format!("sides {} and {}", rep.lhs[0], rep.rhs[0])
    })?;
    ensure(rel(lib(surface_area_fn(&f))?, 2.0 * PI) <= 1e-9, || "S(e^{-|x|}) != 2pi".into())?;
    let mut r = rng(6);
    let mut min_margin = f64::INFINITY;
    for trial in 0..100 {
        let f = lib(random_radial(&mut r, 2, true))?;
        let rep = lib(check_lc_isoperimetric(&f, &tol))?;
        ensure(rep.margin >= -1e-6, || format!("trial {trial}: margin {:.2e}", rep.margin))?;
        min_margin = min_margin.min(rep.margin);
    }
    Ok(format!("equality at e^{{-|x|}} (2pi = 2pi), 100 profiles, min margin {min_margin:.1e}"))
}

/// Radial functions on balls and stacks of balls, with a mix of generic inputs.
fn maybe_invariant(r: &mut ChaCha8Rng, n: usize) -> qcvx::Result<QCFunction> {
    match r.gen_range(0..4) {
        0 => QCFunction::radial(ConvexBody::ball(n, r.gen_range(0.5..2.0))?, random_profile(r, n)),
        1 => {
            let count = r.gen_range(2..=4);
            let mut radius = r.gen_range(0.2..0.6);
            let mut levels = Vec::new();
            for k in 0..count {
                levels.push((0.6f64.powi(k), ConvexBody::ball(n, radius)?));
                radius += r.gen_range(0.1..0.8);
            }
            Ok(LevelStack::new(n, levels)?.into())
        }
        2 => Ok(random_stack(r, n)?.into()),
        _ => random_radial(r, n, false),
    }
}

fn equality_matches(rep: &CheckReport, invariant: bool) -> Result<(), String> {
    let equal = rep.verdict == Verdict::HoldsWithEquality;
    ensure(equal == invariant, || {
        format!(
            "{}: rotation-invariant={invariant} but verdict {:?} (margin {:.2e})",
            rep.name, rep.verdict, rep.margin
        )
    })
}

fn rearrangement_inequalities() -> Outcome {
    let names = ["bm-rearrangement", "gen-bm", "alexandrov-rearrangement", "af"];
    let mut total = 0;
    for (dim, trials) in [(2, 500), (3, 100)] {
        let cfg = SuiteConfig {
            seed: 7,
            trials,
            dim,
            tol: tol(),
        };
        for name in names {
            let reports = lib(run_check(name, &cfg))?;
            let s = &summarize(&reports)[0];
            ensure(s.violations == 0, || format!("{name} n={dim}: {} violations", s.violations))?;
            total += s.trials;
        }
    }
    // Equality diagnostics. Size functionals of degree 1 are additive, so
    // generalized BM is an identity for them; only degree >= 2 is tested.
    let tol = tol();
    let mut r = rng(7);
    let (mut hits, mut cases) = (0, 0);
    for trial in 0..120 {
        let n = 2 + trial % 2;
        let (f, g) = (lib(maybe_invariant(&mut r, n))?, lib(maybe_invariant(&mut r, n))?);
        let both = f.is_rotation_invariant() && g.is_rotation_invariant();
        let phi = if n == 3 && trial % 4 == 1 {
            lib(SizeFunctional::quermass(3, 1))?
        } else {
            lib(SizeFunctional::volume(n))?
        };
        let reports = [
            (lib(check_bm_rearrangement(&f, &g, &tol))?, both),
            (lib(check_gen_bm(&phi, &f, &g, &tol))?, both),
            (lib(check_alexandrov_rearrangement(&f, 0, n - 1, &tol))?, f.is_rotation_invariant()),
        ];
        for (rep, invariant) in &reports {
            equality_matches(rep, *invariant)?;
            hits += *invariant as usize;
            cases += 1;
        }
        let fs = vec![f.clone(), g.clone(), lib(maybe_invariant(&mut r, n))?];
        let fs = &fs[..n];
        let all = fs.iter().all(QCFunction::is_rotation_invariant);
        equality_matches(&lib(check_af(&lib(SizeFunctional::volume(n))?, fs, &tol))?, all)?;
        hits += all as usize;
        cases += 1;
    }
    Ok(format!(
        "{total} seeded trials, 0 violations; equality fired on exactly the {hits} invariant cases of {cases}"
    ))
}

fn oplus_oracle() -> Outcome {
    let cfg = SuiteConfig {
        seed: 8,
        trials: 50,
        dim: 2,
        tol: tol(),
    };
    let reports = lib(run_check("oplus-oracle", &cfg))?;
    let bad = reports.iter().filter(|r| !r.verdict.ok()).count();
    ensure(bad == 0, || format!("{bad} of 50 stack pairs outside the grid bound"))?;
    let mut r = rng(8);
    for k in 0..10 {
        let (a, b) = (lib(random_polytope(&mut r, 2))?, lib(random_polytope(&mut r, 2))?);
        let (f, g) = (lib(QCFunction::indicator(a.clone()))?, lib(QCFunction::indicator(b.clone()))?);
        let lattice = lib(Lattice::covering(&f, &g, DEFAULT_POINTS))?;
        let field = lib(grid_sup_min(&f, &g, &lattice))?;
        let off = lib(indicator_band_violations(&a, &b, &field))?;
        ensure(off == 0, || format!("indicator pair {k}: {off} points off the boundary band"))?;
    }
    Ok("50 stack pairs within bound on 41x41, 10 indicator pairs exact off the band".into())
}

fn sandwiches() -> Outcome {
    let mut detail = Vec::new();
    for (name, trials) in [("sandwich", 50), ("polarity-sandwich", 30)] {
        let cfg = SuiteConfig {
            seed: 9,
            trials,
            dim: 2,
            tol: tol(),
        };
        let reports = lib(run_check(name, &cfg))?;
        let s = &summarize(&reports)[0];
        ensure(s.violations == 0, || format!("{name}: {} violations", s.violations))?;
        detail.push(format!("{name} {trials} ok (min margin {:.1e})", s.min_margin));
    }
    Ok(detail.join(", "))
}

fn band_example() -> Outcome {
    let heights: Vec<f64> = log_heights(11, 1e-4)[1..].to_vec();
    let band = lib(band_dilation(&heights, 64))?;
    ensure(band.heights.len() == 10, || format!("{} heights", band.heights.len()))?;
    let mut worst: f64 = 0.0;
    for (t, area) in band.heights.iter().zip(&band.polygon_areas) {
        let want = 8.0 / 3.0 * (1.0 / t).ln().powf(1.5);
        let e = rel(*area, want);
        ensure(e <= 1e-3, || format!("t={t}: area rel err {e:.2e}"))?;
        worst = worst.max(e);
    }
    ensure((band.exponent - 0.8).abs() <= 0.01, || format!("exponent {}", band.exponent))?;
    ensure(!band.certificate.log_concave, || "dilated band certified log-concave".into())?;
    Ok(format!(
        "area err {worst:.1e} at 10 heights, exponent {:.4}, certifier slack {:.2e}",
        band.exponent, band.certificate.worst_slack
    ))
}

fn rescaling() -> Outcome {
    let tol = tol();
    let mut r = rng(11);
    let norms = [Normalization::Match, Normalization::PreserveSize, Normalization::PreserveIntegral];
    let mut worst: f64 = 0.0;
    for trial in 0..50 {
        let n = 2 + trial % 2;
        let phi = if trial % 3 == 2 {
            lib(SizeFunctional::quermass(n, 1))?
        } else {
            lib(SizeFunctional::volume(n))?
        };
        let (f, g) = (lib(random_radial(&mut r, n, false))?, lib(random_radial(&mut r, n, false))?);
        let (shaped, rep) = lib(rescaled_bm(&phi, &f, &g, norms[trial % 3], &tol))?;
        ensure(shaped.profile_mismatch <= 1e-8, || {
            format!("pair {trial}: profile mismatch {:.2e}", shaped.profile_mismatch)
        })?;
        ensure(rep.verdict.ok(), || format!("pair {trial}: BM margin {:.2e}", rep.margin))?;
        worst = worst.max(shaped.profile_mismatch);
    }
    for trial in 0..50 {
        let fs = (0..3).map(|_| random_radial(&mut r, 3, false)).collect::<qcvx::Result<Vec<_>>>();
        let fs = lib(fs)?;
        let vol = lib(SizeFunctional::volume(3))?;
        let anchor = lib(universal_anchor(3))?;
        for f in &fs {
            let m = lib(rescale_to_match(&vol, f, &anchor, Normalization::Match))?.profile_mismatch;
            ensure(m <= 1e-8, || format!("triple {trial}: profile mismatch {m:.2e}"))?;
            worst = worst.max(m);
        }
        let (_, rep) = lib(rescaled_af(&[], &fs, &tol))?;
        ensure(rep.verdict.ok(), || format!("triple {trial}: AF margin {:.2e}", rep.margin))?;
    }
    Ok(format!("50 pairs and 50 triples, worst profile mismatch {worst:.1e}"))
}

fn moment_logconcavity() -> Outcome {
    let tol = tol();
    let exp = Profile::Exp { c: 1.0 };
    for p in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let v = lib(normalized_moment(&exp, p))?;
        ensure((v - 1.0).abs() <= 1e-9, || format!("phi({p}) = {v}"))?;
    }
    let mut r = rng(12);
    let grid = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0];
    let mut min_margin = f64::INFINITY;
    for trial in 0..50 {
        let rep = lib(check_moment_logconcavity(&random_lc_profile(&mut r), &grid, &tol))?;
        ensure(rep.verdict.ok(), || format!("profile {trial}: margin {:.2e}", rep.margin))?;
        min_margin = min_margin.min(rep.margin);
    }
    Ok(format!("phi = 1 for e^{{-x}} at 5 orders, 50 profiles, min margin {min_margin:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("counterexample values", counterexamples),
        ("mixed-integral normalization", mixed_integral_normalization),
        ("polynomiality", polynomiality),
        ("polarization oracle", polarization_oracle),
        ("log-concave Alexandrov", lc_alexandrov),
        ("sharp isoperimetric", sharp_isoperimetric),
        ("rearrangement inequalities", rearrangement_inequalities),
        ("oplus oracle", oplus_oracle),
        ("sandwich properties", sandwiches),
        ("dilation worked example", band_example),
        ("rescaled BM/AF", rescaling),
        ("moment log-concavity", moment_logconcavity),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = t0.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {title}: {detail} [{took:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {detail} [{took:.1?}]", i + 1);
            }
        }
    }
    let total = start.elapsed();
    let budget = Duration::from_secs(300);
    if total > budget {
        failed += 1;
        println!("FAIL suite runtime {total:.1?} exceeds {budget:?}");
    }
    println!("{} of {} criteria passed in {total:.1?}", criteria.len() - failed.min(criteria.len()), criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
