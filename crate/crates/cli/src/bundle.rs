//! The `report` bundle: suite results plus plot tables.
//!
//! Files written into the output directory:
//! - `reports.jsonl`: every check report, in suite order;
//! - `summary.csv`: one row per check;
//! - `size_profiles.csv`: `function,t,volume` for the sample functions;
//! - `extensions.csv`: `function,eps,integral` with `∫ f_ε = ∫ f ⊕ ε ⊙ 1_D`;
//! - `band_section.csv`: `x,t` along `y = 0` of the dilated band example.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::Context;

use qcvx::convex_bodies::{volume, ConvexBody};
use qcvx::inequality_lab::suite::{run_all, summarize, SuiteConfig};
use qcvx::qc_calculus::{epsilon_extension_integral, LevelStack, Profile, QCFunction};
use qcvx::report::CheckReport;
use qcvx::reshape::{band_dilation, log_heights};

use crate::output::{levels_of, reports_jsonl, summary_csv, Sink};

const EPSILONS: [f64; 9] = [0.0, 0.125, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0];

fn sample_functions(dim: usize) -> anyhow::Result<Vec<(&'static str, QCFunction)>> {
    let ball = ConvexBody::unit_ball(dim);
    Ok(vec![
        ("exp", QCFunction::radial(ball.clone(), Profile::Exp { c: 1.0 })?),
        ("gaussian", QCFunction::radial(ball.clone(), Profile::Gaussian { c: 1.0 })?),
        ("power-law", QCFunction::radial(ball, Profile::PowerLaw { a: dim as f64 + 2.0, s: 1.0 })?),
        ("cube-stack", cube_stack(dim)?),
    ])
}

/// Cubes of half-width 1.5, 1, 0.5 at heights 1/4, 1/2, 1.
fn cube_stack(dim: usize) -> anyhow::Result<QCFunction> {
    let levels = [(1.0, 0.5), (0.5, 1.0), (0.25, 1.5)]
        .into_iter()
        .map(|(t, half)| Ok((t, ConvexBody::cube(dim, -half, half)?)))
        .collect::<qcvx::Result<Vec<_>>>()?;
    Ok(LevelStack::new(dim, levels)?.into())
}

fn create(dir: &Path, name: &str) -> anyhow::Result<csv::Writer<BufWriter<File>>> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

pub fn write(sink: &mut Sink, cfg: &SuiteConfig) -> anyhow::Result<Vec<CheckReport>> {
    let dir = sink.dir().context("report needs --out DIR")?.to_path_buf();
    let reports = run_all(cfg)?;
    reports_jsonl(BufWriter::new(File::create(dir.join("reports.jsonl"))?), &reports)?;
    summary_csv(BufWriter::new(File::create(dir.join("summary.csv"))?), &summarize(&reports))?;

    let samples = sample_functions(cfg.dim)?;
    let mut profiles = create(&dir, "size_profiles.csv")?;
    profiles.write_record(["function", "t", "volume"])?;
    for (name, f) in &samples {
        for (t, body) in levels_of(f)? {
            profiles.write_record([name.to_string(), t.to_string(), volume(&body).to_string()])?;
        }
    }
    profiles.flush()?;

    let mut ext = create(&dir, "extensions.csv")?;
    ext.write_record(["function", "eps", "integral"])?;
    for (name, f) in &samples {
        for eps in EPSILONS {
            ext.write_record([name.to_string(), eps.to_string(), epsilon_extension_integral(f, eps)?.to_string()])?;
        }
    }
    ext.flush()?;

    let band = band_dilation(&log_heights(12, 1e-4)[1..], 64)?;
    let mut section = create(&dir, "band_section.csv")?;
    section.write_record(["x", "t"])?;
    for (x, t) in &band.section {
        section.write_record([x.to_string(), t.to_string()])?;
    }
    section.flush()?;
    Ok(reports)
}
