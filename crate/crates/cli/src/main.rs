//! `qcvx`: command-line front end.
//!
//! Exit status: 0 when every verdict holds, 1 on any violated verdict,
//! 2 on unreadable input or a computation that rejects its arguments.

mod bundle;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::json;

use qcvx::convex_duality::{polarity_sandwich_check, sandwich_check, GeomConvexFn};
use qcvx::inequality_lab::suite::{oplus_oracle_check, run_all, run_check, summarize, SuiteConfig, CHECK_NAMES};
use qcvx::inequality_lab::Tolerances;
use qcvx::mixed_volumes::{minkowski_polynomial, mixed_volume};
use qcvx::qc_calculus::grid::Lattice;
use qcvx::qc_calculus::{
    integral, mixed_integral, minkowski_polynomial_fn, oplus_with_bound, quermassintegral_fn, QCFunction,
};
use qcvx::rearrange::SizeFunctional;
use qcvx::report::{CheckReport, Verdict};
use qcvx::reshape::{dilate_to_exponential, dilated_bm, rescaled_bm, Normalization};
use qcvx::ConvexBody;

use output::{Format, Sink};

#[derive(Parser, Debug)]
#[command(name = "qcvx", version, about = "Quasi-concave function calculus over convex bodies")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=3))]
    dim: u64,
    /// Cap on quadrature panels (64 nodes each) per integration.
    #[arg(long, global = true, default_value_t = 256)]
    panels: usize,
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive)]
    tol_exact: f64,
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive)]
    tol_quad: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (a directory for `report`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl RunConfig {
    fn tol(&self) -> Tolerances {
        Tolerances {
            exact: self.tol_exact,
            quad: self.tol_quad,
        }
    }

    fn suite(&self) -> SuiteConfig {
        SuiteConfig {
            seed: self.seed,
            trials: self.trials as usize,
            dim: self.dim as usize,
            tol: self.tol(),
        }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mixed volume of a JSON list of n bodies, with the polynomial-fit oracle.
    MixedVolume { bodies: PathBuf },
    /// Integral of one function.
    Integral { function: PathBuf },
    /// Mixed integral of a JSON list of n functions, with the polynomial-fit oracle.
    MixedIntegral { functions: PathBuf },
    /// Quermassintegral `W_k` of one function.
    Quermass {
        #[arg(long)]
        k: usize,
        function: PathBuf,
    },
    /// Level-set sum of two functions.
    Oplus {
        f: PathBuf,
        g: PathBuf,
        /// Emit one record per level of the sum instead of the function.
        #[arg(long)]
        emit_levels: bool,
    },
    /// Level-set sum of two planar stacks against the grid sup-min convolution.
    OracleCompare {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t = 41)]
        grid_size: usize,
    },
    /// Rearrangement with respect to a size functional.
    Rearrange {
        #[arg(long, default_value = "vol")]
        functional: String,
        function: PathBuf,
    },
    /// Polarity sandwich for each function at each t, and the sum sandwich
    /// when the file holds two or more functions.
    DualityCheck {
        functions: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        t_values: Vec<f64>,
        #[arg(long, default_value_t = 21)]
        grid_size: usize,
    },
    /// Randomized inequality checks: a name or `all`.
    Check { name: String },
    /// Rescale `f` so its size profile matches `g`.
    Rescale {
        #[arg(long, default_value = "vol")]
        phi: String,
        #[arg(long = "match")]
        target: PathBuf,
        #[arg(long, value_enum, default_value_t = NormArg::Match)]
        normalization: NormArg,
        function: PathBuf,
    },
    /// Dilate a log-concave function to the exponential size law.
    Dilate {
        #[arg(long, default_value = "vol")]
        phi: String,
        /// Second function for the paired inequality; defaults to the input.
        #[arg(long)]
        with: Option<PathBuf>,
        function: PathBuf,
    },
    /// Full suite plus plot tables, written as a bundle into `--out`.
    Report,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    Match,
    PreserveSize,
    PreserveIntegral,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Match => Normalization::Match,
            NormArg::PreserveSize => Normalization::PreserveSize,
            NormArg::PreserveIntegral => Normalization::PreserveIntegral,
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// `vol`, `W1`, `W2` or a path to a serialized size functional.
fn parse_functional(spec: &str, dim: usize) -> anyhow::Result<SizeFunctional> {
    let phi = match spec {
        "vol" => SizeFunctional::volume(dim)?,
        "W1" => SizeFunctional::quermass(dim, 1)?,
        "W2" => SizeFunctional::quermass(dim, 2)?,
        path => {
            let phi: SizeFunctional = read_json(Path::new(path))?;
            phi.revalidate()?
        }
    };
    if phi.dim() != dim {
        bail!("functional is {}-dimensional, input is {}-dimensional", phi.dim(), dim);
    }
    Ok(phi)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// What a subcommand produced: JSON records and whether all verdicts hold.
struct Outcome {
    ok: bool,
}

impl Outcome {
    fn from_reports(reports: &[CheckReport]) -> Self {
        Outcome {
            ok: reports.iter().all(|r| r.verdict != Verdict::Violated),
        }
    }
}

const DONE: Outcome = Outcome { ok: true };

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let run = &cli.run;
    let tol = run.tol();
    let mut sink = Sink::open(run.out.as_deref(), matches!(cli.command, Command::Report), run.format)?;
    match &cli.command {
        Command::MixedVolume { bodies } => {
            let bodies: Vec<ConvexBody> = read_json(bodies)?;
            let refs: Vec<&ConvexBody> = bodies.iter().collect();
            let dim = bodies.first().ok_or_else(|| anyhow!("empty body list"))?.dim();
            let value = mixed_volume(&refs)?;
            let oracle = minkowski_polynomial(&refs, dim)
                .ok()
                .map(|p| p.mixed_value(&(0..refs.len()).collect::<Vec<_>>()));
            sink.json(&json!({
                "value": value,
                "oracle": oracle,
                "rel_err": oracle.map(|o| rel_err(value, o)),
            }))?;
            Ok(DONE)
        }
        Command::Integral { function } => {
            let f: QCFunction = read_json(function)?;
            sink.json(&json!({ "value": integral(&f)? }))?;
            Ok(DONE)
        }
        Command::MixedIntegral { functions } => {
            let fs: Vec<QCFunction> = read_json(functions)?;
            let refs: Vec<&QCFunction> = fs.iter().collect();
            let value = mixed_integral(&refs)?;
            let oracle = minkowski_polynomial_fn(&refs)
                .ok()
                .map(|p| p.mixed_value(&(0..refs.len()).collect::<Vec<_>>()));
            sink.json(&json!({
                "value": value,
                "oracle": oracle,
                "rel_err": oracle.map(|o| rel_err(value, o)),
            }))?;
            Ok(DONE)
        }
        Command::Quermass { k, function } => {
            let f: QCFunction = read_json(function)?;
            sink.json(&json!({ "k": k, "value": quermassintegral_fn(&f, *k)? }))?;
            Ok(DONE)
        }
        Command::Oplus { f, g, emit_levels } => {
            let (f, g): (QCFunction, QCFunction) = (read_json(f)?, read_json(g)?);
            let (sum, bound) = oplus_with_bound(&f, &g)?;
            if *emit_levels {
                sink.level_table(&sum)?;
            } else {
                sink.json(&json!({ "function": sum, "discretization": bound }))?;
            }
            Ok(DONE)
        }
        Command::OracleCompare { f, g, grid_size } => {
            let (f, g): (QCFunction, QCFunction) = (read_json(f)?, read_json(g)?);
            let (QCFunction::Stack(a), QCFunction::Stack(b)) = (&f, &g) else {
                bail!("oracle-compare needs two stacks; radial inputs are discretized by `oplus`");
            };
            let report = oplus_oracle_check(a, b, *grid_size)?;
            sink.report(&report)?;
            Ok(Outcome::from_reports(&[report]))
        }
        Command::Rearrange { functional, function } => {
            let f: QCFunction = read_json(function)?;
            let phi = parse_functional(functional, f.dim())?;
            sink.json(&serde_json::to_value(phi.rearrange_fn(&f)?)?)?;
            Ok(DONE)
        }
        Command::DualityCheck {
            functions,
            t_values,
            grid_size,
        } => {
            let phis: Vec<GeomConvexFn> = read_json(functions)?;
            let mut reports = Vec::new();
            for phi in &phis {
                for &t in t_values {
                    reports.push(polarity_sandwich_check(phi, t)?);
                }
            }
            if phis.len() >= 2 {
                let dim = phis[0].dim();
                let reach = phis
                    .iter()
                    .filter_map(|p| p.domain().map(|d| d.scale_len()))
                    .fold(2.0, f64::max);
                let lambdas = vec![1.0; phis.len()];
                reports.push(sandwich_check(&phis, &lambdas, &Lattice::new(dim, 1.1 * reach, *grid_size)?)?);
            }
            for r in &reports {
                sink.report(r)?;
            }
            Ok(Outcome::from_reports(&reports))
        }
        Command::Check { name } => {
            let cfg = run.suite();
            let reports = if name == "all" {
                run_all(&cfg)?
            } else if CHECK_NAMES.contains(&name.as_str()) {
                run_check(name, &cfg)?
            } else {
                bail!("unknown check {name}; expected one of: all, {}", CHECK_NAMES.join(", "));
            };
            sink.check_output(&reports, &summarize(&reports))?;
            Ok(Outcome::from_reports(&reports))
        }
        Command::Rescale {
            phi,
            target,
            normalization,
            function,
        } => {
            let (f, g): (QCFunction, QCFunction) = (read_json(function)?, read_json(target)?);
            let phi = parse_functional(phi, f.dim())?;
            let (rescaled, report) = rescaled_bm(&phi, &f, &g, (*normalization).into(), &tol)?;
            sink.json(&json!({ "rescaled": rescaled, "report": report }))?;
            Ok(Outcome::from_reports(&[report]))
        }
        Command::Dilate { phi, with, function } => {
            let f: QCFunction = read_json(function)?;
            let g: QCFunction = match with {
                Some(p) => read_json(p)?,
                None => f.clone(),
            };
            let phi = parse_functional(phi, f.dim())?;
            let dilated = dilate_to_exponential(&phi, &f, &tol)?;
            let report = dilated_bm(&phi, &f, &g, &tol)?;
            sink.json(&json!({ "function": dilated, "report": report }))?;
            Ok(Outcome::from_reports(&[report]))
        }
        Command::Report => {
            let reports = bundle::write(&mut sink, &run.suite())?;
            Ok(Outcome::from_reports(&reports))
        }
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("QCVX_THREADS") {
        let n: usize = v.parse().with_context(|| format!("QCVX_THREADS={v}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    qcvx::quadrature::set_panel_cap(cli.run.panels);
    let result = init_threads().and_then(|_| dispatch(&cli));
    match result {
        Ok(Outcome { ok: true }) => ExitCode::SUCCESS,
        Ok(Outcome { ok: false }) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn any_violation_fails_the_run() {
        let ok = CheckReport::at_least("x", "a >= b", vec![2.0], vec![1.0], 1e-9, &0);
        let bad = CheckReport::at_least("x", "a >= b", vec![0.0], vec![1.0], 1e-9, &0);
        assert!(Outcome::from_reports(&[ok.clone()]).ok);
        assert!(!Outcome::from_reports(&[ok, bad]).ok);
    }
}
