//! Ordered, single-threaded output in JSON-lines or CSV.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use qcvx::inequality_lab::suite::Summary;
use qcvx::qc_calculus::QCFunction;
use qcvx::report::CheckReport;
use qcvx::reshape::log_heights;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Sink {
    format: Format,
    out: Option<PathBuf>,
    main: Box<dyn Write>,
    report_header: bool,
}

/// Heights at which radial functions are tabulated.
const RADIAL_TABLE: usize = 32;

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn summary_csv<W: Write>(w: W, rows: &[Summary]) -> anyhow::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn reports_jsonl<W: Write>(mut w: W, reports: &[CheckReport]) -> anyhow::Result<()> {
    for r in reports {
        writeln!(w, "{}", serde_json::to_string(r)?)?;
    }
    w.flush()?;
    Ok(())
}

/// `(t, body)` pairs: stack levels, or a log-spaced sample for radial functions.
pub fn levels_of(f: &QCFunction) -> anyhow::Result<Vec<(f64, qcvx::ConvexBody)>> {
    Ok(match f {
        QCFunction::Stack(s) => s.levels().iter().map(|l| (l.t, l.body.clone())).collect(),
        QCFunction::Radial(_) => log_heights(RADIAL_TABLE, 1e-6)
            .into_iter()
            .map(|t| Ok((t, f.level_set(t)?)))
            .collect::<qcvx::Result<Vec<_>>>()?,
    })
}

impl Sink {
    /// Stdout or a file; with `dir` set, `out` names a directory that must be given.
    pub fn open(out: Option<&Path>, dir: bool, format: Format) -> anyhow::Result<Self> {
        let main: Box<dyn Write> = match (out, dir) {
            (Some(p), true) => {
                std::fs::create_dir_all(p).with_context(|| format!("creating {}", p.display()))?;
                Box::new(io::sink())
            }
            (None, true) => bail!("report needs --out DIR"),
            (Some(p), false) => {
                Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?))
            }
            (None, false) => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Sink {
            format,
            out: out.map(Path::to_path_buf),
            main,
            report_header: false,
        })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    /// One record: a JSON line, or a header and row of its top-level fields.
    pub fn json<T: Serialize>(&mut self, v: &T) -> anyhow::Result<()> {
        let v = serde_json::to_value(v)?;
        match self.format {
            Format::Json => writeln!(self.main, "{v}")?,
            Format::Csv => {
                let mut csv = csv::Writer::from_writer(&mut self.main);
                match &v {
                    Value::Object(map) => {
                        csv.write_record(map.keys())?;
                        csv.write_record(map.values().map(cell))?;
                    }
                    other => {
                        csv.write_record(["value"])?;
                        csv.write_record([cell(other)])?;
                    }
                }
                csv.flush()?;
            }
        }
        self.main.flush()?;
        Ok(())
    }

    pub fn report(&mut self, r: &CheckReport) -> anyhow::Result<()> {
        match self.format {
            Format::Json => reports_jsonl(&mut self.main, std::slice::from_ref(r)),
            Format::Csv => {
                let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(&mut self.main);
                if !self.report_header {
                    csv.write_record(["name", "verdict", "margin", "tol", "digest"])?;
                    self.report_header = true;
                }
                csv.write_record([
                    r.name.clone(),
                    serde_json::to_value(r.verdict)?.as_str().unwrap_or_default().to_string(),
                    r.margin.to_string(),
                    r.tol.to_string(),
                    r.digest.clone(),
                ])?;
                csv.flush()?;
                Ok(())
            }
        }
    }

    /// JSON-lines of every report plus the CSV summary. With `--out FILE` the
    /// summary goes to `FILE` with extension `csv`; on stdout it goes to stderr.
    /// `--format csv` writes only the summary, to the main output.
    pub fn check_output(&mut self, reports: &[CheckReport], summary: &[Summary]) -> anyhow::Result<()> {
        match self.format {
            Format::Csv => summary_csv(&mut self.main, summary),
            Format::Json => {
                reports_jsonl(&mut self.main, reports)?;
                match &self.out {
                    Some(p) => {
                        let path = p.with_extension("csv");
                        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                        summary_csv(BufWriter::new(file), summary)
                    }
                    None => summary_csv(io::stderr(), summary),
                }
            }
        }
    }

    /// Levels of `f`: JSON lines `{"t", "volume", "body"}`, or CSV `t,volume`.
    pub fn level_table(&mut self, f: &QCFunction) -> anyhow::Result<()> {
        let levels = levels_of(f)?;
        match self.format {
            Format::Json => {
                for (t, body) in &levels {
                    let row = serde_json::json!({ "t": t, "volume": qcvx::convex_bodies::volume(body), "body": body });
                    writeln!(self.main, "{row}")?;
                }
            }
            Format::Csv => {
                let mut csv = csv::Writer::from_writer(&mut self.main);
                csv.write_record(["t", "volume"])?;
                for (t, body) in &levels {
                    csv.write_record([t.to_string(), qcvx::convex_bodies::volume(body).to_string()])?;
                }
                csv.flush()?;
            }
        }
        self.main.flush()?;
        Ok(())
    }
}
