use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use pxharm::acceptance;
use pxharm::config::{Problem, RunConfig, StandaloneCheck};
use pxharm::pipeline;
use pxharm::plot;

#[derive(Parser)]
#[command(name = "pxharm", version, about = "Solve and check p(x)-harmonic problems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a JSON run config.
    Run { config: PathBuf },
    /// Solve one Dirichlet problem and write its field CSV.
    Solve {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        data: String,
        #[arg(long)]
        h: f64,
        /// Exponent hull `lo1,lo2,hi1,hi2`; defaults to the domain box.
        #[arg(long)]
        hull: Option<String>,
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value = "pxharm-out")]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
    },
    /// Certify a radial barrier by sampling its operator on the annulus.
    BarrierCheck {
        #[arg(long)]
        family: String,
        #[arg(long)]
        p: String,
        #[arg(long = "M", default_value_t = 1.0)]
        m: f64,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Sample outside the admissible (μ, r) region.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        hull: Option<String>,
        /// Also write report.json and the sample CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long, default_value = "acceptance")]
        suite: String,
        /// Run only these criteria (1-based).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
    /// Render a field or profile CSV as SVG.
    Plot {
        csv: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Assertion,
    Config(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

fn hull_box(s: &Option<String>) -> Result<Option<[f64; 4]>> {
    s.as_deref()
        .map(|h| {
            let b = pxharm::parse::hull(h)?;
            Ok([b.lo[0], b.lo[1], b.hi[0], b.hi[1]])
        })
        .transpose()
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("PXHARM_THREADS") {
        let n: usize = v.parse().with_context(|| format!("PXHARM_THREADS = `{v}` is not a count"))?;
        if n == 0 {
            bail!("PXHARM_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn finish(report: &pxharm::report::Report) -> Result<(), Failure> {
    for r in report.records.iter().filter(|r| r.status == pxharm::report::Status::Fail) {
        eprintln!("FAIL {} ({}): {}", r.check, r.problem.as_deref().unwrap_or("-"), r.message.as_deref().unwrap_or(""));
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Assertion)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.cmd {
        Cmd::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let report = pipeline::run(&cfg)?;
            eprintln!(
                "{} records, {} failed; report in {}",
                report.records.len(),
                report.summary.fail,
                cfg.output_dir.join("report.json").display()
            );
            finish(&report)
        }
        Cmd::Solve {
            domain,
            p,
            data,
            h,
            hull,
            method,
            tol,
            out,
            svg,
        } => {
            let cfg = RunConfig {
                name: "solve".into(),
                seed: 0,
                output_dir: out,
                svg,
                problems: vec![Problem {
                    id: "solve".into(),
                    domain,
                    exponent: p,
                    hull: hull_box(&hull)?,
                    data,
                    h,
                    extend: None,
                    method,
                    tol,
                    exact: None,
                    max_error: None,
                    write_field: true,
                    checks: vec![],
                }],
                checks: vec![],
            };
            let report = pipeline::run(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&report.records[0]).context("serializing")?);
            finish(&report)
        }
        Cmd::BarrierCheck {
            family,
            p,
            m,
            r,
            mu,
            samples,
            force,
            hull,
            out,
        } => {
            let cfg = RunConfig {
                name: "barrier-check".into(),
                seed: 0,
                output_dir: out.clone().unwrap_or_default(),
                svg: false,
                problems: vec![],
                checks: vec![StandaloneCheck::Barrier {
                    family,
                    exponent: p,
                    hull: hull_box(&hull)?,
                    center: [0.0, 0.0],
                    r,
                    height: m,
                    mu,
                    samples,
                    force,
                }],
            };
            let (report, files) = pipeline::execute(&cfg)?;
            if let Some(dir) = out {
                pipeline::write_outputs(&dir, &report, &files)?;
            }
            println!("{}", serde_json::to_string_pretty(&report.records[0]).context("serializing")?);
            finish(&report)
        }
        Cmd::Verify { suite, only } => {
            if suite != "acceptance" {
                return Err(anyhow::anyhow!("unknown suite `{suite}` (available: acceptance)").into());
            }
            let ids: Vec<usize> = if only.is_empty() { (1..=13).collect() } else { only };
            let mut ok = true;
            let stdout = std::io::stdout();
            for id in ids {
                if !(1..=13).contains(&id) {
                    return Err(anyhow::anyhow!("no criterion {id}").into());
                }
                let o = acceptance::run_one(id);
                ok &= o.passed;
                writeln!(stdout.lock(), "{}", o.line()).ok();
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Assertion)
            }
        }
        Cmd::Plot { csv, output } => {
            let text = std::fs::read_to_string(&csv).with_context(|| format!("reading {}", csv.display()))?;
            let svg = plot::plot_csv(&text)?;
            match output {
                Some(path) => std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{svg}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
