//! `cbf`: tables, sweeps and discrete conflict from the command line.

mod scenario;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cbf_core::discrete::{self, parse_bba, ConflictReading, Frame};
use cbf_core::experiments::{
    run_sweep, run_tables, sweep_to_csv, tables_to_csv, tables_to_markdown, Direction, GridRange,
    Measure, OutputFormat, Scenario, SweepSpec,
};
use cbf_core::measures::{self, McMeasure};
use cbf_core::{ConsonantBbd, DiscreteMassFunction, QuadratureConfig, Rule};

#[derive(Parser)]
#[command(
    name = "cbf",
    version,
    about = "Inclusion, distance and conflict of belief functions"
)]
struct Cli {
    #[command(flatten)]
    quad: QuadArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QuadArgs {
    /// Points per axis of the base grid.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// midpoint, trapezoid or gauss_legendre.
    #[arg(long, global = true)]
    rule: Option<Rule>,
    /// Truncation in scale units.
    #[arg(long = "trunc-k", global = true)]
    trunc_k: Option<f64>,
    /// Relative tolerance of the grid refinement.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed of the Monte-Carlo estimators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

impl QuadArgs {
    fn apply(&self, mut cfg: QuadratureConfig) -> Result<QuadratureConfig> {
        if let Some(n) = self.grid {
            cfg.points_per_axis = n;
        }
        if let Some(r) = self.rule {
            cfg.rule = r;
        }
        if let Some(k) = self.trunc_k {
            cfg.truncation_k = k;
        }
        if let Some(t) = self.tol {
            cfg.target_rel_tol = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Pairwise measure tables with per-row averages.
    Tables {
        #[arg(long, num_args = 2.., required = true)]
        dists: Vec<ConsonantBbd>,
        /// Comma-separated: incstr, incpar, distance, scalar.
        #[arg(long, default_value = "incstr,incpar")]
        measures: String,
        #[arg(long, default_value = "markdown")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One measure over a (mu2, sigma2) grid of normal densities, as CSV.
    Sweep {
        #[arg(long, default_value = "normal:0,1")]
        fixed: ConsonantBbd,
        /// lo:hi:step
        #[arg(long, default_value = "0:10:0.1")]
        mu2: GridRange,
        #[arg(long, default_value = "0.05:5:0.05")]
        sigma2: GridRange,
        #[arg(long, default_value = "incpar")]
        measure: Measure,
        /// 1in2 (fixed in swept) or 2in1.
        #[arg(long, default_value = "1in2")]
        direction: Direction,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise distance table.
    Distance {
        #[arg(long, num_args = 2.., required = true)]
        dists: Vec<ConsonantBbd>,
        #[arg(long, default_value = "markdown")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A single functional of one ordered pair, with its error estimate.
    Pair {
        #[arg(long)]
        f1: ConsonantBbd,
        #[arg(long)]
        f2: ConsonantBbd,
        #[arg(long, value_enum)]
        measure: PairMeasure,
        /// Monte-Carlo samples instead of the grid.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Measures between two mass functions read from files.
    Discrete {
        #[arg(value_enum)]
        what: DiscreteQuery,
        #[arg(long)]
        m1: PathBuf,
        #[arg(long)]
        m2: PathBuf,
        #[arg(long, value_enum, default_value = "discounted")]
        reading: Reading,
    },
    /// Runs a TOML scenario file.
    Run { scenario: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum PairMeasure {
    Scalar,
    Distance,
    Strict,
    Partial,
    PartialRev,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiscreteQuery {
    /// Conflict.
    Conf,
    /// Jousselme distance.
    Distance,
    /// Degree of inclusion of m1 in m2 and of m2 in m1.
    Inclusion,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    Discounted,
    OneMinusProduct,
}

impl From<Reading> for ConflictReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Discounted => ConflictReading::DiscountedDistance,
            Reading::OneMinusProduct => ConflictReading::OneMinusProduct,
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_tables(s: &Scenario) -> Result<String> {
    let tables = run_tables(s)?;
    Ok(match s.format {
        OutputFormat::Csv => tables_to_csv(&tables),
        OutputFormat::Markdown => tables_to_markdown(&tables),
    })
}

fn read_pair(p1: &Path, p2: &Path) -> Result<(DiscreteMassFunction, DiscreteMassFunction)> {
    let read = |p: &Path| -> Result<_> {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        parse_bba(&text).with_context(|| format!("in {}", p.display()))
    };
    let (f1, f2) = (read(p1)?, read(p2)?);
    let mut frame = Frame::default();
    f1.extend_frame(&mut frame)?;
    f2.extend_frame(&mut frame)?;
    let m1 = f1
        .to_mass_function(&frame)
        .with_context(|| format!("in {}", p1.display()))?;
    let m2 = f2
        .to_mass_function(&frame)
        .with_context(|| format!("in {}", p2.display()))?;
    Ok((m1, m2))
}

fn run(cli: Cli) -> Result<()> {
    let cfg = cli.quad.apply(QuadratureConfig::default())?;
    match cli.command {
        Command::Tables {
            dists,
            measures,
            format,
            out,
        } => {
            let mut s = Scenario::tables(dists, Measure::parse_list(&measures)?);
            s.quadrature = cfg;
            s.format = format;
            emit(&render_tables(&s)?, out.as_deref())
        }
        Command::Distance { dists, format, out } => {
            let mut s = Scenario::tables(dists, vec![Measure::Distance]);
            s.quadrature = cfg;
            s.format = format;
            emit(&render_tables(&s)?, out.as_deref())
        }
        Command::Sweep {
            fixed,
            mu2,
            sigma2,
            measure,
            direction,
            out,
        } => {
            let spec = SweepSpec {
                fixed,
                mu2,
                sigma2,
                direction,
            };
            let mut s = Scenario::sweep(spec, measure);
            s.quadrature = cfg;
            emit(&sweep_to_csv(&run_sweep(&s)?), out.as_deref())
        }
        Command::Pair {
            f1,
            f2,
            measure,
            samples,
        } => {
            let k = cfg.truncation_k;
            let (f1, f2) = (f1.with_truncation(k)?, f2.with_truncation(k)?);
            if let Some(n) = samples {
                let m = match measure {
                    PairMeasure::Scalar => McMeasure::Scalar,
                    PairMeasure::Strict => McMeasure::Strict,
                    PairMeasure::Partial => McMeasure::Partial,
                    PairMeasure::PartialRev => McMeasure::PartialReversed,
                    PairMeasure::Distance => bail!("distance has no Monte-Carlo estimator"),
                };
                let e = measures::mc_measure(&f1, &f2, m, n, cli.quad.seed)?;
                println!(
                    "{:.6} stderr {:.2e} samples {}",
                    e.mean, e.stderr, e.samples
                );
                return Ok(());
            }
            let e = match measure {
                PairMeasure::Scalar => measures::scalar_product_estimate(&f1, &f2, &cfg)?,
                PairMeasure::Strict => measures::inc_strict(&f1, &f2, &cfg)?.quadrature,
                PairMeasure::Partial => measures::inc_partial(&f1, &f2, &cfg)?.quadrature,
                PairMeasure::PartialRev => measures::inc_partial_rev(&f1, &f2, &cfg)?.quadrature,
                PairMeasure::Distance => {
                    println!("{:.6}", measures::distance(&f1, &f2, &cfg)?);
                    return Ok(());
                }
            };
            println!(
                "{:.6} est_error {:.2e} points {}",
                e.value, e.est_error, e.points
            );
            Ok(())
        }
        Command::Discrete {
            what,
            m1,
            m2,
            reading,
        } => {
            let (a, b) = read_pair(&m1, &m2)?;
            match what {
                DiscreteQuery::Conf => {
                    println!("{:.6}", discrete::conflict(&a, &b, reading.into())?)
                }
                DiscreteQuery::Distance => println!("{:.6}", discrete::jousselme_distance(&a, &b)?),
                DiscreteQuery::Inclusion => {
                    println!(
                        "{:.6} {:.6}",
                        discrete::d_inc(&a, &b)?,
                        discrete::d_inc(&b, &a)?
                    )
                }
            }
            Ok(())
        }
        Command::Run { scenario } => {
            let text = fs::read_to_string(&scenario)
                .with_context(|| format!("reading {}", scenario.display()))?;
            let (s, out) = scenario::load(&text, &cli.quad)?;
            let body = if s.sweep.is_some() {
                sweep_to_csv(&run_sweep(&s)?)
            } else {
                render_tables(&s)?
            };
            emit(&body, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cbf: {e:#}");
            ExitCode::FAILURE
        }
    }
}
