#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand};
use spdc_oam::io::config::{ExperimentConfig, OutputFormat};
use spdc_oam::io::format;
use spdc_oam::io::units::{parse_quantity, Dimension};
use spdc_oam::pipeline::{self, SweepMetric, SweepParameter, SweepScale, SweepSpec, SweepValues};
use spdc_oam::{Error, Execution};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit status when a result came back without meeting the convergence tolerance.
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "spdc-oam", version, about = "OAM spectra of SPDC photon pairs")]
struct Cli {
    /// JSON experiment config; defaults apply to every missing field.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads for the parallel backend.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Accepted for reproducible scripting; the computations are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Signal spiral spectrum with the idler projected as configured.
    Spectrum,
    /// Joint signal-idler spiral spectrum.
    Joint,
    /// One metric over a list of parameter values.
    Sweep(SweepArgs),
    /// Characteristic lengths and regime flags.
    Lengths,
    /// Spiral spectrum of the walked-off pump at depth z.
    PumpWalkoff {
        /// Depth inside the crystal, e.g. `5mm`; defaults to analysis.z_position.
        #[arg(long)]
        z: Option<String>,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    param: Option<SweepParameter>,
    /// Comma-separated values with optional units, e.g. `100um,200um`.
    #[arg(long, value_delimiter = ',')]
    values: Vec<String>,
    #[arg(long, requires_all = ["to", "steps"])]
    from: Option<String>,
    #[arg(long)]
    to: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = SweepScale::Linear)]
    scale: SweepScale,
    #[arg(long, value_enum)]
    metric: Option<SweepMetric>,
}

fn quantity(s: &str) -> Result<f64, Error> {
    parse_quantity(s, Dimension::Any).map_err(|m| Error::config("sweep.values", m))
}

impl SweepArgs {
    fn spec(&self, cfg: &ExperimentConfig) -> Result<SweepSpec, Error> {
        let Some(parameter) = self.param else {
            return cfg.sweep.clone().ok_or_else(|| {
                Error::config("sweep", "give --param or a sweep section in the config")
            });
        };
        let values = if !self.values.is_empty() {
            Some(SweepValues::List(
                self.values
                    .iter()
                    .map(|v| quantity(v))
                    .collect::<Result<_, _>>()?,
            ))
        } else if let (Some(from), Some(to), Some(steps)) = (&self.from, &self.to, self.steps) {
            Some(SweepValues::Range {
                from: quantity(from)?,
                to: quantity(to)?,
                steps,
                scale: self.scale,
            })
        } else {
            None
        };
        Ok(SweepSpec {
            parameter,
            values,
            metric: self.metric.unwrap_or_default(),
        })
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let _ = cli.seed;
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::config("--threads", e.to_string()))?;
    }
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let fmt = cli.format.unwrap_or(cfg.output.format);
    let json = fmt == OutputFormat::Json;

    let (text, converged) = match &cli.command {
        Command::Spectrum => {
            let r = pipeline::run_spectrum(&cfg, exec)?;
            let t = if json {
                format::to_json(&r)
            } else {
                format::spectrum_csv(&r.spectrum)
            };
            (t, r.convergence.converged)
        }
        Command::Joint => {
            let r = pipeline::run_joint(&cfg, exec)?;
            let t = if json {
                format::to_json(&r)
            } else {
                format::joint_csv(&r.spectrum)
            };
            (t, r.convergence.converged)
        }
        Command::Sweep(args) => {
            let spec = args.spec(&cfg)?;
            let table = pipeline::run_sweep(&cfg, &spec, exec)?;
            for row in &table.rows {
                if let Some(e) = &row.error {
                    eprintln!(
                        "{} = {}: {e}",
                        table.parameter.name(),
                        format::e12(row.value)
                    );
                }
            }
            let t = if json {
                format::to_json(&table)
            } else {
                format::sweep_csv(&table)
            };
            (t, table.all_converged())
        }
        Command::Lengths => {
            let r = pipeline::run_lengths(&cfg)?;
            let t = if json {
                format::to_json(&r)
            } else {
                format::lengths_csv(&r)
            };
            (t, true)
        }
        Command::PumpWalkoff { z } => {
            let z = match z {
                Some(s) => {
                    parse_quantity(s, Dimension::Length).map_err(|m| Error::config("--z", m))?
                }
                None => cfg.analysis.z_position,
            };
            let r = pipeline::run_pump_walkoff(&cfg, z, exec)?;
            let t = if json {
                format::to_json(&r)
            } else {
                format::spectrum_csv(&r.spectrum)
            };
            (t, r.convergence.converged)
        }
    };

    match cli.out.as_ref().or(cfg.output.path.as_ref()) {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(converged)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("warning: result did not converge within the configured doublings");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
