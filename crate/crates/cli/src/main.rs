//! `sscs`: sweeps, searches, figure presets and verification runs.
//!
//! Exit status is 0 on success, 1 on invalid input and 2 when `verify`
//! reports a failed check.

mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use sscs_core::analysis::{
    emit_figure_preset, find_optimal_theta, find_transition, run_sweep, run_verify, Axis, Hold, Quantity, SweepSpec,
    Table, TransitionQuery, VerifyOptions, PRESET_NAMES,
};
use sscs_core::gaussian::{fmt_f64, wigner_grid, Mode};
use sscs_core::measures::{measure_set, MeasureSet};
use sscs_core::oracle::QuadratureConfig;
use sscs_core::{Exec, OperatingPoint};

use args::{parse_real, read_config, CriterionArg, Format, LocationArg, PointArgs};

#[derive(Debug, Parser)]
#[command(name = "sscs", version, about = "Nonclassicality measures of a seeded below-threshold OPO")]
struct Cli {
    /// JSON file with the raw system configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (directory for `figure`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Evaluate samples on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// All measures at one operating point.
    Measures {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value = "both")]
        location: LocationArg,
    },
    /// Tabulate quantities along one axis.
    Sweep {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        axis: Axis,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 201)]
        n: usize,
        /// Comma-separated: pi_a, pi_l, pi_n, pi_raw, pi_spdc, components, s, v, v_anti, means.
        #[arg(long, value_delimiter = ',', required = true)]
        quantities: Vec<Quantity>,
        #[arg(long)]
        hold: Option<Hold>,
        #[arg(long, value_enum, default_value = "extra")]
        location: LocationArg,
    },
    /// Squeezing spectrum S, V and the anti-squeezed variance versus Omega.
    Spectrum {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true, default_value = "-3")]
        lo: f64,
        #[arg(long, value_parser = parse_real, default_value = "3")]
        hi: f64,
        #[arg(long, default_value_t = 201)]
        n: usize,
    },
    /// Wigner function of one output mode on a square grid.
    Wigner {
        #[command(flatten)]
        point: PointArgs,
        /// 1 for the symmetric mode, 2 for the antisymmetric mode.
        #[arg(long, default_value_t = 1)]
        mode: u8,
        #[arg(long, value_delimiter = ',', num_args = 2, value_parser = parse_real, allow_hyphen_values = true, default_values = ["-5", "5"])]
        x_range: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 2, value_parser = parse_real, allow_hyphen_values = true, default_values = ["-5", "5"])]
        p_range: Vec<f64>,
        #[arg(long, default_value_t = 101)]
        n: usize,
        /// Write a dense matrix with the p axis as header instead of x,p,w rows.
        #[arg(long)]
        matrix: bool,
    },
    /// Locate a classical-to-nonclassical crossing by bisection.
    Transition {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[arg(long)]
        axis: Axis,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        hold: Option<Hold>,
        #[arg(long, value_enum, default_value = "extra")]
        location: LocationArg,
    },
    /// Seeding angle minimizing the normalized indicator.
    OptimalTheta {
        #[command(flatten)]
        point: PointArgs,
        /// ai_mag keeps the idler seed fixed; a_total keeps the total amplitude.
        #[arg(long, default_value = "ai_mag")]
        hold: Hold,
        /// Distance kept from pi/2.
        #[arg(long, value_parser = parse_real, default_value = "1e-3")]
        edge: f64,
    },
    /// Write every curve of a figure preset plus a JSON sidecar.
    Figure {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
        name: String,
    },
    /// Randomized oracle run; exits with status 2 when a check fails.
    Verify {
        #[arg(long, default_value_t = 50)]
        n_points: usize,
        #[arg(long, default_value_t = 20)]
        fock_points: usize,
        #[arg(long, default_value_t = 16)]
        fock_cutoff: usize,
        /// Absolute tolerance of the adaptive quadrature.
        #[arg(long, default_value_t = 1e-10)]
        quad_tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_intervals: usize,
    },
}

/// Error paired with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn output(cli: &Cli) -> CliResult<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(cli: &Cli, value: &T) -> CliResult<()> {
    let mut out = output(cli)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn write_table(cli: &Cli, table: &Table) -> CliResult<()> {
    match cli.format {
        Format::Json => write_json(cli, table),
        Format::Csv => {
            let mut out = output(cli)?;
            table.write_csv(&mut out)?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Header and string rows, for outputs that mix numbers and labels.
fn write_records(cli: &Cli, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut out = output(cli)?;
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        writeln!(out, "{}", r.join(","))?;
    }
    out.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn measure_row(m: &MeasureSet) -> Vec<String> {
    let c = &m.components;
    let n = m.normalized;
    let mut row = vec![
        format!("{:?}", m.location).to_lowercase(),
        fmt_f64(m.pi_a),
        fmt_f64(m.pi_l),
        fmt_f64(m.pi_raw),
        opt(m.pi_n),
        fmt_f64(m.pi_spdc),
    ];
    row.extend([c.inj, c.fc, c.spdc, c.stpdc].map(fmt_f64));
    row.extend([n.map(|n| n.inj), n.map(|n| n.fc), n.map(|n| n.spdc), n.map(|n| n.stpdc)].map(opt));
    row
}

#[derive(Serialize)]
struct PointReport<'a, T: Serialize> {
    point: &'a OperatingPoint,
    #[serde(flatten)]
    result: T,
}

fn run(cli: &Cli) -> CliResult<()> {
    let config = cli.config.as_ref().map(read_config).transpose()?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.command {
        Command::Measures { point, location } => {
            let p = point.resolve(config.as_ref())?;
            let sets = location
                .locations()
                .iter()
                .map(|l| measure_set(&p, *l))
                .collect::<sscs_core::Result<Vec<_>>>()?;
            match cli.format {
                Format::Json => write_json(cli, &PointReport { point: &p, result: serde_json::json!({ "measures": sets }) }),
                Format::Csv => write_records(
                    cli,
                    &[
                        "location", "pi_a", "pi_l", "pi_raw", "pi_n", "pi_spdc", "inj", "fc", "spdc", "stpdc", "n_inj",
                        "n_fc", "n_spdc", "n_stpdc",
                    ],
                    &sets.iter().map(measure_row).collect::<Vec<_>>(),
                ),
            }
        }
        Command::Sweep {
            point,
            axis,
            lo,
            hi,
            n,
            quantities,
            hold,
            location,
        } => {
            let p = point.resolve(config.as_ref())?;
            let mut spec = SweepSpec::new(*axis, *lo, *hi, *n, p, quantities.clone());
            spec.hold = *hold;
            spec.location = location.single()?;
            write_table(cli, &run_sweep(&spec, exec)?)
        }
        Command::Spectrum { point, lo, hi, n } => {
            let p = point.resolve(config.as_ref())?;
            let spec = SweepSpec::new(Axis::Omega, *lo, *hi, *n, p, vec![Quantity::S, Quantity::V, Quantity::VAnti]);
            write_table(cli, &run_sweep(&spec, exec)?)
        }
        Command::Wigner {
            point,
            mode,
            x_range,
            p_range,
            n,
            matrix,
        } => {
            let p = point.resolve(config.as_ref())?;
            let grid = wigner_grid(&p, Mode::from_index(*mode)?, (x_range[0], x_range[1]), (p_range[0], p_range[1]), *n)?;
            match cli.format {
                Format::Json => write_json(cli, &grid),
                Format::Csv => {
                    let mut out = output(cli)?;
                    if *matrix {
                        grid.write_matrix_csv(&mut out)?;
                    } else {
                        grid.write_long_csv(&mut out)?;
                    }
                    out.flush()?;
                    Ok(())
                }
            }
        }
        Command::Transition {
            point,
            criterion,
            axis,
            lo,
            hi,
            tol,
            hold,
            location,
        } => {
            let p = point.resolve(config.as_ref())?;
            let mut q = TransitionQuery::new((*criterion).into(), *axis, (*lo, *hi), p);
            q.hold = *hold;
            q.tol = *tol;
            q.location = location.single()?;
            let t = find_transition(&q)?;
            match cli.format {
                Format::Json => write_json(cli, &serde_json::json!({ "query": q, "transition": t })),
                Format::Csv => write_records(
                    cli,
                    &[axis.column(), "offset_below", "offset_above"],
                    &[vec![fmt_f64(t.value), fmt_f64(t.offset_below), fmt_f64(t.offset_above)]],
                ),
            }
        }
        Command::OptimalTheta { point, hold, edge } => {
            let p = point.resolve(config.as_ref())?;
            let o = find_optimal_theta(&p, *hold, *edge)?;
            if let Some(w) = &o.warning {
                eprintln!("warning: {w}");
            }
            match cli.format {
                Format::Json => write_json(cli, &PointReport { point: &p, result: &o }),
                Format::Csv => write_records(
                    cli,
                    &["theta", "theta_over_pi", "pi_n", "unimodal"],
                    &[vec![fmt_f64(o.theta), fmt_f64(o.theta_over_pi), fmt_f64(o.pi_n), o.unimodal.to_string()]],
                ),
            }
        }
        Command::Figure { name } => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in emit_figure_preset(name, &dir, exec)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Verify {
            n_points,
            fock_points,
            fock_cutoff,
            quad_tol,
            max_intervals,
        } => {
            if quad_tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || *max_intervals == 0 || *fock_cutoff < 2 {
                return Err("quad-tol must be positive, max-intervals nonzero and fock-cutoff at least 2".into());
            }
            let opts = VerifyOptions {
                seed: cli.seed,
                n_points: *n_points,
                fock_points: *fock_points,
                fock_start_cutoff: *fock_cutoff,
                quadrature: QuadratureConfig {
                    abs_tol: *quad_tol,
                    max_intervals: *max_intervals,
                },
            };
            let report = run_verify(&opts, exec);
            match cli.format {
                Format::Json => write_json(cli, &report)?,
                Format::Csv => write_records(
                    cli,
                    &["check", "pass", "detail"],
                    &report
                        .checks
                        .iter()
                        .map(|c| vec![c.name.clone(), c.pass.to_string(), format!("\"{}\"", c.detail.replace('"', "'"))])
                        .collect::<Vec<_>>(),
                )?,
            }
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("check {} failed: {}", c.name, c.detail);
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure {
                    code: 2,
                    message: "verification failed".into(),
                })
            }
        }
    }
}
