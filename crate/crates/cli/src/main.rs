//! `morse-engine`: single points, sweeps, figure presets and oracle checks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numeric range error. Diagnostics go to standard error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use morse_engine::spectrum::{bound_spectrum, potential_minimum};
use morse_engine::sweep::presets::{potential_curves, preset, Figure, Preset};
use morse_engine::sweep::{run_point, run_sweep, write_csv, write_json, Config};
use morse_engine::verify::{verify, Level};
use morse_engine::{Cycle, CycleResult, Error, Method, MorseModel, PointParams};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "morse-engine", version, about = "Quantum Carnot and Otto engines with a q-deformed Morse oscillator")]
struct Cli {
    /// JSON configuration; every field is optional.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for grid evaluation.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Width,
    Deform,
    Dissoc,
}

#[derive(Clone, Copy, ValueEnum)]
enum CycleArg {
    Carnot,
    OttoWidth,
    OttoDeform,
    OttoDissoc,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Sum,
    Closed,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Specfun,
    Spectrum,
    Thermo,
    Cycles,
}

#[derive(Subcommand)]
enum Command {
    /// Bound levels of the configured model.
    Spectrum,
    /// One Carnot cycle, from level sums and from the closed form.
    Carnot,
    /// One Otto cycle under the chosen protocol.
    Otto {
        #[arg(long, value_enum)]
        protocol: ProtocolArg,
    },
    /// Two-dimensional sweep described by a JSON grid file.
    Sweep {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, value_enum)]
        cycle: CycleArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Sum)]
        method: MethodArg,
    },
    /// Data for one of the built-in figures (fig1, fig2, fig4, fig5, fig6).
    Figure {
        id: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Sum)]
        method: MethodArg,
    },
    /// Run the oracle suites; all levels when none is given.
    Verify {
        #[arg(long, value_enum)]
        level: Option<LevelArg>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_range() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        // A reader that closed the pipe early, as `head` does, is not an error.
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure {
                code: 0,
                message: String::new(),
            };
        }
        Failure {
            code: 2,
            message: format!("i/o error: {e}"),
        }
    }
}

fn read_config(path: &Path) -> Result<Config, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Config::from_json(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure {
            code: 2,
            message: format!("cannot create {}: {e}", p.display()),
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) if f.code == 0 => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure {
                code: 2,
                message: format!("cannot start {n} threads: {e}"),
            })?;
    }
    let config = match &cli.config {
        Some(p) => read_config(p)?,
        None => Config::default(),
    };
    let params = config.point_params();

    match cli.command {
        Command::Spectrum => {
            let model = MorseModel::with_units(params.d_e, params.alpha, params.q, &params.units)?;
            write_spectrum(&model, cli.format, output(&cli.out)?)?;
            Ok(0)
        }
        Command::Carnot => point(&params, Cycle::Carnot, cli.format, &cli.out),
        Command::Otto { protocol } => {
            let cycle = match protocol {
                ProtocolArg::Width => Cycle::OttoWidth,
                ProtocolArg::Deform => Cycle::OttoDeform,
                ProtocolArg::Dissoc => Cycle::OttoDissoc,
            };
            point(&params, cycle, cli.format, &cli.out)
        }
        Command::Sweep { grid, cycle, method } => {
            let grid = read_config(&grid)?.sweep_grid()?;
            let records = run_sweep(&grid, cycle_of(cycle), method_of(method))?;
            write_records(&records, cli.format, output(&cli.out)?)?;
            Ok(0)
        }
        Command::Figure { id, method } => {
            let figure: Figure = id.parse()?;
            match preset(figure)? {
                Preset::Potential { d_e, alpha, qs, x_min, x_max, samples } => {
                    let curve = potential_curves(d_e, alpha, &qs, x_min, x_max, samples)?;
                    let mut out = output(&cli.out)?;
                    match cli.format {
                        Format::Csv => {
                            writeln!(out, "q,x,V")?;
                            for s in curve {
                                writeln!(out, "{},{},{}", s.q, s.x, s.v)?;
                            }
                        }
                        Format::Json => {
                            let rows: Vec<Value> = curve.iter().map(|s| json!({"q": s.q, "x": s.x, "V": s.v})).collect();
                            serde_json::to_writer_pretty(&mut out, &rows).map_err(io::Error::from)?;
                            writeln!(out)?;
                        }
                    }
                    out.flush()?;
                }
                Preset::Sweep { grid, cycle } => {
                    eprintln!(
                        "{figure}: {cycle}, {} = [{}, {}] x {} = [{}, {}], {} points",
                        grid.axis1.param, grid.axis1.min, grid.axis1.max,
                        grid.axis2.param, grid.axis2.min, grid.axis2.max,
                        grid.len()
                    );
                    let records = run_sweep(&grid, cycle, method_of(method))?;
                    write_records(&records, cli.format, output(&cli.out)?)?;
                }
            }
            Ok(0)
        }
        Command::Verify { level } => {
            let level = level.map(|l| match l {
                LevelArg::Specfun => Level::Specfun,
                LevelArg::Spectrum => Level::Spectrum,
                LevelArg::Thermo => Level::Thermo,
                LevelArg::Cycles => Level::Cycles,
            });
            let report = verify(level);
            let mut out = output(&cli.out)?;
            write!(out, "{report}")?;
            out.flush()?;
            match report.first_failure() {
                Some(c) => {
                    eprintln!("verification failed: {} ({})", c.name, c.detail);
                    Ok(1)
                }
                None => Ok(0),
            }
        }
    }
}

fn cycle_of(c: CycleArg) -> Cycle {
    match c {
        CycleArg::Carnot => Cycle::Carnot,
        CycleArg::OttoWidth => Cycle::OttoWidth,
        CycleArg::OttoDeform => Cycle::OttoDeform,
        CycleArg::OttoDissoc => Cycle::OttoDissoc,
    }
}

fn method_of(m: MethodArg) -> Method {
    match m {
        MethodArg::Sum => Method::Sum,
        MethodArg::Closed => Method::Closed,
        MethodArg::Both => Method::Both,
    }
}

fn write_records(records: &[morse_engine::OutputRecord], format: Format, out: Box<dyn Write>) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => write_json(records, out),
    }
}

fn write_spectrum(model: &MorseModel, format: Format, mut out: Box<dyn Write>) -> io::Result<()> {
    let levels = bound_spectrum(model);
    let (x0, v_min) = potential_minimum(model);
    match format {
        Format::Csv => {
            writeln!(out, "n,E_n")?;
            for (n, e) in levels.levels().iter().enumerate() {
                writeln!(out, "{n},{e}")?;
            }
        }
        Format::Json => {
            let doc = json!({
                "D_e": model.d_e(), "alpha": model.alpha(), "q": model.q(),
                "xi": model.xi(), "p": model.p(), "lambda": model.lambda(),
                "n_max": levels.n_max(), "x0": x0, "V_min": v_min,
                "levels": levels.levels(),
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    out.flush()
}

fn result_json(r: &Result<CycleResult, Error>) -> Value {
    let num = |x: f64| if x.is_finite() { json!(x) } else { Value::Null };
    match r {
        Ok(r) => json!({
            "Qh": num(r.q_hot), "Qc": num(r.q_cold), "W": num(r.work),
            "eta": r.efficiency.map(num).unwrap_or(Value::Null),
            "regime": r.regime.as_str(),
            "imag_residue": num(r.diagnostics.imag_residue),
            "trunc_mass": num(r.diagnostics.truncated_mass),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn point(params: &PointParams, cycle: Cycle, format: Format, out: &Option<PathBuf>) -> Result<u8, Failure> {
    let report = run_point(params, cycle);
    let carnot_eta = match cycle {
        Cycle::Carnot => Some(1.0 - params.t_c / params.t_h),
        _ => None,
    };
    let mut w = output(out)?;
    match format {
        Format::Json => {
            let mut doc = json!({
                "cycle": cycle.name(),
                "sum": result_json(&report.sum),
                "closed": result_json(&report.closed),
            });
            if let Some(eta) = carnot_eta {
                doc["eta_carnot"] = json!(eta);
            }
            serde_json::to_writer_pretty(&mut w, &doc).map_err(io::Error::from)?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(w, "cycle: {}", cycle.name())?;
            if let Some(eta) = carnot_eta {
                writeln!(w, "eta_carnot: {eta}")?;
            }
            writeln!(
                w,
                "{:<7} {:>14} {:>14} {:>14} {:>10} {:>12} {:>12} {:>10}",
                "method", "Q_h", "Q_c", "W", "eta", "regime", "imag_resid", "trunc_mass"
            )?;
            for (name, r) in [("sum", &report.sum), ("closed", &report.closed)] {
                match r {
                    Ok(r) => writeln!(
                        w,
                        "{:<7} {:>14.6e} {:>14.6e} {:>14.6e} {:>10} {:>12} {:>12.3e} {:>10.3e}",
                        name,
                        r.q_hot,
                        r.q_cold,
                        r.work,
                        r.efficiency.map(|e| format!("{e:.6}")).unwrap_or_else(|| "undefined".into()),
                        r.regime.as_str(),
                        r.diagnostics.imag_residue,
                        r.diagnostics.truncated_mass
                    )?,
                    Err(e) => writeln!(w, "{name:<7} unavailable: {e}")?,
                }
            }
        }
    }
    w.flush()?;
    // Report the first evaluation failure through the exit code.
    for r in [report.sum, report.closed] {
        if let Err(e) = r {
            return Err(e.into());
        }
    }
    Ok(0)
}
