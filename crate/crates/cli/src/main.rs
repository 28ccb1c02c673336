#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bbshift::check::{all_passed, run_checks, CheckOptions};
use bbshift::energies::{delta_e_asymptotic, rydberg_frequency_shift, DEFAULT_REL_TOL};
use bbshift::model::{reduce, PhysicalInput};
use bbshift::sweep::compute_sweep;
use bbshift::{Error, ShiftModel, ThetaGrid};

const THREADS_ENV: &str = "BBSHIFT_THREADS";

#[derive(Parser)]
#[command(
    name = "bbshift",
    version,
    about = "Blackbody energy and free-energy shifts of a charged oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the shifts over a temperature grid.
    Sweep {
        /// Reduced linewidth γ/ω₀.
        #[arg(long)]
        g: f64,
        /// Grid as min:max:count[:log|lin], in units of ħω₀/k.
        #[arg(long, default_value = "1:1000:31:log")]
        theta: ThetaGrid,
        /// Reduced density 4πNe²/(mω₀²); recorded in the header.
        #[arg(long, default_value_t = 0.0)]
        nu: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also write an SVG plot of |ΔE| and |ΔF|.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Relative quadrature tolerance.
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        tol: f64,
        /// Output file; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the reduced parameters of a physical configuration.
    Convert {
        /// Resonance angular frequency, rad/s.
        #[arg(long)]
        omega0: f64,
        /// Kelvin.
        #[arg(long)]
        temperature: f64,
        /// Oscillator number density, cm⁻³.
        #[arg(long, default_value_t = 0.0)]
        density: f64,
        /// Cavity volume, cm³.
        #[arg(long, default_value_t = 1.0)]
        volume: f64,
        /// Mode cutoff, rad/s. Defaults to 100 ω₀.
        #[arg(long)]
        cutoff: Option<f64>,
    },
    /// Run the acceptance criteria.
    Check {
        /// Skip the slow brute-force oracle.
        #[arg(long)]
        fast: bool,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Temperature shift of a highly excited (nearly free) electron level.
    Rydberg {
        /// Kelvin.
        #[arg(long)]
        temperature: f64,
        /// Also evaluate the full ΔE for an oscillator at this frequency, rad/s.
        #[arg(long)]
        omega0: Option<f64>,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
    Check,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } | Error::NonFinite => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{s}`"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Write through a sibling temp file so a failed run never leaves a torn file.
fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn sweep(
    g: f64,
    grid: ThetaGrid,
    nu: f64,
    format: Format,
    plot: Option<PathBuf>,
    tol: f64,
    output: Option<PathBuf>,
) -> Result<(), Failure> {
    let threads = threads_from_env()?;
    let table = compute_sweep(g, nu, grid, tol, threads)?;
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match output {
        Some(path) => write_atomic(&path, &text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    if let Some(path) = plot {
        write_atomic(&path, &bbshift::svg::render(&table))?;
    }
    Ok(())
}

fn convert(
    omega0: f64,
    temperature: f64,
    density: f64,
    volume: f64,
    cutoff: Option<f64>,
) -> Result<(), Failure> {
    let input = PhysicalInput::electron(temperature, omega0)?;
    if !(volume > 0.0) {
        return Err(Failure::Usage(format!("volume must be > 0, got {volume}")));
    }
    let cutoff = cutoff.unwrap_or(100.0 * omega0);
    if !(cutoff > 0.0) {
        return Err(Failure::Usage(format!("cutoff must be > 0, got {cutoff}")));
    }
    let p = reduce(&input, density, cutoff, volume)?;
    let mut out = io::stdout().lock();
    writeln!(out, "theta      {:.16e}", p.theta)?;
    writeln!(out, "g          {:.16e}", p.g)?;
    writeln!(out, "nu         {:.16e}", p.nu)?;
    writeln!(out, "lambda_cut {:.16e}", p.lambda_cut)?;
    writeln!(out, "v_tilde    {:.16e}", p.v_tilde)?;
    writeln!(out, "NV         {:.16e}", p.particle_count())?;
    Ok(())
}

fn check(fast: bool, fault: Option<String>) -> Result<(), Failure> {
    let reports = run_checks(&CheckOptions { fast, fault });
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    if all_passed(&reports) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn rydberg(temperature: f64, omega0: Option<f64>) -> Result<(), Failure> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Failure::Usage(format!(
            "temperature must be > 0, got {temperature}"
        )));
    }
    let nu_shift = rydberg_frequency_shift(temperature);
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "free-electron level shift   delta_nu = {nu_shift:+.6e} Hz (upward)"
    )?;
    // at high θ, ΔE/ħ = -(π/2) g θ² ω₀, which does not depend on ω₀
    let probe = PhysicalInput::electron(temperature, 1.0)?;
    let asym = delta_e_asymptotic(probe.reduced_temperature(), probe.reduced_linewidth());
    writeln!(
        out,
        "oscillator high-T dE/h     delta_nu = {:+.6e} Hz (opposite sign)",
        asym * probe.omega0 / (2.0 * std::f64::consts::PI)
    )?;
    if let Some(w0) = omega0 {
        let input = PhysicalInput::electron(temperature, w0)?;
        let model = ShiftModel::with_default_tolerance(input.reduced_linewidth())?;
        let de = model.delta_e(input.reduced_temperature())?;
        writeln!(
            out,
            "oscillator dE/h at omega0  delta_nu = {:+.6e} Hz (theta = {:.4e}, g = {:.4e})",
            de * w0 / (2.0 * std::f64::consts::PI),
            input.reduced_temperature(),
            input.reduced_linewidth()
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep {
            g,
            theta,
            nu,
            format,
            plot,
            tol,
            output,
        } => sweep(g, theta, nu, format, plot, tol, output),
        Command::Convert {
            omega0,
            temperature,
            density,
            volume,
            cutoff,
        } => convert(omega0, temperature, density, volume, cutoff),
        Command::Check { fast, inject_fault } => check(fast, inject_fault),
        Command::Rydberg {
            temperature,
            omega0,
        } => rydberg(temperature, omega0),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
