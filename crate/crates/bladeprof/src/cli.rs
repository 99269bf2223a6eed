//! `bladeprof <forward|inverse|geometry|render|check> --spec <file> [--out <path>]`

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use bladeprof_core::{
    anchor_check, integrate_forward, solve_inverse, InverseSpec, Termination,
};
use clap::{Args, Parser, Subcommand};

use crate::checks::run_checks;
use crate::config::{parse_run_spec, ConfigError, Problem, RunSpec};
use crate::csv::{geometry_table, write_csv, CsvData, CsvError};
use crate::svg::{render_svg, BladeShape, RenderError, RenderOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

const GEOMETRY_SAMPLES: usize = 101;

#[derive(Debug, Parser)]
#[command(name = "bladeprof", version, about = "Blade-equation solvers for centrifugal fan blades")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the motion along a given profile
    Forward(RunArgs),
    /// Compute the profile realising a speed law
    Inverse(RunArgs),
    /// Tabulate curvature, tangent angle and arc length of a profile
    Geometry(RunArgs),
    /// Draw a blade or an impeller as SVG
    Render(RunArgs),
    /// Run the built-in invariant suite
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Invalid(bladeprof_core::Error),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Invalid(_) => EXIT_CONFIG,
            RunError::Numeric(_) => EXIT_NUMERIC,
            RunError::Io(_) => EXIT_IO,
        }
    }
}

impl From<bladeprof_core::Error> for RunError {
    fn from(e: bladeprof_core::Error) -> Self {
        use bladeprof_core::Error as E;
        match e {
            E::LawExceedsSpeed { .. }
            | E::StepSizeUnderflow { .. }
            | E::QuadratureNotConverged { .. }
            | E::NonPositiveSpeed { .. }
            | E::NonFinite(_) => RunError::Numeric(e.to_string()),
            other => RunError::Invalid(other),
        }
    }
}

impl From<CsvError> for RunError {
    fn from(e: CsvError) -> Self {
        match e {
            CsvError::Solver(e) => e.into(),
            CsvError::Io { .. } => RunError::Io(e.to_string()),
            other => RunError::Numeric(other.to_string()),
        }
    }
}

impl From<RenderError> for RunError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::Solver(e) => e.into(),
            other => RunError::Numeric(other.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "bladeprof: {e}");
            e.exit_code()
        }
    }
}

fn load(path: &Path, expected: Problem) -> Result<RunSpec, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Io(format!("cannot read {}: {e}", path.display())))?;
    let spec = parse_run_spec(&text)
        .map_err(|e| RunError::Config(ConfigError { message: format!("{}: {}", path.display(), e.message), ..e }))?;
    if spec.problem != expected {
        return Err(RunError::Config(ConfigError {
            line: None,
            message: format!(
                "{}: spec is for problem `{}` but the `{}` command was run",
                path.display(),
                spec.problem.as_str(),
                expected.as_str()
            ),
            detail: None,
        }));
    }
    Ok(spec)
}

fn output_path(cli: Option<PathBuf>, spec: &RunSpec, default: &str) -> PathBuf {
    cli.or_else(|| spec.output.clone()).unwrap_or_else(|| PathBuf::from(default))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), RunError> {
    let line = match command {
        Command::Forward(a) => forward(&load(&a.spec, Problem::Forward)?, a.out)?,
        Command::Inverse(a) => inverse(&load(&a.spec, Problem::Inverse)?, a.out)?,
        Command::Geometry(a) => geometry(&load(&a.spec, Problem::Geometry)?, a.out)?,
        Command::Render(a) => render(&load(&a.spec, Problem::Render)?, a.out)?,
        Command::Check(a) => {
            if let Some(path) = a.spec {
                load(&path, Problem::Check)?;
            }
            return check(out);
        }
    };
    writeln!(out, "{line}").map_err(|e| RunError::Io(e.to_string()))
}

fn forward(spec: &RunSpec, out: Option<PathBuf>) -> Result<String, RunError> {
    let (profile, frame) = (spec.profile.as_ref().expect("validated"), spec.frame.expect("validated"));
    let w0 = spec.solver.w0.expect("validated");
    let tr = integrate_forward(profile, &frame, w0, &spec.solver.integrator)?;
    if tr.termination == Termination::StepLimit {
        return Err(RunError::Numeric(format!(
            "step_limit: {} steps reached before t_end",
            spec.solver.integrator.max_steps
        )));
    }
    let path = output_path(out, spec, "forward.csv");
    write_csv(CsvData::Trajectory(&tr), &path)?;
    Ok(format!(
        "forward: status={} samples={} drift={:e} out={}",
        tr.termination.as_str(),
        tr.samples.len(),
        tr.drift,
        path.display()
    ))
}

fn inverse_spec(spec: &RunSpec) -> Result<InverseSpec, RunError> {
    let law = spec.law.clone().expect("validated");
    let frame = spec.frame.expect("validated");
    let y_end = spec.y_end().expect("frame present");
    Ok(InverseSpec::new(law, frame, y_end, spec.solver.inverse_method))
}

fn inverse(spec: &RunSpec, out: Option<PathBuf>) -> Result<String, RunError> {
    let ispec = inverse_spec(spec)?;
    let sol = solve_inverse(&ispec)?;
    let path = output_path(out, spec, "inverse.csv");
    write_csv(CsvData::Profile(&sol), &path)?;
    Ok(format!(
        "inverse: status={} method={} samples={} C={} residual={:e} out={}",
        sol.status.as_str(),
        ispec.method.as_str(),
        sol.samples.len(),
        sol.c,
        sol.max_residual,
        path.display()
    ))
}

fn geometry(spec: &RunSpec, out: Option<PathBuf>) -> Result<String, RunError> {
    let profile = spec.profile.as_ref().expect("validated");
    let rows = geometry_table(profile, GEOMETRY_SAMPLES, 1e-10)?;
    let anchor = match &spec.frame {
        Some(frame) => {
            let r = anchor_check(profile, frame, 1e-9)?;
            format!(" anchor={}", if r.passed { "pass" } else { "fail" })
        }
        None => String::new(),
    };
    let min_radius = rows
        .iter()
        .filter_map(|r| r.curvature.radius())
        .fold(f64::INFINITY, f64::min);
    let path = output_path(out, spec, "geometry.csv");
    write_csv(CsvData::Geometry(&rows), &path)?;
    Ok(format!(
        "geometry: samples={} arc_length={} min_r_c={}{anchor} out={}",
        rows.len(),
        rows.last().map_or(0.0, |r| r.arc_length),
        min_radius,
        path.display()
    ))
}

fn render(spec: &RunSpec, out: Option<PathBuf>) -> Result<String, RunError> {
    let options = RenderOptions { blades: spec.blades, ..RenderOptions::default() };
    let svg = match &spec.profile {
        Some(p) => render_svg(BladeShape::Profile(p), &options)?,
        None => {
            let sol = solve_inverse(&inverse_spec(spec)?)?;
            render_svg(BladeShape::Solution(&sol), &options)?
        }
    };
    let path = output_path(out, spec, "render.svg");
    std::fs::write(&path, svg).map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(format!("render: blades={} out={}", spec.blades, path.display()))
}

fn check(out: &mut dyn Write) -> Result<(), RunError> {
    let outcomes = run_checks();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let io = |e: std::io::Error| RunError::Io(e.to_string());
    for o in &outcomes {
        writeln!(out, "{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail).map_err(io)?;
    }
    writeln!(out, "check: {passed}/{} passed", outcomes.len()).map_err(io)?;
    if passed == outcomes.len() {
        Ok(())
    } else {
        Err(RunError::Numeric(format!("{} invariant check(s) failed", outcomes.len() - passed)))
    }
}
