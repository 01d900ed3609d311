//! Command-line front end. Subcommands: state, qfim, sweep, check,
//! majorana, compare, solve. All runs are deterministic for a fixed flag
//! set (seed defaults to 0); angles are radians unless --degrees is given.
//!
//! Exit codes: 0 success (including mathematically singular results),
//! 2 usage/validation error, 3 internal numeric failure.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use rotmet::anticoherence;
use rotmet::baselines;
use rotmet::designer;
use rotmet::io::{
    comparison_csv, scan_csv, ConstellationJson, MomentReportJson, QfimReportJson, SpinStateJson,
    SupportSolutionJson,
};
use rotmet::majorana;
use rotmet::polyhedra::{
    self, platonic, truncated_tetrahedron, PlatonicSolid, TruncationAlignment,
};
use rotmet::qfim;
use rotmet::spin::{RotationSpec, SpinState, C64};
use rotmet::Error;

#[derive(Parser)]
#[command(name = "rotmet", version, about = "Rotation-metrology toolkit: QFIM, \
Cramér-Rao bounds, anticoherence certification, Majorana constellations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a state and write it as JSON.
    State(StateArgs),
    /// QFIM report for a state and a rotation parametrization.
    Qfim(QfimArgs),
    /// CSV sweep of det and Tr[I^-1] over an angle grid.
    Sweep(SweepArgs),
    /// Anticoherence moment report.
    Check(CheckArgs),
    /// Convert between a state and its Majorana constellation.
    Majorana(MajoranaArgs),
    /// Compare the multiparameter bound against single-parameter schemes.
    Compare(CompareArgs),
    /// Solve sparse-support probabilities for 2-anticoherent states.
    Solve(SolveArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Amplitudes c_0..c_N as semicolon-separated re,im pairs.
    #[arg(long, conflicts_with_all = ["constellation", "solid", "psi4", "noon"])]
    coeffs: Option<String>,
    /// Renormalize the supplied coefficients.
    #[arg(long, requires = "coeffs")]
    normalize: bool,
    /// Constellation JSON file to convert to a state.
    #[arg(long, conflicts_with_all = ["solid", "psi4", "noon"])]
    constellation: Option<PathBuf>,
    /// Catalog name: tetrahedron, cube, octahedron, icosahedron,
    /// dodecahedron, a dual-<name>, or truncated-tetrahedron[-dual].
    #[arg(long, conflicts_with_all = ["psi4", "noon"])]
    solid: Option<String>,
    /// N for the analytic four-component family (requires --csq).
    #[arg(long, conflicts_with = "noon")]
    psi4: Option<usize>,
    /// Squared modulus c^2 for --psi4.
    #[arg(long, requires = "psi4")]
    csq: Option<f64>,
    /// Phases for the three free components of --psi4, comma separated.
    #[arg(long, requires = "psi4", value_delimiter = ',')]
    phases: Option<Vec<f64>>,
    /// N for a NOON state.
    #[arg(long)]
    noon: Option<usize>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QfimArgs {
    /// SpinState JSON file.
    #[arg(long)]
    state: PathBuf,
    /// Parametrization: zyz, xyz, or axis-angle.
    #[arg(long)]
    param: String,
    /// Three angles, comma separated.
    #[arg(long, value_delimiter = ',')]
    angles: Vec<f64>,
    /// Interpret input angles as degrees.
    #[arg(long)]
    degrees: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    state: PathBuf,
    /// Parametrization: zyz, xyz, or axis-angle.
    #[arg(long)]
    param: String,
    /// Grid per angle: start:stop:count, comma separated (three entries).
    #[arg(long)]
    grid: String,
    #[arg(long)]
    degrees: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    state: PathBuf,
    /// Largest anticoherence order to certify.
    #[arg(long, default_value_t = 2)]
    tmax: usize,
    #[arg(long, default_value_t = anticoherence::DEFAULT_TOL)]
    tol: f64,
    /// Seed for the pseudorandom half of the probe directions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MajoranaArgs {
    /// Conversion direction: to-points or to-state.
    #[arg(long)]
    direction: String,
    /// SpinState JSON file (for to-points).
    #[arg(long, conflicts_with = "points")]
    state: Option<PathBuf>,
    /// Constellation JSON file (for to-state).
    #[arg(long)]
    points: Option<PathBuf>,
    /// Angular merge tolerance for root clustering, radians.
    #[arg(long, default_value_t = 1e-4)]
    merge_tol: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    n: usize,
    /// Misalignment angle of the second NOON copy.
    #[arg(long, default_value_t = 0.0)]
    theta1: f64,
    /// Misalignment angle of the third NOON copy.
    #[arg(long, default_value_t = 0.0)]
    theta2: f64,
    /// Euler angle Theta of the multiparameter bound.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    big_theta: f64,
    #[arg(long)]
    degrees: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    n: usize,
    /// Support indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    support: Vec<usize>,
    /// Phases for lifting (--state-out), comma separated.
    #[arg(long, value_delimiter = ',')]
    phases: Option<Vec<f64>>,
    /// Also write the lifted state JSON here.
    #[arg(long)]
    state_out: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ComplexExpectation { .. }
            | Error::CrossCheck(_)
            | Error::DerivativeResidual { .. }
            | Error::VanishingDerivative { .. }
            | Error::NotARotation { .. }
            | Error::NonHermitian { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn emit(out: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_state(path: &PathBuf) -> CliResult<SpinState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let json: SpinStateJson =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(json.into_state(false)?)
}

fn parse_spec(param: &str, angles: [f64; 3]) -> CliResult<RotationSpec> {
    let spec = match param {
        "zyz" => RotationSpec::EulerZyz {
            phi: angles[0],
            theta: angles[1],
            psi: angles[2],
        },
        "xyz" => RotationSpec::EulerXyz {
            alpha: angles[0],
            beta: angles[1],
            gamma: angles[2],
        },
        "axis-angle" => RotationSpec::AxisAngle {
            chi: angles[0],
            theta: angles[1],
            phi: angles[2],
        },
        other => return usage(format!("unknown parametrization '{other}'")),
    };
    spec.validate()?;
    Ok(spec)
}

fn to_radians(degrees: bool, a: f64) -> f64 {
    if degrees {
        a.to_radians()
    } else {
        a
    }
}

fn parse_coeffs(text: &str) -> CliResult<Vec<C64>> {
    text.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            let bad = || CliError::Usage(format!("bad coefficient '{pair}', expected re,im"));
            if parts.len() != 2 {
                return Err(bad());
            }
            let re: f64 = parts[0].parse().map_err(|_| bad())?;
            let im: f64 = parts[1].parse().map_err(|_| bad())?;
            Ok(C64::new(re, im))
        })
        .collect()
}

fn solid_state(name: &str) -> CliResult<SpinState> {
    let constellation = match name {
        "truncated-tetrahedron" => truncated_tetrahedron(TruncationAlignment::Tetrahedron),
        "truncated-tetrahedron-dual" => truncated_tetrahedron(TruncationAlignment::Dual),
        dual if dual.starts_with("dual-") => {
            polyhedra::dual(dual.trim_start_matches("dual-").parse::<PlatonicSolid>()?)
        }
        plain => platonic(plain.parse::<PlatonicSolid>()?),
    };
    Ok(majorana::constellation_to_state(&constellation)?)
}

fn cmd_state(args: StateArgs) -> CliResult<()> {
    let state = if let Some(coeffs) = &args.coeffs {
        SpinState::new(
            parse_coeffs(coeffs)?.len().saturating_sub(1),
            parse_coeffs(coeffs)?,
            args.normalize,
        )?
    } else if let Some(path) = &args.constellation {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let json: ConstellationJson =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
        majorana::constellation_to_state(&json.into_constellation()?)?
    } else if let Some(name) = &args.solid {
        solid_state(name)?
    } else if let Some(n) = args.psi4 {
        let csq = args
            .csq
            .ok_or_else(|| CliError::Usage("--psi4 requires --csq".into()))?;
        let phases = match args.phases {
            None => [0.0; 3],
            Some(v) if v.len() == 3 => [v[0], v[1], v[2]],
            Some(v) => return usage(format!("--phases needs 3 values, got {}", v.len())),
        };
        designer::psi4_family(n, csq, phases)?
    } else if let Some(n) = args.noon {
        baselines::noon_state(n)?
    } else {
        return usage("choose one of --coeffs, --constellation, --solid, --psi4, --noon");
    };

    let report = anticoherence::anticoherence_order(&state, 2, anticoherence::DEFAULT_TOL)?;
    let json = serde_json::to_string_pretty(&SpinStateJson::from_state(&state))
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    emit(&args.out, &format!("{json}\n"))?;
    eprintln!(
        "N = {}, norm = 1, anticoherence order >= {} (cap {})",
        state.n_quanta(),
        report.order,
        report.cap
    );
    Ok(())
}

fn cmd_qfim(args: QfimArgs) -> CliResult<()> {
    if args.angles.len() != 3 {
        return usage(format!("--angles needs 3 values, got {}", args.angles.len()));
    }
    let state = read_state(&args.state)?;
    let angles = [
        to_radians(args.degrees, args.angles[0]),
        to_radians(args.degrees, args.angles[1]),
        to_radians(args.degrees, args.angles[2]),
    ];
    let spec = parse_spec(&args.param, angles)?;
    let report = qfim::qfim(&state, &spec)?;
    let full = match qfim::crb(&report) {
        Ok(full) => full,
        Err(Error::Singular { .. }) => report, // singular is a result, not a failure
        Err(e) => return Err(e.into()),
    };
    let json = serde_json::to_string_pretty(&QfimReportJson::from_report(&full))
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    emit(&args.out, &format!("{json}\n"))
}

fn parse_grid(text: &str, degrees: bool) -> CliResult<qfim::ScanGrid> {
    let axes: Vec<&str> = text.split(',').collect();
    if axes.len() != 3 {
        return usage("grid needs three start:stop:count entries");
    }
    let mut grid = qfim::ScanGrid {
        start: [0.0; 3],
        stop: [0.0; 3],
        counts: [0; 3],
    };
    for (k, axis) in axes.iter().enumerate() {
        let parts: Vec<&str> = axis.split(':').collect();
        let bad = || CliError::Usage(format!("bad grid entry '{axis}', expected start:stop:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        grid.start[k] = to_radians(degrees, parts[0].parse().map_err(|_| bad())?);
        grid.stop[k] = to_radians(degrees, parts[1].parse().map_err(|_| bad())?);
        grid.counts[k] = parts[2].parse().map_err(|_| bad())?;
    }
    Ok(grid)
}

fn cmd_sweep(args: SweepArgs) -> CliResult<()> {
    let state = read_state(&args.state)?;
    let kind = parse_spec(&args.param, [0.0; 3])?;
    let grid = parse_grid(&args.grid, args.degrees)?;
    let rows = qfim::singularity_scan(&state, &kind, &grid)?;
    emit(&args.out, &scan_csv(&rows))
}

fn cmd_check(args: CheckArgs) -> CliResult<()> {
    let state = read_state(&args.state)?;
    let report =
        anticoherence::anticoherence_order_seeded(&state, args.tmax, args.tol, args.seed)?;
    let json = serde_json::to_string_pretty(&MomentReportJson::from_report(&report))
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    emit(&args.out, &format!("{json}\n"))
}

fn cmd_majorana(args: MajoranaArgs) -> CliResult<()> {
    match args.direction.as_str() {
        "to-points" => {
            let path = args
                .state
                .as_ref()
                .ok_or_else(|| CliError::Usage("to-points needs --state".into()))?;
            let state = read_state(path)?;
            let con = majorana::state_to_constellation(&state, args.merge_tol)?;
            let json = serde_json::to_string_pretty(&ConstellationJson::from_constellation(&con))
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            emit(&args.out, &format!("{json}\n"))
        }
        "to-state" => {
            let path = args
                .points
                .as_ref()
                .ok_or_else(|| CliError::Usage("to-state needs --points".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let json: ConstellationJson =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            let state = majorana::constellation_to_state(&json.into_constellation()?)?;
            let json = serde_json::to_string_pretty(&SpinStateJson::from_state(&state))
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            emit(&args.out, &format!("{json}\n"))
        }
        other => usage(format!("unknown direction '{other}'")),
    }
}

fn cmd_compare(args: CompareArgs) -> CliResult<()> {
    let rows = baselines::comparison_rows(
        args.n,
        to_radians(args.degrees, args.theta1),
        to_radians(args.degrees, args.theta2),
        to_radians(args.degrees, args.big_theta),
    )?;
    emit(&args.out, &comparison_csv(&rows))
}

fn cmd_solve(args: SolveArgs) -> CliResult<()> {
    let mut sol = designer::solve_support(args.n, &args.support)?;
    if let Some(phases) = &args.phases {
        if phases.len() != sol.support.len() {
            return usage(format!(
                "--phases needs {} values, got {}",
                sol.support.len(),
                phases.len()
            ));
        }
        sol.phases = phases.clone();
    }
    let json = serde_json::to_string_pretty(&SupportSolutionJson::from_solution(&sol))
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    emit(&args.out, &format!("{json}\n"))?;
    if let Some(path) = &args.state_out {
        let state = designer::state_from_solution(&sol)?;
        let json = serde_json::to_string_pretty(&SpinStateJson::from_state(&state))
            .map_err(|e| CliError::Numeric(e.to_string()))?;
        emit(&Some(path.clone()), &format!("{json}\n"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::State(args) => cmd_state(args),
        Command::Qfim(args) => cmd_qfim(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Check(args) => cmd_check(args),
        Command::Majorana(args) => cmd_majorana(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Solve(args) => cmd_solve(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(3)
        }
    }
}
