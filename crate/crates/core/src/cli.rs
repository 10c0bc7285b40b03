//! Command-line front end. [`run`] holds all the logic so it can be driven
//! from tests; the `igates` binary only forwards its arguments.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    assert_single_control, decompose_intrinsic, equiv_up_to_free_phase, reduced_gate_vector,
    solve_dynamics, solve_parity_gate, BondTargets, GateSpec, PhaseVector, TimeLattice,
};
use crate::apps::{self, MeasureBasis, Transcript};
use crate::basis::bitstring;
use crate::calib::{
    assignment_vectors, kspace_path, solve_intervals, verify_schedule, weave_dd, write_path_csv,
    CalibrationTarget, IntervalOptions, PulseSchedule, DEFAULT_PULSE_BUDGET,
};
use crate::error::{Error, Result};
use crate::model::DotArray;
use crate::sim::{exchange_sweep, log_grid, simulate, write_sweep_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "igates",
    version,
    about = "Intrinsic phase gates on exchange-coupled spin-qubit arrays"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Phase tolerance in radians.
    #[arg(long, global = true, env = "IGATES_TOL", default_value_t = 1e-9)]
    pub tol: f64,

    /// Directory for written artifacts.
    #[arg(long, global = true, env = "IGATES_OUT", default_value = ".")]
    pub out: PathBuf,

    #[arg(long, global = true, env = "IGATES_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, env = "IGATES_JOBS", default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parity-rule feasibility of a gate.
    Check {
        #[arg(long, env = "IGATES_GATE")]
        gate: PathBuf,
        /// Takes the register size from this array instead of the gate.
        #[arg(long, env = "IGATES_ARRAY")]
        array: Option<PathBuf>,
    },
    /// Bond phases, gate times and the intrinsic decomposition.
    Solve {
        #[arg(long, env = "IGATES_ARRAY")]
        array: PathBuf,
        #[arg(long, env = "IGATES_GATE")]
        gate: PathBuf,
        /// Longest gate time scanned.
        #[arg(long, env = "IGATES_TAU_MAX", default_value_t = 1e4)]
        tau_max: f64,
    },
    /// Exact evolution against the first-order gate.
    Simulate {
        #[arg(long, env = "IGATES_ARRAY")]
        array: PathBuf,
        /// Gate whose first exact time is used when `--tau` is absent.
        #[arg(long, env = "IGATES_GATE")]
        gate: Option<PathBuf>,
        #[arg(long, env = "IGATES_TAU")]
        tau: Option<f64>,
        #[arg(long, env = "IGATES_TAU_MAX", default_value_t = 1e4)]
        tau_max: f64,
        /// `max J / min eps` sweep as `lo:hi:steps` on a log grid.
        #[arg(long, env = "IGATES_SWEEP")]
        sweep: Option<Sweep>,
    },
    /// Pulse schedule for an inhomogeneous array.
    Calibrate {
        #[arg(long, env = "IGATES_ARRAY")]
        array: PathBuf,
        #[arg(long, env = "IGATES_GATE")]
        gate: PathBuf,
        /// Make the decoupled schedule the primary output.
        #[arg(long, env = "IGATES_DD")]
        dd: bool,
        #[arg(long, env = "IGATES_OFFSET_BOUND", default_value_t = 8)]
        offset_bound: i64,
        /// Pulses allowed per qubit after decoupling.
        #[arg(long, env = "IGATES_BUDGET", default_value_t = DEFAULT_PULSE_BUDGET)]
        budget: usize,
        /// Tolerance of the exact pulsed check.
        #[arg(long, env = "IGATES_VERIFY_TOL", default_value_t = 1e-2)]
        verify_tol: f64,
    },
    /// Application circuits and matrices.
    Apps {
        #[arg(value_enum)]
        which: App,
        /// Targets for a parity check, qubits for a reversal.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Basis::Z)]
        basis: Basis,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum App {
    Logicalz,
    Paritycheck,
    Surface,
    Reversal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Z,
    X,
}

/// Log-spaced grid `lo:hi:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts[..] else {
            return Err(format!("expected lo:hi:steps, got {s:?}"));
        };
        let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
        let steps: usize = steps.parse().map_err(|e| format!("steps: {e}"))?;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) || steps == 0 {
            return Err(format!("need 0 < lo <= hi and steps >= 1, got {s:?}"));
        }
        Ok(Sweep { lo, hi, steps })
    }
}

/// Parses `args` (program name first) and executes the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Error::InvalidGate(format!(
            "tolerance must be positive, got {}",
            cli.tol
        )));
    }
    match &cli.command {
        Command::Check { gate, array } => cmd_check(cli, gate, array.as_deref(), stdout),
        Command::Solve {
            array,
            gate,
            tau_max,
        } => cmd_solve(cli, array, gate, *tau_max, stdout),
        Command::Simulate {
            array,
            gate,
            tau,
            tau_max,
            sweep,
        } => cmd_simulate(cli, array, gate.as_deref(), *tau, *tau_max, *sweep, stdout),
        Command::Calibrate {
            array,
            gate,
            dd,
            offset_bound,
            budget,
            verify_tol,
        } => cmd_calibrate(
            cli,
            array,
            gate,
            *dd,
            *offset_bound,
            *budget,
            *verify_tol,
            stdout,
        ),
        Command::Apps {
            which,
            n,
            basis,
            trials,
        } => cmd_apps(cli, *which, *n, *basis, *trials, stdout),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn load_array(path: &Path) -> Result<DotArray> {
    DotArray::from_json(&read(path)?).map_err(|e| located(path, e))
}

fn load_gate(path: &Path, n_qubits: Option<usize>) -> Result<PhaseVector> {
    let spec = GateSpec::from_json(&read(path)?).map_err(|e| located(path, e))?;
    let n = match n_qubits {
        Some(n) => n,
        None => spec.min_qubits()?,
    };
    spec.phase_vector(n)
}

fn located(path: &Path, e: Error) -> Error {
    match e {
        Error::Json(j) => Error::InvalidGate(format!("{}: {j}", path.display())),
        other => other,
    }
}

fn emit(stdout: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(stdout, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn write_json<T: Serialize + ?Sized>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(path)
}

fn cmd_check(cli: &Cli, gate: &Path, array: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let n = match array {
        Some(p) => Some(load_array(p)?.n_qubits()),
        None => None,
    };
    let g = load_gate(gate, n)?;
    let parity = solve_parity_gate(&g, cli.tol)?;
    let control = assert_single_control(&reduced_gate_vector(&g), g.n_qubits(), cli.tol);
    let verdict = if parity.feasible {
        "feasible"
    } else {
        "infeasible by parity"
    };
    emit(
        stdout,
        &json!({
            "verdict": verdict,
            "n_qubits": g.n_qubits(),
            "parity": parity,
            "control": control,
        }),
    )?;
    Ok(if parity.feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    })
}

fn cmd_solve(
    cli: &Cli,
    array: &Path,
    gate: &Path,
    tau_max: f64,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let a = load_array(array)?;
    let g = load_gate(gate, Some(a.n_qubits()))?;
    let parity = solve_parity_gate(&g, cli.tol)?;
    if !parity.feasible {
        emit(
            stdout,
            &json!({ "verdict": "infeasible by parity", "parity": parity }),
        )?;
        return Ok(EXIT_INFEASIBLE);
    }
    let targets = BondTargets::from_gate(&a, &g, cli.tol)?;
    let dynamics = solve_dynamics(&a, &targets, tau_max, cli.tol)?;
    let tau = dynamics.first_exact(TimeLattice::HalfTurn, cli.tol);
    let decomposition = tau.map(|t| decompose_intrinsic(&a, t)).transpose()?;
    emit(
        stdout,
        &json!({
            "verdict": if tau.is_some() { "feasible" } else { "no gate time within tau_max" },
            "parity": parity,
            "bond_phases": targets.phases,
            "tau": tau,
            "dynamics": dynamics,
            "decomposition": decomposition,
        }),
    )?;
    Ok(if tau.is_some() {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    })
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(pool.install(f))
}

fn cmd_simulate(
    cli: &Cli,
    array: &Path,
    gate: Option<&Path>,
    tau: Option<f64>,
    tau_max: f64,
    sweep: Option<Sweep>,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let a = load_array(array)?;
    if a.n_qubits() > 12 {
        return Err(Error::InvalidArray(format!(
            "{} qubits exceeds the simulator limit of 12",
            a.n_qubits()
        )));
    }
    let g = gate.map(|p| load_gate(p, Some(a.n_qubits()))).transpose()?;
    let tau = match (tau, &g) {
        (Some(t), _) if t >= 0.0 && t.is_finite() => t,
        (Some(t), _) => {
            return Err(Error::InvalidSchedule(format!(
                "gate time {t} must be finite and >= 0"
            )))
        }
        (None, Some(g)) => {
            let targets = BondTargets::from_gate(&a, g, cli.tol)?;
            match solve_dynamics(&a, &targets, tau_max, cli.tol)?
                .first_exact(TimeLattice::HalfTurn, cli.tol)
            {
                Some(t) => t,
                None => {
                    emit(stdout, &json!({ "verdict": "no gate time within tau_max" }))?;
                    return Ok(EXIT_INFEASIBLE);
                }
            }
        }
        (None, None) => {
            return Err(Error::InvalidSchedule(
                "simulate needs --tau or --gate".into(),
            ))
        }
    };
    let report = simulate(&a, tau)?;
    let report_path = write_json(&cli.out, "simulate.json", &report)?;
    let gate_check = g
        .as_ref()
        .map(|g| {
            equiv_up_to_free_phase(
                &PhaseVector::from_diagonal(&report.u_exact),
                g,
                cli.tol.max(1e-2),
            )
        })
        .transpose()?;
    let sweep_path = match sweep {
        Some(s) => {
            let rows = with_jobs(cli.jobs, || {
                exchange_sweep(&a, tau, &log_grid(s.lo, s.hi, s.steps))
            })??;
            let path = cli.out.join("sweep.csv");
            write_sweep_csv(&rows, fs::File::create(&path)?)?;
            Some(path)
        }
        None => None,
    };
    emit(
        stdout,
        &json!({
            "tau": tau,
            "fidelity": report.fidelity,
            "bound": report.bound,
            "max_residue": report.max_residue(),
            "max_post_residue": report.max_post_residue(),
            "leak": report.leak,
            "gate_check": gate_check,
            "report": report_path,
            "sweep": sweep_path,
        }),
    )?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_calibrate(
    cli: &Cli,
    array: &Path,
    gate: &Path,
    dd: bool,
    offset_bound: i64,
    budget: usize,
    verify_tol: f64,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let a = load_array(array)?;
    let g = load_gate(gate, Some(a.n_qubits()))?;
    let parity = solve_parity_gate(&g, cli.tol)?;
    if !parity.feasible {
        emit(
            stdout,
            &json!({ "verdict": "infeasible by parity", "parity": parity }),
        )?;
        return Ok(EXIT_INFEASIBLE);
    }
    let target = CalibrationTarget::new(&a, &BondTargets::from_gate(&a, &g, cli.tol)?)?;
    let frames: Vec<_> = assignment_vectors(&a)?
        .patterns
        .into_iter()
        .map(|p| p.frame)
        .collect();
    let opts = IntervalOptions {
        offset_bound,
        ..IntervalOptions::default()
    };
    let solution = match solve_intervals(&target, &frames, &opts) {
        Ok(s) => s,
        Err(Error::Infeasible { best_residual }) => {
            emit(
                stdout,
                &json!({ "verdict": "no schedule", "best_residual": best_residual }),
            )?;
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e),
    };
    let woven = weave_dd(&solution.schedule, budget)?;
    let plain_check = verify_schedule(&a, &solution.schedule, &g, verify_tol)?;
    let dd_check = verify_schedule(&a, &woven, &g, verify_tol)?;
    let primary: &PulseSchedule = if dd { &woven } else { &solution.schedule };

    fs::create_dir_all(&cli.out)?;
    fs::write(cli.out.join("schedule.json"), primary.to_json() + "\n")?;
    fs::write(
        cli.out.join("schedule_plain.json"),
        solution.schedule.to_json() + "\n",
    )?;
    fs::write(cli.out.join("schedule_dd.json"), woven.to_json() + "\n")?;
    write_path_csv(
        &kspace_path(primary, &target)?,
        fs::File::create(cli.out.join("kspace.csv"))?,
    )?;
    let record = json!({
        "durations": solution.durations,
        "offsets": solution.offsets,
        "total_time": solution.total_time,
        "phase_residual": solution.residual,
        "plain": plain_check,
        "dd": dd_check,
    });
    write_json(&cli.out, "verification.json", &record)?;
    let ok = plain_check.target.equivalent && dd_check.target.equivalent;
    emit(
        stdout,
        &json!({
            "verdict": if ok { "verified" } else { "schedule found, exact check above tolerance" },
            "total_time": solution.total_time,
            "stages": primary.stages().len(),
            "plain_residual": plain_check.target.residual,
            "dd_residual": dd_check.target.residual,
            "out": cli.out,
        }),
    )?;
    Ok(if ok { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn signed_rows(m: &DMatrix<Complex64>) -> Vec<Vec<i8>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)].re.round() as i8).collect())
        .collect()
}

fn cmd_apps(
    cli: &Cli,
    which: App,
    n: usize,
    basis: Basis,
    trials: usize,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let basis = match basis {
        Basis::Z => MeasureBasis::Z,
        Basis::X => MeasureBasis::X,
    };
    let (name, value) = match which {
        App::Logicalz => {
            let g = apps::logical_z_triangle();
            let signs: Vec<i8> = g
                .to_unitary_diagonal()
                .iter()
                .map(|z| z.re.round() as i8)
                .collect();
            let anticommutes = (0..8).all(|i| signs[i] == -signs[7 - i]);
            (
                "logicalz.json",
                json!({ "phases": g, "diagonal": signs, "anticommutes_with_xxx": anticommutes }),
            )
        }
        App::Paritycheck => {
            let pc = apps::parity_check(n, basis)?;
            let mut transcripts = Vec::new();
            for _ in 0..trials {
                let data = apps::random_state(n, &mut rng);
                let input = pc.prepare(&data);
                let (out, outcomes) = pc.circuit.run(&input, &mut rng)?;
                transcripts.push(Transcript {
                    circuit: pc.circuit.clone(),
                    seed: cli.seed,
                    input: input.iter().copied().collect(),
                    outcomes,
                    output: out.iter().copied().collect(),
                });
            }
            let report = pc.verify(trials, &mut rng)?;
            (
                "paritycheck.json",
                json!({ "report": report, "transcripts": transcripts }),
            )
        }
        App::Surface => {
            let unit = apps::surface_code_cycle_unit();
            let data = apps::random_state(2, &mut rng);
            let first = unit.cycle(&data, &mut rng)?;
            let second = unit.cycle(&first.data, &mut rng)?;
            (
                "surface.json",
                json!({
                    "circuit": unit.circuit,
                    "outcomes": [[first.z_outcome, first.x_outcome], [second.z_outcome, second.x_outcome]],
                    "repeatable": (first.z_outcome, first.x_outcome) == (second.z_outcome, second.x_outcome),
                }),
            )
        }
        App::Reversal => {
            let r = apps::order_reversal(n)?;
            let signs = apps::reversal_signs(&r, n, 1e-9).ok_or_else(|| {
                Error::InvalidGate("reversal matrix is not a signed permutation".into())
            })?;
            let rule: Vec<i8> = (0..signs.len())
                .map(|a| apps::consecutive_ones_parity(&bitstring(a, n)))
                .collect::<Result<_>>()?;
            (
                "reversal.json",
                json!({
                    "n_qubits": n,
                    "matrix": signed_rows(&r),
                    "signs": signs,
                    "rule_matches": signs == rule,
                }),
            )
        }
    };
    let path = write_json(&cli.out, name, &value)?;
    emit(
        stdout,
        &json!({ "app": name.trim_end_matches(".json"), "out": path }),
    )?;
    Ok(EXIT_OK)
}
