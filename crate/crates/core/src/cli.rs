//! Command-line front end.
//!
//! Exit status: 0 when every record passes (flagged records allowed), 1 when
//! at least one record fails, 2 for usage and configuration errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::Error;
use crate::evolution::{hamiltonian, OscillatorSpectrum};
use crate::gdo::{build_ladder_operators, cycle_operator_power, DeformationProfile, Eta};
use crate::json::Json;
use crate::numerics::{equal_up_to_global_phase, OperatorMatrix, StateVector, C64};
use crate::phase::{
    build_phase_frame, commutator, commutator_closed_form, commutator_rhs_printed,
    hermitian_phase_operator, number_operator, number_shift_operator, unitary_phase_operator,
    Exponent, SpaceConfig,
};
use crate::report::{Format, ProfileSource, RunManifest, Suite, TOOL_VERSION};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pbphase", version, about = "Finite-dimensional phase operators and cyclic evolution checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evolve a state through whole cycles.
    Evolve {
        #[command(flatten)]
        run: RunArgs,
        /// Input state file ({"dim": n, "amp": [[re, im], ...]}).
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Number of cycles (hamiltonian) or shift applications (shift).
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Write an operator or frame as JSON.
    Dump {
        #[arg(value_enum)]
        object: DumpObject,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Hilbert space dimension s + 1.
    #[arg(long)]
    dim: Option<usize>,
    /// Phase window origin θ₀ (radians).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta0: f64,
    /// Number offset η.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    eta: f64,
    /// Oscillator angular frequency.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega: f64,
    /// Deformation profile: "linear" or a path to a JSON array of reals.
    #[arg(long, default_value = "linear")]
    profile: String,
    /// Suite to run (repeatable): pb-core, gdo, evolution, cross-module, all.
    #[arg(long = "suite", default_value = "all")]
    suites: Vec<String>,
    /// Seed for randomized state sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Hamiltonian,
    Shift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DumpObject {
    PhaseStates,
    Phi,
    ExpIphi,
    #[value(name = "qN")]
    QN,
    #[value(name = "A")]
    A,
    #[value(name = "Adag")]
    Adag,
    #[value(name = "H")]
    H,
    Commutators,
}

impl DumpObject {
    fn name(self) -> &'static str {
        match self {
            DumpObject::PhaseStates => "phase-states",
            DumpObject::Phi => "phi",
            DumpObject::ExpIphi => "exp-iphi",
            DumpObject::QN => "qN",
            DumpObject::A => "A",
            DumpObject::Adag => "Adag",
            DumpObject::H => "H",
            DumpObject::Commutators => "commutators",
        }
    }
}

/// A usage or configuration problem (exit status 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

impl RunArgs {
    fn manifest(&self, fallback_dim: Option<usize>) -> Result<RunManifest, UsageError> {
        let dim = self
            .dim
            .or(fallback_dim)
            .ok_or_else(|| UsageError("--dim is required".into()))?;
        if dim == 0 {
            return Err(UsageError("--dim must be at least 1".into()));
        }
        for (name, v) in [("theta0", self.theta0), ("eta", self.eta), ("omega", self.omega)] {
            if !v.is_finite() {
                return Err(UsageError(format!("--{name} must be finite")));
            }
        }
        if self.omega <= 0.0 {
            return Err(UsageError("--omega must be positive".into()));
        }
        let mut suites = Vec::new();
        for name in self.suites.iter().flat_map(|s| s.split(',')) {
            let name = name.trim();
            if name == "all" {
                suites.extend(Suite::ALL);
            } else {
                suites.push(
                    Suite::parse(name).ok_or_else(|| UsageError(format!("unknown suite '{name}'")))?,
                );
            }
        }
        suites.sort();
        suites.dedup();
        if suites.is_empty() {
            return Err(UsageError("at least one suite is required".into()));
        }
        let profile = if self.profile == "linear" {
            ProfileSource::Linear
        } else {
            ProfileSource::File(PathBuf::from(&self.profile))
        };
        Ok(RunManifest {
            dim,
            theta0: self.theta0,
            eta: self.eta,
            omega: self.omega,
            profile,
            suites,
            seed: self.seed,
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
                FormatArg::Pretty => Format::Pretty,
            },
        })
    }
}

/// Loads the manifest's deformation profile.
pub fn resolve_profile(manifest: &RunManifest) -> Result<DeformationProfile, UsageError> {
    let config = SpaceConfig::new(manifest.dim, manifest.theta0)?;
    let eta = Eta::new(manifest.eta)?;
    match &manifest.profile {
        ProfileSource::Linear => Ok(DeformationProfile::linear(&config, eta)?),
        ProfileSource::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read profile {}: {e}", path.display())))?;
            Ok(DeformationProfile::from_json(&config, &text)?)
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), UsageError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| UsageError(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Runs the verify command and returns the rendered report and exit status.
pub fn cmd_verify(manifest: &RunManifest) -> Result<(String, i32), UsageError> {
    let needs_profile = manifest
        .suites
        .iter()
        .any(|s| matches!(s, Suite::Gdo | Suite::CrossModule));
    let profile = if needs_profile {
        Some(resolve_profile(manifest)?)
    } else {
        None
    };
    let report = verify::run(manifest, profile)?;
    let status = if report.has_failures() { EXIT_FAIL } else { EXIT_OK };
    Ok((report.render(manifest.format), status))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dim: usize,
    amp: Vec<[f64; 2]>,
}

/// Parses the state file format `{"dim": n, "amp": [[re, im], ...]}`.
pub fn parse_state(text: &str) -> Result<StateVector, Error> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidState(e.to_string()))?;
    if file.dim != file.amp.len() {
        return Err(Error::InvalidState(format!(
            "dim is {} but {} amplitudes were given",
            file.dim,
            file.amp.len()
        )));
    }
    StateVector::new(file.amp.iter().map(|[re, im]| C64::new(*re, *im)).collect())
        .map_err(|e| Error::InvalidState(e.to_string()))
}

pub fn state_json(v: &StateVector) -> Json {
    Json::obj([("dim", Json::Int(v.dim() as i64)), ("amp", Json::state(v))])
}

/// Result of an evolve run.
#[derive(Debug, Clone)]
pub struct EvolveOutput {
    pub state: StateVector,
    pub global_phase: Option<f64>,
    pub normalized_input: bool,
    pub json: Json,
}

pub fn cmd_evolve(
    manifest: &RunManifest,
    input: &StateVector,
    mode: Mode,
    steps: usize,
) -> Result<EvolveOutput, UsageError> {
    if input.dim() != manifest.dim {
        return Err(UsageError(format!(
            "state has dimension {} but --dim is {}",
            input.dim(),
            manifest.dim
        )));
    }
    let config = SpaceConfig::new(manifest.dim, manifest.theta0)?;
    let tol = config.tolerances();
    let normalized_input = !input.is_normalized(&tol);
    let psi = if normalized_input {
        input.normalized()?
    } else {
        input.clone()
    };
    let op: OperatorMatrix = match mode {
        Mode::Hamiltonian => {
            let spectrum = OscillatorSpectrum::new(&config, manifest.omega)?;
            spectrum.propagator(spectrum.period()).pow(steps)
        }
        Mode::Shift => cycle_operator_power(&config, Eta::new(manifest.eta)?, steps),
    };
    let state = op.apply(&psi)?;
    let cmp = equal_up_to_global_phase(&psi, &state, tol.tol_op)?;
    let note = normalized_input.then(|| {
        format!("input norm {} was normalized before evolution", input.norm())
    });
    let json = Json::obj([
        ("dim", Json::Int(state.dim() as i64)),
        ("amp", Json::state(&state)),
        (
            "mode",
            Json::str(match mode {
                Mode::Hamiltonian => "hamiltonian",
                Mode::Shift => "shift",
            }),
        ),
        ("steps", Json::Int(steps as i64)),
        ("global_phase", cmp.phase.map_or(Json::Null, Json::Num)),
        ("normalized_input", Json::Bool(normalized_input)),
        ("note", note.map_or(Json::Null, Json::Str)),
    ]);
    Ok(EvolveOutput {
        state,
        global_phase: cmp.phase,
        normalized_input,
        json,
    })
}

fn operator_doc(object: DumpObject, manifest: &RunManifest, m: &OperatorMatrix) -> Json {
    Json::obj([
        ("object", Json::str(object.name())),
        ("dim", Json::Int(manifest.dim as i64)),
        ("theta0", Json::Num(manifest.theta0)),
        ("eta", Json::Num(manifest.eta)),
        ("omega", Json::Num(manifest.omega)),
        (
            "tags",
            Json::Arr(m.tags().into_iter().map(|t| Json::str(t.as_str())).collect()),
        ),
        ("matrix", Json::matrix(m)),
    ])
}

fn abs_diff_rows(a: &OperatorMatrix, b: &OperatorMatrix) -> Vec<Vec<f64>> {
    let d = a.dim();
    (0..d)
        .map(|r| (0..d).map(|c| (a.get(r, c) - b.get(r, c)).norm()).collect())
        .collect()
}

/// Builds the JSON document for a dump request. `qN` is the undeformed
/// `q^{-N}`; `A` and `Adag` use the manifest's η and profile.
pub fn cmd_dump(manifest: &RunManifest, object: DumpObject) -> Result<Json, UsageError> {
    let config = SpaceConfig::new(manifest.dim, manifest.theta0)?;
    let doc = match object {
        DumpObject::PhaseStates => {
            let frame = build_phase_frame(&config);
            Json::obj([
                ("object", Json::str(object.name())),
                ("dim", Json::Int(manifest.dim as i64)),
                ("theta0", Json::Num(manifest.theta0)),
                (
                    "angles",
                    Json::Arr((0..config.dim()).map(|m| Json::Num(config.theta(m))).collect()),
                ),
                (
                    "states",
                    Json::Arr(frame.states().iter().map(Json::state).collect()),
                ),
            ])
        }
        DumpObject::Phi => operator_doc(object, manifest, &hermitian_phase_operator(&config)),
        DumpObject::ExpIphi => operator_doc(object, manifest, &unitary_phase_operator(&config)),
        DumpObject::QN => operator_doc(
            object,
            manifest,
            &number_shift_operator(&config, Exponent::Negative),
        ),
        DumpObject::A | DumpObject::Adag => {
            let profile = resolve_profile(manifest)?;
            let ops = build_ladder_operators(&config, Eta::new(manifest.eta)?, &profile)?;
            let m = if object == DumpObject::A { ops.a } else { ops.adag };
            operator_doc(object, manifest, &m)
        }
        DumpObject::H => operator_doc(object, manifest, &hamiltonian(&config, manifest.omega)?),
        DumpObject::Commutators => {
            let direct = commutator(&hermitian_phase_operator(&config), &number_operator(&config))?;
            let closed = commutator_closed_form(&config);
            let printed = commutator_rhs_printed(&config);
            Json::obj([
                ("object", Json::str(object.name())),
                ("dim", Json::Int(manifest.dim as i64)),
                ("theta0", Json::Num(manifest.theta0)),
                ("direct", Json::matrix(&direct)),
                ("closed_form", Json::matrix(&closed)),
                ("printed", Json::matrix(&printed)),
                (
                    "deviation_direct_vs_closed",
                    Json::real_matrix(abs_diff_rows(&direct, &closed)),
                ),
                (
                    "deviation_printed_vs_closed",
                    Json::real_matrix(abs_diff_rows(&printed, &closed)),
                ),
            ])
        }
    };
    Ok(doc)
}

fn dispatch(cli: Cli) -> Result<i32, UsageError> {
    match cli.command {
        Command::Verify { run } => {
            let manifest = run.manifest(None)?;
            let (text, status) = cmd_verify(&manifest)?;
            write_output(run.out.as_deref(), &text)?;
            Ok(status)
        }
        Command::Evolve {
            run,
            state,
            mode,
            steps,
        } => {
            let text = fs::read_to_string(&state)
                .map_err(|e| UsageError(format!("cannot read state {}: {e}", state.display())))?;
            let input = parse_state(&text)?;
            let manifest = run.manifest(Some(input.dim()))?;
            let out = cmd_evolve(&manifest, &input, mode, steps)?;
            if out.normalized_input {
                eprintln!("warning: input state was not normalized; normalized before evolution");
            }
            write_output(run.out.as_deref(), &out.json.render())?;
            Ok(EXIT_OK)
        }
        Command::Dump { object, run } => {
            let manifest = run.manifest(None)?;
            let doc = cmd_dump(&manifest, object)?;
            write_output(run.out.as_deref(), &doc.render())?;
            Ok(EXIT_OK)
        }
    }
}

/// Entry point used by the binary; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match dispatch(cli) {
        Ok(status) => status,
        Err(UsageError(msg)) => {
            eprintln!("{TOOL_VERSION}: error: {msg}");
            EXIT_USAGE
        }
    }
}
