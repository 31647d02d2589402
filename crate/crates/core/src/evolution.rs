//! Truncated harmonic oscillator and its one-period evolution.
//!
//! `E_n = ω (n + 1/2 + (s+1)/2 · δ_{n,s})` with ħ = 1. The top level carries
//! the extra shift, so one period `T = 2π/ω` multiplies `|n⟩` by `-1` for
//! `n < s` and `|s⟩` by `(-1)^s`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gdo::Eta;
use crate::numerics::{
    cis, equal_up_to_global_phase, wrap_phase, OperatorMatrix, StateVector, Tag, C64, ONE,
};
use crate::phase::SpaceConfig;
use crate::report::CheckRecord;

/// Per-entry tolerance for per-level phase comparisons.
pub const PHASE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorSpectrum {
    config: SpaceConfig,
    omega: f64,
    energies: Vec<f64>,
}

impl OscillatorSpectrum {
    pub fn new(config: &SpaceConfig, omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidFrequency(omega));
        }
        let s = config.s();
        let top_shift = config.dim() as f64 / 2.0;
        let energies = (0..config.dim())
            .map(|n| {
                let extra = if n == s { top_shift } else { 0.0 };
                omega * (n as f64 + 0.5 + extra)
            })
            .collect();
        Ok(Self {
            config: *config,
            omega,
            energies,
        })
    }

    pub fn config(&self) -> &SpaceConfig {
        &self.config
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `T = 2π/ω`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// `diag(e^{-iE_n t})`.
    pub fn propagator(&self, t: f64) -> OperatorMatrix {
        let entries: Vec<C64> = self.energies.iter().map(|e| cis(-e * t)).collect();
        OperatorMatrix::diagonal(&entries)
            .certified(&[Tag::Unitary], self.config.tolerances().tol_op)
    }
}

pub fn hamiltonian(config: &SpaceConfig, omega: f64) -> Result<OperatorMatrix> {
    let spectrum = OscillatorSpectrum::new(config, omega)?;
    let entries: Vec<C64> = spectrum.energies.iter().map(|e| C64::new(*e, 0.0)).collect();
    Ok(OperatorMatrix::diagonal(&entries).certified(&[Tag::Hermitian], config.tolerances().tol_op))
}

/// `U(t) = e^{-iHt}`.
pub fn time_evolution(config: &SpaceConfig, omega: f64, t: f64) -> Result<OperatorMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    Ok(OscillatorSpectrum::new(config, omega)?.propagator(t))
}

/// Closed-form one-period factors `exp(-i2π{n + 1/2 + (s+1)δ_{n,s}/2})`.
///
/// The exponent is reduced to its fractional part in half-turns before
/// evaluation, so the result is exactly `±1` whenever it should be.
pub fn cycle_phase_per_level(config: &SpaceConfig) -> Vec<C64> {
    let s = config.s();
    (0..config.dim())
        .map(|n| {
            // twice the exponent's coefficient of -2πi: 2n + 1 + (s+1)δ
            let half_turns = 2 * n + 1 + if n == s { config.dim() } else { 0 };
            if half_turns % 2 == 0 {
                ONE
            } else {
                -ONE
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleClass {
    /// Proportional to `+I`.
    Identity,
    /// Proportional to `-I`.
    GlobalSignFlip,
    /// Proportional to `e^{iα}I` with α neither 0 nor π.
    ScalarPhase,
    /// Not proportional to the identity.
    MixedPhases,
}

impl CycleClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CycleClass::Identity => "identity",
            CycleClass::GlobalSignFlip => "global-sign-flip",
            CycleClass::ScalarPhase => "scalar-phase",
            CycleClass::MixedPhases => "mixed-phases",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleOutcome {
    pub classification: CycleClass,
    /// Unit-modulus diagonal of the cycle operator.
    pub per_level_phase: Vec<C64>,
    /// `α` with `U = e^{iα}I`, in (-π, π], when the operator is scalar.
    pub global_phase: Option<f64>,
}

/// Classifies a unitary cycle operator. Each column is compared with the
/// matching basis vector up to a phase; if every column passes and all
/// phases agree, the operator is `e^{iα}I`.
pub fn classify_operator(u: &OperatorMatrix, tol_op: f64) -> CycleOutcome {
    let dim = u.dim();
    let per_level_phase: Vec<C64> = u
        .diag()
        .into_iter()
        .map(|z| if z.norm() > 0.0 { z / z.norm() } else { z })
        .collect();

    let mut column_phases = Vec::with_capacity(dim);
    for c in 0..dim {
        let col = u.column(c);
        let basis = StateVector::basis(dim, c);
        match equal_up_to_global_phase(&basis, &col, tol_op) {
            Ok(cmp) if cmp.equal => column_phases.push(cmp.phase.expect("equal implies phase")),
            _ => break,
        }
    }

    let mut global_phase = None;
    if column_phases.len() == dim {
        let alpha = wrap_phase(u.get(0, 0).arg());
        let scalar = OperatorMatrix::scalar(dim, cis(alpha));
        if u.max_abs_diff(&scalar).expect("same dim") <= tol_op {
            global_phase = Some(alpha);
        }
    }

    let classification = match global_phase {
        None => CycleClass::MixedPhases,
        Some(a) if (cis(a) - ONE).norm() <= tol_op => CycleClass::Identity,
        Some(a) if (cis(a) + ONE).norm() <= tol_op => CycleClass::GlobalSignFlip,
        Some(_) => CycleClass::ScalarPhase,
    };
    CycleOutcome {
        classification,
        per_level_phase,
        global_phase,
    }
}

/// Classifies `U(2π/ω)`.
pub fn classify_cycle(config: &SpaceConfig, omega: f64) -> Result<CycleOutcome> {
    let spectrum = OscillatorSpectrum::new(config, omega)?;
    let u = spectrum.propagator(spectrum.period());
    Ok(classify_operator(&u, config.tolerances().tol_op))
}

/// Effective offset per level: `1/2` for `n < s`, `1/2 + (s+1)/2` at `n = s`.
pub fn eta_sector_map(config: &SpaceConfig) -> Vec<Eta> {
    let s = config.s();
    (0..config.dim())
        .map(|n| {
            let eta = if n == s {
                0.5 + config.dim() as f64 / 2.0
            } else {
                0.5
            };
            Eta::new(eta).expect("finite")
        })
        .collect()
}

/// Compares the shift-operator cycle factor `e^{-i2π(n+η_n)}` with the
/// diagonal of `U(2π/ω)` level by level.
pub fn compare_shift_vs_evolution(config: &SpaceConfig, omega: f64) -> Result<Vec<CheckRecord>> {
    let spectrum = OscillatorSpectrum::new(config, omega)?;
    let u = spectrum.propagator(spectrum.period());
    let diag = u.diag();
    let sectors = eta_sector_map(config);
    let s = config.s();

    let shift_factor = |n: usize, eta: f64| cis(-2.0 * PI * (n as f64 + eta));
    let sector_dev = diag
        .iter()
        .zip(&sectors)
        .enumerate()
        .map(|(n, (u_nn, eta))| (u_nn - shift_factor(n, eta.value())).norm())
        .fold(0.0, f64::max);
    let uniform_dev = diag
        .iter()
        .take(s)
        .enumerate()
        .map(|(n, u_nn)| (u_nn - shift_factor(n, 0.5)).norm())
        .fold(0.0, f64::max);

    Ok(vec![
        CheckRecord::measured(
            "sector_equivalence",
            "per-level eta sectors vs oscillator period phases",
            sector_dev,
            PHASE_TOL,
        ),
        CheckRecord::measured(
            "uniform_half_eta_below_top",
            "eta = 1/2 reproduces levels n != s",
            uniform_dev,
            PHASE_TOL,
        ),
    ])
}
