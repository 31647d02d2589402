//! Phase states, the hermitian and unitary phase operators, and the number
//! shift operator `q^{-N}` on a Hilbert space of dimension `s + 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{
    cis, orthonormality_deviation, spectral_synthesize, OperatorMatrix, StateVector, Tag,
    TolerancePolicy, C64, ONE, ZERO,
};

/// Dimension and phase window of the truncated space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceConfig {
    dim: usize,
    theta0: f64,
}

impl SpaceConfig {
    pub fn new(dim: usize, theta0: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !theta0.is_finite() {
            return Err(Error::NonFinite("phase window"));
        }
        Ok(Self { dim, theta0 })
    }

    /// Config from the top level index `s` (dimension `s + 1`).
    pub fn with_top_level(s: usize, theta0: f64) -> Result<Self> {
        Self::new(s + 1, theta0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Top level index.
    pub fn s(&self) -> usize {
        self.dim - 1
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn tolerances(&self) -> TolerancePolicy {
        TolerancePolicy::for_dim(self.dim)
    }

    /// The primitive root of unity `exp(2πi/(s+1))`.
    pub fn q(&self) -> C64 {
        self.root_power(1.0)
    }

    /// `q^x` on the principal branch, `exp(2πi x/(s+1))`.
    pub fn root_power(&self, x: f64) -> C64 {
        cis(2.0 * PI * x / self.dim as f64)
    }

    /// `q^k` for integer `k`, reduced mod `s + 1` before evaluation.
    pub fn root_power_int(&self, k: i64) -> C64 {
        let r = k.rem_euclid(self.dim as i64);
        self.root_power(r as f64)
    }

    /// Phase angle `θ_m = θ₀ + 2πm/(s+1)`.
    pub fn theta(&self, m: usize) -> f64 {
        self.theta0 + 2.0 * PI * m as f64 / self.dim as f64
    }

    /// Corner phase `e^{i(s+1)θ₀}` of the unitary phase operator.
    pub fn window_phase(&self) -> C64 {
        cis(self.dim as f64 * self.theta0)
    }

    /// Basis index arithmetic modulo the dimension, always in `0..=s`.
    pub fn wrap(&self, index: i64) -> usize {
        index.rem_euclid(self.dim as i64) as usize
    }
}

/// The orthonormal phase states `|θ_m⟩`, m = 0..s, in number coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFrame {
    config: SpaceConfig,
    states: Vec<StateVector>,
}

impl PhaseFrame {
    pub fn config(&self) -> &SpaceConfig {
        &self.config
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn state(&self, m: usize) -> &StateVector {
        &self.states[m]
    }

    pub fn orthonormality_deviation(&self) -> f64 {
        orthonormality_deviation(&self.states).expect("frame vectors share a dimension")
    }

    /// `Σ_m |θ_m⟩⟨θ_m|`.
    pub fn resolution_of_identity(&self) -> OperatorMatrix {
        self.synthesize(|_| ONE)
    }

    /// `Σ_m f(θ_m) |θ_m⟩⟨θ_m|`, i.e. `f(Φ)`.
    pub fn synthesize(&self, f: impl Fn(f64) -> C64) -> OperatorMatrix {
        let eigvals: Vec<C64> = (0..self.config.dim).map(|m| f(self.config.theta(m))).collect();
        spectral_synthesize(&self.states, &eigvals).expect("phase frame is orthonormal")
    }
}

/// `|θ_m⟩ = (s+1)^{-1/2} Σ_n e^{inθ_m} |n⟩`.
///
/// The exponent is split as `nθ₀ + 2π(nm mod (s+1))/(s+1)` to keep the
/// argument small for large `n`.
pub fn build_phase_frame(config: &SpaceConfig) -> PhaseFrame {
    let d = config.dim;
    let norm = 1.0 / (d as f64).sqrt();
    let states = (0..d)
        .map(|m| {
            let amp = (0..d)
                .map(|n| {
                    let winding = (n * m) % d;
                    cis(n as f64 * config.theta0) * config.root_power(winding as f64) * norm
                })
                .collect();
            StateVector::new(amp).expect("finite amplitudes")
        })
        .collect();
    PhaseFrame {
        config: *config,
        states,
    }
}

/// `N = diag(0, 1, ..., s)`.
pub fn number_operator(config: &SpaceConfig) -> OperatorMatrix {
    let entries: Vec<C64> = (0..config.dim).map(|n| C64::new(n as f64, 0.0)).collect();
    OperatorMatrix::diagonal(&entries).certified(&[Tag::Hermitian], config.tolerances().tol_op)
}

/// `Φ = Σ_m θ_m |θ_m⟩⟨θ_m|`.
pub fn hermitian_phase_operator(config: &SpaceConfig) -> OperatorMatrix {
    build_phase_frame(config)
        .synthesize(|theta| C64::new(theta, 0.0))
        .certified(&[Tag::Hermitian], config.tolerances().tol_op)
}

/// `e^{iΦ}` as the explicit cyclic lowering matrix:
/// `|0⟩⟨1| + ... + |s-1⟩⟨s| + e^{i(s+1)θ₀}|s⟩⟨0|`.
pub fn unitary_phase_operator(config: &SpaceConfig) -> OperatorMatrix {
    let s = config.s();
    let corner = config.window_phase();
    OperatorMatrix::from_fn(config.dim, |r, c| {
        if c == 0 && r == s {
            corner
        } else if c >= 1 && r == c - 1 {
            ONE
        } else {
            ZERO
        }
    })
    .certified(&[Tag::Unitary], config.tolerances().tol_op)
}

/// `e^{iΦ}` built spectrally, `Σ_m e^{iθ_m} |θ_m⟩⟨θ_m|`.
pub fn unitary_phase_from_spectrum(config: &SpaceConfig) -> OperatorMatrix {
    build_phase_frame(config)
        .synthesize(cis)
        .certified(&[Tag::Unitary], config.tolerances().tol_op)
}

/// Sign of the exponent in `q^{±N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    /// `q^{-N}`, the lowering shift on phase states.
    Negative,
    /// `q^{+N}`, its inverse.
    Positive,
}

/// `q^{∓N} = diag(q^{∓n})`.
pub fn number_shift_operator(config: &SpaceConfig, exponent: Exponent) -> OperatorMatrix {
    let sign = match exponent {
        Exponent::Negative => -1,
        Exponent::Positive => 1,
    };
    let entries: Vec<C64> = (0..config.dim)
        .map(|n| config.root_power_int(sign * n as i64))
        .collect();
    OperatorMatrix::diagonal(&entries).certified(&[Tag::Unitary], config.tolerances().tol_op)
}

/// `q^{-N}` realized on the phase frame: `Σ_m |θ_{m-1 mod (s+1)}⟩⟨θ_m|`.
pub fn number_shift_realization(config: &SpaceConfig) -> OperatorMatrix {
    let frame = build_phase_frame(config);
    let mut acc = OperatorMatrix::zeros(config.dim);
    for m in 0..config.dim {
        let down = config.wrap(m as i64 - 1);
        let term = frame.state(down).outer(frame.state(m)).expect("frame dims agree");
        acc = acc.add(&term).expect("frame dims agree");
    }
    acc.certified(&[Tag::Unitary], config.tolerances().tol_op)
}

/// `[L, R] = LR - RL`.
pub fn commutator(left: &OperatorMatrix, right: &OperatorMatrix) -> Result<OperatorMatrix> {
    left.mul(right)?.sub(&right.mul(left)?)
}

/// The phase-number commutator as it is commonly printed:
/// `(2π/(s+1)) Σ_{n≠n'} (n'-n) |n'⟩⟨n| / (exp[2πi(n-n')/(s+1)] - 1)`,
/// with both indices running over `0..=s`.
///
/// This differs from the commutator computed from the phase states by an
/// element-wise factor `q^{n'-n} e^{-i(n'-n)θ₀}`; it is kept for reporting.
pub fn commutator_rhs_printed(config: &SpaceConfig) -> OperatorMatrix {
    let d = config.dim as f64;
    OperatorMatrix::from_fn(config.dim, |row, col| {
        if row == col {
            return ZERO;
        }
        // row ↔ n', col ↔ n
        let (np, n) = (row as i64, col as i64);
        let denom = config.root_power_int(n - np) - ONE;
        C64::new(2.0 * PI / d * (np - n) as f64, 0.0) / denom
    })
}

/// Closed form of `[Φ, N]` derived from the phase states:
/// element `(n, n')`, `n ≠ n'`, is
/// `(2π/(s+1)) (n'-n) e^{i(n-n')θ₀} / (e^{2πi(n-n')/(s+1)} - 1)`.
pub fn commutator_closed_form(config: &SpaceConfig) -> OperatorMatrix {
    let d = config.dim as f64;
    OperatorMatrix::from_fn(config.dim, |row, col| {
        if row == col {
            return ZERO;
        }
        let (n, np) = (row as i64, col as i64);
        let denom = config.root_power_int(n - np) - ONE;
        let window = cis((n - np) as f64 * config.theta0);
        C64::new(2.0 * PI / d * (np - n) as f64, 0.0) * window / denom
    })
}
