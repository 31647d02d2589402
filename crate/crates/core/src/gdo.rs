//! Generally deformed oscillator at `q` a root of unity.
//!
//! The generalized number states are `|n+η⟩ = e^{-iηΦ}|n⟩`; everything else
//! (phase states, ladder operators, `q^{±𝒩}`) is expressed in that frame and
//! then mapped back to standard number coordinates.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{
    cis, orthonormality_deviation, OperatorMatrix, StateVector, Tag, C64, ZERO,
};
use crate::phase::{build_phase_frame, unitary_phase_operator, SpaceConfig};
use crate::report::CheckRecord;

/// Distance to the nearest integer / half-odd integer used when classifying η.
pub const ETA_CLASS_TOL: f64 = 1e-9;

/// Real offset of the deformed number spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eta(f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaClass {
    Integer,
    HalfOddInteger,
    Generic,
}

impl Eta {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::NonFinite("eta"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn classify(self) -> EtaClass {
        let x = self.0;
        if (x - x.round()).abs() <= ETA_CLASS_TOL {
            EtaClass::Integer
        } else if (x - 0.5 - (x - 0.5).round()).abs() <= ETA_CLASS_TOL {
            EtaClass::HalfOddInteger
        } else {
            EtaClass::Generic
        }
    }

    /// Phase picked up over one full cycle of `q^{-𝒩}`: `e^{-i2πη}`.
    pub fn cycle_phase(self) -> C64 {
        cis(-2.0 * PI * self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileVariant {
    Linear,
    User,
}

/// Values `F_n = 𝓕(q^{n+η})` for n = 0..s.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationProfile {
    values: Vec<f64>,
    variant: ProfileVariant,
}

impl DeformationProfile {
    /// `F_n = n + η`. Requires `η > 0` so that every level is positive.
    pub fn linear(config: &SpaceConfig, eta: Eta) -> Result<Self> {
        let values: Vec<f64> = (0..config.dim()).map(|n| n as f64 + eta.value()).collect();
        if values[0] <= 0.0 {
            return Err(Error::InvalidProfile(format!(
                "linear profile needs n + eta > 0 for every level, got eta = {}",
                eta.value()
            )));
        }
        Ok(Self {
            values,
            variant: ProfileVariant::Linear,
        })
    }

    /// User-supplied table: one finite non-negative value per level, with a
    /// nonzero bottom level so the representation is cyclic.
    pub fn from_values(config: &SpaceConfig, values: Vec<f64>) -> Result<Self> {
        if values.len() != config.dim() {
            return Err(Error::InvalidProfile(format!(
                "expected {} values, got {}",
                config.dim(),
                values.len()
            )));
        }
        if let Some((n, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidProfile(format!(
                "level {n} has value {v}; values must be finite and non-negative"
            )));
        }
        if values[0] == 0.0 {
            return Err(Error::InvalidProfile(
                "bottom level must be nonzero for a cyclic representation".into(),
            ));
        }
        Ok(Self {
            values,
            variant: ProfileVariant::User,
        })
    }

    /// Parses a JSON array of reals.
    pub fn from_json(config: &SpaceConfig, text: &str) -> Result<Self> {
        let values: Vec<f64> = serde_json::from_str(text)
            .map_err(|e| Error::InvalidProfile(format!("expected a JSON array of numbers: {e}")))?;
        Self::from_values(config, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn variant(&self) -> ProfileVariant {
        self.variant
    }

    fn first_zero(&self) -> Option<usize> {
        self.values.iter().position(|v| *v == 0.0)
    }
}

/// `e^{-iηΦ}`, built spectrally on the phase frame.
pub fn continuous_shift(config: &SpaceConfig, eta: Eta) -> OperatorMatrix {
    build_phase_frame(config)
        .synthesize(|theta| cis(-eta.value() * theta))
        .certified(&[Tag::Unitary], config.tolerances().tol_op)
}

/// Generalized number states and the modified phase states built on them.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedFrame {
    config: SpaceConfig,
    eta: Eta,
    number_states: Vec<StateVector>,
    phase_states: Vec<StateVector>,
    shift: OperatorMatrix,
}

pub fn build_generalized_frame(config: &SpaceConfig, eta: Eta) -> GeneralizedFrame {
    let d = config.dim();
    let shift = continuous_shift(config, eta);
    let number_states: Vec<StateVector> = (0..d).map(|n| shift.column(n)).collect();
    let norm = 1.0 / (d as f64).sqrt();
    let phase_states = (0..d)
        .map(|m| {
            let theta = config.theta(m);
            let mut amp = vec![ZERO; d];
            for (n, state) in number_states.iter().enumerate() {
                let coeff = cis((n as f64 + eta.value()) * theta) * norm;
                for (a, x) in amp.iter_mut().zip(state.amp()) {
                    *a += coeff * x;
                }
            }
            StateVector::new(amp).expect("finite amplitudes")
        })
        .collect();
    GeneralizedFrame {
        config: *config,
        eta,
        number_states,
        phase_states,
        shift,
    }
}

impl GeneralizedFrame {
    pub fn config(&self) -> &SpaceConfig {
        &self.config
    }

    pub fn eta(&self) -> Eta {
        self.eta
    }

    /// `|n+η⟩` in standard coordinates.
    pub fn number_states(&self) -> &[StateVector] {
        &self.number_states
    }

    /// Modified phase states `|θ_m⟩`.
    pub fn phase_states(&self) -> &[StateVector] {
        &self.phase_states
    }

    /// The unitary `e^{-iηΦ}` whose columns are the generalized number states.
    pub fn shift(&self) -> &OperatorMatrix {
        &self.shift
    }

    pub fn number_deviation(&self) -> f64 {
        orthonormality_deviation(&self.number_states).expect("frame dims agree")
    }

    pub fn phase_deviation(&self) -> f64 {
        orthonormality_deviation(&self.phase_states).expect("frame dims agree")
    }

    /// Standard-coordinate matrix of an operator given by its matrix in the
    /// generalized number frame.
    pub fn to_standard(&self, generalized: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.shift.mul(&generalized.mul(&self.shift.adjoint())?)
    }

    /// Matrix elements `⟨n+η|M|n'+η⟩`.
    pub fn to_generalized(&self, standard: &OperatorMatrix) -> Result<OperatorMatrix> {
        standard.in_frame(&self.shift)
    }

    /// `Σ_n f(n) |n+η⟩⟨n+η|`.
    pub fn diagonal_operator(&self, f: impl Fn(usize) -> C64) -> OperatorMatrix {
        let entries: Vec<C64> = (0..self.config.dim()).map(f).collect();
        self.to_standard(&OperatorMatrix::diagonal(&entries))
            .expect("frame dims agree")
    }
}

/// `|n+η⟩` rebuilt from the undeformed phase states as
/// `(s+1)^{-1/2} Σ_m e^{-i(n+η)θ_m} |θ_m⟩`, independently of `e^{-iηΦ}`.
pub fn number_state_from_phase_sum(config: &SpaceConfig, eta: Eta, n: usize) -> StateVector {
    let frame = build_phase_frame(config);
    let d = config.dim();
    let norm = 1.0 / (d as f64).sqrt();
    let mut amp = vec![ZERO; d];
    for m in 0..d {
        let coeff = cis(-(n as f64 + eta.value()) * config.theta(m)) * norm;
        for (a, x) in amp.iter_mut().zip(frame.state(m).amp()) {
            *a += coeff * x;
        }
    }
    StateVector::new(amp).expect("finite amplitudes")
}

/// `A`, `A†` and `q^𝒩` in standard coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderOperators {
    pub a: OperatorMatrix,
    pub adag: OperatorMatrix,
    pub q_number: OperatorMatrix,
}

/// `A = e^{iΦ} √𝓕(q^𝒩)`, `A† = √𝓕(q^𝒩) e^{-iΦ}`, `q^𝒩 = q^{N+η}`.
pub fn build_ladder_operators(
    config: &SpaceConfig,
    eta: Eta,
    profile: &DeformationProfile,
) -> Result<LadderOperators> {
    if profile.values.len() != config.dim() {
        return Err(Error::DimensionMismatch {
            left: config.dim(),
            right: profile.values.len(),
        });
    }
    if profile.values[0] <= 0.0 {
        return Err(Error::InvalidProfile(
            "bottom level must be nonzero for a cyclic representation".into(),
        ));
    }
    let frame = build_generalized_frame(config, eta);
    let sqrt_f = frame.diagonal_operator(|n| C64::new(profile.values[n].sqrt(), 0.0));
    let a = unitary_phase_operator(config).mul(&sqrt_f)?;
    let adag = a.adjoint();
    let q_number = frame
        .diagonal_operator(|n| config.root_power(n as f64 + eta.value()))
        .certified(&[Tag::Unitary], config.tolerances().tol_op);
    Ok(LadderOperators { a, adag, q_number })
}

/// `A 𝓕(q^𝒩)^{-1/2}`, which should be the undeformed `e^{iΦ}`.
pub fn recover_phase_operator(
    a: &OperatorMatrix,
    profile: &DeformationProfile,
    frame: &GeneralizedFrame,
) -> Result<OperatorMatrix> {
    if let Some(level) = profile.first_zero() {
        return Err(Error::SingularProfile { level });
    }
    if profile.values.len() != frame.config.dim() {
        return Err(Error::DimensionMismatch {
            left: frame.config.dim(),
            right: profile.values.len(),
        });
    }
    let inv_sqrt = frame.diagonal_operator(|n| C64::new(1.0 / profile.values[n].sqrt(), 0.0));
    Ok(a.mul(&inv_sqrt)?
        .certified(&[Tag::Unitary], frame.config.tolerances().tol_op))
}

/// `q^{-𝒩} = Σ_n q^{-(n+η)} |n+η⟩⟨n+η|`.
pub fn deformed_number_shift(config: &SpaceConfig, eta: Eta) -> OperatorMatrix {
    build_generalized_frame(config, eta)
        .diagonal_operator(|n| config.root_power(-(n as f64 + eta.value())))
        .certified(&[Tag::Unitary], config.tolerances().tol_op)
}

/// `q^{-𝒩}` realized on the modified phase states:
/// `Σ_{m=1}^{s} |θ_{m-1}⟩⟨θ_m| + e^{-i2πη} |θ_s⟩⟨θ₀|`.
pub fn modified_number_shift(config: &SpaceConfig, eta: Eta) -> OperatorMatrix {
    let frame = build_generalized_frame(config, eta);
    let states = frame.phase_states();
    let s = config.s();
    let mut acc = states[s]
        .outer(&states[0])
        .expect("frame dims agree")
        .scaled(eta.cycle_phase());
    for m in 1..=s {
        acc = acc
            .add(&states[m - 1].outer(&states[m]).expect("frame dims agree"))
            .expect("frame dims agree");
    }
    acc.certified(&[Tag::Unitary], config.tolerances().tol_op)
}

/// `(q^{-𝒩})^k`.
pub fn cycle_operator_power(config: &SpaceConfig, eta: Eta, k: usize) -> OperatorMatrix {
    deformed_number_shift(config, eta)
        .pow(k)
        .certified(&[Tag::Unitary], config.tolerances().tol_op)
}

fn worst<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Shift laws of `q^{-𝒩}` on the modified phase states and of `e^{iΦ}` on
/// the generalized number states, plus the two corner phases.
pub fn duality_check(config: &SpaceConfig, eta: Eta) -> Vec<CheckRecord> {
    let tol = config.tolerances();
    let s = config.s();
    let frame = build_generalized_frame(config, eta);
    let qn = deformed_number_shift(config, eta);
    let exp_iphi = unitary_phase_operator(config);
    let phase = frame.phase_states();
    let number = frame.number_states();

    let qn_down = worst((1..=s).map(|m| {
        qn.apply(&phase[m]).unwrap().max_abs_diff(&phase[m - 1]).unwrap()
    }));
    let qn_wrap = qn
        .apply(&phase[0])
        .unwrap()
        .max_abs_diff(&phase[s].scaled(eta.cycle_phase()))
        .unwrap();
    let phi_down = worst((1..=s).map(|n| {
        exp_iphi.apply(&number[n]).unwrap().max_abs_diff(&number[n - 1]).unwrap()
    }));
    let phi_wrap = exp_iphi
        .apply(&number[0])
        .unwrap()
        .max_abs_diff(&number[s].scaled(config.window_phase()))
        .unwrap();

    let phi_corner = number[s].inner(&exp_iphi.apply(&number[0]).unwrap()).unwrap();
    let qn_corner = phase[s].inner(&qn.apply(&phase[0]).unwrap()).unwrap();

    vec![
        CheckRecord::measured("modified_qN_shift_down", "modified q^-N on phase states, m != 0", qn_down, tol.tol_op),
        CheckRecord::measured("modified_qN_wraparound", "modified q^-N on |theta_0>", qn_wrap, tol.tol_op),
        CheckRecord::measured("exp_iphi_generalized_shift_down", "e^{i Phi} on |n+eta>, n != 0", phi_down, tol.tol_op),
        CheckRecord::measured("exp_iphi_generalized_wraparound", "e^{i Phi} on |eta>", phi_wrap, tol.tol_op),
        CheckRecord::measured(
            "corner_phase_exp_iphi",
            "duality of corner phases",
            (phi_corner - config.window_phase()).norm(),
            tol.tol_op,
        )
        .with_observed(phi_corner),
        CheckRecord::measured(
            "corner_phase_modified_qN",
            "duality of corner phases",
            (qn_corner - eta.cycle_phase()).norm(),
            tol.tol_op,
        )
        .with_observed(qn_corner),
    ]
}

/// Matrix of `A` in the generalized frame as read off its action:
/// `A|n+η⟩ = √F_n |n+η-1⟩`, `A|η⟩ = √F₀ e^{i(s+1)θ₀} |s+η⟩`.
pub fn expected_annihilation_in_frame(config: &SpaceConfig, profile: &DeformationProfile) -> OperatorMatrix {
    let s = config.s();
    let f = profile.values();
    OperatorMatrix::from_fn(config.dim(), |r, c| {
        if c == 0 && r == s {
            config.window_phase() * f[0].sqrt()
        } else if c >= 1 && r == c - 1 {
            C64::new(f[c].sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// Generalized-frame diagonal `q^{n+η}` of `q^𝒩`.
pub fn expected_q_number_diagonal(config: &SpaceConfig, eta: Eta) -> Vec<C64> {
    (0..config.dim())
        .map(|n| config.root_power(n as f64 + eta.value()))
        .collect()
}
