//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; exits nonzero if any criterion fails.
//!
//! Reference values are computed here from scalar formulas (direct sums over
//! phase angles), independently of the operator construction paths.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use pbphase::cli::{cmd_verify, resolve_profile};
use pbphase::evolution::{classify_cycle, eta_sector_map, time_evolution, CycleClass};
use pbphase::gdo::{
    build_generalized_frame, build_ladder_operators, cycle_operator_power, recover_phase_operator,
    DeformationProfile, Eta, EtaClass,
};
use pbphase::numerics::{cis, OperatorMatrix, StateVector, C64, ONE};
use pbphase::phase::{
    build_phase_frame, commutator, commutator_closed_form, commutator_rhs_printed,
    hermitian_phase_operator, number_operator, number_shift_operator, unitary_phase_from_spectrum,
    unitary_phase_operator, Exponent, SpaceConfig,
};
use pbphase::report::{RunManifest, Status, Suite};
use pbphase::verify::pb_core_suite;

const THETA0S: [f64; 4] = [0.0, 0.3, PI / 2.0, 2.9];
const ETAS: [f64; 4] = [0.25, 0.5, 1.0, 1.5];
const PER_ENTRY: f64 = 1e-9;

fn tol_op(dim: usize) -> f64 {
    1e-11 * dim as f64
}

fn cfg(dim: usize, theta0: f64) -> SpaceConfig {
    SpaceConfig::new(dim, theta0).unwrap()
}

fn eta(x: f64) -> Eta {
    Eta::new(x).unwrap()
}

/// Worst ratio deviation / tolerance seen by a criterion, plus failures.
#[derive(Default)]
struct Tally {
    worst_ratio: f64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, label: impl FnOnce() -> String, deviation: f64, tolerance: f64) {
        let ratio = deviation / tolerance;
        if ratio.is_nan() || ratio > 1.0 {
            self.failures.push(format!("{}: deviation {deviation:e} > {tolerance:e}", label()));
        }
        if ratio > self.worst_ratio {
            self.worst_ratio = ratio;
        }
    }

    fn require(&mut self, label: impl FnOnce() -> String, ok: bool) {
        if !ok {
            self.failures.push(label());
        }
    }
}

fn diff(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    a.max_abs_diff(b).unwrap()
}

/// `e^{inθ}/√d` evaluated directly.
fn fourier_component(dim: usize, n: usize, theta: f64) -> C64 {
    cis(n as f64 * theta) / (dim as f64).sqrt()
}

/// Explicit cyclic lowering matrix built entry by entry.
fn lowering_reference(dim: usize, theta0: f64) -> OperatorMatrix {
    let mut rows = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    for n in 1..dim {
        rows[n - 1][n] = ONE;
    }
    rows[dim - 1][0] = cis(dim as f64 * theta0);
    OperatorMatrix::from_rows(rows).unwrap()
}

fn ac1_frame_duality() -> Tally {
    let mut t = Tally::default();
    for dim in 1..=32 {
        for theta0 in THETA0S {
            let c = cfg(dim, theta0);
            let tol = tol_op(dim);
            let frame = build_phase_frame(&c);
            let thetas: Vec<f64> = (0..dim).map(|m| theta0 + 2.0 * PI * m as f64 / dim as f64).collect();

            // Gram matrix and completeness against the direct formula
            let mut gram = 0.0f64;
            let mut comp = 0.0f64;
            for a in 0..dim {
                for b in 0..dim {
                    let g: C64 = (0..dim)
                        .map(|n| frame.state(a).amp()[n].conj() * frame.state(b).amp()[n])
                        .sum();
                    let delta = if a == b { 1.0 } else { 0.0 };
                    gram = gram.max((g - delta).norm());
                    let p: C64 = (0..dim).map(|m| frame.state(m).amp()[a] * frame.state(m).amp()[b].conj()).sum();
                    comp = comp.max((p - delta).norm());
                }
            }
            t.check(|| format!("dim {dim} θ₀ {theta0}: orthonormality"), gram, tol);
            t.check(|| format!("dim {dim} θ₀ {theta0}: completeness"), comp, tol);

            let mut component = 0.0f64;
            for (m, th) in thetas.iter().enumerate() {
                for n in 0..dim {
                    component = component.max((frame.state(m).amp()[n] - fourier_component(dim, n, *th)).norm());
                }
            }
            t.check(|| format!("dim {dim} θ₀ {theta0}: components"), component, tol);

            // Down-shift action of the spectrally built e^{iΦ}
            let spectral = unitary_phase_from_spectrum(&c);
            let mut action = 0.0f64;
            for n in 0..dim {
                let out = spectral.apply(&StateVector::basis(dim, n)).unwrap();
                let expected = if n == 0 {
                    StateVector::basis(dim, dim - 1).scaled(cis(dim as f64 * theta0))
                } else {
                    StateVector::basis(dim, n - 1)
                };
                action = action.max(out.max_abs_diff(&expected).unwrap());
            }
            t.check(|| format!("dim {dim} θ₀ {theta0}: shift action"), action, tol);

            let reference = lowering_reference(dim, theta0);
            t.check(|| format!("dim {dim} θ₀ {theta0}: realization"), diff(&unitary_phase_operator(&c), &reference), tol);
            t.check(|| format!("dim {dim} θ₀ {theta0}: spectral synthesis"), diff(&spectral, &reference), tol);
        }
    }
    t
}

fn ac2_cyclicity() -> Tally {
    let mut t = Tally::default();
    for dim in 1..=32 {
        for theta0 in THETA0S {
            let c = cfg(dim, theta0);
            let window = OperatorMatrix::scalar(dim, cis(dim as f64 * theta0));
            let dev = diff(&unitary_phase_operator(&c).pow(dim), &window)
                .max(diff(&unitary_phase_from_spectrum(&c).pow(dim), &window));
            t.check(|| format!("dim {dim} θ₀ {theta0}: e^{{iΦ}} cycle"), dev, tol_op(dim));
        }
        let c = cfg(dim, 0.0);
        let dev = diff(&number_shift_operator(&c, Exponent::Negative).pow(dim), &OperatorMatrix::identity(dim));
        t.check(|| format!("dim {dim}: q^-N cycle"), dev, tol_op(dim));
    }
    t
}

/// `[Φ, N]_{nn'} = (n' - n) Φ_{nn'}` with `Φ_{nn'} = (1/d) Σ_m θ_m e^{i(n-n')θ_m}`.
fn commutator_reference(dim: usize, theta0: f64) -> OperatorMatrix {
    let thetas: Vec<f64> = (0..dim).map(|m| theta0 + 2.0 * PI * m as f64 / dim as f64).collect();
    OperatorMatrix::from_fn(dim, |n, np| {
        let phi: C64 = thetas
            .iter()
            .map(|th| cis((n as f64 - np as f64) * th) * *th)
            .sum::<C64>()
            / dim as f64;
        phi * (np as f64 - n as f64)
    })
}

fn ac3_commutator() -> Tally {
    let mut t = Tally::default();
    for dim in 2..=32 {
        for theta0 in THETA0S {
            let c = cfg(dim, theta0);
            let direct = commutator(&hermitian_phase_operator(&c), &number_operator(&c)).unwrap();
            let closed = commutator_closed_form(&c);
            let reference = commutator_reference(dim, theta0);
            t.check(|| format!("dim {dim} θ₀ {theta0}: direct vs closed"), diff(&direct, &closed), tol_op(dim));
            t.check(|| format!("dim {dim} θ₀ {theta0}: closed vs direct sum"), diff(&closed, &reference), tol_op(dim));
        }
    }

    // Printed form at dim 2, θ₀ = 0: both off-diagonal entries sign-flipped.
    let c = cfg(2, 0.0);
    let printed = commutator_rhs_printed(&c);
    let closed = commutator_closed_form(&c);
    for (r, col) in [(0, 1), (1, 0)] {
        let d = (printed.get(r, col) - closed.get(r, col)).norm();
        t.check(|| format!("printed-form deviation at ({r},{col}) equals π"), (d - PI).abs(), tol_op(2));
    }
    let ctx = pbphase::verify::SuiteContext {
        config: c,
        eta: eta(0.5),
        omega: 1.0,
        profile: None,
        seed: 0,
    };
    let recs = pb_core_suite(&ctx);
    let printed_rec = recs.iter().find(|r| r.check_id == "commutator_printed_form").unwrap();
    t.require(|| "printed form must be flagged".into(), printed_rec.status == Status::Flagged);
    t.require(|| "printed-form deviation must be nonzero".into(), printed_rec.max_deviation > 1.0);
    t.require(
        || "only the printed form may be flagged, nothing may fail".into(),
        recs.iter().all(|r| r.status == Status::Pass || r.check_id == "commutator_printed_form"),
    );
    t
}

fn ac4_recovery() -> Tally {
    let mut t = Tally::default();
    for dim in 1..=32 {
        for theta0 in [0.0, 0.3, 2.9] {
            let c = cfg(dim, theta0);
            let reference = lowering_reference(dim, theta0);
            for x in ETAS {
                let e = eta(x);
                let profile = DeformationProfile::linear(&c, e).unwrap();
                let ops = build_ladder_operators(&c, e, &profile).unwrap();
                let frame = build_generalized_frame(&c, e);
                let rec = recover_phase_operator(&ops.a, &profile, &frame).unwrap();
                t.check(|| format!("dim {dim} θ₀ {theta0} η {x}: recovery"), diff(&rec, &reference), tol_op(dim));
            }
        }
    }
    t
}

fn ac5_cycle_phase() -> Tally {
    let mut t = Tally::default();
    for dim in 1..=32 {
        let c = cfg(dim, 0.7);
        for x in ETAS {
            let e = eta(x);
            let power = cycle_operator_power(&c, e, dim);
            let target = OperatorMatrix::scalar(dim, cis(-2.0 * PI * x));
            t.check(|| format!("dim {dim} η {x}: cycle identity"), diff(&power, &target), tol_op(dim));

            let outcome = pbphase::evolution::classify_operator(&power, tol_op(dim));
            let expected = match e.classify() {
                EtaClass::Integer => CycleClass::Identity,
                EtaClass::HalfOddInteger => CycleClass::GlobalSignFlip,
                EtaClass::Generic => CycleClass::ScalarPhase,
            };
            t.require(
                || format!("dim {dim} η {x}: classified {:?}, expected {expected:?}", outcome.classification),
                outcome.classification == expected,
            );
        }
    }
    t
}

fn ac6_parity() -> Tally {
    let mut t = Tally::default();
    for dim in 2..=16 {
        let outcome = classify_cycle(&cfg(dim, 0.0), 1.0).unwrap();
        if dim % 2 == 0 {
            t.require(
                || format!("dim {dim}: expected GlobalSignFlip, got {:?}", outcome.classification),
                outcome.classification == CycleClass::GlobalSignFlip,
            );
            let phase = outcome.global_phase.unwrap_or(f64::NAN);
            t.check(|| format!("dim {dim}: global phase π"), pbphase::numerics::angle_distance(phase, PI), PER_ENTRY);
        } else {
            t.require(
                || format!("dim {dim}: expected MixedPhases, got {:?}", outcome.classification),
                outcome.classification == CycleClass::MixedPhases,
            );
            for (n, p) in outcome.per_level_phase.iter().enumerate() {
                let expected = if n == dim - 1 { ONE } else { -ONE };
                t.check(|| format!("dim {dim} level {n}"), (p - expected).norm(), PER_ENTRY);
            }
        }
    }
    t
}

fn ac7_sector_equivalence() -> Tally {
    let mut t = Tally::default();
    for dim in 1..=16 {
        let c = cfg(dim, 0.0);
        let sectors = eta_sector_map(&c);
        for (n, e) in sectors.iter().enumerate() {
            let formula = if n == dim - 1 { 0.5 + dim as f64 / 2.0 } else { 0.5 };
            t.check(|| format!("dim {dim} level {n}: sector value"), (e.value() - formula).abs(), 1e-15);
        }
        for omega in [1.0, 2.3] {
            let u = time_evolution(&c, omega, 2.0 * PI / omega).unwrap();
            for (n, e) in sectors.iter().enumerate() {
                let factor = cis(-2.0 * PI * (n as f64 + e.value()));
                t.check(|| format!("dim {dim} ω {omega} level {n}"), (u.get(n, n) - factor).norm(), PER_ENTRY);
            }
        }
    }
    t
}

/// Component k of `(1/√d) Σ_m e^{-i(n+η)θ_m} |θ_m⟩`, summed directly.
fn generalized_state_reference(dim: usize, theta0: f64, x: f64, n: usize) -> Vec<C64> {
    (0..dim)
        .map(|k| {
            (0..dim)
                .map(|m| {
                    let th = theta0 + 2.0 * PI * m as f64 / dim as f64;
                    cis(-(n as f64 + x) * th) * cis(k as f64 * th)
                })
                .sum::<C64>()
                / dim as f64
        })
        .collect()
}

fn ac8_continuous_shift() -> Tally {
    let mut t = Tally::default();
    for dim in 1..=16 {
        for theta0 in [0.0, 0.3, 2.9] {
            for x in [0.25, 0.5, 1.0] {
                let frame = build_generalized_frame(&cfg(dim, theta0), eta(x));
                for n in 0..dim {
                    let reference = generalized_state_reference(dim, theta0, x, n);
                    let dev = frame.number_states()[n]
                        .amp()
                        .iter()
                        .zip(&reference)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    t.check(|| format!("dim {dim} θ₀ {theta0} η {x} n {n}"), dev, tol_op(dim));
                }
            }
        }
    }
    t
}

fn ac9_determinism() -> Tally {
    let mut t = Tally::default();
    for (dim, x, seed) in [(2, 0.5, 0), (5, 0.25, 17), (8, 1.5, 3)] {
        let manifest = RunManifest {
            dim,
            eta: x,
            theta0: 0.3,
            seed,
            suites: Suite::ALL.to_vec(),
            ..RunManifest::default()
        };
        let _ = resolve_profile(&manifest).unwrap();
        let first = cmd_verify(&manifest).unwrap();
        let second = cmd_verify(&manifest).unwrap();
        t.require(|| format!("dim {dim}: in-process reports differ"), first == second);
    }

    // Two separate processes, same manifest, byte-identical files.
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("report{i}.json"));
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_pbphase"))
            .args(["verify", "--dim", "6", "--theta0", "0.3", "--eta", "0.5", "--seed", "9", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        t.require(|| format!("run {i} exit status {status}"), status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    t.require(|| "process reports differ".into(), outputs[0] == outputs[1]);
    t
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Tally); 9] = [
        ("AC1 frame duality (dims 1..32, 4 windows, tol 1e-11*dim)", ac1_frame_duality),
        ("AC2 cyclicity of e^{iPhi} and q^-N (dims 1..32, tol 1e-11*dim)", ac2_cyclicity),
        ("AC3 commutator closed form; printed form flagged at dim 2 (tol 1e-11*dim)", ac3_commutator),
        ("AC4 phase operator recovered from A (dims 1..32, eta grid, tol 1e-11*dim)", ac4_recovery),
        ("AC5 cycle phase e^{-i2 pi eta} and sign classification (tol 1e-11*dim)", ac5_cycle_phase),
        ("AC6 parity of one-period evolution (dims 2..16, tol 1e-9)", ac6_parity),
        ("AC7 per-level sector equivalence (dims 1..16, tol 1e-9)", ac7_sector_equivalence),
        ("AC8 continuous shift e^{-i eta Phi}|n> (dims 1..16, tol 1e-11*dim)", ac8_continuous_shift),
        ("AC9 byte-identical reports for identical manifests", ac9_determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, run) in criteria {
        let tally = run();
        if tally.failures.is_empty() {
            println!("PASS  {name}  [worst deviation/tolerance {:.2e}]", tally.worst_ratio);
        } else {
            failed += 1;
            println!("FAIL  {name}");
            for f in tally.failures.iter().take(10) {
                println!("      {f}");
            }
        }
    }
    println!(
        "acceptance: {} of 9 criteria passed in {:.2}s",
        9 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
