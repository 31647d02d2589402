use std::f64::consts::PI;

use proptest::prelude::*;

use pbphase::evolution::{classify_cycle, classify_operator, time_evolution, CycleClass};
use pbphase::gdo::{
    build_generalized_frame, build_ladder_operators, cycle_operator_power, recover_phase_operator,
    DeformationProfile, Eta,
};
use pbphase::numerics::{cis, equal_up_to_global_phase, spectral_synthesize, OperatorMatrix, StateVector, C64};
use pbphase::phase::{
    build_phase_frame, commutator, commutator_closed_form, hermitian_phase_operator, number_operator,
    unitary_phase_operator, SpaceConfig,
};

fn tol(dim: usize) -> f64 {
    1e-11 * dim as f64
}

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| StateVector::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

fn gram_schmidt(raw: Vec<Vec<C64>>) -> Option<Vec<StateVector>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for mut v in raw {
        for u in &out {
            let p: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= p * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-3 {
            return None;
        }
        out.push(v.into_iter().map(|z| z / n).collect());
    }
    Some(out.into_iter().map(|a| StateVector::new(a).unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn global_phase_comparison_recovers_alpha(dim in 1usize..12, seed in any::<u64>(), alpha in -10.0f64..10.0) {
        let u = random(dim, seed);
        let v = u.scaled(cis(alpha));
        let cmp = equal_up_to_global_phase(&u, &v, 1e-9).unwrap();
        prop_assert!(cmp.equal);
        let diff = pbphase::numerics::angle_distance(cmp.phase.unwrap(), alpha);
        prop_assert!(diff < 1e-9, "phase off by {diff}");

        let back = equal_up_to_global_phase(&v, &u, 1e-9).unwrap();
        prop_assert!(back.equal);
        prop_assert!(pbphase::numerics::angle_distance(back.phase.unwrap(), -alpha) < 1e-9);
        prop_assert!(equal_up_to_global_phase(&u, &u, 1e-12).unwrap().equal);
    }

    #[test]
    fn distinct_rays_are_not_equal(a in state(3), b in state(3)) {
        let ab = equal_up_to_global_phase(&a, &b, 1e-9).unwrap();
        let ba = equal_up_to_global_phase(&b, &a, 1e-9).unwrap();
        prop_assert_eq!(ab.equal, ba.equal);
    }

    #[test]
    fn spectral_synthesis_has_prescribed_eigenpairs(
        dim in 1usize..8,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
        vals in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 8),
    ) {
        let rows: Vec<Vec<C64>> = (0..dim)
            .map(|k| (0..dim).map(|j| C64::new(raw[k * 8 + j].0, raw[k * 8 + j].1)).collect())
            .collect();
        let frame = match gram_schmidt(rows) {
            Some(f) => f,
            None => return Ok(()),
        };
        let eigvals: Vec<C64> = vals[..dim].iter().map(|&(a, b)| C64::new(a, b)).collect();
        let m = spectral_synthesize(&frame, &eigvals).unwrap();
        for (v, lambda) in frame.iter().zip(&eigvals) {
            let mv = m.apply(v).unwrap();
            prop_assert!(mv.max_abs_diff(&v.scaled(*lambda)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn phase_frame_is_complete(dim in 1usize..=64, theta0 in -10.0f64..10.0) {
        let frame = build_phase_frame(&SpaceConfig::new(dim, theta0).unwrap());
        prop_assert!(frame.orthonormality_deviation() <= tol(dim));
        let sum = frame.resolution_of_identity();
        prop_assert!(sum.max_abs_diff(&OperatorMatrix::identity(dim)).unwrap() <= tol(dim));
    }

    #[test]
    fn commutator_closed_form_matches_direct(dim in 2usize..24, theta0 in -7.0f64..7.0) {
        let c = SpaceConfig::new(dim, theta0).unwrap();
        let direct = commutator(&hermitian_phase_operator(&c), &number_operator(&c)).unwrap();
        prop_assert!(direct.max_abs_diff(&commutator_closed_form(&c)).unwrap() <= tol(dim));
    }

    #[test]
    fn propagator_composes(dim in 1usize..16, omega in 0.1f64..5.0, t1 in -4.0f64..4.0, t2 in -4.0f64..4.0) {
        let c = SpaceConfig::new(dim, 0.0).unwrap();
        let u1 = time_evolution(&c, omega, t1).unwrap();
        let u2 = time_evolution(&c, omega, t2).unwrap();
        let u12 = time_evolution(&c, omega, t1 + t2).unwrap();
        prop_assert!(u1.mul(&u2).unwrap().max_abs_diff(&u12).unwrap() <= 1e-9);
    }

    #[test]
    fn cycle_power_is_scalar(dim in 1usize..=32, pick in 0usize..6, theta0 in -3.0f64..3.0) {
        let x = [-1.0, 0.0, 0.25, 0.5, 1.0, 1.5][pick];
        let c = SpaceConfig::new(dim, theta0).unwrap();
        let power = cycle_operator_power(&c, Eta::new(x).unwrap(), dim);
        let target = OperatorMatrix::scalar(dim, cis(-2.0 * PI * x));
        prop_assert!(power.max_abs_diff(&target).unwrap() <= tol(dim));
        let class = classify_operator(&power, tol(dim)).classification;
        let expected = if x.fract() == 0.0 {
            CycleClass::Identity
        } else if (x - 0.5).fract() == 0.0 {
            CycleClass::GlobalSignFlip
        } else {
            CycleClass::ScalarPhase
        };
        prop_assert_eq!(class, expected);
    }

    #[test]
    fn sign_dichotomy_follows_dimension_parity(dim in 2usize..40, omega in 0.2f64..4.0) {
        let c = SpaceConfig::new(dim, 0.0).unwrap();
        let outcome = classify_cycle(&c, omega).unwrap();
        if dim % 2 == 0 {
            prop_assert_eq!(outcome.classification, CycleClass::GlobalSignFlip);
        } else {
            prop_assert_eq!(outcome.classification, CycleClass::MixedPhases);
            // No scalar multiple of I comes within distance 1 of U(T).
            let u = time_evolution(&c, omega, 2.0 * PI / omega).unwrap();
            for k in 0..64 {
                let s = OperatorMatrix::scalar(dim, cis(2.0 * PI * k as f64 / 64.0));
                prop_assert!(u.max_abs_diff(&s).unwrap() >= 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn ladder_closure_and_recovery_with_user_profiles(
        dim in 1usize..12,
        theta0 in -3.0f64..3.0,
        x in -2.0f64..2.0,
        raw in prop::collection::vec(0.05f64..10.0, 12),
    ) {
        let c = SpaceConfig::new(dim, theta0).unwrap();
        let e = Eta::new(x).unwrap();
        let values = raw[..dim].to_vec();
        let profile = DeformationProfile::from_values(&c, values.clone()).unwrap();
        let ops = build_ladder_operators(&c, e, &profile).unwrap();
        let frame = build_generalized_frame(&c, e);
        let scale = 10.0 * tol(dim);

        let ada = frame.to_generalized(&ops.adag.mul(&ops.a).unwrap()).unwrap();
        let expect_ada = OperatorMatrix::diagonal(&values.iter().map(|&f| C64::new(f, 0.0)).collect::<Vec<_>>());
        prop_assert!(ada.max_abs_diff(&expect_ada).unwrap() <= scale);

        let aad = frame.to_generalized(&ops.a.mul(&ops.adag).unwrap()).unwrap();
        let rotated: Vec<C64> = (0..dim).map(|n| C64::new(values[(n + 1) % dim], 0.0)).collect();
        prop_assert!(aad.max_abs_diff(&OperatorMatrix::diagonal(&rotated)).unwrap() <= scale);

        let rec = recover_phase_operator(&ops.a, &profile, &frame).unwrap();
        prop_assert!(rec.max_abs_diff(&unitary_phase_operator(&c)).unwrap() <= scale);
    }
}

fn random(dim: usize, seed: u64) -> StateVector {
    pbphase::verify::random_states(dim, 1, seed).remove(0)
}
