use num_complex::Complex64;
use proptest::prelude::*;

use spinring::analysis::{all_cluster_sums, classify_periodicity, reduced_bloch, sum_rule_check};
use spinring::network::{run_from, NetworkConfig};
use spinring::primitives::{evolve_primitive, SignPattern};
use spinring::statevec::{AgentType, Lambda, OperatorString, Sign, StateVector};

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("non-zero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            let amps = v
                .into_iter()
                .map(|(a, b)| Complex64::new(a / norm, b / norm))
                .collect();
            StateVector::from_amplitudes(amps).unwrap()
        })
}

fn sized_state(max: usize) -> impl Strategy<Value = StateVector> {
    (1..=max).prop_flat_map(state)
}

fn kind() -> impl Strategy<Value = AgentType> {
    prop_oneof![Just(AgentType::Zero), Just(AgentType::Pi)]
}

fn pattern(sites: usize) -> impl Strategy<Value = SignPattern> {
    prop::collection::vec(prop_oneof![Just(Sign::Plus), Just(Sign::Minus)], sites)
        .prop_map(SignPattern::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(psi in state(4), q in 0usize..4, e in 0usize..4, alpha in -7.0f64..7.0, k in kind()) {
        let mut s = psi.clone();
        s.apply_local_rotation(q, alpha).unwrap();
        if q != e {
            s.apply_qcnot(q, e, k).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qcnot_orders(psi in state(3), a in 0usize..3, e in 0usize..3) {
        prop_assume!(a != e);
        let mut s = psi.clone();
        for _ in 0..2 {
            s.apply_qcnot(a, e, AgentType::Zero).unwrap();
        }
        prop_assert!(s.distance(&psi) < 1e-12);
        let mut s = psi.clone();
        for _ in 0..4 {
            s.apply_qcnot(a, e, AgentType::Pi).unwrap();
        }
        prop_assert!(s.distance(&psi) < 1e-12);
        // Uπ has order exactly four on states with weight on the active branch.
        let mut s = psi.clone();
        for _ in 0..2 {
            s.apply_qcnot(a, e, AgentType::Pi).unwrap();
        }
        let mut flipped = psi.clone();
        flipped.apply_controlled_on_zero(a, e, &[[(-1.0).into(), 0.0.into()], [0.0.into(), (-1.0).into()]]).unwrap();
        prop_assert!(s.distance(&flipped) < 1e-12);
    }

    #[test]
    fn expectations_are_real_and_bounded(psi in sized_state(4), code in 0usize..256) {
        let n = psi.n_qubits();
        let factors: Vec<Lambda> = (0..n).map(|q| Lambda::from_index((code >> (2 * q)) & 3).unwrap()).collect();
        let z = psi.expectation_complex(&OperatorString::new(factors)).unwrap();
        prop_assert!(z.im.abs() < 1e-12);
        prop_assert!(z.re.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn sum_rule_and_cluster_bounds(psi in sized_state(5)) {
        let report = sum_rule_check(&psi).unwrap();
        prop_assert!(report.defect < 1e-9, "{report:?}");
        for c in all_cluster_sums(&psi).unwrap() {
            prop_assert!(c.y <= c.z + 1e-9, "{c:?}");
        }
    }

    #[test]
    fn reduced_bloch_inside_ball(psi in sized_state(4), q in 0usize..4) {
        prop_assume!(q < psi.n_qubits());
        prop_assert!(reduced_bloch(&psi, q).unwrap().length() <= 1.0 + 1e-12);
    }

    #[test]
    fn network_preserves_norm(psi in state(4), steps in 0usize..40, alpha in -4.0f64..4.0, k0 in kind(), k1 in kind()) {
        let config = NetworkConfig::uniform(&[k0, k1], 2, alpha);
        let out = run_from(&config, psi, steps, |_| {}).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn primitive_heads_stay_pure(p in (1usize..6).prop_flat_map(pattern), phi0 in -3.2f64..3.2, alpha in -4.0f64..4.0, k in kind()) {
        let t = evolve_primitive(&p, phi0, &[alpha], k, 60).unwrap();
        for b in &t.bloch_samples {
            prop_assert!((b.length() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn periodicity_ignores_global_phase(p in (1usize..4).prop_flat_map(pattern), phi0 in -3.2f64..3.2, phase in -3.2f64..3.2) {
        let t = evolve_primitive(&p, phi0, &[1.0], AgentType::Zero, 2 * p.len() * 16).unwrap();
        let rot = Complex64::from_polar(1.0, phase);
        let mut shifted = t.head_states.clone();
        for s in shifted.iter_mut().skip(1) {
            s[0] *= rot;
            s[1] *= rot;
        }
        let a = classify_periodicity(&t.head_states, 2 * p.len(), 16).unwrap();
        let b = classify_periodicity(&shifted, 2 * p.len(), 16).unwrap();
        prop_assert_eq!(a.classification, b.classification);
    }
}
