mod common;

use proptest::prelude::*;
use qdel_core::circuits::{parse_circuit, Circuit, Gate, GateKind};
use qdel_core::gencode::{encode_general, weight_classes};
use qdel_core::q4code::{deletion_mixture, encode4, DecoderBases};
use qdel_core::qstate::{measure_forced, partial_trace, random, DensityMatrix, QubitIndex, Tensor};
use qdel_core::trial_rng;

use common::{max_abs, partial_trace_oracle};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn partial_trace_keeps_trace_and_hermiticity(seed: u64, n in 2usize..=5, pos in 1usize..=5) {
        let pos = pos.min(n);
        let mut rng = trial_rng(seed, 0);
        let rho = random::random_density(1 << n, &mut rng);
        let out = partial_trace(&rho, QubitIndex::new(pos)).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(out.trace().im.abs() < 1e-12);
        let m = out.matrix();
        prop_assert!(max_abs(&(m - m.adjoint())) < 1e-12);
        prop_assert!(out.validate().is_ok());
    }

    #[test]
    fn partial_trace_is_linear(seed: u64, a in -2.0f64..2.0, b in -2.0f64..2.0, pos in 1usize..=3) {
        let mut rng = trial_rng(seed, 1);
        let rho = random::random_density(8, &mut rng);
        let sigma = random::random_density(8, &mut rng);
        let i = QubitIndex::new(pos);
        // Linear combinations need not be states, so the left side goes through
        // the entrywise oracle.
        let combo = rho.matrix().scale(a) + sigma.matrix().scale(b);
        let lhs = partial_trace_oracle(&combo, 3, pos);
        let rhs = partial_trace(&rho, i).unwrap().into_matrix().scale(a)
            + partial_trace(&sigma, i).unwrap().into_matrix().scale(b);
        prop_assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn partial_trace_factorizes_products(seed: u64, pos in 1usize..=3) {
        let mut rng = trial_rng(seed, 2);
        let parts: Vec<DensityMatrix> = (0..3).map(|_| random::random_density(2, &mut rng)).collect();
        let full = parts[0].tensor(&parts[1]).tensor(&parts[2]);
        let rest: Vec<&DensityMatrix> = parts
            .iter()
            .enumerate()
            .filter(|(k, _)| k + 1 != pos)
            .map(|(_, p)| p)
            .collect();
        let expected = rest[0].tensor(rest[1]);
        let got = partial_trace(&full, QubitIndex::new(pos)).unwrap();
        prop_assert!(got.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_matches_oracle(seed: u64, n in 2usize..=4, pos in 1usize..=4) {
        let pos = pos.min(n);
        let mut rng = trial_rng(seed, 3);
        let rho = random::random_density(1 << n, &mut rng);
        let got = partial_trace(&rho, QubitIndex::new(pos)).unwrap();
        let want = partial_trace_oracle(rho.matrix(), n, pos);
        prop_assert!(max_abs(&(got.matrix() - want)) < 1e-12);
    }

    #[test]
    fn measurement_probabilities_sum_to_one(seed: u64) {
        let mut rng = trial_rng(seed, 4);
        let rho = random::random_density(8, &mut rng);
        let projectors = DecoderBases::new().projectors();
        let total: f64 = (0..2)
            .map(|b| {
                let m = measure_forced(&rho, &projectors, b).unwrap();
                assert!(m.post_state.validate().is_ok());
                m.probability
            })
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn encoder_preserves_inner_products(seed: u64) {
        let mut rng = trial_rng(seed, 5);
        let phi = random::haar_qubit(&mut rng);
        let psi = random::haar_qubit(&mut rng);
        let lhs = encode4(&phi).unwrap().state().inner(encode4(&psi).unwrap().state()).unwrap();
        prop_assert!((lhs - phi.inner(&psi).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn general_encoder_preserves_inner_products(seed: u64, l in 2usize..=3) {
        let params = weight_classes(l).unwrap();
        let mut rng = trial_rng(seed, 6);
        let phi = random::haar_state(l, &mut rng);
        let psi = random::haar_state(l, &mut rng);
        let lhs = encode_general(&phi, &params)
            .unwrap()
            .inner(&encode_general(&psi, &params).unwrap())
            .unwrap();
        prop_assert!((lhs - phi.inner(&psi).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn deletion_is_position_independent_on_codewords(seed: u64) {
        let mut rng = trial_rng(seed, 7);
        let phi = random::haar_qubit(&mut rng);
        let code = encode4(&phi).unwrap().to_density();
        let first = partial_trace(&code, QubitIndex::new(1)).unwrap();
        for i in 2..=4 {
            let other = partial_trace(&code, QubitIndex::new(i)).unwrap();
            prop_assert!(first.max_abs_diff(&other).unwrap() < 1e-12);
        }
        prop_assert!(first.max_abs_diff(&deletion_mixture(&phi).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn general_codewords_are_permutation_invariant(seed: u64, perm in Just((1..=8).collect::<Vec<usize>>()).prop_shuffle()) {
        let params = weight_classes(3).unwrap();
        let mut rng = trial_rng(seed, 8);
        let message = random::haar_state(3, &mut rng);
        let code = encode_general(&message, &params).unwrap();
        prop_assert!(code.permute_qubits(&perm).unwrap().distance(&code).unwrap() < 1e-12);
    }

    #[test]
    fn simulation_preserves_norm(seed: u64, ops in prop::collection::vec((0u8..7, 1usize..=4, 1usize..=4), 0..24)) {
        let mut circuit = Circuit::new(4);
        for (kind, c, t) in ops {
            let gate = match kind {
                0 => Gate::single(GateKind::H, t),
                1 => Gate::single(GateKind::X, t),
                2 => Gate::single(GateKind::U, t),
                3 => Gate::single(GateKind::V, t),
                4 => Gate::controlled(GateKind::X, c, t),
                5 => Gate::controlled(GateKind::U, c, t),
                _ => Gate::controlled(GateKind::V, c, t),
            };
            if let Ok(g) = gate {
                circuit.push(g).unwrap();
            }
        }
        let mut rng = trial_rng(seed, 9);
        let input = random::haar_state(16, &mut rng);
        let out = circuit.simulate(&input).unwrap();
        prop_assert!((out.amplitudes().norm() - 1.0).abs() < 1e-12);

        let text = circuit.to_text().unwrap();
        prop_assert_eq!(parse_circuit(&text).unwrap(), circuit);
    }
}

#[test]
fn maximally_mixed_measurement_is_even() {
    let rho = DensityMatrix::maximally_mixed(8);
    let projectors = DecoderBases::new().projectors();
    for b in 0..2 {
        let m = measure_forced(&rho, &projectors, b).unwrap();
        assert!((m.probability - 0.5).abs() < 1e-15);
    }
}
