//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use qdel_core::circuits::{
    check_equivalence, decoder_full_circuit, encoder_circuit, encoder_reference,
};
use qdel_core::gencode::{
    encode_general, parity_projectors, recovery, weight_classes, GeneralDecoder,
};
use qdel_core::q4code::{deletion_mixture, encode4, Decoder4, Step3Variant};
use qdel_core::qstate::{
    basis_index, gram_deviation, measure_forced, partial_trace, random, reduced_state,
    DensityMatrix, PureState, QubitIndex, Tensor,
};
use qdel_core::{trial_rng, Complex64, Matrix};
use rand_chacha::ChaCha8Rng;

use common::{max_abs, partial_trace_oracle};

const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    trial_rng(SEED, stream)
}

/// `|<phi|psi>|^2`, computed directly from the amplitudes.
fn overlap(phi: &PureState, psi: &PureState) -> f64 {
    phi.amplitudes()
        .iter()
        .zip(psi.amplitudes().iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .norm_sqr()
}

/// `<phi|rho|phi>`.
fn expectation(phi: &PureState, rho: &DensityMatrix) -> f64 {
    let v = phi.amplitudes();
    (v.adjoint() * rho.matrix() * v)[(0, 0)].re
}

fn state_from(pairs: &[(&str, f64)]) -> PureState {
    let n = pairs[0].0.len();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (k, a) in pairs {
        amps[basis_index(k).unwrap()] = Complex64::new(*a, 0.0);
    }
    PureState::from_amplitudes(&amps).unwrap()
}

fn round_trip_q4(variant: Step3Variant) -> Outcome {
    let start = Instant::now();
    let decoder = Decoder4::new(variant);
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let phi = random::haar_qubit(&mut rng);
        let code = encode4(&phi).map_err(|e| e.to_string())?;
        for i in 1..=4 {
            let received =
                partial_trace(&code.to_density(), QubitIndex::new(i)).map_err(|e| e.to_string())?;
            for outcome in 0..2 {
                let decoded = decoder
                    .decode_forced(&received, outcome)
                    .map_err(|e| format!("position {i}, outcome {outcome}: {e}"))?;
                worst = worst.max(1.0 - overlap(&phi, &decoded.state));
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-9, || {
        format!("max infidelity {worst:.3e} > 1e-9")
    })?;
    ensure(elapsed < Duration::from_secs(5), || {
        format!("runtime {elapsed:.2?} exceeds 5 s")
    })?;
    Ok(format!("max infidelity {worst:.3e}, {elapsed:.2?}"))
}

/// Closed form of the post-deletion state, written out from the basis strings.
fn mixture_oracle(phi: &PureState) -> DensityMatrix {
    let (a, b) = (phi.amplitude(0), phi.amplitude(1));
    let s = b / 3f64.sqrt();
    let mut even = vec![Complex64::new(0.0, 0.0); 8];
    let mut odd = even.clone();
    even[0b000] = a;
    odd[0b111] = a;
    for x in [0b011, 0b101, 0b110] {
        even[x] = s;
    }
    for x in [0b001, 0b010, 0b100] {
        odd[x] = s;
    }
    let (even, odd) = (
        PureState::from_amplitudes(&even).unwrap(),
        PureState::from_amplitudes(&odd).unwrap(),
    );
    DensityMatrix::mixture(&[(0.5, &even), (0.5, &odd)]).unwrap()
}

fn deletion_mixture_check(_variant: Step3Variant) -> Outcome {
    let mut rng = rng(2);
    let mut worst_closed: f64 = 0.0;
    let mut worst_equal: f64 = 0.0;
    for _ in 0..200 {
        let phi = random::haar_qubit(&mut rng);
        let code = encode4(&phi).map_err(|e| e.to_string())?.to_density();
        let oracle = mixture_oracle(&phi);
        let library = deletion_mixture(&phi).map_err(|e| e.to_string())?;
        worst_closed = worst_closed.max(max_abs(&(oracle.matrix() - library.matrix())));
        let first = partial_trace(&code, QubitIndex::new(1)).map_err(|e| e.to_string())?;
        for i in 1..=4 {
            let d = partial_trace(&code, QubitIndex::new(i)).map_err(|e| e.to_string())?;
            worst_closed = worst_closed.max(max_abs(&(d.matrix() - oracle.matrix())));
            worst_equal = worst_equal.max(max_abs(&(d.matrix() - first.matrix())));
        }
    }
    ensure(worst_closed <= 1e-12, || {
        format!("closed-form deviation {worst_closed:.3e} > 1e-12")
    })?;
    ensure(worst_equal <= 1e-12, || {
        format!("position dependence {worst_equal:.3e} > 1e-12")
    })?;
    Ok(format!(
        "closed form {worst_closed:.3e}, across positions {worst_equal:.3e}"
    ))
}

fn encoder_equivalence() -> Outcome {
    let circuit = encoder_circuit();
    let mut rng = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let phi = random::haar_qubit(&mut rng);
        let input = phi.tensor(&PureState::ket("000"));
        let out = circuit.simulate(&input).map_err(|e| e.to_string())?;
        let want = encode4(&phi).map_err(|e| e.to_string())?.into_state();
        worst = worst.max((out.amplitudes() - want.amplitudes()).norm());
    }
    ensure(worst <= 1e-10, || {
        format!("encoder deviation {worst:.3e} > 1e-10")
    })?;

    let table = [
        ("0000", "0000"),
        ("0010", "1111"),
        ("1000", "1001"),
        ("1010", "0110"),
        ("0100", "0101"),
        ("0110", "1010"),
        ("1100", "1100"),
        ("1110", "0011"),
    ];
    let tail = circuit.suffix(3);
    for (from, to) in table {
        let out = tail
            .simulate(&PureState::ket(from))
            .map_err(|e| e.to_string())?;
        let dev = (out.amplitudes() - PureState::ket(to).amplitudes()).norm();
        ensure(dev <= 1e-12, || {
            format!("CNOT row {from} -> {to} off by {dev:.3e}")
        })?;
    }

    let head = circuit.prefix(3);
    let h = 0.5f64.sqrt();
    let s = 1.0 / 6f64.sqrt();
    let displays = [
        ("0000", state_from(&[("0000", h), ("0010", h)])),
        (
            "1000",
            state_from(&[
                ("1000", s),
                ("1010", s),
                ("0100", s),
                ("0110", s),
                ("1100", s),
                ("1110", s),
            ]),
        ),
    ];
    for (from, want) in displays {
        let out = head
            .simulate(&PureState::ket(from))
            .map_err(|e| e.to_string())?;
        let dev = (out.amplitudes() - want.amplitudes())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        ensure(dev <= 1e-12, || {
            format!("intermediate state from {from} off by {dev:.3e}")
        })?;
    }
    Ok(format!(
        "max deviation {worst:.3e}, 8 table rows, 2 displays"
    ))
}

fn full_decoder() -> Outcome {
    let decoder = decoder_full_circuit();
    let mut rng = rng(4);
    let half = DensityMatrix::maximally_mixed(2);
    let (mut worst_fid, mut worst_anc): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let phi = random::haar_qubit(&mut rng);
        let code = encode4(&phi).map_err(|e| e.to_string())?;
        for i in 1..=4 {
            let received = code
                .state()
                .delete_qubit(QubitIndex::new(i))
                .map_err(|e| e.to_string())?;
            let out = decoder.apply(&received).map_err(|e| e.to_string())?;
            let first = reduced_state(&out, &[QubitIndex::new(1)]).map_err(|e| e.to_string())?;
            let ancilla = reduced_state(&out, &[QubitIndex::new(4)]).map_err(|e| e.to_string())?;
            worst_fid = worst_fid.max(1.0 - expectation(&phi, &first));
            worst_anc = worst_anc.max(max_abs(&(ancilla.matrix() - half.matrix())));
        }
    }
    ensure(worst_fid <= 1e-10, || {
        format!("qubit 1 infidelity {worst_fid:.3e} > 1e-10")
    })?;
    ensure(worst_anc <= 1e-10, || {
        format!("ancilla deviation {worst_anc:.3e} > 1e-10")
    })?;
    Ok(format!(
        "max infidelity {worst_fid:.3e}, ancilla deviation {worst_anc:.3e}"
    ))
}

fn permutation_symmetry() -> Outcome {
    let mut rng = rng(5);
    let decoder = Decoder4::default();
    let (mut worst_fix, mut worst_dec): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let phi = random::haar_qubit(&mut rng);
        let code = encode4(&phi).map_err(|e| e.to_string())?.into_state();
        for perm in (1..=4).permutations(4) {
            let moved = code.permute_qubits(&perm).map_err(|e| e.to_string())?;
            worst_fix = worst_fix.max((moved.amplitudes() - code.amplitudes()).norm());
        }
        for i in 1..=4 {
            let received = code
                .delete_qubit(QubitIndex::new(i))
                .map_err(|e| e.to_string())?;
            for perm in (1..=3).permutations(3) {
                let moved = received.permute_qubits(&perm).map_err(|e| e.to_string())?;
                for outcome in 0..2 {
                    let decoded = decoder
                        .decode_forced(&moved, outcome)
                        .map_err(|e| format!("permutation {perm:?}: {e}"))?;
                    worst_dec = worst_dec.max(1.0 - overlap(&phi, &decoded.state));
                }
            }
        }
    }
    ensure(worst_fix <= 1e-12, || {
        format!("codeword moved by {worst_fix:.3e} under a permutation")
    })?;
    ensure(worst_dec <= 1e-9, || {
        format!("decoding after permutation infidelity {worst_dec:.3e}")
    })?;
    Ok(format!(
        "24 permutations within {worst_fix:.3e}, permuted decoding infidelity {worst_dec:.3e}"
    ))
}

fn general_family() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for l in 2..=4 {
        let params = weight_classes(l).map_err(|e| e.to_string())?;
        let n = params.length();
        let projectors = parity_projectors(n - 1);

        // Each position and outcome gives its own family u_k; all must be orthonormal.
        let mut worst_gram: f64 = 0.0;
        let basis: Vec<PureState> = (0..l)
            .map(|k| encode_general(&PureState::basis(l, k), &params))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for i in 1..=n {
            let deleted: Vec<DensityMatrix> = basis
                .iter()
                .map(|c| c.delete_qubit(QubitIndex::new(i)))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for outcome in 0..2 {
                let family: Vec<PureState> = deleted
                    .iter()
                    .map(|d| {
                        measure_forced(d, &projectors, outcome)
                            .and_then(|m| m.post_state.to_pure(1e-10))
                    })
                    .collect::<Result<_, _>>()
                    .map_err(|e| format!("l={l}, position {i}: {e}"))?;
                worst_gram = worst_gram.max(gram_deviation(&family).map_err(|e| e.to_string())?);
            }
        }
        for outcome in 0..2 {
            let r = recovery(&params, outcome).map_err(|e| e.to_string())?;
            worst_gram = worst_gram.max(r.coisometry_deviation());
        }
        ensure(worst_gram <= 1e-10, || {
            format!("l={l}: Gram deviation {worst_gram:.3e} > 1e-10")
        })?;

        let decoder = GeneralDecoder::new(params.clone()).map_err(|e| e.to_string())?;
        let mut rng = rng(6 + l as u64);
        let mut worst: f64 = 0.0;
        let mut received = DensityMatrix::maximally_mixed(1);
        for _ in 0..100 {
            let message = random::haar_state(l, &mut rng);
            let code = encode_general(&message, &params).map_err(|e| e.to_string())?;
            for i in 1..=n {
                code.delete_qubit_into(QubitIndex::new(i), &mut received)
                    .map_err(|e| e.to_string())?;
                for outcome in 0..2 {
                    let decoded = decoder
                        .decode_forced(&received, outcome)
                        .map_err(|e| format!("l={l}, position {i}, outcome {outcome}: {e}"))?;
                    worst = worst.max(1.0 - overlap(&message, &decoded.state));
                }
            }
        }
        ensure(worst <= 1e-9, || {
            format!("l={l}: max infidelity {worst:.3e} > 1e-9")
        })?;
        summary.push(format!(
            "l={l} n={n} infidelity {worst:.1e} gram {worst_gram:.1e}"
        ));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("runtime {elapsed:.2?} exceeds 60 s")
    })?;
    Ok(format!("{}; {elapsed:.2?}", summary.join("; ")))
}

fn parameter_accounting() -> Outcome {
    for k in 1..=4u32 {
        let l = 1usize << k;
        let n = 4 * (l - 1);
        ensure(n == (1usize << (k + 2)) - 4, || format!("k={k}: n={n}"))?;
        if l <= qdel_core::gencode::MAX_LEVEL {
            let params = weight_classes(l).map_err(|e| e.to_string())?;
            ensure(params.length() == n, || {
                format!("k={k}: library length {} != {n}", params.length())
            })?;
        }
        ensure(qdel_core::gencode::code_length(l) == n, || {
            format!("k={k}: code_length({l}) != {n}")
        })?;
    }
    Ok("n = 4, 12, 28, 60 for k = 1..4".into())
}

fn oracle_equivalence() -> Outcome {
    let mut rng = rng(11);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = 2 + trial % 3;
        let rho = random::random_density(1 << n, &mut rng);
        for i in 1..=n {
            let got = partial_trace(&rho, QubitIndex::new(i)).map_err(|e| e.to_string())?;
            let want: Matrix = partial_trace_oracle(rho.matrix(), n, i);
            worst = worst.max(max_abs(&(got.matrix() - want)));
        }
    }
    ensure(worst <= 1e-12, || {
        format!("oracle deviation {worst:.3e} > 1e-12")
    })?;
    Ok(format!("max deviation {worst:.3e}"))
}

fn mutation_sensitivity() -> Outcome {
    let circuit = encoder_circuit();
    let mut rng = rng(12);
    let mut inputs = vec![PureState::ket("0000"), PureState::ket("1000")];
    inputs.extend((0..20).map(|_| random::haar_qubit(&mut rng).tensor(&PureState::ket("000"))));
    let cnots: Vec<usize> = circuit
        .gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.control.is_some() && g.kind.name() == Some("X"))
        .map(|(k, _)| k)
        .collect();
    ensure(cnots.len() == 4, || {
        format!("expected 4 CNOTs, found {}", cnots.len())
    })?;
    let baseline =
        check_equivalence(&circuit, encoder_reference, &inputs).map_err(|e| e.to_string())?;
    ensure(baseline <= 1e-10, || {
        format!("unmutated deviation {baseline:.3e}")
    })?;
    let mut weakest = f64::INFINITY;
    for k in cnots {
        let mutant = circuit.without_gate(k);
        let dev =
            check_equivalence(&mutant, encoder_reference, &inputs).map_err(|e| e.to_string())?;
        ensure(dev > 0.1, || {
            format!(
                "dropping gate {} leaves deviation {dev:.3e}",
                circuit.gates()[k]
            )
        })?;
        weakest = weakest.min(dev);
    }
    Ok(format!("smallest mutant deviation {weakest:.3}"))
}

fn variant_robustness() -> Outcome {
    let mut parts = Vec::new();
    for variant in [Step3Variant::Literal, Step3Variant::Corrected] {
        let a = round_trip_q4(variant).map_err(|e| format!("{variant:?} round trip: {e}"))?;
        let b = deletion_mixture_check(variant).map_err(|e| format!("{variant:?} mixture: {e}"))?;
        parts.push(format!("{variant:?}: {a}; {b}"));
    }
    Ok(parts.join(" | "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("round trip, four-qubit code", || {
            round_trip_q4(Step3Variant::default())
        }),
        ("post-deletion mixture", || {
            deletion_mixture_check(Step3Variant::default())
        }),
        ("encoder circuit", encoder_equivalence),
        ("measurement-free decoder", full_decoder),
        ("permutation symmetry", permutation_symmetry),
        ("generalized family", general_family),
        ("parameter accounting", parameter_accounting),
        ("partial trace oracle", oracle_equivalence),
        ("mutation sensitivity", mutation_sensitivity),
        ("step 3 variants", variant_robustness),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(reason) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {reason}", k + 1);
            }
        }
    }
    if failures == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: {failures} of {} criteria failed",
            criteria.len()
        );
        ExitCode::FAILURE
    }
}
