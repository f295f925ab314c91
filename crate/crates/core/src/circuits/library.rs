//! Encoder and decoder circuits for the four-qubit code.

use num_complex::Complex64;

use super::{Circuit, Gate, GateKind};
use crate::q4code;
use crate::qstate::{self, check_dim, complete_unitary, Matrix, PureState, Tensor, Vector};
use crate::{DensityMatrix, Error, Result, ASSERT_TOL};

/// Four-qubit encoder: message on qubit 1, qubits 2-4 start in `|000>`.
///
/// The first two layers (`CU 1 2`, then `CV 2 1` and `H 3`) prepare the
/// weight pattern; the four CNOTs then send `|x1 x2 x3 x4>` to
/// `|x1+x3, x2+x3, x3, x4+x1+x2+x3>`, ending with `CX 3 1`.
pub fn encoder_circuit() -> Circuit {
    let gates = [
        Gate::controlled(GateKind::U, 1, 2),
        Gate::controlled(GateKind::V, 2, 1),
        Gate::single(GateKind::H, 3),
        Gate::cx(3, 2),
        Gate::cx(2, 4),
        Gate::cx(1, 4),
        Gate::cx(3, 1),
    ];
    Circuit::from_gates(4, gates.into_iter().map(|g| g.expect("valid gate")))
        .expect("indices in range")
}

/// Reference map for [`encoder_circuit`]: `phi (x) |000>  ->  En4(phi)`.
///
/// Inputs with weight outside the `|.000>` subspace are rejected.
pub fn encoder_reference(input: &PureState) -> Result<PureState> {
    check_dim(16, input.dim())?;
    let (alpha, beta) = (input.amplitude(0b0000), input.amplitude(0b1000));
    let leak = (1.0 - alpha.norm_sqr() - beta.norm_sqr()).abs();
    if leak > ASSERT_TOL {
        return Err(Error::SupportLeak(leak));
    }
    let phi = PureState::normalized(Vector::from_column_slice(&[alpha, beta]))?;
    Ok(q4code::encode4(&phi)?.into_state())
}

/// Three-qubit unitary keeping `|000>` and sending
/// `(|011> + |101> + |110>)/sqrt3` to `|100>`, completed in lexicographic order.
pub fn decoder_step1_circuit() -> Matrix {
    let s = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut weight_two = Vector::zeros(8);
    for x in [0b011, 0b101, 0b110] {
        weight_two[x] = s;
    }
    let pairs = [
        (PureState::ket("000"), PureState::ket("000")),
        (
            PureState::normalized(weight_two).expect("nonzero"),
            PureState::ket("100"),
        ),
    ];
    complete_unitary(&pairs, 8).expect("pinned vectors are orthonormal")
}

/// Six CNOTs writing the parity of qubits 1-3 into ancilla 4 and, when it is
/// odd, complementing qubits 1-3.
pub fn parity_fold_circuit() -> Circuit {
    let gates = [(1, 4), (2, 4), (3, 4), (4, 1), (4, 2), (4, 3)];
    Circuit::from_gates(4, gates.map(|(c, t)| Gate::cx(c, t).expect("valid gate")))
        .expect("indices in range")
}

/// Measurement-free decoder on three received qubits plus ancilla qubit 4.
#[derive(Clone, Debug)]
pub struct FullDecoder {
    pub fold: Circuit,
    /// Acts on qubits 1-3 after the fold.
    pub recovery: Matrix,
}

impl FullDecoder {
    pub fn unitary(&self) -> Matrix {
        self.recovery.tensor(&Matrix::identity(2, 2)) * self.fold.unitary()
    }

    /// Runs the decoder on a received three-qubit state with the ancilla in `|0>`.
    pub fn apply(&self, received: &DensityMatrix) -> Result<DensityMatrix> {
        check_dim(8, received.dim())?;
        let input = received.tensor(&PureState::ket("0").to_density());
        qstate::apply_operator(&input, &self.unitary())
    }
}

pub fn decoder_full_circuit() -> FullDecoder {
    FullDecoder {
        fold: parity_fold_circuit(),
        recovery: decoder_step1_circuit(),
    }
}

/// Largest distance between circuit output and reference output over
/// `inputs`, after fitting one global phase per input.
pub fn check_equivalence<F>(circuit: &Circuit, reference: F, inputs: &[PureState]) -> Result<f64>
where
    F: Fn(&PureState) -> Result<PureState>,
{
    let mut worst: f64 = 0.0;
    for input in inputs {
        let out = circuit.simulate(input)?;
        let expected = reference(input)?;
        check_dim(out.dim(), expected.dim())?;
        let overlap = expected.inner(&out)?;
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let diff = out.amplitudes() - expected.amplitudes().map(|a| a * phase);
        worst = worst.max(diff.norm());
    }
    Ok(worst)
}
