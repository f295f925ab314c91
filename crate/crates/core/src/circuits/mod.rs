//! Gate-level circuits over small qubit registers.
//!
//! A [`Circuit`] is an ordered list of single-qubit gates, each optionally
//! controlled by one other qubit. Controlled gates apply their 2x2 matrix to
//! the target when the control is `|1>` and act as identity otherwise.

mod library;
mod text;

pub use library::{
    check_equivalence, decoder_full_circuit, decoder_step1_circuit, encoder_circuit,
    encoder_reference, parity_fold_circuit, FullDecoder,
};
pub use text::{parse_circuit, ParseError, ParseErrorKind};

use std::fmt;

use num_complex::Complex64;

use crate::qstate::{self, check_dim, Matrix, PureState, QubitIndex, Vector};
use crate::{DensityMatrix, Error, Result, IDENTITY_TOL};

/// Row-major 2x2 matrix.
pub type Matrix2 = [[Complex64; 2]; 2];

const fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    /// Hadamard.
    H,
    /// Bit flip.
    X,
    /// `[[1/sqrt3, -sqrt2/sqrt3], [sqrt2/sqrt3, 1/sqrt3]]`.
    U,
    /// `[[1/sqrt2, 1/sqrt2], [-1/sqrt2, 1/sqrt2]]`.
    V,
    Custom(Matrix2),
}

impl GateKind {
    pub fn matrix(&self) -> Matrix2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            GateKind::H => [[re(h), re(h)], [re(h), re(-h)]],
            GateKind::X => [[re(0.0), re(1.0)], [re(1.0), re(0.0)]],
            GateKind::U => {
                let a = 1.0 / 3f64.sqrt();
                let b = (2.0f64 / 3.0).sqrt();
                [[re(a), re(-b)], [re(b), re(a)]]
            }
            GateKind::V => [[re(h), re(h)], [re(-h), re(h)]],
            GateKind::Custom(m) => *m,
        }
    }

    /// Mnemonic used by the text format; `None` for custom gates.
    pub fn name(&self) -> Option<&'static str> {
        match self {
            GateKind::H => Some("H"),
            GateKind::X => Some("X"),
            GateKind::U => Some("U"),
            GateKind::V => Some("V"),
            GateKind::Custom(_) => None,
        }
    }

    fn unitarity_deviation(&self) -> f64 {
        let m = self.matrix();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let dot: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).norm());
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: QubitIndex,
    pub control: Option<QubitIndex>,
}

impl Gate {
    pub fn new(kind: GateKind, target: QubitIndex, control: Option<QubitIndex>) -> Result<Self> {
        if control == Some(target) {
            return Err(Error::InvalidGate(format!(
                "control and target are both qubit {target}"
            )));
        }
        let deviation = kind.unitarity_deviation();
        if deviation > IDENTITY_TOL {
            return Err(Error::InvalidGate(format!(
                "matrix is not unitary (deviation {deviation:.3e})"
            )));
        }
        Ok(Self {
            kind,
            target,
            control,
        })
    }

    pub fn single(kind: GateKind, target: usize) -> Result<Self> {
        Self::new(kind, QubitIndex::new(target), None)
    }

    pub fn controlled(kind: GateKind, control: usize, target: usize) -> Result<Self> {
        Self::new(
            kind,
            QubitIndex::new(target),
            Some(QubitIndex::new(control)),
        )
    }

    pub fn cx(control: usize, target: usize) -> Result<Self> {
        Self::controlled(GateKind::X, control, target)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.kind.name().unwrap_or("custom");
        match self.control {
            Some(c) => write!(f, "C{name} {c} {}", self.target),
            None => write!(f, "{name} {}", self.target),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut circuit = Self::new(num_qubits);
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.target.shift(self.num_qubits)?;
        if let Some(c) = gate.control {
            c.shift(self.num_qubits)?;
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// The first `len` gates.
    pub fn prefix(&self, len: usize) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates[..len.min(self.gates.len())].to_vec(),
        }
    }

    /// The gates from `start` onwards.
    pub fn suffix(&self, start: usize) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates[start.min(self.gates.len())..].to_vec(),
        }
    }

    /// Copy with gate `index` removed.
    pub fn without_gate(&self, index: usize) -> Circuit {
        let mut gates = self.gates.clone();
        gates.remove(index);
        Circuit {
            num_qubits: self.num_qubits,
            gates,
        }
    }

    /// Applies the gates left to right.
    pub fn simulate(&self, input: &PureState) -> Result<PureState> {
        check_dim(1 << self.num_qubits, input.dim())?;
        let mut v = input.amplitudes().clone();
        for gate in &self.gates {
            self.apply_gate(gate, &mut v);
        }
        Ok(PureState::from_vector_unchecked(v))
    }

    fn apply_gate(&self, gate: &Gate, v: &mut Vector) {
        let n = self.num_qubits;
        let t = 1usize << (n - gate.target.position());
        let c = gate.control.map_or(0, |c| 1usize << (n - c.position()));
        let [[m00, m01], [m10, m11]] = gate.kind.matrix();
        for x in 0..v.len() {
            if x & t != 0 || x & c != c {
                continue;
            }
            let (a0, a1) = (v[x], v[x | t]);
            v[x] = m00 * a0 + m01 * a1;
            v[x | t] = m10 * a0 + m11 * a1;
        }
    }

    /// Full `2^n x 2^n` unitary; column `k` is the image of basis state `k`.
    pub fn unitary(&self) -> Matrix {
        let dim = 1usize << self.num_qubits;
        let mut u = Matrix::zeros(dim, dim);
        for k in 0..dim {
            let mut v = PureState::basis(dim, k).amplitudes().clone();
            for gate in &self.gates {
                self.apply_gate(gate, &mut v);
            }
            u.set_column(k, &v);
        }
        u
    }

    /// `U rho U^dagger`.
    pub fn apply_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        qstate::apply_operator(rho, &self.unitary())
    }

    /// Serializes to the line-oriented text format.
    pub fn to_text(&self) -> Result<String> {
        let mut out = format!("qubits {}\n", self.num_qubits);
        for g in &self.gates {
            if g.kind.name().is_none() {
                return Err(Error::NotPrintable(format!(
                    "custom gate on qubit {}",
                    g.target
                )));
            }
            out.push_str(&g.to_string());
            out.push('\n');
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_on_zero() {
        let c = Circuit::from_gates(1, [Gate::single(GateKind::H, 1).unwrap()]).unwrap();
        let out = c.simulate(&PureState::ket("0")).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(0) - re(h)).norm() < 1e-15);
        assert!((out.amplitude(1) - re(h)).norm() < 1e-15);
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let c = Circuit::from_gates(2, [Gate::cx(1, 2).unwrap()]).unwrap();
        assert_eq!(
            c.simulate(&PureState::ket("10")).unwrap(),
            PureState::ket("11")
        );
        assert_eq!(
            c.simulate(&PureState::ket("01")).unwrap(),
            PureState::ket("01")
        );
    }

    #[test]
    fn named_gates_are_unitary() {
        for kind in [GateKind::H, GateKind::X, GateKind::U, GateKind::V] {
            assert!(kind.unitarity_deviation() < 1e-15, "{kind:?}");
        }
        let bad = GateKind::Custom([[re(1.0), re(1.0)], [re(0.0), re(1.0)]]);
        assert!(matches!(Gate::single(bad, 1), Err(Error::InvalidGate(_))));
    }

    #[test]
    fn gate_validation() {
        assert!(Gate::cx(2, 2).is_err());
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push(Gate::cx(1, 3).unwrap()),
            Err(Error::QubitOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn custom_gates_cannot_be_printed() {
        let s = GateKind::Custom([[re(1.0), re(0.0)], [re(0.0), Complex64::new(0.0, 1.0)]]);
        let c = Circuit::from_gates(1, [Gate::single(s, 1).unwrap()]).unwrap();
        assert!(matches!(c.to_text(), Err(Error::NotPrintable(_))));
    }

    #[test]
    fn unitary_matches_simulation() {
        let c = encoder_circuit();
        let u = c.unitary();
        assert!(qstate::isometry_deviation(&u) < 1e-14);
        let input = PureState::ket("1000");
        let direct = c.simulate(&input).unwrap();
        let via_matrix = &u * input.amplitudes();
        assert!((direct.amplitudes() - via_matrix).norm() < 1e-15);
    }
}
