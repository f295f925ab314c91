//! The four-qubit single-deletion code.
//!
//! A qubit `alpha|0> + beta|1>` is encoded as
//! `alpha/sqrt2 (|0000> + |1111>) + beta/sqrt6 (sum of the six weight-2 kets)`.
//! Any single deletion leaves the equal mixture of an even-parity and an
//! odd-parity pure state, which the decoder separates with a parity
//! measurement and then rotates back onto the first qubit.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;

use crate::qstate::{
    self, basis_index, check_dim, complete_unitary, Matrix, Projector, PureState, QubitIndex,
    Vector,
};
use crate::{DensityMatrix, Error, Result, ASSERT_TOL};

/// Weight 0 and weight 4 strings.
pub const CLASS_A: [&str; 2] = ["0000", "1111"];
/// Weight 2 strings.
pub const CLASS_B: [&str; 6] = ["0011", "0101", "0110", "1001", "1010", "1100"];

/// Even-parity three-qubit strings, in the order the relabeling `F` uses.
pub const V0_BASIS: [&str; 4] = ["000", "011", "101", "110"];
/// Odd-parity strings; `V1_BASIS[k]` is sent to `V0_BASIS[k]` by `F`.
pub const V1_BASIS: [&str; 4] = ["111", "100", "010", "001"];

/// Principal cube root of unity `exp(2 pi i / 3)`.
pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Image of the last twisted vector under `G`.
///
/// The literal image of `|~001>` is `|011>`; `Corrected` uses `|001>`. Both
/// give isometries and agree on every state reached by decoding a codeword.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Step3Variant {
    #[default]
    Literal,
    Corrected,
}

impl Step3Variant {
    fn last_image(self) -> &'static str {
        match self {
            Step3Variant::Literal => "011",
            Step3Variant::Corrected => "001",
        }
    }
}

fn sum_of_kets(kets: &[&str], weight: Complex64) -> Vector {
    let dim = 1 << kets[0].len();
    let mut v = Vector::zeros(dim);
    for k in kets {
        v[basis_index(k).expect("bit string")] += weight;
    }
    v
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Fixed bases used by the decoder.
#[derive(Clone, Debug)]
pub struct DecoderBases {
    pub v0: [PureState; 4],
    pub v1: [PureState; 4],
    /// `|~100>`, `|~010>`, `|~001>`: discrete Fourier combinations of the
    /// weight-2 kets `|011>, |101>, |110>`.
    pub twisted: [PureState; 3],
}

impl DecoderBases {
    pub fn new() -> Self {
        let w = omega();
        let s = 1.0 / 3f64.sqrt();
        let fourier = |k: u32| {
            let amps = [w.powu(0), w.powu(k), w.powu(2 * k)];
            let mut v = Vector::zeros(8);
            for (ket, a) in ["011", "101", "110"].iter().zip(amps) {
                v[basis_index(ket).unwrap()] = a * s;
            }
            PureState::normalized(v).expect("nonzero")
        };
        Self {
            v0: V0_BASIS.map(PureState::ket),
            v1: V1_BASIS.map(PureState::ket),
            twisted: [fourier(0), fourier(1), fourier(2)],
        }
    }

    /// Parity measurement `{P0, P1}` onto `V0` and `V1`.
    pub fn projectors(&self) -> [Projector; 2] {
        let proj = |basis: [&str; 4]| {
            Projector::from_basis(8, basis.map(|k| basis_index(k).unwrap())).expect("in range")
        };
        [proj(V0_BASIS), proj(V1_BASIS)]
    }
}

impl Default for DecoderBases {
    fn default() -> Self {
        Self::new()
    }
}

/// A state in the image of [`encode4`].
#[derive(Clone, Debug, PartialEq)]
pub struct CodewordQ4 {
    state: PureState,
}

impl CodewordQ4 {
    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn into_state(self) -> PureState {
        self.state
    }

    pub fn to_density(&self) -> DensityMatrix {
        self.state.to_density()
    }
}

/// Norm of the component of `state` outside span{A-sum, B-sum}.
pub fn code_space_residual(state: &PureState) -> Result<f64> {
    check_dim(16, state.dim())?;
    let a = sum_of_kets(&CLASS_A, real(0.5f64.sqrt()));
    let b = sum_of_kets(&CLASS_B, real(1.0 / 6f64.sqrt()));
    let v = state.amplitudes();
    let projected = a.map(|x| x * a.dotc(v)) + b.map(|x| x * b.dotc(v));
    Ok((v - projected).norm())
}

/// Encoder `En4`.
pub fn encode4(phi: &PureState) -> Result<CodewordQ4> {
    check_dim(2, phi.dim())?;
    let (alpha, beta) = (phi.amplitude(0), phi.amplitude(1));
    let v = sum_of_kets(&CLASS_A, alpha / 2f64.sqrt()) + sum_of_kets(&CLASS_B, beta / 6f64.sqrt());
    Ok(CodewordQ4 {
        state: PureState::new(v)?,
    })
}

/// The even and odd pure components `(Phi0, Phi1)` of a deleted codeword.
pub fn deletion_components(phi: &PureState) -> Result<(PureState, PureState)> {
    check_dim(2, phi.dim())?;
    let (alpha, beta) = (phi.amplitude(0), phi.amplitude(1));
    let b3 = beta / 3f64.sqrt();
    let even = sum_of_kets(&["000"], alpha) + sum_of_kets(&["011", "101", "110"], b3);
    let odd = sum_of_kets(&["111"], alpha) + sum_of_kets(&["001", "010", "100"], b3);
    Ok((PureState::new(even)?, PureState::new(odd)?))
}

/// Closed form of `D_i(En4(phi))`: `(|Phi0><Phi0| + |Phi1><Phi1|) / 2`.
pub fn deletion_mixture(phi: &PureState) -> Result<DensityMatrix> {
    let (even, odd) = deletion_components(phi)?;
    let m = (even.to_density().into_matrix() + odd.to_density().into_matrix()).unscale(2.0);
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Unitary extending the relabeling `V1 -> V0`.
pub fn f_matrix() -> Matrix {
    let pairs: Vec<_> = V1_BASIS
        .iter()
        .zip(V0_BASIS)
        .map(|(s, t)| (PureState::ket(s), PureState::ket(t)))
        .collect();
    complete_unitary(&pairs, 8).expect("basis relabeling is orthonormal")
}

/// Unitary extending `G` from `V0`.
pub fn g_matrix(variant: Step3Variant) -> Matrix {
    let bases = DecoderBases::new();
    let [t100, t010, t001] = bases.twisted;
    let pairs = [
        (PureState::ket("000"), PureState::ket("000")),
        (t100, PureState::ket("100")),
        (t010, PureState::ket("010")),
        (t001, PureState::ket(variant.last_image())),
    ];
    complete_unitary(&pairs, 8).expect("twisted basis is orthonormal")
}

fn require_support(rho: &DensityMatrix, projector: &Projector) -> Result<()> {
    let leak = projector.leakage(rho)?;
    if leak > ASSERT_TOL {
        return Err(Error::SupportLeak(leak));
    }
    Ok(())
}

/// Step 2 map `F`, applied to a state supported on `V1`.
pub fn op_f(rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dim(8, rho.dim())?;
    require_support(rho, &DecoderBases::new().projectors()[1])?;
    qstate::apply_isometry(rho, &f_matrix())
}

/// Step 3 map `G`, applied to a state supported on `V0`.
pub fn op_g(rho: &DensityMatrix, variant: Step3Variant) -> Result<DensityMatrix> {
    check_dim(8, rho.dim())?;
    require_support(rho, &DecoderBases::new().projectors()[0])?;
    qstate::apply_isometry(rho, &g_matrix(variant))
}

/// Result of one decoding run.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub state: PureState,
    pub outcome: usize,
    /// Probability of the Step 1 outcome that occurred (or was forced).
    pub probability: f64,
}

/// Four-step decoder `De4` with precomputed operators.
#[derive(Clone, Debug)]
pub struct Decoder4 {
    variant: Step3Variant,
    purity_tol: f64,
    projectors: [Projector; 2],
    f: Matrix,
    g: Matrix,
}

impl Decoder4 {
    pub fn new(variant: Step3Variant) -> Self {
        Self {
            variant,
            purity_tol: ASSERT_TOL,
            projectors: DecoderBases::new().projectors(),
            f: f_matrix(),
            g: g_matrix(variant),
        }
    }

    pub fn with_purity_tol(mut self, tol: f64) -> Self {
        self.purity_tol = tol;
        self
    }

    pub fn variant(&self) -> Step3Variant {
        self.variant
    }

    pub fn projectors(&self) -> &[Projector; 2] {
        &self.projectors
    }

    /// Decodes with the Step 1 outcome sampled from `rng`.
    pub fn decode<R: Rng + ?Sized>(&self, rho: &DensityMatrix, rng: &mut R) -> Result<Decoded> {
        check_dim(8, rho.dim())?;
        let m = qstate::measure_projective(rho, &self.projectors, rng)?;
        self.finish(m)
    }

    /// Decodes with the Step 1 outcome post-selected to `outcome`.
    pub fn decode_forced(&self, rho: &DensityMatrix, outcome: usize) -> Result<Decoded> {
        check_dim(8, rho.dim())?;
        let m = qstate::measure_forced(rho, &self.projectors, outcome)?;
        self.finish(m)
    }

    fn finish(&self, m: qstate::Measurement) -> Result<Decoded> {
        let mut state = m.post_state;
        if m.outcome == 1 {
            state = qstate::apply_operator(&state, &self.f)?;
        }
        let state = qstate::apply_operator(&state, &self.g)?;
        let state = qstate::partial_trace(&state, QubitIndex::new(3))?;
        let state = qstate::partial_trace(&state, QubitIndex::new(2))?;
        Ok(Decoded {
            state: state.to_pure(self.purity_tol)?,
            outcome: m.outcome,
            probability: m.probability,
        })
    }
}

impl Default for Decoder4 {
    fn default() -> Self {
        Self::new(Step3Variant::default())
    }
}

/// Decoder `De4` with the literal Step 3 map and the default purity threshold.
pub fn decode4<R: Rng + ?Sized>(rho: &DensityMatrix, rng: &mut R) -> Result<PureState> {
    static DECODER: OnceLock<Decoder4> = OnceLock::new();
    let decoder = DECODER.get_or_init(Decoder4::default);
    decoder.decode(rho, rng).map(|d| d.state)
}
