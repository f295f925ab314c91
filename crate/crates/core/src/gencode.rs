//! Weight-class codes of length `n = 4(l-1)` for a level-`l` message.
//!
//! Message basis state `|i>` is encoded as the uniform superposition over the
//! class of strings with weight `2i` or `n - 2i`. Every class is closed under
//! bitwise complement, so deleting any qubit leaves an equal mixture of an
//! even-parity and an odd-parity pure state. Decoding measures the parity of
//! the received word and applies a recovery map built per outcome.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;

use crate::qstate::{
    self, check_dim, gram_deviation, max_modulus, sample_index, Matrix, Projector, PureState,
    QubitIndex, Vector,
};
use crate::{DensityMatrix, Error, Result, ASSERT_TOL, DEGENERATE_PROBABILITY};

/// Largest message level simulated densely (n = 12).
pub const MAX_LEVEL: usize = 4;

/// Code length `4(l-1)` for a level-`l` message.
pub const fn code_length(l: usize) -> usize {
    4 * (l - 1)
}

/// Parameters of the level-`l` code together with its weight classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParams {
    l: usize,
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl CodeParams {
    pub fn level(&self) -> usize {
        self.l
    }

    pub fn length(&self) -> usize {
        self.n
    }

    /// Basis indices of class `i`, ascending.
    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Dimension of the received (n-1)-qubit register.
    pub fn received_dim(&self) -> usize {
        1 << (self.n - 1)
    }
}

/// Enumerates the weight classes for level `l`, with `2 <= l <= MAX_LEVEL`.
pub fn weight_classes(l: usize) -> Result<CodeParams> {
    if l < 2 {
        return Err(Error::InvalidParams(format!("level {l} < 2")));
    }
    if l > MAX_LEVEL {
        return Err(Error::InvalidParams(format!(
            "level {l} exceeds the dense simulation limit {MAX_LEVEL}"
        )));
    }
    let n = code_length(l);
    let mut classes = vec![Vec::new(); l];
    for x in 0usize..1 << n {
        let w = x.count_ones() as usize;
        if w.is_multiple_of(2) {
            // Weight w is 2i or n - 2i for exactly the i below.
            classes[(w / 2).min((n - w) / 2)].push(x);
        }
    }
    Ok(CodeParams { l, n, classes })
}

/// Encoder `sum_i c_i |i>  ->  sum_i c_i |A_i> / sqrt|A_i|`.
pub fn encode_general(message: &PureState, params: &CodeParams) -> Result<PureState> {
    check_dim(params.l, message.dim())?;
    let mut v = Vector::zeros(1 << params.n);
    for (i, class) in params.classes.iter().enumerate() {
        let a = message.amplitude(i) / (class.len() as f64).sqrt();
        for &x in class {
            v[x] = a;
        }
    }
    PureState::new(v)
}

/// Parity measurement `[even, odd]` on `m` qubits.
///
/// # Panics
/// If `m == 0`.
pub fn parity_projectors(m: usize) -> [Projector; 2] {
    assert!(m >= 1, "parity measurement needs at least one qubit");
    let dim = 1usize << m;
    let with_parity = |p: u32| {
        Projector::from_basis(dim, (0..dim).filter(move |x| x.count_ones() % 2 == p))
            .expect("indices in range")
    };
    [with_parity(0), with_parity(1)]
}

/// Map from the parity-`outcome` received subspace onto the message space.
///
/// Stored as the `l x 2^(n-1)` matrix `sum_i |i><u_i|`, where `u_i` is the
/// post-measurement state left by message `|i>`.
#[derive(Clone, Debug)]
pub struct RecoveryIsometry {
    outcome: usize,
    matrix: Matrix,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl RecoveryIsometry {
    pub fn outcome(&self) -> usize {
        self.outcome
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `max |R R^dagger - I|` on the message space.
    pub fn coisometry_deviation(&self) -> f64 {
        let l = self.matrix.nrows();
        max_modulus(&(&self.matrix * self.matrix.adjoint() - Matrix::identity(l, l)))
    }

    /// `R rho R^dagger`, summing only over the support of each row.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<Matrix> {
        check_dim(self.matrix.ncols(), rho.dim())?;
        let m = rho.matrix();
        let l = self.rows.len();
        Ok(Matrix::from_fn(l, l, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(y, ry) in &self.rows[j] {
                let ry = ry.conj();
                for &(x, rx) in &self.rows[i] {
                    acc += rx * m[(x, y)] * ry;
                }
            }
            acc
        }))
    }
}

/// Builds the recovery map for `outcome` by deleting qubit 1 from each
/// encoded basis message and post-selecting the parity measurement.
pub fn build_recovery(params: &CodeParams, outcome: usize) -> Result<RecoveryIsometry> {
    let projectors = parity_projectors(params.n - 1);
    let mut family = Vec::with_capacity(params.l);
    for i in 0..params.l {
        let codeword = encode_general(&PureState::basis(params.l, i), params)?;
        let deleted = codeword.delete_qubit(QubitIndex::new(1))?;
        let m = qstate::measure_forced(&deleted, &projectors, outcome)?;
        // Codeword amplitudes are real positive, and to_pure fixes the same
        // phase convention, so relative phases between messages survive.
        family.push(m.post_state.to_pure(ASSERT_TOL)?);
    }
    let deviation = gram_deviation(&family)?;
    if deviation > ASSERT_TOL {
        return Err(Error::NotOrthonormal(deviation));
    }
    let dim = params.received_dim();
    let matrix = Matrix::from_fn(params.l, dim, |i, x| family[i].amplitude(x).conj());
    let rows = family
        .iter()
        .map(|u| {
            u.amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm_sqr() > 0.0)
                .map(|(x, a)| (x, a.conj()))
                .collect()
        })
        .collect();
    Ok(RecoveryIsometry {
        outcome,
        matrix,
        rows,
    })
}

/// Cached recovery map for `(params.level(), outcome)`.
pub fn recovery(params: &CodeParams, outcome: usize) -> Result<&'static RecoveryIsometry> {
    static CACHE: [OnceLock<RecoveryIsometry>; 2 * (MAX_LEVEL - 1)] =
        [const { OnceLock::new() }; 2 * (MAX_LEVEL - 1)];
    if outcome > 1 {
        return Err(Error::InvalidParams(format!("outcome {outcome}")));
    }
    let cell = &CACHE[2 * (params.l - 2) + outcome];
    if let Some(r) = cell.get() {
        return Ok(r);
    }
    let built = build_recovery(params, outcome)?;
    Ok(cell.get_or_init(|| built))
}

/// Result of a general decoding run.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralDecoded {
    pub state: PureState,
    pub outcome: usize,
    pub probability: f64,
}

/// Parity measurement followed by the matching recovery map.
#[derive(Clone, Debug)]
pub struct GeneralDecoder {
    params: CodeParams,
    projectors: [Projector; 2],
    recoveries: [&'static RecoveryIsometry; 2],
    purity_tol: f64,
}

impl GeneralDecoder {
    pub fn new(params: CodeParams) -> Result<Self> {
        let recoveries = [recovery(&params, 0)?, recovery(&params, 1)?];
        Ok(Self {
            projectors: parity_projectors(params.n - 1),
            params,
            recoveries,
            purity_tol: ASSERT_TOL,
        })
    }

    pub fn with_purity_tol(mut self, tol: f64) -> Self {
        self.purity_tol = tol;
        self
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn decode<R: Rng + ?Sized>(
        &self,
        rho: &DensityMatrix,
        rng: &mut R,
    ) -> Result<GeneralDecoded> {
        check_dim(self.params.received_dim(), rho.dim())?;
        let probabilities = self
            .projectors
            .iter()
            .map(|p| p.probability(rho))
            .collect::<Result<Vec<_>>>()?;
        self.decode_forced(rho, sample_index(&probabilities, rng))
    }

    pub fn decode_forced(&self, rho: &DensityMatrix, outcome: usize) -> Result<GeneralDecoded> {
        check_dim(self.params.received_dim(), rho.dim())?;
        let projector = self
            .projectors
            .get(outcome)
            .ok_or_else(|| Error::InvalidParams(format!("outcome {outcome}")))?;
        let probability = projector.probability(rho)?;
        if probability < DEGENERATE_PROBABILITY {
            return Err(Error::DegenerateOutcome {
                outcome,
                probability,
            });
        }
        // Rows of R lie in the parity subspace, so R P rho P R^dagger equals
        // R rho R^dagger and the post-measurement matrix is never formed.
        let recovered = self.recoveries[outcome].apply(rho)?.unscale(probability);
        let state = DensityMatrix::from_matrix_unchecked(recovered).to_pure(self.purity_tol)?;
        Ok(GeneralDecoded {
            state,
            outcome,
            probability,
        })
    }
}

/// One-shot general decoder with sampled measurement outcome.
pub fn decode_general<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    params: &CodeParams,
    rng: &mut R,
) -> Result<PureState> {
    GeneralDecoder::new(params.clone())?
        .decode(rho, rng)
        .map(|d| d.state)
}
