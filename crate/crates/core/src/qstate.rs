//! Dense complex linear algebra for small qubit registers.
//!
//! Basis label `x1 x2 ... xn` maps to the integer whose most significant bit
//! is `x1`, so `|0110>` is index 6 and the left operand of a tensor product
//! occupies the high bits. Qubits are addressed with 1-based [`QubitIndex`]
//! values at every public interface.
//!
//! Everything here is dense; registers beyond [`MAX_DENSE_QUBITS`] are
//! rejected where a density matrix would be materialized.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result, ASSERT_TOL, DEGENERATE_PROBABILITY, IDENTITY_TOL};

pub type Matrix = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

/// Largest register for which a dense density matrix is built.
pub const MAX_DENSE_QUBITS: usize = 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// 1-based qubit position within a register.
///
/// Range is checked against the register when the index is used; position 0
/// is never valid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitIndex(usize);

impl QubitIndex {
    pub const fn new(position: usize) -> Self {
        Self(position)
    }

    pub const fn position(self) -> usize {
        self.0
    }

    /// Bit shift of this qubit inside a basis index of an `num_qubits` register.
    pub fn shift(self, num_qubits: usize) -> Result<usize> {
        if self.0 == 0 || self.0 > num_qubits {
            return Err(Error::QubitOutOfRange {
                index: self.0,
                num_qubits,
            });
        }
        Ok(num_qubits - self.0)
    }
}

impl std::fmt::Display for QubitIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of qubits of a register with `dim` basis states.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::NotQubitRegister(dim))
    }
}

/// Inserts bit `bit` at position `shift` of `index`, moving higher bits up.
#[inline]
pub(crate) fn insert_bit(index: usize, shift: usize, bit: usize) -> usize {
    let low = index & ((1 << shift) - 1);
    ((index >> shift) << (shift + 1)) | (bit << shift) | low
}

/// Parses a bit string such as `"0110"` into its basis index.
pub fn basis_index(bits: &str) -> Option<usize> {
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Some(acc << 1),
        '1' => Some((acc << 1) | 1),
        _ => None,
    })
}

/// Unit-norm amplitude vector.
///
/// Used both for qubit registers (dimension `2^n`) and level-`l` message
/// states (dimension `l`).
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vector,
}

impl PureState {
    /// Wraps an amplitude vector, rejecting it unless its norm is 1 within 1e-12.
    pub fn new(amplitudes: Vector) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || (norm - 1.0).abs() > IDENTITY_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_amplitudes(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(Vector::from_column_slice(amplitudes))
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vector) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || norm < DEGENERATE_PROBABILITY {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub(crate) fn from_vector_unchecked(amplitudes: Vector) -> Self {
        Self { amplitudes }
    }

    /// Computational basis state `|index>` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dimension {dim}"
        );
        let mut amplitudes = Vector::zeros(dim);
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    /// Register basis state from a bit string, e.g. `ket("0110")`.
    ///
    /// # Panics
    /// On characters other than `0` and `1`.
    pub fn ket(bits: &str) -> Self {
        let index = basis_index(bits).unwrap_or_else(|| panic!("not a bit string: {bits:?}"));
        Self::basis(1 << bits.len(), index)
    }

    /// Single-qubit state `alpha|0> + beta|1>`.
    pub fn qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::from_amplitudes(&[alpha, beta])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn num_qubits(&self) -> Result<usize> {
        qubits_for_dim(self.dim())
    }

    pub fn amplitudes(&self) -> &Vector {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Euclidean distance between amplitude vectors (no phase freedom).
    pub fn distance(&self, other: &PureState) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok((&self.amplitudes - &other.amplitudes).norm())
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    /// Traces out qubit `index` of `|self><self|` without forming the full
    /// density matrix of the register.
    pub fn delete_qubit(&self, index: QubitIndex) -> Result<DensityMatrix> {
        let mut out = DensityMatrix {
            matrix: Matrix::zeros(0, 0),
        };
        self.delete_qubit_into(index, &mut out)?;
        Ok(out)
    }

    /// Same as [`PureState::delete_qubit`], writing into `out` and reusing its
    /// allocation when the dimension already matches.
    pub fn delete_qubit_into(&self, index: QubitIndex, out: &mut DensityMatrix) -> Result<()> {
        let n = self.num_qubits()?;
        let shift = index.shift(n)?;
        if n < 2 {
            return Err(Error::QubitOutOfRange {
                index: index.position(),
                num_qubits: n,
            });
        }
        if n - 1 > MAX_DENSE_QUBITS {
            return Err(Error::RegisterTooLarge(n - 1));
        }
        let half = 1usize << (n - 1);
        let matrix = &mut out.matrix;
        if matrix.shape() == (half, half) {
            matrix.fill(ZERO);
        } else {
            *matrix = Matrix::zeros(half, half);
        }
        for bit in 0..2 {
            let support: Vec<(usize, Complex64)> = (0..half)
                .map(|r| (r, self.amplitudes[insert_bit(r, shift, bit)]))
                .filter(|(_, a)| a.norm_sqr() > 0.0)
                .collect();
            for &(c, ac) in &support {
                let ac = ac.conj();
                let mut column = matrix.column_mut(c);
                for &(r, ar) in &support {
                    column[r] += ar * ac;
                }
            }
        }
        Ok(())
    }

    /// Reorders qubits so that output qubit `j` carries input qubit `perm[j-1]`.
    ///
    /// `perm` holds 1-based positions and must be a permutation of `1..=n`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<PureState> {
        let n = self.num_qubits()?;
        let map = permutation_map(n, perm)?;
        let mut out = Vector::zeros(self.dim());
        for (x, &a) in self.amplitudes.iter().enumerate() {
            out[map[x]] = a;
        }
        Ok(PureState { amplitudes: out })
    }
}

/// Maps every basis index to its image under the qubit permutation.
fn permutation_map(n: usize, perm: &[usize]) -> Result<Vec<usize>> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "expected {n} entries, found {}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::InvalidPermutation(format!("{perm:?}")));
        }
        seen[p - 1] = true;
    }
    Ok((0..1usize << n)
        .map(|x| {
            perm.iter().enumerate().fold(0, |acc, (j, &src)| {
                let bit = (x >> (n - src)) & 1;
                acc | (bit << (n - 1 - j))
            })
        })
        .collect())
}

/// Positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace (1e-12) and eigenvalues >= -1e-10.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: Matrix::identity(dim, dim).unscale(dim as f64),
        }
    }

    /// Convex combination `sum_k w_k |psi_k><psi_k|`.
    pub fn mixture(components: &[(f64, &PureState)]) -> Result<Self> {
        let dim = components
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| Error::InvalidDensity("empty mixture".into()))?;
        let mut matrix = Matrix::zeros(dim, dim);
        for (w, s) in components {
            check_dim(dim, s.dim())?;
            matrix += s.to_density().matrix.scale(*w);
        }
        Self::new(matrix)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidDensity(format!(
                "shape {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let herm = max_modulus(&(m - m.adjoint()));
        if herm > IDENTITY_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian ({herm:.3e})")));
        }
        let trace = m.trace();
        if (trace - ONE).norm() > IDENTITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let min_eig = m.clone().symmetric_eigenvalues().min();
        if min_eig < -ASSERT_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_qubits(&self) -> Result<usize> {
        qubits_for_dim(self.dim())
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr(rho^2)`, computed as the squared Frobenius norm of a Hermitian matrix.
    pub fn purity(&self) -> f64 {
        self.matrix.norm_squared()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(max_modulus(&(&self.matrix - &other.matrix)))
    }

    /// Recovers `|psi>` from `rho = |psi><psi|`.
    ///
    /// Fails with [`Error::NotPure`] unless `Tr(rho^2) >= 1 - tol`. The global
    /// phase is fixed so that the largest-weight amplitude is real positive.
    pub fn to_pure(&self, tol: f64) -> Result<PureState> {
        let purity = self.purity();
        if purity < 1.0 - tol {
            return Err(Error::NotPure(purity));
        }
        let (pivot, weight) = (0..self.dim()).map(|k| (k, self.matrix[(k, k)].re)).fold(
            (0, f64::MIN),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
        let column = self.matrix.column(pivot).unscale(weight.sqrt());
        PureState::normalized(column)
    }

    pub fn permute_qubits(&self, perm: &[usize]) -> Result<DensityMatrix> {
        let n = self.num_qubits()?;
        let map = permutation_map(n, perm)?;
        let dim = self.dim();
        let mut out = Matrix::zeros(dim, dim);
        for c in 0..dim {
            for r in 0..dim {
                out[(map[r], map[c])] = self.matrix[(r, c)];
            }
        }
        Ok(DensityMatrix { matrix: out })
    }
}

/// Kronecker product with the left operand as the most significant qubits.
pub trait Tensor<Rhs = Self> {
    type Output;
    fn tensor(&self, rhs: &Rhs) -> Self::Output;
}

impl Tensor for PureState {
    type Output = PureState;
    fn tensor(&self, rhs: &PureState) -> PureState {
        PureState {
            amplitudes: self.amplitudes.kronecker(&rhs.amplitudes),
        }
    }
}

impl Tensor for DensityMatrix {
    type Output = DensityMatrix;
    fn tensor(&self, rhs: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kronecker(&rhs.matrix),
        }
    }
}

impl Tensor for Matrix {
    type Output = Matrix;
    fn tensor(&self, rhs: &Matrix) -> Matrix {
        self.kronecker(rhs)
    }
}

/// Free-function form of [`Tensor::tensor`].
pub fn tensor<T: Tensor>(a: &T, b: &T) -> T::Output {
    a.tensor(b)
}

/// `Tr_i(rho)`: sums out qubit `index`; the remaining qubits keep their order.
pub fn partial_trace(rho: &DensityMatrix, index: QubitIndex) -> Result<DensityMatrix> {
    let n = rho.num_qubits()?;
    let shift = index.shift(n)?;
    if n < 2 {
        return Err(Error::QubitOutOfRange {
            index: index.position(),
            num_qubits: n,
        });
    }
    let half = 1usize << (n - 1);
    let m = &rho.matrix;
    let out = Matrix::from_fn(half, half, |r, c| {
        let (r0, r1) = (insert_bit(r, shift, 0), insert_bit(r, shift, 1));
        let (c0, c1) = (insert_bit(c, shift, 0), insert_bit(c, shift, 1));
        m[(r0, c0)] + m[(r1, c1)]
    });
    Ok(DensityMatrix { matrix: out })
}

/// Single deletion error `D_i`, identical to [`partial_trace`].
pub fn delete_qubit(rho: &DensityMatrix, index: QubitIndex) -> Result<DensityMatrix> {
    partial_trace(rho, index)
}

/// Reduced state on `keep`, obtained by tracing out every other qubit.
pub fn reduced_state(rho: &DensityMatrix, keep: &[QubitIndex]) -> Result<DensityMatrix> {
    let n = rho.num_qubits()?;
    for q in keep {
        q.shift(n)?;
    }
    let mut out = rho.clone();
    // Highest positions first so lower indices stay valid.
    for pos in (1..=n).rev() {
        if !keep.iter().any(|q| q.position() == pos) {
            out = partial_trace(&out, QubitIndex::new(pos))?;
        }
    }
    Ok(out)
}

/// `<phi|rho|phi>`.
pub fn fidelity(phi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), phi.dim())?;
    let v = phi.amplitudes();
    let value = v.dotc(&(&rho.matrix * v));
    debug_assert!(
        value.im.abs() <= IDENTITY_TOL * rho.dim() as f64,
        "fidelity has imaginary part {}",
        value.im
    );
    Ok(value.re)
}

/// Orthogonal projector, either onto a set of computational basis states or a
/// general subspace given as a dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    repr: ProjectorRepr,
}

#[derive(Clone, Debug, PartialEq)]
enum ProjectorRepr {
    Basis(Vec<bool>),
    Dense(Matrix),
}

impl Projector {
    /// Projector onto the span of the listed computational basis states.
    pub fn from_basis(dim: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = vec![false; dim];
        for i in indices {
            *mask
                .get_mut(i)
                .ok_or_else(|| Error::InvalidProjector(format!("basis index {i} >= {dim}")))? =
                true;
        }
        Ok(Self {
            repr: ProjectorRepr::Basis(mask),
        })
    }

    /// Projector onto the span of an orthonormal family.
    pub fn from_orthonormal(vectors: &[PureState]) -> Result<Self> {
        let dim = vectors
            .first()
            .map(PureState::dim)
            .ok_or_else(|| Error::InvalidProjector("empty spanning set".into()))?;
        let gram = gram_deviation(vectors)?;
        if gram > IDENTITY_TOL {
            return Err(Error::NotOrthonormal(gram));
        }
        let mut matrix = Matrix::zeros(dim, dim);
        for v in vectors {
            matrix += v.to_density().matrix;
        }
        Ok(Self {
            repr: ProjectorRepr::Dense(matrix),
        })
    }

    /// Checks `P^2 = P` and `P = P^dagger` within 1e-12.
    pub fn from_matrix(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidProjector("not square".into()));
        }
        let idem = max_modulus(&(&matrix * &matrix - &matrix));
        let herm = max_modulus(&(&matrix - matrix.adjoint()));
        if idem > IDENTITY_TOL || herm > IDENTITY_TOL {
            return Err(Error::InvalidProjector(format!(
                "idempotence {idem:.3e}, hermiticity {herm:.3e}"
            )));
        }
        Ok(Self {
            repr: ProjectorRepr::Dense(matrix),
        })
    }

    pub fn dim(&self) -> usize {
        match &self.repr {
            ProjectorRepr::Basis(mask) => mask.len(),
            ProjectorRepr::Dense(m) => m.nrows(),
        }
    }

    pub fn rank(&self) -> usize {
        match &self.repr {
            ProjectorRepr::Basis(mask) => mask.iter().filter(|&&b| b).count(),
            ProjectorRepr::Dense(m) => m.trace().re.round() as usize,
        }
    }

    pub fn matrix(&self) -> Matrix {
        match &self.repr {
            ProjectorRepr::Basis(mask) => Matrix::from_diagonal(&Vector::from_iterator(
                mask.len(),
                mask.iter().map(|&b| if b { ONE } else { ZERO }),
            )),
            ProjectorRepr::Dense(m) => m.clone(),
        }
    }

    /// `Tr(P rho)`.
    pub fn probability(&self, rho: &DensityMatrix) -> Result<f64> {
        check_dim(self.dim(), rho.dim())?;
        Ok(match &self.repr {
            ProjectorRepr::Basis(mask) => mask
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(k, _)| rho.matrix[(k, k)].re)
                .sum(),
            ProjectorRepr::Dense(m) => (m * &rho.matrix).trace().re,
        })
    }

    /// Unnormalized `P rho P`.
    pub fn sandwich(&self, rho: &DensityMatrix) -> Result<Matrix> {
        check_dim(self.dim(), rho.dim())?;
        Ok(match &self.repr {
            ProjectorRepr::Basis(mask) => {
                let dim = mask.len();
                let mut out = Matrix::zeros(dim, dim);
                for c in (0..dim).filter(|&c| mask[c]) {
                    for r in (0..dim).filter(|&r| mask[r]) {
                        out[(r, c)] = rho.matrix[(r, c)];
                    }
                }
                out
            }
            ProjectorRepr::Dense(m) => m * &rho.matrix * m,
        })
    }

    /// Frobenius norm of `rho - P rho P`; zero iff `rho` is supported in range(P).
    pub fn leakage(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok((&rho.matrix - self.sandwich(rho)?).norm())
    }
}

/// Result of a projective measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub outcome: usize,
    pub probability: f64,
    pub post_state: DensityMatrix,
}

fn check_resolution(projectors: &[Projector], dim: usize) -> Result<()> {
    for p in projectors {
        check_dim(dim, p.dim())?;
    }
    let all_basis = projectors
        .iter()
        .all(|p| matches!(p.repr, ProjectorRepr::Basis(_)));
    let deviation = if all_basis {
        let mut cover = vec![0usize; dim];
        for p in projectors {
            if let ProjectorRepr::Basis(mask) = &p.repr {
                for (k, _) in mask.iter().enumerate().filter(|(_, &b)| b) {
                    cover[k] += 1;
                }
            }
        }
        cover
            .iter()
            .map(|&c| (c as f64 - 1.0).abs())
            .fold(0.0, f64::max)
    } else {
        let sum = projectors
            .iter()
            .fold(Matrix::zeros(dim, dim), |acc, p| acc + p.matrix());
        max_modulus(&(sum - Matrix::identity(dim, dim)))
    };
    if deviation > ASSERT_TOL {
        return Err(Error::IncompleteMeasurement(deviation));
    }
    Ok(())
}

/// Measures `rho` and post-selects on `outcome`.
///
/// Returns the outcome probability `Tr(P rho)` and the normalized post-state
/// `P rho P / Tr(P rho)`.
pub fn measure_forced(
    rho: &DensityMatrix,
    projectors: &[Projector],
    outcome: usize,
) -> Result<Measurement> {
    check_resolution(projectors, rho.dim())?;
    let projector = projectors
        .get(outcome)
        .ok_or_else(|| Error::InvalidProjector(format!("no projector for outcome {outcome}")))?;
    let probability = projector.probability(rho)?;
    if probability < DEGENERATE_PROBABILITY {
        return Err(Error::DegenerateOutcome {
            outcome,
            probability,
        });
    }
    let post = projector.sandwich(rho)?.unscale(probability);
    Ok(Measurement {
        outcome,
        probability,
        post_state: DensityMatrix { matrix: post },
    })
}

/// Samples an outcome with probability `Tr(P_b rho)`.
pub fn measure_projective<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    projectors: &[Projector],
    rng: &mut R,
) -> Result<Measurement> {
    check_resolution(projectors, rho.dim())?;
    let probabilities = projectors
        .iter()
        .map(|p| p.probability(rho))
        .collect::<Result<Vec<_>>>()?;
    let outcome = sample_index(&probabilities, rng);
    measure_forced(rho, projectors, outcome)
}

pub(crate) fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, &w) in weights.iter().enumerate() {
        if u < w {
            return k;
        }
        u -= w;
    }
    // Rounding can leave u just above the last cumulative bound.
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// `M rho M^dagger` with no constraint on `M` beyond its column count.
pub fn apply_operator(rho: &DensityMatrix, op: &Matrix) -> Result<DensityMatrix> {
    check_dim(op.ncols(), rho.dim())?;
    Ok(DensityMatrix {
        matrix: op * &rho.matrix * op.adjoint(),
    })
}

/// `M rho M^dagger`, requiring `M^dagger M = I` within 1e-10.
pub fn apply_isometry(rho: &DensityMatrix, op: &Matrix) -> Result<DensityMatrix> {
    let deviation = isometry_deviation(op);
    if deviation > ASSERT_TOL {
        return Err(Error::NotIsometric(deviation));
    }
    apply_operator(rho, op)
}

/// `max |M^dagger M - I|`.
pub fn isometry_deviation(op: &Matrix) -> f64 {
    max_modulus(&(op.adjoint() * op - Matrix::identity(op.ncols(), op.ncols())))
}

/// Largest deviation of the Gram matrix of `vectors` from the identity.
pub fn gram_deviation(vectors: &[PureState]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let expected = if i == j { ONE } else { ZERO };
            worst = worst.max((a.inner(b)? - expected).norm());
        }
    }
    Ok(worst)
}

/// Builds a unitary that sends each pinned `source` to its `target`.
///
/// Both families must be orthonormal. They are completed to bases by
/// Gram-Schmidt over the computational basis in lexicographic order, and the
/// k-th completion vector of the sources is paired with the k-th of the
/// targets.
pub fn complete_unitary(pairs: &[(PureState, PureState)], dim: usize) -> Result<Matrix> {
    let sources: Vec<PureState> = pairs.iter().map(|(s, _)| s.clone()).collect();
    let targets: Vec<PureState> = pairs.iter().map(|(_, t)| t.clone()).collect();
    let sources = extend_to_basis(sources, dim)?;
    let targets = extend_to_basis(targets, dim)?;
    let mut u = Matrix::zeros(dim, dim);
    for (s, t) in sources.iter().zip(&targets) {
        u += t.amplitudes() * s.amplitudes().adjoint();
    }
    Ok(u)
}

fn extend_to_basis(mut family: Vec<PureState>, dim: usize) -> Result<Vec<PureState>> {
    for v in &family {
        check_dim(dim, v.dim())?;
    }
    let deviation = gram_deviation(&family)?;
    if deviation > IDENTITY_TOL {
        return Err(Error::NotOrthonormal(deviation));
    }
    for k in 0..dim {
        if family.len() == dim {
            break;
        }
        let mut v = PureState::basis(dim, k).amplitudes;
        // Two passes keep the residual orthogonal to working precision.
        for _ in 0..2 {
            for b in &family {
                let overlap = b.amplitudes.dotc(&v);
                v -= b.amplitudes.map(|a| a * overlap);
            }
        }
        if v.norm() > 1e-8 {
            family.push(PureState::normalized(v)?);
        }
    }
    Ok(family)
}

/// Largest entry modulus of a complex matrix.
pub fn max_modulus(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Seedable sources of random states.
pub mod random {
    use super::*;

    fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    /// Haar-random pure state: normalized i.i.d. standard complex Gaussians.
    pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
        loop {
            let v = Vector::from_fn(dim, |_, _| complex_gaussian(rng));
            if let Ok(state) = PureState::normalized(v) {
                return state;
            }
        }
    }

    /// Full-rank random density matrix `G G^dagger / Tr(G G^dagger)` for a
    /// Ginibre matrix `G`.
    pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
        let g = Matrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
        let m = &g * g.adjoint();
        let trace = m.trace().re;
        let mut matrix = m.unscale(trace);
        // Exact Hermiticity.
        matrix = (&matrix + matrix.adjoint()).unscale(2.0);
        DensityMatrix { matrix }
    }

    /// Haar-random single qubit `alpha|0> + beta|1>`.
    pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> PureState {
        haar_state(2, rng)
    }
}
