//! Geometry of the manifold of symmetric positive-definite matrices.
//!
//! Everything here goes through a symmetric eigendecomposition: matrix
//! functions are applied to eigenvalues, the affine-invariant distance is
//! read off the eigenvalues of the whitened pair, and the exponential and
//! logarithmic maps are congruence sandwiches around the matrix `exp`/`log`.
//!
//! [`SpdMatrix`] caches its own decomposition, so square roots, inverse
//! square roots and logarithms of an already-validated matrix are cheap.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

/// Relative eigenvalue floor for SPD construction: the smallest eigenvalue
/// must exceed `SPD_EPS * largest`.
pub const SPD_EPS: f64 = 1e-10;

const SYM_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Error)]
pub enum SpdError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not positive definite (min eigenvalue {min_eig:e}, floor {floor:e})")]
    NotPositiveDefinite { min_eig: f64, floor: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Karcher flow did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        last: Box<SpdMatrix>,
        residual: f64,
        iterations: usize,
    },
}

pub type Result<T> = std::result::Result<T, SpdError>;

/// Eigenvalues sorted in descending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl EigenPair {
    /// `V diag(f(λ)) Vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= f(self.eigenvalues[j]);
        }
        let mut out = scaled * v.transpose();
        symmetrize_in_place(&mut out);
        out
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.reconstruct_with(|x| x)
    }
}

fn symmetrize_in_place(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

fn check_square_finite(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(SpdError::InvalidInput(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(SpdError::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    /// Validates symmetry to 1e-12 relative to the largest entry, then
    /// symmetrizes exactly.
    pub fn new(mut values: DMatrix<f64>) -> Result<Self> {
        check_square_finite(&values)?;
        let scale = values.amax().max(f64::MIN_POSITIVE);
        let n = values.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if (values[(i, j)] - values[(j, i)]).abs() > SYM_RTOL * scale {
                    return Err(SpdError::InvalidInput(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        symmetrize_in_place(&mut values);
        Ok(Self(values))
    }

    /// Symmetrizes `(m + mᵀ)/2` without checking; for results of algebra
    /// that is symmetric up to rounding.
    pub fn from_symmetrized(mut values: DMatrix<f64>) -> Result<Self> {
        check_square_finite(&values)?;
        symmetrize_in_place(&mut values);
        Ok(Self(values))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn eig(&self) -> EigenPair {
        eig_unchecked(self.0.clone())
    }

    /// Matrix exponential; always SPD up to the conditioning floor.
    pub fn exp(&self) -> Result<SpdMatrix> {
        let e = self.eig();
        let eigenvalues = e.eigenvalues.map(f64::exp);
        SpdMatrix::from_eigen(EigenPair {
            eigenvalues,
            eigenvectors: e.eigenvectors,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }
}

/// Symmetric eigendecomposition, eigenvalues descending.
pub fn sym_eig(m: &SymMatrix) -> EigenPair {
    m.eig()
}

/// Symmetric eigendecomposition of a raw matrix; checks finiteness and
/// symmetrizes first.
pub fn sym_eig_raw(m: &DMatrix<f64>) -> Result<EigenPair> {
    check_square_finite(m)?;
    let mut s = m.clone();
    symmetrize_in_place(&mut s);
    Ok(eig_unchecked(s))
}

fn eig_unchecked(m: DMatrix<f64>) -> EigenPair {
    let n = m.nrows();
    let se = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]).then(a.cmp(&b)));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = se.eigenvectors.column(src).into_owned();
        // sign convention: largest-magnitude component positive
        let pivot = col.iamax();
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
        eigenvectors.set_column(dst, &col);
    }
    EigenPair {
        eigenvalues,
        eigenvectors,
    }
}

/// Symmetric positive-definite matrix with its cached eigendecomposition.
#[derive(Debug, Clone)]
pub struct SpdMatrix {
    values: DMatrix<f64>,
    eig: EigenPair,
}

impl PartialEq for SpdMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl SpdMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        Self::from_sym(SymMatrix::new(values)?)
    }

    pub fn from_sym(sym: SymMatrix) -> Result<Self> {
        let eig = sym.eig();
        check_floor(&eig.eigenvalues)?;
        Ok(Self {
            values: sym.into_matrix(),
            eig,
        })
    }

    fn from_eigen(eig: EigenPair) -> Result<Self> {
        if eig.eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(SpdError::InvalidInput("non-finite eigenvalue".into()));
        }
        // keep descending order after a monotone map
        let eig = resort(eig);
        check_floor(&eig.eigenvalues)?;
        let values = eig.reconstruct();
        Ok(Self { values, eig })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            values: DMatrix::identity(dim, dim),
            eig: EigenPair {
                eigenvalues: DVector::from_element(dim, 1.0),
                eigenvectors: DMatrix::identity(dim, dim),
            },
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn eigen(&self) -> &EigenPair {
        &self.eig
    }

    pub fn to_sym(&self) -> SymMatrix {
        SymMatrix(self.values.clone())
    }

    pub fn sqrt(&self) -> SpdMatrix {
        self.map_spd(f64::sqrt)
    }

    pub fn invsqrt(&self) -> SpdMatrix {
        self.map_spd(|x| 1.0 / x.sqrt())
    }

    pub fn inverse(&self) -> SpdMatrix {
        self.map_spd(|x| 1.0 / x)
    }

    pub fn powm(&self, alpha: f64) -> SpdMatrix {
        self.map_spd(|x| x.powf(alpha))
    }

    pub fn log(&self) -> SymMatrix {
        SymMatrix(self.eig.reconstruct_with(f64::ln))
    }

    pub fn trace(&self) -> f64 {
        self.values.trace()
    }

    // Positive monotone maps keep the decomposition valid, so no re-check.
    fn map_spd(&self, f: impl Fn(f64) -> f64) -> SpdMatrix {
        let eig = resort(EigenPair {
            eigenvalues: self.eig.eigenvalues.map(&f),
            eigenvectors: self.eig.eigenvectors.clone(),
        });
        SpdMatrix {
            values: eig.reconstruct(),
            eig,
        }
    }

    /// `wᵀ · self · w`.
    pub fn congruence(&self, w: &DMatrix<f64>) -> Result<SpdMatrix> {
        if w.nrows() != self.dim() {
            return Err(SpdError::DimensionMismatch {
                expected: self.dim(),
                found: w.nrows(),
            });
        }
        SpdMatrix::from_sym(SymMatrix::from_symmetrized(w.transpose() * &self.values * w)?)
    }
}

fn resort(e: EigenPair) -> EigenPair {
    let n = e.eigenvalues.len();
    if (1..n).all(|i| e.eigenvalues[i - 1] >= e.eigenvalues[i]) {
        return e;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    EigenPair {
        eigenvalues: DVector::from_iterator(n, order.iter().map(|&i| e.eigenvalues[i])),
        eigenvectors: DMatrix::from_columns(
            &order.iter().map(|&i| e.eigenvectors.column(i)).collect::<Vec<_>>(),
        ),
    }
}

fn check_floor(eigenvalues: &DVector<f64>) -> Result<()> {
    let max = eigenvalues.max();
    let min = eigenvalues.min();
    let floor = SPD_EPS * max.max(0.0);
    if !(max > 0.0) || min <= floor {
        return Err(SpdError::NotPositiveDefinite { min_eig: min, floor });
    }
    Ok(())
}

/// Which scalar function [`matrix_fn`] applies to the eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFn {
    Log,
    Exp,
    Sqrt,
    InvSqrt,
}

/// Applies `f` spectrally. `Exp` accepts any symmetric input; the others
/// require the input to pass SPD construction.
pub fn matrix_fn(m: &SymMatrix, f: MatrixFn) -> Result<SymMatrix> {
    match f {
        MatrixFn::Exp => Ok(m.exp()?.to_sym()),
        MatrixFn::Log => Ok(SpdMatrix::from_sym(m.clone())?.log()),
        MatrixFn::Sqrt => Ok(SpdMatrix::from_sym(m.clone())?.sqrt().to_sym()),
        MatrixFn::InvSqrt => Ok(SpdMatrix::from_sym(m.clone())?.invsqrt().to_sym()),
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(SpdError::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// `b^{-1/2} · p · b^{-1/2}`, symmetrized.
fn whiten(invsqrt: &DMatrix<f64>, p: &DMatrix<f64>) -> DMatrix<f64> {
    let mut w = invsqrt * p * invsqrt;
    symmetrize_in_place(&mut w);
    w
}

/// Affine-invariant Riemannian distance `sqrt(Σ log² λ_i(p1⁻¹ p2))`.
pub fn airm_distance(p1: &SpdMatrix, p2: &SpdMatrix) -> Result<f64> {
    check_dims(p1.dim(), p2.dim())?;
    let w = whiten(p1.invsqrt().as_matrix(), p2.as_matrix());
    let ev = SymmetricEigen::new(w).eigenvalues;
    let mut acc = 0.0;
    for &l in ev.iter() {
        if !(l > 0.0) {
            return Err(SpdError::NotPositiveDefinite {
                min_eig: l,
                floor: 0.0,
            });
        }
        acc += l.ln().powi(2);
    }
    Ok(acc.sqrt())
}

/// `Exp_base(s) = base^{1/2} exp(base^{-1/2} s base^{-1/2}) base^{1/2}`.
pub fn exp_map(base: &SpdMatrix, s: &SymMatrix) -> Result<SpdMatrix> {
    TangentSpace::new(base.clone()).exp_map(s)
}

/// `Log_base(p) = base^{1/2} log(base^{-1/2} p base^{-1/2}) base^{1/2}`.
pub fn log_map(base: &SpdMatrix, p: &SpdMatrix) -> Result<SymMatrix> {
    TangentSpace::new(base.clone()).log_map(p)
}

/// Half-vectorization of a symmetric matrix: upper triangle in row-major
/// order, off-diagonal entries weighted by √2 so the Euclidean norm of the
/// vector equals the Frobenius norm of the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base_dim: usize,
    values: DVector<f64>,
}

impl TangentVector {
    pub fn from_sym(s: &SymMatrix) -> Self {
        let n = s.dim();
        let m = s.as_matrix();
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            out.push(m[(i, i)]);
            for j in (i + 1)..n {
                out.push(std::f64::consts::SQRT_2 * m[(i, j)]);
            }
        }
        Self {
            base_dim: n,
            values: DVector::from_vec(out),
        }
    }

    pub fn from_values(base_dim: usize, values: DVector<f64>) -> Result<Self> {
        let expected = base_dim * (base_dim + 1) / 2;
        check_dims(expected, values.len())?;
        Ok(Self { base_dim, values })
    }

    pub fn to_sym(&self) -> SymMatrix {
        let n = self.base_dim;
        let mut m = DMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            m[(i, i)] = self.values[k];
            k += 1;
            for j in (i + 1)..n {
                let v = self.values[k] / std::f64::consts::SQRT_2;
                m[(i, j)] = v;
                m[(j, i)] = v;
                k += 1;
            }
        }
        SymMatrix(m)
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn into_values(self) -> DVector<f64> {
        self.values
    }
}

/// Tangent space at a fixed reference point, with the reference's square
/// root and inverse square root precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentSpace {
    base: SpdMatrix,
    sqrt: DMatrix<f64>,
    invsqrt: DMatrix<f64>,
}

impl TangentSpace {
    pub fn new(base: SpdMatrix) -> Self {
        let sqrt = base.sqrt().values;
        let invsqrt = base.invsqrt().values;
        Self {
            base,
            sqrt,
            invsqrt,
        }
    }

    pub fn base(&self) -> &SpdMatrix {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// `log(base^{-1/2} p base^{-1/2})`: the log map expressed in whitened
    /// coordinates, where the Riemannian metric is the Frobenius one.
    pub fn whitened_log(&self, p: &SpdMatrix) -> Result<SymMatrix> {
        check_dims(self.dim(), p.dim())?;
        let w = SpdMatrix::from_sym(SymMatrix(whiten(&self.invsqrt, p.as_matrix())))?;
        Ok(w.log())
    }

    /// `base^{1/2} exp(s_w) base^{1/2}` for a whitened tangent element `s_w`.
    pub fn whitened_exp(&self, s_w: &SymMatrix) -> Result<SpdMatrix> {
        check_dims(self.dim(), s_w.dim())?;
        let e = s_w.exp()?;
        SpdMatrix::from_sym(SymMatrix::from_symmetrized(&self.sqrt * e.as_matrix() * &self.sqrt)?)
    }

    pub fn log_map(&self, p: &SpdMatrix) -> Result<SymMatrix> {
        let l = self.whitened_log(p)?;
        SymMatrix::from_symmetrized(&self.sqrt * l.as_matrix() * &self.sqrt)
    }

    pub fn exp_map(&self, s: &SymMatrix) -> Result<SpdMatrix> {
        check_dims(self.dim(), s.dim())?;
        let s_w = SymMatrix(whiten(&self.invsqrt, s.as_matrix()));
        self.whitened_exp(&s_w)
    }

    pub fn vectorize(&self, p: &SpdMatrix) -> Result<TangentVector> {
        Ok(TangentVector::from_sym(&self.whitened_log(p)?))
    }

    pub fn unvectorize(&self, v: &TangentVector) -> Result<SpdMatrix> {
        self.whitened_exp(&v.to_sym())
    }
}

/// Tangent vector of `p` at `base`, whitened and half-vectorized; its
/// Euclidean norm equals `airm_distance(base, p)`.
pub fn tangent_vectorize(base: &SpdMatrix, p: &SpdMatrix) -> Result<TangentVector> {
    TangentSpace::new(base.clone()).vectorize(p)
}

/// Options for the Karcher flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FrechetOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 50,
        }
    }
}

pub fn arithmetic_mean(set: &[SpdMatrix]) -> Result<SpdMatrix> {
    let first = set
        .first()
        .ok_or_else(|| SpdError::InvalidInput("empty set".into()))?;
    let mut acc = DMatrix::zeros(first.dim(), first.dim());
    for p in set {
        check_dims(first.dim(), p.dim())?;
        acc += p.as_matrix();
    }
    acc /= set.len() as f64;
    SpdMatrix::from_sym(SymMatrix::from_symmetrized(acc)?)
}

/// Riemannian (Fréchet) mean by fixed-point Karcher flow with unit step,
/// started from the arithmetic mean. Stops when the Frobenius norm of the
/// whitened mean tangent vector drops below `opts.tol`.
pub fn frechet_mean(set: &[SpdMatrix], opts: FrechetOptions) -> Result<SpdMatrix> {
    if !(opts.tol > 0.0) {
        return Err(SpdError::InvalidInput("tol must be positive".into()));
    }
    let mut g = arithmetic_mean(set)?;
    if set.len() == 1 {
        return Ok(set[0].clone());
    }
    let n = g.dim();
    let m = set.len() as f64;
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let ts = TangentSpace::new(g.clone());
        let mut mean = DMatrix::zeros(n, n);
        for p in set {
            mean += ts.whitened_log(p)?.as_matrix();
        }
        mean /= m;
        residual = mean.norm();
        g = ts.whitened_exp(&SymMatrix(mean))?;
        if residual < opts.tol {
            return Ok(g);
        }
    }
    Err(SpdError::NonConvergence {
        last: Box::new(g),
        residual,
        iterations: opts.max_iter,
    })
}

/// Closed-form geodesic point `p1^{1/2} (p1^{-1/2} p2 p1^{-1/2})^t p1^{1/2}`.
pub fn geodesic(p1: &SpdMatrix, p2: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    check_dims(p1.dim(), p2.dim())?;
    let sq = p1.sqrt();
    let isq = p1.invsqrt();
    let inner = SpdMatrix::from_sym(SymMatrix(whiten(isq.as_matrix(), p2.as_matrix())))?.powm(t);
    SpdMatrix::from_sym(SymMatrix::from_symmetrized(
        sq.as_matrix() * inner.as_matrix() * sq.as_matrix(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> SpdMatrix {
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        SpdMatrix::new(&a * a.transpose() + DMatrix::identity(n, n) * 0.5).unwrap()
    }

    fn rel_frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn eig_identity_and_diag() {
        let e = sym_eig(&SymMatrix::new(DMatrix::identity(3, 3)).unwrap());
        assert_eq!(e.eigenvalues.as_slice(), &[1.0, 1.0, 1.0]);
        let d = SymMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 5.0, -1.0])))
            .unwrap();
        let e = sym_eig(&d);
        assert_eq!(e.eigenvalues.as_slice(), &[5.0, 2.0, -1.0]);
    }

    #[test]
    fn eig_reconstructs_random_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = DMatrix::from_fn(8, 8, |_, _| rng.random_range(-1.0..1.0));
        let s = SymMatrix::from_symmetrized(&a + a.transpose()).unwrap();
        let e = sym_eig(&s);
        assert!(rel_frob(&e.reconstruct(), s.as_matrix()) < 1e-9);
        let vtv = e.eigenvectors.transpose() * &e.eigenvectors;
        assert!((vtv - DMatrix::identity(8, 8)).amax() < 1e-10);
        for i in 1..8 {
            assert!(e.eigenvalues[i - 1] >= e.eigenvalues[i]);
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = f64::NAN;
        assert!(matches!(SymMatrix::new(m.clone()), Err(SpdError::InvalidInput(_))));
        assert!(matches!(sym_eig_raw(&m), Err(SpdError::InvalidInput(_))));
    }

    #[test]
    fn asymmetric_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(SymMatrix::new(m).is_err());
    }

    #[test]
    fn spd_floor_enforced() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-11]));
        assert!(matches!(
            SpdMatrix::new(m),
            Err(SpdError::NotPositiveDefinite { .. })
        ));
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        assert!(SpdMatrix::new(m).is_err());
    }

    #[test]
    fn matrix_functions_basic() {
        let l = matrix_fn(&SymMatrix::new(DMatrix::identity(3, 3)).unwrap(), MatrixFn::Log).unwrap();
        assert!(l.as_matrix().amax() < 1e-15);
        let s = SpdMatrix::from_diagonal(&[4.0, 9.0]).unwrap().sqrt();
        assert!((s.as_matrix() - DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0]))).amax() < 1e-14);
        let is = matrix_fn(&SpdMatrix::from_diagonal(&[4.0, 9.0]).unwrap().to_sym(), MatrixFn::InvSqrt)
            .unwrap();
        assert!((is.as_matrix()[(1, 1)] - 1.0 / 3.0).abs() < 1e-15);
        let neg = SymMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -2.0]))).unwrap();
        assert!(matches!(
            matrix_fn(&neg, MatrixFn::Log),
            Err(SpdError::NotPositiveDefinite { .. })
        ));
        // exp accepts indefinite input
        assert!(matrix_fn(&neg, MatrixFn::Exp).is_ok());
    }

    #[test]
    fn exp_log_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_spd(&mut rng, 6);
        let back = p.log().exp().unwrap();
        assert!(rel_frob(back.as_matrix(), p.as_matrix()) < 1e-9);
    }

    #[test]
    fn distance_known_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_spd(&mut rng, 5);
        assert!(airm_distance(&p, &p).unwrap() < 1e-12);
        let e2 = 2f64.exp();
        let d = airm_distance(
            &SpdMatrix::identity(2),
            &SpdMatrix::from_diagonal(&[e2, 1.0 / e2]).unwrap(),
        )
        .unwrap();
        assert!((d - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            airm_distance(&SpdMatrix::identity(2), &SpdMatrix::identity(3)),
            Err(SpdError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn log_map_special_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_spd(&mut rng, 4);
        assert!(log_map(&p, &p).unwrap().as_matrix().amax() < 1e-12);
        let d = SpdMatrix::from_diagonal(&[2.0, 3.0, 0.5]).unwrap();
        let l = log_map(&SpdMatrix::identity(3), &d).unwrap();
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![2f64.ln(), 3f64.ln(), 0.5f64.ln()]));
        assert!((l.as_matrix() - expected).amax() < 1e-14);
    }

    #[test]
    fn exp_log_map_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let b = random_spd(&mut rng, 6);
            let p = random_spd(&mut rng, 6);
            let back = exp_map(&b, &log_map(&b, &p).unwrap()).unwrap();
            assert!(rel_frob(back.as_matrix(), p.as_matrix()) < 1e-9);
        }
    }

    #[test]
    fn vectorization_shape_and_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = random_spd(&mut rng, 3);
        let v = tangent_vectorize(&p, &p).unwrap();
        assert_eq!(v.len(), 6);
        assert!(v.values().amax() < 1e-12);
        let q = random_spd(&mut rng, 3);
        let v = tangent_vectorize(&p, &q).unwrap();
        assert!((v.values().norm() - airm_distance(&p, &q).unwrap()).abs() < 1e-9);
        let s = v.to_sym();
        assert_eq!(TangentVector::from_sym(&s), v);
    }

    #[test]
    fn frechet_singleton_and_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = random_spd(&mut rng, 4);
        let m = frechet_mean(std::slice::from_ref(&p), FrechetOptions::default()).unwrap();
        assert!(rel_frob(m.as_matrix(), p.as_matrix()) < 1e-14);
        assert!(matches!(
            frechet_mean(&[], FrechetOptions::default()),
            Err(SpdError::InvalidInput(_))
        ));
    }

    #[test]
    fn frechet_commuting_diagonals_is_geometric_mean() {
        let sets = [[1.0, 4.0, 2.0], [9.0, 0.25, 2.0], [3.0, 1.0, 0.125]];
        let mats: Vec<_> = sets.iter().map(|d| SpdMatrix::from_diagonal(d).unwrap()).collect();
        let m = frechet_mean(&mats, FrechetOptions::default()).unwrap();
        for k in 0..3 {
            // oracle: elementwise geometric mean
            let g: f64 = sets.iter().map(|d| d[k]).product::<f64>().powf(1.0 / 3.0);
            assert!((m.as_matrix()[(k, k)] - g).abs() < 1e-8 * g);
        }
    }

    #[test]
    fn frechet_non_convergence_reports_last_iterate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let set: Vec<_> = (0..5).map(|_| random_spd(&mut rng, 4)).collect();
        let err = frechet_mean(&set, FrechetOptions { tol: 1e-300, max_iter: 2 }).unwrap_err();
        match err {
            SpdError::NonConvergence { last, residual, iterations } => {
                assert_eq!(iterations, 2);
                assert!(residual.is_finite());
                assert_eq!(last.dim(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
