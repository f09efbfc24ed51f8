//! Dense complex linear algebra kernel.
//!
//! Operators are kept in spectral form wherever possible — real ascending
//! eigenvalues plus a unitary eigenvector matrix — so that functions of an
//! operator are exact up to the eigendecomposition error. All checks and
//! clamping windows come from [`crate::tol`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;


use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::tol;

/// Dense complex matrix.
pub type CMatrix<T> = DMatrix<Complex<T>>;
/// Dense complex column vector.
pub type CVector<T> = DVector<Complex<T>>;

/// Fails when any entry of `a` is NaN or infinite.
pub fn validate_finite<T: Real>(a: &CMatrix<T>) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteEntry)
    }
}

/// `|A - A*|` in the Frobenius norm.
pub fn hermiticity_defect<T: Real>(a: &CMatrix<T>) -> T {
    (a - a.adjoint()).norm()
}

/// Hermitian part `(A + A*)/2`.
pub fn hermitian_part<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    (a + a.adjoint()).unscale(real::<T>(2.0))
}

/// Largest singular value of `a`, computed as the square root of the top
/// eigenvalue of the Gram matrix `A* A`. Deterministic (no power iteration).
pub fn operator_norm<T: Real>(a: &CMatrix<T>) -> Result<T> {
    validate_finite(a)?;
    if a.is_empty() {
        return Ok(T::zero());
    }
    // Scale out the magnitude so the Gram matrix cannot overflow and the
    // eigensolve works near unit scale.
    let scale = a.iter().fold(T::zero(), |m, z| m.max(z.re.abs().max(z.im.abs())));
    if scale == T::zero() {
        return Ok(T::zero());
    }
    let b = a.unscale(scale);
    let gram = hermitian_part(&(b.adjoint() * &b));
    let eig = nalgebra::SymmetricEigen::try_new(gram, T::default_epsilon(), 10_000)
        .ok_or(Error::EigenConvergence)?;
    let top = eig.eigenvalues.iter().fold(T::zero(), |m, &l| m.max(l));
    Ok(top.max(T::zero()).sqrt() * scale)
}

/// `n`-th matrix power by binary exponentiation (at most `2 log2 n`
/// multiplications). Safe for non-normal matrices.
pub fn matrix_power<T: Real>(a: &CMatrix<T>, n: u64) -> CMatrix<T> {
    let dim = a.nrows();
    let mut result = CMatrix::<T>::identity(dim, dim);
    let mut base = a.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// A Hermitian operator stored as its eigendecomposition `U diag(l) U*`.
#[derive(Debug, Clone)]
pub struct SpectralOperator<T: Real> {
    eigenvalues: DVector<T>,
    eigenvectors: CMatrix<T>,
}

impl<T: Real> SpectralOperator<T> {
    /// Builds the operator from a known eigensystem. Validates that the
    /// eigenvalues are finite and ascending and that the eigenvector matrix
    /// is unitary within [`tol::ORTHONORMALITY`] (Frobenius norm, which
    /// dominates the operator norm).
    pub fn from_parts(eigenvalues: DVector<T>, eigenvectors: CMatrix<T>) -> Result<Self> {
        let dim = eigenvalues.len();
        if eigenvectors.nrows() != dim || eigenvectors.ncols() != dim {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "{} eigenvalues vs {}x{} eigenvector matrix",
                    dim,
                    eigenvectors.nrows(),
                    eigenvectors.ncols()
                ),
            });
        }
        if !eigenvalues.iter().all(|l| l.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        validate_finite(&eigenvectors)?;
        if eigenvalues.as_slice().windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::EigenvaluesUnsorted);
        }
        let defect = (eigenvectors.adjoint() * &eigenvectors - CMatrix::<T>::identity(dim, dim)).norm();
        if defect > real(tol::ORTHONORMALITY) {
            return Err(Error::NotOrthonormal {
                defect: defect.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { eigenvalues, eigenvectors })
    }

    /// Eigendecomposition of a square matrix that is Hermitian up to
    /// `rel_tol * |A|`. The input is symmetrized as `(A + A*)/2` before the
    /// decomposition, and the eigenvalues are returned in ascending order.
    pub fn decompose(a: &CMatrix<T>, rel_tol: T) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::NonSquare { rows: a.nrows(), cols: a.ncols() });
        }
        validate_finite(a)?;
        let norm = a.norm();
        let defect = hermiticity_defect(a);
        if defect > rel_tol * norm.max(T::default_epsilon()) {
            return Err(Error::NotHermitian {
                defect: defect.to_f64().unwrap_or(f64::NAN),
                allowed: (rel_tol * norm).to_f64().unwrap_or(f64::NAN),
            });
        }
        let sym = hermitian_part(a);
        let eig = nalgebra::SymmetricEigen::try_new(sym, T::default_epsilon(), 10_000)
            .ok_or(Error::EigenConvergence)?;

        let dim = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
        let eigenvalues = DVector::from_iterator(dim, order.iter().map(|&i| eig.eigenvalues[i]));
        let eigenvectors = CMatrix::<T>::from_columns(
            &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
        );
        Self::from_parts(eigenvalues, eigenvectors)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<T> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix<T> {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Reconstructs the dense matrix `U diag(l) U*`.
    pub fn dense(&self) -> CMatrix<T> {
        self.apply_unchecked(|l| Complex::new(l, T::zero()))
    }

    /// Spectral functional calculus: `U diag(f(l)) U*`. Fails when `f` is
    /// not finite at an eigenvalue.
    pub fn apply<F>(&self, f: F) -> Result<CMatrix<T>>
    where
        F: Fn(T) -> Complex<T>,
    {
        for &l in self.eigenvalues.iter() {
            let v = f(l);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::FunctionNotFinite { point: l.to_f64().unwrap_or(f64::NAN) });
            }
        }
        Ok(self.apply_unchecked(f))
    }

    fn apply_unchecked<F>(&self, f: F) -> CMatrix<T>
    where
        F: Fn(T) -> Complex<T>,
    {
        let mut scaled = self.eigenvectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            let v = f(self.eigenvalues[j]);
            for z in col.iter_mut() {
                *z *= v;
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }

    /// The clamping window for PSD operations: eigenvalues in
    /// `[-window, 0)` with `window = CLAMP_REL * max(1, lambda_max)` are
    /// treated as zero; anything below is a genuine negativity error.
    pub fn clamped_nonneg_eigenvalues(&self) -> Result<DVector<T>> {
        let window = real::<T>(tol::CLAMP_REL) * T::one().max(self.max_eigenvalue());
        let mut out = self.eigenvalues.clone();
        for l in out.iter_mut() {
            if *l < -window {
                return Err(Error::NegativeEigenvalue {
                    value: l.to_f64().unwrap_or(f64::NAN),
                    window: window.to_f64().unwrap_or(f64::NAN),
                });
            }
            if *l < T::zero() {
                *l = T::zero();
            }
        }
        Ok(out)
    }

    /// Whether the spectrum is non-negative within the clamping window.
    pub fn is_non_negative(&self) -> bool {
        self.min_eigenvalue() >= -real::<T>(tol::CLAMP_REL) * T::one().max(self.max_eigenvalue())
    }

    /// Hermitian PSD square root. Eigenvalues inside the clamping window are
    /// set to zero first; a genuinely negative eigenvalue is an error.
    pub fn sqrt_psd(&self) -> Result<CMatrix<T>> {
        let clamped = self.clamped_nonneg_eigenvalues()?;
        let mut scaled = self.eigenvectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            let v = Complex::new(clamped[j].sqrt(), T::zero());
            for z in col.iter_mut() {
                *z *= v;
            }
        }
        let root = &scaled * self.eigenvectors.adjoint();
        Ok(hermitian_part(&root))
    }
}

/// An isometry `V` onto a closed subspace; the projection is `P = V V*`.
#[derive(Debug, Clone)]
pub struct SubspaceProjection<T: Real> {
    isometry: CMatrix<T>,
}

impl<T: Real> SubspaceProjection<T> {
    /// Validates `|V*V - I| <= ORTHONORMALITY` and `1 <= rank <= ambient`.
    pub fn new(isometry: CMatrix<T>) -> Result<Self> {
        validate_finite(&isometry)?;
        let (ambient, rank) = (isometry.nrows(), isometry.ncols());
        if rank < 1 || rank > ambient {
            return Err(Error::InvalidParameter(format!(
                "isometry rank {rank} must lie in 1..={ambient}"
            )));
        }
        let defect = (isometry.adjoint() * &isometry - CMatrix::<T>::identity(rank, rank)).norm();
        if defect > real(tol::ORTHONORMALITY) {
            return Err(Error::NotOrthonormal {
                defect: defect.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { isometry })
    }

    /// The identity embedding of the full space.
    pub fn identity(dim: usize) -> Self {
        Self { isometry: CMatrix::<T>::identity(dim, dim) }
    }

    /// Coordinate isometry onto the given (0-based, distinct, increasing)
    /// index set.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidParameter("empty coordinate window".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) || *indices.last().unwrap() >= ambient {
            return Err(Error::InvalidParameter(format!(
                "coordinate window must be strictly increasing and below {ambient}"
            )));
        }
        let mut v = CMatrix::<T>::zeros(ambient, indices.len());
        for (col, &row) in indices.iter().enumerate() {
            v[(row, col)] = Complex::new(T::one(), T::zero());
        }
        Ok(Self { isometry: v })
    }

    pub fn ambient_dim(&self) -> usize {
        self.isometry.nrows()
    }

    pub fn rank(&self) -> usize {
        self.isometry.ncols()
    }

    pub fn isometry(&self) -> &CMatrix<T> {
        &self.isometry
    }

    /// Dense projector `P = V V*`.
    pub fn projector(&self) -> CMatrix<T> {
        &self.isometry * self.isometry.adjoint()
    }

    /// Compression `V* A V` of an ambient matrix to the subspace.
    pub fn compress(&self, a: &CMatrix<T>) -> Result<CMatrix<T>> {
        if a.nrows() != self.ambient_dim() || a.ncols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "ambient matrix {}x{} vs ambient dimension {}",
                    a.nrows(),
                    a.ncols(),
                    self.ambient_dim()
                ),
            });
        }
        Ok(self.isometry.adjoint() * a * &self.isometry)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    type M = CMatrix<f64>;

    fn random_hermitian(dim: usize, seed: u64) -> M {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let g = M::from_fn(dim, dim, |_, _| {
            Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        hermitian_part(&g)
    }

    #[test]
    fn diagonal_case() {
        let a = M::from_diagonal(&CVector::from_vec(vec![cplx(2.0, 0.0), cplx(-1.0, 0.0)]));
        let op = SpectralOperator::decompose(&a, 1e-8).unwrap();
        assert_relative_eq!(op.eigenvalues()[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(op.eigenvalues()[1], 2.0, epsilon = 1e-12);
        // eigenvectors form a permutation matrix
        let u = op.eigenvectors();
        for j in 0..2 {
            let col: Vec<f64> = u.column(j).iter().map(|z| z.norm()).collect();
            assert!(col.iter().filter(|&&m| m > 0.5).count() == 1);
        }
    }

    #[test]
    fn swap_matrix_eigenvalues() {
        let a = M::from_row_slice(2, 2, &[cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)]);
        let op = SpectralOperator::decompose(&a, 1e-8).unwrap();
        assert_relative_eq!(op.eigenvalues()[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(op.eigenvalues()[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn reconstruction_residual_random_8x8() {
        let a = random_hermitian(8, 42);
        let op = SpectralOperator::decompose(&a, 1e-8).unwrap();
        let residual = operator_norm(&(op.dense() - &a)).unwrap();
        let bound = 1e-10 * operator_norm(&a).unwrap().max(1.0);
        assert!(residual <= bound, "residual {residual:e} > {bound:e}");
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let a = M::zeros(2, 3);
        assert!(matches!(
            SpectralOperator::decompose(&a, 1e-8),
            Err(Error::NonSquare { .. })
        ));
        let mut b = M::zeros(2, 2);
        b[(0, 1)] = cplx(1.0, 0.0);
        assert!(matches!(
            SpectralOperator::decompose(&b, 1e-8),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn apply_function_identity_and_scalars() {
        let a = M::from_diagonal(&CVector::from_vec(vec![cplx(1.0, 0.0), cplx(2.0, 0.0)]));
        let op = SpectralOperator::decompose(&a, 1e-8).unwrap();
        let id = op.apply(|l| Complex::new(l, 0.0)).unwrap();
        assert_relative_eq!((id - &a).norm(), 0.0, epsilon = 1e-12);

        let zero = M::from_diagonal(&CVector::from_vec(vec![cplx(0.0, 0.0)]));
        let op0 = SpectralOperator::decompose(&zero, 1e-8).unwrap();
        let e = op0.apply(|l| crate::scalar::exp_minus_i(l)).unwrap();
        assert_relative_eq!(e[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(e[(0, 0)].im, 0.0, epsilon = 1e-15);

        let one = M::from_diagonal(&CVector::from_vec(vec![cplx(1.0, 0.0)]));
        let op1 = SpectralOperator::decompose(&one, 1e-8).unwrap();
        let r = op1
            .apply(|l| (Complex::new(1.0, 0.0) + Complex::new(0.0, l)).inv())
            .unwrap();
        assert_relative_eq!(r[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(r[(0, 0)].im, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn apply_function_rejects_non_finite() {
        let a = M::from_diagonal(&CVector::from_vec(vec![cplx(0.0, 0.0), cplx(1.0, 0.0)]));
        let op = SpectralOperator::decompose(&a, 1e-8).unwrap();
        let r = op.apply(|l| Complex::new(1.0 / l, 0.0));
        assert!(matches!(r, Err(Error::FunctionNotFinite { .. })));
    }

    #[test]
    fn apply_real_function_is_hermitian() {
        let a = random_hermitian(6, 7);
        let op = SpectralOperator::decompose(&a, 1e-8).unwrap();
        let m = op.apply(|l| Complex::new(l * l + 1.0, 0.0)).unwrap();
        assert!(hermiticity_defect(&m) <= 1e-12);
    }

    #[test]
    fn operator_norm_cases() {
        assert_relative_eq!(operator_norm(&M::zeros(3, 3)).unwrap(), 0.0);
        let d = M::from_diagonal(&CVector::from_vec(vec![cplx(1.0, 0.0), cplx(-3.0, 0.0)]));
        assert_relative_eq!(operator_norm(&d).unwrap(), 3.0, epsilon = 1e-10);
        // any projector V V* with rank >= 1 has norm 1
        let v = SubspaceProjection::<f64>::coordinate(5, &[1, 3]).unwrap();
        assert_relative_eq!(operator_norm(&v.projector()).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn sqrt_psd_cases() {
        let a = M::from_diagonal(&CVector::from_vec(vec![cplx(4.0, 0.0), cplx(9.0, 0.0)]));
        let op = SpectralOperator::decompose(&a, 1e-8).unwrap();
        let r = op.sqrt_psd().unwrap();
        assert_relative_eq!(r[(0, 0)].re, 2.0, epsilon = 1e-12);
        assert_relative_eq!(r[(1, 1)].re, 3.0, epsilon = 1e-12);

        let z = M::zeros(2, 2);
        let opz = SpectralOperator::decompose(&z, 1e-8).unwrap();
        assert_relative_eq!(opz.sqrt_psd().unwrap().norm(), 0.0, epsilon = 1e-15);

        // clamping: tiny negative eigenvalue goes to zero
        let c = M::from_diagonal(&CVector::from_vec(vec![cplx(-1e-12, 0.0), cplx(1.0, 0.0)]));
        let opc = SpectralOperator::decompose(&c, 1e-8).unwrap();
        let rc = opc.sqrt_psd().unwrap();
        assert_relative_eq!(rc[(0, 0)].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(rc[(1, 1)].re, 1.0, epsilon = 1e-12);

        // genuinely negative is an error
        let n = M::from_diagonal(&CVector::from_vec(vec![cplx(-1.0, 0.0), cplx(1.0, 0.0)]));
        let opn = SpectralOperator::decompose(&n, 1e-8).unwrap();
        assert!(matches!(opn.sqrt_psd(), Err(Error::NegativeEigenvalue { .. })));
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let mut a = random_hermitian(8, 3);
        // make it PSD by squaring
        a = &a * &a;
        let op = SpectralOperator::decompose(&a, 1e-8).unwrap();
        let r = op.sqrt_psd().unwrap();
        let back = &r * &r;
        let bound = 1e-9 * op.max_eigenvalue().max(1.0);
        assert!(operator_norm(&(back - op.dense())).unwrap() <= bound);
    }

    #[test]
    fn functional_calculus_composes() {
        // f(g(H)) through one application equals building g(H) in spectral
        // form first (g monotone keeps the eigenvalue order) and applying f.
        let a = random_hermitian(8, 11);
        let op = SpectralOperator::decompose(&a, 1e-8).unwrap();
        let g = |l: f64| l.exp();
        let f = |x: f64| Complex::new(x.cos(), 0.5 * x.sin());
        let composed = op.apply(|l| f(g(l))).unwrap();
        let inner = SpectralOperator::from_parts(
            op.eigenvalues().map(g),
            op.eigenvectors().clone(),
        )
        .unwrap();
        let two_step = inner.apply(f).unwrap();
        assert!((composed - two_step).norm() <= 1e-12);
    }

    #[test]
    fn norm_submultiplicative_on_random_triples() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..8 {
            let a = M::from_fn(5, 5, |_, _| Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
            let b = M::from_fn(5, 5, |_, _| Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
            let na = operator_norm(&a).unwrap();
            let nb = operator_norm(&b).unwrap();
            let nab = operator_norm(&(&a * &b)).unwrap();
            assert!(nab <= na * nb + 1e-12);
        }
    }

    #[test]
    fn matrix_power_matches_repeated_multiplication() {
        let a = random_hermitian(4, 9).unscale(4.0);
        let mut direct = M::identity(4, 4);
        for _ in 0..13 {
            direct = &direct * &a;
        }
        assert!((matrix_power(&a, 13) - direct).norm() <= 1e-13);
        assert!((matrix_power(&a, 0) - M::identity(4, 4)).norm() == 0.0);
        assert!((matrix_power(&a, 1) - &a).norm() == 0.0);
    }

    #[test]
    fn projection_validation() {
        assert!(SubspaceProjection::<f64>::coordinate(4, &[]).is_err());
        assert!(SubspaceProjection::<f64>::coordinate(4, &[5]).is_err());
        let v = CMatrix::<f64>::from_row_slice(2, 1, &[cplx(1.0, 0.0), cplx(1.0, 0.0)]);
        assert!(matches!(SubspaceProjection::new(v), Err(Error::NotOrthonormal { .. })));
    }
}
