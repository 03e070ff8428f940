//! Dense complex linear algebra helpers used throughout the crate.
//!
//! Everything is double precision. Singular values go through the
//! eigendecomposition of `M* M` (negative round-off clamped to zero
//! before the square root, so Schatten norms of rank-deficient matrices
//! never produce NaN); general spectra go through the complex Schur
//! form.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::CoreError;

pub type C64 = Complex64;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: C64 = Complex64::new(0.0, 0.0);
pub const ONE: C64 = Complex64::new(1.0, 0.0);

/// n x n identity.
pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

/// Matrix trace.
pub fn trace(m: &CMat) -> C64 {
    m.diagonal().sum()
}

/// Hilbert-Schmidt inner product <A,B> = Tr(A B*).
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    debug_assert_eq!(a.shape(), b.shape());
    let mut acc = ZERO;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x * y.conj();
    }
    acc
}

/// Frobenius / Hilbert-Schmidt norm.
pub fn hs_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Entrywise maximum modulus; the residual measure used by validators.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// max |a - b| over entries.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Singular values in descending order, from the Hermitian eigenvalues
/// of M*M. Eigenvalues below 1e-13 of the largest are rank noise (the
/// Gram matrix squares the condition number) and are flushed to zero,
/// otherwise their square roots would pollute trace-class norms of
/// rank-deficient matrices at the 1e-8 scale.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>, CoreError> {
    let gram = m.adjoint() * m;
    let eig = gram
        .try_symmetric_eigen(1e-13, 10_000)
        .ok_or_else(|| CoreError::Linalg("hermitian eigensolver did not converge".into()))?;
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
    let cutoff = top * 1e-13;
    let mut s: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l <= cutoff { 0.0 } else { l.sqrt() })
        .collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(s)
}

/// Schatten p-norm for 1 <= p < infinity; `None` selects p = infinity
/// (the operator norm).
pub fn schatten_norm(m: &CMat, p: Option<f64>) -> Result<f64, CoreError> {
    let s = singular_values(m)?;
    match p {
        None => Ok(s.first().copied().unwrap_or(0.0)),
        Some(p) => {
            debug_assert!(p >= 1.0);
            Ok(s.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p))
        }
    }
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &CMat) -> Result<f64, CoreError> {
    schatten_norm(m, None)
}

/// Eigenvalues of a general complex square matrix, sorted by (re, im)
/// lexicographically so reports are reproducible.
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>, CoreError> {
    let schur = m
        .clone()
        .try_schur(1e-13, 100_000)
        .ok_or_else(|| CoreError::Linalg("schur decomposition did not converge".into()))?;
    let vals = schur
        .eigenvalues()
        .ok_or_else(|| CoreError::Linalg("schur form yielded no eigenvalues".into()))?;
    let mut v: Vec<C64> = vals.iter().copied().collect();
    v.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(v)
}

/// Spectral radius.
pub fn spectral_radius(m: &CMat) -> Result<f64, CoreError> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Symmetric Hausdorff distance between two finite point sets in C.
/// Multiplicity is deliberately ignored: the sets are compared as sets.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let one_sided = |p: &[C64], q: &[C64]| {
        p.iter()
            .map(|x| {
                q.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}
