//! Operator-norm computation for complex symmetric matrices.
//!
//! For a complex symmetric `A`, `sup_{|x|=1} |x^T A x|` equals the largest
//! singular value of `A`. We compute it as `sqrt(lambda_max(A^H A))`,
//! embedding the Hermitian product into a real symmetric matrix of twice
//! the size so a plain symmetric eigensolver applies.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Supremum of `|x^T A x|` over the complex unit sphere, for symmetric `A`.
///
/// Asymmetric input above tolerance is symmetrized with a warning; the
/// quadratic form only sees the symmetric part anyway.
pub fn quadratic_form_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    if a.nrows() != a.ncols() {
        return Err(Error::usage(format!(
            "quadratic form needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let scale = a.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(1e-300);
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            asym = asym.max((a[(i, j)] - a[(j, i)]).norm());
        }
    }
    if asym > 1e-8 * scale {
        log::warn!("asymmetric input to quadratic_form_norm (deviation {asym:.3e}); symmetrizing");
    }
    let sym = DMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)]) * 0.5);
    Ok(largest_singular_value(&sym))
}

/// Largest singular value of an arbitrary complex matrix.
pub fn largest_singular_value(a: &DMatrix<Complex64>) -> f64 {
    let h = a.adjoint() * a;
    let n = h.nrows();
    if n == 0 {
        return 0.0;
    }
    // Hermitian h = p + i q with p symmetric, q antisymmetric; the real
    // symmetric [[p, -q], [q, p]] has the eigenvalues of h, doubled.
    let mut b = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = h[(i, j)];
            b[(i, j)] = v.re;
            b[(n + i, n + j)] = v.re;
            b[(i, n + j)] = -v.im;
            b[(n + i, j)] = v.im;
        }
    }
    let eig = SymmetricEigen::new(b);
    let lmax = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    lmax.max(0.0).sqrt()
}
