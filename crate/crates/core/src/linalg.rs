//! Small dense linear-algebra helpers shared by the synthesis and simulation code.

use nalgebra::{DMatrix, DVector};

use crate::fock::{DenseOperator, C64};

/// `n choose k` as a float; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &DMatrix<C64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Minimum-norm least-squares solution of `a x = b` for a real system.
///
/// Singular values below `rel_tol * sigma_max` are discarded.
pub fn min_norm_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return DVector::zeros(a.ncols());
    }
    svd.solve(b, rel_tol * smax)
        .expect("both factors were computed")
}

/// `exp(-i t H)` for hermitian `H`, via its eigendecomposition.
pub fn unitary_propagator(h: &DenseOperator, t: f64) -> DenseOperator {
    let dim = h.nrows();
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let phases = DVector::from_iterator(
        dim,
        eig.eigenvalues
            .iter()
            .map(|&e| C64::from_polar(1.0, -e * t)),
    );
    let v = &eig.eigenvectors;
    let scaled = DenseOperator::from_fn(dim, dim, |i, j| v[(i, j)] * phases[j]);
    scaled * v.adjoint()
}

pub fn frobenius(op: &DenseOperator) -> f64 {
    op.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
