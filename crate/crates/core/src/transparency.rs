//! Checks that a Hamiltonian lets correctable errors pass through unchanged.
//!
//! [`check_error_transparency`] tests the strict commutation condition
//! `[E, H]|mu_L> = 0`. [`check_general_et`] tests the weaker closure condition that
//! every commutator `[H, E P_C]` stays inside `span{E' P_C}`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::codes::{codewords, CodeSpec};
use crate::error::{Error, Result};
use crate::fock::{error_operator, DenseOperator, ErrorSet, ErrorTerm, C64};
use crate::linalg::frobenius;

/// Default relative tolerance for both checks.
pub const ET_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtResidual {
    pub term: ErrorTerm,
    /// Logical state the residual was evaluated on; `None` for whole-space checks.
    pub logical: Option<u8>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtReport {
    pub entries: Vec<EtResidual>,
    /// Absolute pass threshold applied to each residual.
    pub threshold: f64,
    pub passes: bool,
}

impl EtReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    /// Entries above the threshold.
    pub fn failures(&self) -> impl Iterator<Item = &EtResidual> {
        self.entries
            .iter()
            .filter(move |e| e.residual > self.threshold)
    }
}

fn check_dims(h: &DenseOperator, code: &CodeSpec) -> Result<()> {
    if h.nrows() != code.dim() || h.ncols() != code.dim() {
        return Err(Error::DimensionMismatch {
            expected: code.dim(),
            actual: h.nrows(),
        });
    }
    Ok(())
}

/// `||[E, H]|mu_L>||` for every error and both codewords; passes when each is at most
/// `tol * ||H||_F`.
pub fn check_error_transparency(
    h: &DenseOperator,
    code: &CodeSpec,
    errors: &ErrorSet,
    tol: f64,
) -> Result<EtReport> {
    check_dims(h, code)?;
    let (zero, one) = codewords(code);
    let threshold = tol * frobenius(h);
    let mut entries = Vec::with_capacity(2 * errors.len());
    for &term in errors.iter() {
        let e = error_operator(term, code.dim());
        let comm = &e * h - h * &e;
        for (label, state) in [(0u8, &zero), (1u8, &one)] {
            entries.push(EtResidual {
                term,
                logical: Some(label),
                residual: (&comm * state).norm(),
            });
        }
    }
    let passes = entries.iter().all(|e| e.residual <= threshold);
    Ok(EtReport {
        entries,
        threshold,
        passes,
    })
}

/// Projects `vec([H, E P_C])` onto `span{vec(E' P_C)}` for each listed error. Passes
/// when every residual is at most `tol * ||H||_F * ||E P_C||_F`; the reported
/// residuals are normalized by `||E P_C||_F`, so the threshold is `tol * ||H||_F`.
pub fn check_general_et(
    h: &DenseOperator,
    code: &CodeSpec,
    errors: &ErrorSet,
    tol: f64,
) -> Result<EtReport> {
    check_dims(h, code)?;
    let dim = code.dim();
    let (zero, one) = codewords(code);
    let projector = &zero * zero.adjoint() + &one * one.adjoint();

    let images: Vec<DenseOperator> = errors
        .iter()
        .map(|&t| error_operator(t, dim) * &projector)
        .collect();
    let span = DMatrix::<C64>::from_fn(dim * dim, images.len(), |r, c| images[c][r]);
    let basis = orthonormal_columns(&span);

    let threshold = tol * frobenius(h);
    let mut entries = Vec::with_capacity(images.len());
    for (&term, image) in errors.iter().zip(&images) {
        let scale = frobenius(image);
        let comm = h * image - image * h;
        let v = DVector::<C64>::from_iterator(dim * dim, comm.iter().cloned());
        let coeffs = basis.adjoint() * &v;
        let residual = (&v - &basis * coeffs).norm();
        let residual = if scale > 0.0 {
            residual / scale
        } else {
            residual
        };
        entries.push(EtResidual {
            term,
            logical: None,
            residual,
        });
    }
    let passes = entries.iter().all(|e| e.residual <= threshold);
    Ok(EtReport {
        entries,
        threshold,
        passes,
    })
}

fn orthonormal_columns(m: &DMatrix<C64>) -> DMatrix<C64> {
    if m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left factor requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1e-12 * smax)
        .map(|(i, _)| i)
        .collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}
