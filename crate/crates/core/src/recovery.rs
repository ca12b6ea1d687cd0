//! Recovery channel that measures the loss parity sector and maps each sector's
//! damaged codewords back onto the code.

use nalgebra::Matrix2;

use crate::codes::{codewords, CodeSpec};
use crate::error::{Error, Result};
use crate::fock::{identity, DenseOperator, ErrorTerm, State, C64};
use crate::loss::loss_kraus_gamma;

/// Images shorter than this are treated as absent.
const VANISHING_IMAGE: f64 = 1e-14;
/// Smallest accepted `lambda_min / lambda_max` of a sector Gram matrix.
const GRAM_CONDITION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryChannel {
    pub kraus: Vec<DenseOperator>,
    pub code: CodeSpec,
    pub gamma: f64,
}

impl RecoveryChannel {
    /// `sum_i R_i X R_i^dagger`.
    pub fn apply(&self, x: &DenseOperator) -> DenseOperator {
        let dim = x.nrows();
        let mut out = DenseOperator::zeros(dim, dim);
        for r in &self.kraus {
            out += r * x * r.adjoint();
        }
        out
    }

    /// `sum_i R_i^dagger R_i`.
    pub fn completeness(&self) -> DenseOperator {
        let dim = self.code.dim();
        self.kraus
            .iter()
            .fold(DenseOperator::zeros(dim, dim), |acc, r| {
                acc + r.adjoint() * r
            })
    }
}

/// For each sector `m < N` the images `E_m(gamma)|mu_L>` are symmetrically
/// orthonormalized into `|phi_mu>` and `R_m = sum_mu |mu_L><phi_mu|`. The last Kraus
/// operator is the projector onto everything the sectors leave untouched.
pub fn recovery_channel(code: &CodeSpec, gamma: f64) -> Result<RecoveryChannel> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in [0, 1), got {gamma}"
        )));
    }
    let dim = code.dim();
    let (zero, one) = codewords(code);
    let mut kraus = Vec::with_capacity(code.spacing() + 1);
    let mut remainder = identity(dim);

    for m in 0..code.spacing() {
        let e = loss_kraus_gamma(gamma, m, dim);
        let images = [&e * &zero, &e * &one];
        if images.iter().all(|v| v.norm() < VANISHING_IMAGE) {
            continue;
        }
        let phi = lowdin(&images).map_err(|norm| Error::DegenerateError {
            term: ErrorTerm::new(m, 0),
            norm,
        })?;
        let r = &zero * phi[0].adjoint() + &one * phi[1].adjoint();
        remainder -= &phi[0] * phi[0].adjoint() + &phi[1] * phi[1].adjoint();
        kraus.push(r);
    }
    kraus.push(remainder);
    Ok(RecoveryChannel {
        kraus,
        code: code.clone(),
        gamma,
    })
}

/// `phi = V G^{-1/2}` for the two columns of `V`; on failure returns the smallest Gram
/// eigenvalue's square root.
fn lowdin(images: &[State; 2]) -> std::result::Result<[State; 2], f64> {
    let gram = Matrix2::from_fn(|i, j| images[i].dotc(&images[j]));
    let eig = gram.symmetric_eigen();
    let (lo, hi) = (eig.eigenvalues.min(), eig.eigenvalues.max());
    if lo.is_nan() || lo <= GRAM_CONDITION * hi {
        return Err(lo.max(0.0).sqrt());
    }
    let inv_sqrt = Matrix2::from_diagonal(&eig.eigenvalues.map(|v| C64::new(1.0 / v.sqrt(), 0.0)));
    let s = eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
    let phi0 = &images[0] * s[(0, 0)] + &images[1] * s[(1, 0)];
    let phi1 = &images[0] * s[(0, 1)] + &images[1] * s[(1, 1)];
    Ok([phi0, phi1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation, max_abs};

    #[test]
    fn trace_preserving() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        for gamma in [0.0, 1e-3, 0.2, 0.6] {
            let r = recovery_channel(&code, gamma).unwrap();
            assert!(max_abs(&(r.completeness() - identity(code.dim()))) < 1e-10);
        }
    }

    #[test]
    fn identity_on_code_at_zero_loss() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        let r = recovery_channel(&code, 0.0).unwrap();
        // sectors 1 and 2 vanish, leaving the code map and the remainder
        assert_eq!(r.kraus.len(), 2);
        let (zero, one) = codewords(&code);
        let psi = (&zero * C64::new(0.6, 0.0)) + (&one * C64::new(0.0, 0.8));
        let rho = &psi * psi.adjoint();
        assert!(max_abs(&(r.apply(&rho) - &rho)) < 1e-12);
    }

    #[test]
    fn single_jump_is_undone() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        let r = recovery_channel(&code, 1e-9).unwrap();
        let (zero, one) = codewords(&code);
        let psi = (&zero * C64::new(0.6, 0.0)) + (&one * C64::new(0.0, 0.8));
        let hit = annihilation(code.dim()) * &psi;
        let hit = &hit / C64::new(hit.norm(), 0.0);
        let out = r.apply(&(&hit * hit.adjoint()));
        let want = &psi * psi.adjoint();
        assert!(max_abs(&(out - want)) < 1e-6);
    }

    #[test]
    fn rejects_bad_gamma() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        assert!(recovery_channel(&code, 1.0).is_err());
        assert!(recovery_channel(&code, -0.1).is_err());
    }

    #[test]
    fn one_sided_sector_is_degenerate() {
        // a annihilates |0_L> = |0>
        let code = CodeSpec::binomial(2, 1).unwrap();
        assert!(matches!(
            recovery_channel(&code, 0.1),
            Err(Error::DegenerateError { .. })
        ));
    }
}
