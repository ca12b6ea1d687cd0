//! Pure-loss channel Kraus operators and their expansion in powers of `sqrt(gamma)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DenseOperator, C64};
use crate::linalg::{binomial, factorial};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossParams {
    pub kappa: f64,
    pub t: f64,
}

impl LossParams {
    pub fn new(kappa: f64, t: f64) -> Result<Self> {
        if !(kappa >= 0.0 && kappa.is_finite() && t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "loss rate and time must be finite and non-negative, got kappa={kappa}, t={t}"
            )));
        }
        Ok(Self { kappa, t })
    }

    /// Rate that produces loss probability `gamma` over time `t`.
    pub fn from_gamma(gamma: f64, t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in [0, 1), got {gamma}"
            )));
        }
        if gamma == 0.0 {
            return Self::new(0.0, t);
        }
        if t.is_nan() || t <= 0.0 {
            return Err(Error::InvalidParameter(
                "a positive gate time is needed for nonzero loss".into(),
            ));
        }
        Self::new(-(-gamma).ln_1p() / t, t)
    }

    /// `1 - exp(-kappa t)`.
    pub fn gamma(&self) -> f64 {
        -(-self.kappa * self.t).exp_m1()
    }
}

/// Kraus operator for `m` lost photons,
/// `<n-m|E_m|n> = sqrt(C(n,m)) gamma^{m/2} (1-gamma)^{(n-m)/2}`.
pub fn loss_kraus(params: &LossParams, m: usize, dim: usize) -> DenseOperator {
    loss_kraus_gamma(params.gamma(), m, dim)
}

pub fn loss_kraus_gamma(gamma: f64, m: usize, dim: usize) -> DenseOperator {
    let mut e = DenseOperator::zeros(dim, dim);
    for n in m..dim {
        let amp = binomial(n, m).sqrt()
            * gamma.powf(m as f64 / 2.0)
            * (1.0 - gamma).powf((n - m) as f64 / 2.0);
        e[(n - m, n)] = C64::new(amp, 0.0);
    }
    e
}

/// Operator coefficient of `gamma^{l/2}` in `E_m`.
///
/// Only `l = m + 2j` appear; the coefficient is
/// `a^m / sqrt(m!) * (-1)^j * binom((n - m)/2, j)` with `n` the photon number before
/// the loss.
pub fn kraus_taylor_term(m: usize, l: usize, dim: usize) -> Result<DenseOperator> {
    if l < m || !(l - m).is_multiple_of(2) {
        return Err(Error::InvalidOrder { m, l });
    }
    let j = (l - m) / 2;
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut term = DenseOperator::zeros(dim, dim);
    for n in m..dim {
        let x = (n - m) as f64 / 2.0;
        let falling: f64 = (0..j).map(|i| x - i as f64).product();
        let ladder: f64 = (0..m).map(|i| (n - i) as f64).product::<f64>().sqrt();
        term[(n - m, n)] = C64::new(
            ladder / factorial(m).sqrt() * sign * falling / factorial(j),
            0.0,
        );
    }
    Ok(term)
}
