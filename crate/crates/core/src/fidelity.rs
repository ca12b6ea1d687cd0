//! Process fidelity of a gate under photon loss followed by recovery, swept over loss
//! probabilities, and power-law fits of the resulting infidelity curves.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{codewords, CodeSpec};
use crate::error::{Error, Result};
use crate::fock::{DenseOperator, C64};
use crate::linalg::unitary_propagator;
use crate::lindblad::{lindblad_evolve_with, IntegratorConfig};
use crate::loss::LossParams;
use crate::recovery::recovery_channel;

/// `[P, X, Y, Z]` on the code space, with `P` the code projector.
pub fn logical_paulis(code: &CodeSpec) -> [DenseOperator; 4] {
    let (zero, one) = codewords(code);
    let z0 = &zero * zero.adjoint();
    let o1 = &one * one.adjoint();
    let zo = &zero * one.adjoint();
    let oz = &one * zero.adjoint();
    let i = C64::new(0.0, 1.0);
    [&z0 + &o1, &zo + &oz, &oz * i - &zo * i, &z0 - &o1]
}

pub fn process_fidelity(h: &DenseOperator, code: &CodeSpec, kappa: f64, t: f64) -> Result<f64> {
    process_fidelity_with(h, code, kappa, t, &IntegratorConfig::default())
}

/// `F = (1/8) sum_M Tr[M R(L(U^dagger M U))]` over the four logical Paulis, where `L`
/// is the lossy evolution for time `t`, `U = exp(-iHt)` and `R` the recovery channel
/// for `gamma = 1 - exp(-kappa t)`.
pub fn process_fidelity_with(
    h: &DenseOperator,
    code: &CodeSpec,
    kappa: f64,
    t: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    if h.nrows() != code.dim() || h.ncols() != code.dim() {
        return Err(Error::DimensionMismatch {
            expected: code.dim(),
            actual: h.nrows(),
        });
    }
    let params = LossParams::new(kappa, t)?;
    let recovery = recovery_channel(code, params.gamma())?;
    let u = unitary_propagator(h, t);
    let mut total = 0.0;
    for pauli in logical_paulis(code) {
        let start = u.adjoint() * &pauli * &u;
        let evolved = lindblad_evolve_with(h, kappa, t, &start, cfg)?;
        let recovered = recovery.apply(&evolved);
        total += (&pauli * recovered).trace().re;
    }
    Ok(total / 8.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    pub kappa: f64,
    pub gamma: f64,
    pub infidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub gamma: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityCurve {
    /// Sorted by `gamma`.
    pub points: Vec<FidelityPoint>,
    pub failures: Vec<SweepFailure>,
    pub label: String,
    /// `(N, K)`.
    pub code: (usize, usize),
    pub gate_time: f64,
}

impl FidelityCurve {
    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Infidelity at the point closest to `gamma`.
    pub fn infidelity_near(&self, gamma: f64) -> Option<f64> {
        self.points
            .iter()
            .min_by(|a, b| (a.gamma - gamma).abs().total_cmp(&(b.gamma - gamma).abs()))
            .map(|p| p.infidelity)
    }
}

pub fn fidelity_sweep(h: &DenseOperator, code: &CodeSpec, gammas: &[f64], t: f64) -> FidelityCurve {
    fidelity_sweep_with(h, code, gammas, t, &IntegratorConfig::default())
}

/// Evaluates `1 - F` at `kappa = -ln(1 - gamma)/t` for every `gamma` in parallel.
/// Points that fail are listed in `failures` instead of aborting the sweep.
pub fn fidelity_sweep_with(
    h: &DenseOperator,
    code: &CodeSpec,
    gammas: &[f64],
    t: f64,
    cfg: &IntegratorConfig,
) -> FidelityCurve {
    let results: Vec<(f64, Result<FidelityPoint>)> = gammas
        .par_iter()
        .map(|&gamma| {
            let point = LossParams::from_gamma(gamma, t).and_then(|params| {
                let f = process_fidelity_with(h, code, params.kappa, t, cfg)?;
                Ok(FidelityPoint {
                    kappa: params.kappa,
                    gamma,
                    infidelity: (1.0 - f).max(0.0),
                })
            });
            (gamma, point)
        })
        .collect();
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for (gamma, r) in results {
        match r {
            Ok(p) => points.push(p),
            Err(e) => failures.push(SweepFailure {
                gamma,
                message: e.to_string(),
            }),
        }
    }
    points.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    FidelityCurve {
        points,
        failures,
        label: String::new(),
        code: (code.spacing(), code.cutoff()),
        gate_time: t,
    }
}

/// `count` log-spaced values from `min` to `max` inclusive.
pub fn log_spaced(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let (lo, hi) = (min.log10(), max.log10());
            (0..count)
                .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64))
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Least-squares line through `(log10 gamma, log10 infidelity)` for the points with
/// `gamma < gamma_max` and positive infidelity.
pub fn fit_loglog_slope(curve: &FidelityCurve, gamma_max: f64) -> Result<LogLogFit> {
    let xy: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.gamma > 0.0 && p.gamma < gamma_max && p.infidelity > 0.0)
        .map(|p| (p.gamma.log10(), p.infidelity.log10()))
        .collect();
    if xy.len() < 3 {
        return Err(Error::InsufficientPoints(xy.len()));
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientPoints(1));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(LogLogFit {
        slope,
        intercept,
        r_squared,
        points_used: xy.len(),
    })
}
