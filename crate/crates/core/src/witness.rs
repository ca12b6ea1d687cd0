//! Rank witness for the minimum number of odd block off-diagonals.
//!
//! Restrict the first row of the logical block to the odd offsets in `J` plus every
//! even offset. Requiring `H n^k|psi_L> = n^k|psi_L>` and
//! `H n^k|psi_perp> = -n^k|psi_perp>` for `k = 0..=floor(l/2)`, with
//! `|psi_L> = |0_L> + alpha|1_L>` and `|psi_perp> = alpha*|0_L> - |1_L>`, gives a
//! linear system `M x = b`. When `rank([M|b]) > rank(M)` no Hamiltonian with that
//! sparsity can commute with the no-jump errors.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::fock::C64;
use crate::linalg::numerical_rank;

pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessConfig {
    pub alpha: C64,
    /// Odd grid offsets allowed to be nonzero.
    pub odd_offdiagonals: BTreeSet<usize>,
    /// Even grid indices used as free columns.
    pub even_columns: BTreeSet<usize>,
    pub rank_tol: f64,
}

impl WitnessConfig {
    /// `alpha = 1` and every even index with a nonzero coefficient.
    pub fn default_for(code: &CodeSpec, odd_offdiagonals: BTreeSet<usize>) -> Self {
        let even_columns = code
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(k, c)| k % 2 == 0 && c.norm() > 0.0)
            .map(|(k, _)| k)
            .collect();
        Self {
            alpha: C64::new(1.0, 0.0),
            odd_offdiagonals,
            even_columns,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }

    fn validate(&self, code: &CodeSpec) -> Result<()> {
        if self.alpha.norm() == 0.0 {
            return Err(Error::InvalidConfig("alpha must be nonzero".into()));
        }
        let max_odd = 2 * code.cutoff() - 1;
        if let Some(j) = self
            .odd_offdiagonals
            .iter()
            .find(|&&j| j % 2 == 0 || j > max_odd)
        {
            return Err(Error::InvalidConfig(format!(
                "odd off-diagonal {j} must be odd and at most {max_odd}"
            )));
        }
        if let Some(k) = self
            .even_columns
            .iter()
            .find(|&&k| k % 2 == 1 || k > code.cutoff())
        {
            return Err(Error::InvalidConfig(format!(
                "even column {k} must be even and at most {}",
                code.cutoff()
            )));
        }
        if self.rank_tol.is_nan() || self.rank_tol <= 0.0 {
            return Err(Error::InvalidConfig(
                "rank tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub odd_offdiagonals: Vec<usize>,
    pub rank_m: usize,
    pub rank_mb: usize,
    pub consistent: bool,
}

/// The system matrix and right-hand side; columns are the odd offsets of `J` followed
/// by the even columns.
pub fn witness_system(
    code: &CodeSpec,
    l: usize,
    cfg: &WitnessConfig,
) -> Result<(DMatrix<C64>, Vec<C64>)> {
    cfg.validate(code)?;
    let coeff = |k: usize| code.coeffs().get(k).copied().unwrap_or(C64::new(0.0, 0.0));
    let pow = |x: usize, p: usize| -> f64 {
        if p == 0 {
            1.0
        } else {
            (x as f64).powi(p as i32)
        }
    };
    let half = l / 2;
    let rows = 2 * half + 2;
    let odd: Vec<usize> = cfg.odd_offdiagonals.iter().copied().collect();
    let even: Vec<usize> = cfg.even_columns.iter().copied().collect();
    let alpha = cfg.alpha;
    let mut m = DMatrix::zeros(rows, odd.len() + even.len());
    let mut b = vec![C64::new(0.0, 0.0); rows];
    for p in 0..=half {
        let bottom = half + 1 + p;
        for (col, &j) in odd.iter().enumerate() {
            let v = coeff(j) * pow(j, p);
            m[(p, col)] = alpha * v;
            m[(bottom, col)] = -v;
        }
        for (offset, &i) in even.iter().enumerate() {
            let v = coeff(i) * pow(i, p);
            m[(p, odd.len() + offset)] = v;
            m[(bottom, odd.len() + offset)] = alpha.conj() * v;
        }
    }
    b[0] = coeff(0);
    b[half + 1] = -alpha.conj() * coeff(0);
    Ok((m, b))
}

pub fn min_squeezing_witness(
    code: &CodeSpec,
    l: usize,
    cfg: &WitnessConfig,
) -> Result<WitnessReport> {
    let (m, b) = witness_system(code, l, cfg)?;
    let mut mb = m.clone().insert_column(m.ncols(), C64::new(0.0, 0.0));
    let last = mb.ncols() - 1;
    for (r, v) in b.iter().enumerate() {
        mb[(r, last)] = *v;
    }
    let rank_m = numerical_rank(&m, cfg.rank_tol);
    let rank_mb = numerical_rank(&mb, cfg.rank_tol);
    Ok(WitnessReport {
        odd_offdiagonals: cfg.odd_offdiagonals.iter().copied().collect(),
        rank_m,
        rank_mb,
        consistent: rank_m == rank_mb,
    })
}

/// All subsets of size `size` drawn from `pool`, in lexicographic order.
pub fn subsets(pool: &[usize], size: usize) -> Vec<BTreeSet<usize>> {
    fn go(
        pool: &[usize],
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        if cur.len() == size {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            go(pool, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Runs the witness on every `J` of size `floor(l/2)` drawn from the odd offsets
/// `1, 3, ..., 2K - 1`, with default settings otherwise.
pub fn refutation_sweep(code: &CodeSpec, l: usize) -> Result<Vec<WitnessReport>> {
    if l >= code.spacing() || l >= code.cutoff() {
        return Err(Error::NotCorrectable {
            target: format!("errors up to order {l}"),
            reason: format!("needs l below N={} and K={}", code.spacing(), code.cutoff()),
        });
    }
    let pool: Vec<usize> = (1..2 * code.cutoff()).step_by(2).collect();
    subsets(&pool, l / 2)
        .into_par_iter()
        .map(|j| min_squeezing_witness(code, l, &WitnessConfig::default_for(code, j)))
        .collect()
}
