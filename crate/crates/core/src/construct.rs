//! Synthesis of parity-nested gate Hamiltonians that commute with loss errors on the
//! code space.
//!
//! Amplitude-mixing constructions generate a logical X rotation: every returned
//! Hamiltonian has `|+_L>` and `|-_L>` as `+1` and `-1` eigenvectors.
//!
//! * [`naive`] places every error word pair directly into the `+-1` eigenspaces.
//! * [`theorem1`] rebuilds the same kind of Hamiltonian from shifted binomial units and
//!   only populates the first `floor(l/2) + 1` odd block off-diagonals.
//! * [`theorem2`] uses nearest-neighbour blocks only and commutes with pure jumps.
//! * [`direct_solve`] solves the commutation constraints on a chosen set of odd block
//!   off-diagonals.
//! * [`phase_gate`], [`basic`] and [`idle`] are the diagonal and baseline gates.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::codes::{
    codewords, dual_codewords, jump_error_words, lemma1_decompose, orthogonalized_error_words,
    CodeSpec,
};
use crate::error::{Error, Result};
use crate::fock::{
    apply_error, squeezing_orders, to_parity_blocks, DenseOperator, ErrorSet, ParityBlocks, State,
    C64, DEFAULT_ENTRY_TOL,
};
use crate::linalg::min_norm_lstsq;

/// Coefficients smaller than this are replaced by 1 when dividing during recombination.
const ZERO_COEFF: f64 = 1e-14;
/// Largest per-constraint residual accepted from a direct solve.
pub const DIRECT_SOLVE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Naive,
    #[serde(rename = "thm1")]
    Theorem1,
    #[serde(rename = "thm2")]
    Theorem2,
    Direct,
    Phase,
    Basic,
    Idle,
}

impl Construction {
    pub const ALL: [Construction; 7] = [
        Construction::Naive,
        Construction::Theorem1,
        Construction::Theorem2,
        Construction::Direct,
        Construction::Phase,
        Construction::Basic,
        Construction::Idle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Construction::Naive => "naive",
            Construction::Theorem1 => "thm1",
            Construction::Theorem2 => "thm2",
            Construction::Direct => "direct",
            Construction::Phase => "phase",
            Construction::Basic => "basic",
            Construction::Idle => "idle",
        }
    }

    /// Whether the gate mixes `|0_L>` and `|1_L>` (as opposed to a phase or no-op).
    pub fn mixes_amplitudes(&self) -> bool {
        !matches!(self, Construction::Phase | Construction::Idle)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown construction '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtHamiltonian {
    pub matrix: DenseOperator,
    pub code: CodeSpec,
    pub construction: Construction,
    /// Errors the construction is designed to commute with.
    pub target: ErrorSet,
    pub blocks: ParityBlocks,
    pub orders: BTreeSet<usize>,
}

impl EtHamiltonian {
    fn assemble(
        matrix: DenseOperator,
        code: &CodeSpec,
        construction: Construction,
        target: ErrorSet,
    ) -> Result<Self> {
        let blocks = to_parity_blocks(&matrix, code.spacing(), code.cutoff(), DEFAULT_ENTRY_TOL)?;
        let orders = squeezing_orders(&matrix, code.spacing(), DEFAULT_ENTRY_TOL)?;
        Ok(Self {
            matrix,
            code: code.clone(),
            construction,
            target,
            blocks,
            orders,
        })
    }

    /// `max(|H|+_L> - |+_L>|, |H|-_L> + |-_L>|)`.
    pub fn dual_eigen_residual(&self) -> f64 {
        let (plus, minus) = dual_codewords(&self.code);
        let rp = (&self.matrix * &plus - &plus).norm();
        let rm = (&self.matrix * &minus + &minus).norm();
        rp.max(rm)
    }
}

fn not_correctable(target: &str, reason: impl Into<String>) -> Error {
    Error::NotCorrectable {
        target: target.to_string(),
        reason: reason.into(),
    }
}

fn require_below_spacing(code: &CodeSpec, l: usize, target: &str) -> Result<()> {
    if l >= code.spacing() {
        return Err(not_correctable(
            target,
            format!("order {l} is not below the spacing {}", code.spacing()),
        ));
    }
    Ok(())
}

/// `sum_E (|+_E><+_E| - |-_E><-_E|)` over the Gram-Schmidt error words of `errors`.
pub fn naive(code: &CodeSpec, errors: &ErrorSet) -> Result<EtHamiltonian> {
    let matrix = naive_matrix(code, errors)?;
    EtHamiltonian::assemble(matrix, code, Construction::Naive, errors.clone())
}

fn naive_matrix(code: &CodeSpec, errors: &ErrorSet) -> Result<DenseOperator> {
    let dim = code.dim();
    let mut h = DenseOperator::zeros(dim, dim);
    for words in orthogonalized_error_words(code, errors)? {
        h += &words.plus * words.plus.adjoint();
        h -= &words.minus * words.minus.adjoint();
    }
    Ok(h)
}

/// Hamiltonian commuting with every `a^m n^k` with `m/2 + k <= l/2`, built by
/// splitting the squared coefficients into shifted binomial units of cutoff `l + 1`,
/// taking the naive Hamiltonian of each unit, and recombining them entrywise as
/// `H[n,n'] = sum_j w_j H_j[n,n'] u_j[k]* u_j[k'] / (c[k]* c[k'])` with `k = ceil(n/N)`.
pub fn theorem1(code: &CodeSpec, l: usize) -> Result<EtHamiltonian> {
    let target = ErrorSet::full(l);
    let decomposition = lemma1_decompose(code, l)?;
    let (n, k) = (code.spacing(), code.cutoff());
    let unit_cutoff = decomposition.unit_cutoff;
    let unit_scale = 2f64.powi(unit_cutoff as i32 - 1);

    let guarded: Vec<C64> = code
        .coeffs()
        .iter()
        .map(|&c| {
            if c.norm() < ZERO_COEFF {
                C64::new(1.0, 0.0)
            } else {
                c
            }
        })
        .collect();

    let dim = code.dim();
    let mut h = DenseOperator::zeros(dim, dim);
    for (shift, &w) in decomposition.weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let unit = CodeSpec::shifted_binomial(n, k, unit_cutoff, shift)?;
        let unit_h = naive_matrix(&unit, &target)?;
        let u = unit.coeffs();
        let weight = w * unit_scale;
        for col in 0..dim {
            let kc = col.div_ceil(n);
            for row in 0..dim {
                let entry = unit_h[(row, col)];
                if entry.norm() == 0.0 {
                    continue;
                }
                let kr = row.div_ceil(n);
                h[(row, col)] +=
                    entry * u[kr].conj() * u[kc] * weight / (guarded[kr].conj() * guarded[kc]);
            }
        }
    }
    EtHamiltonian::assemble(h, code, Construction::Theorem1, target)
}

/// Nearest-neighbour Hamiltonian commuting with `I, a, ..., a^l` on the code space:
/// `(H_m)_{k,k+1} = sum_{j<=k} (-1)^{j+k} |d_j|^2 / (d_k* d_{k+1})` with `d` the
/// shifted coefficients of the `a^m` error words.
pub fn theorem2(code: &CodeSpec, l: usize) -> Result<EtHamiltonian> {
    let target = ErrorSet::jumps_only(l);
    let label = format!("jumps up to a^{l}");
    require_below_spacing(code, l, &label)?;
    let (n, k) = (code.spacing(), code.cutoff());
    let dim = code.dim();
    let mut h = DenseOperator::zeros(dim, dim);

    for m in 0..=l {
        let words = jump_error_words(code, m)
            .map_err(|e| not_correctable(&label, format!("a^{m} words undefined: {e}")))?;
        let d = &words.shifted_coeffs;
        let total: f64 = d.iter().map(|x| x.norm_sqr()).sum();
        let alternating: f64 = d
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if i % 2 == 0 {
                    x.norm_sqr()
                } else {
                    -x.norm_sqr()
                }
            })
            .sum();
        if alternating.abs() > DEFAULT_ENTRY_TOL * total {
            return Err(not_correctable(
                &label,
                format!("a^{m} images of the two codewords differ in norm ({alternating:e})"),
            ));
        }
        let first = if m == 0 { 0 } else { 1 };
        let mut running = 0.0;
        for idx in 0..k {
            // running = sum_{j<=idx} (-1)^{j+idx} |d_j|^2
            running = d[idx].norm_sqr() - running;
            if idx < first {
                continue;
            }
            let denom = d[idx].conj() * d[idx + 1];
            let entry = if denom.norm() < ZERO_COEFF {
                if running.abs() > DEFAULT_ENTRY_TOL {
                    return Err(not_correctable(
                        &label,
                        format!("nearest-neighbour chain of sector {m} breaks at grid index {idx}"),
                    ));
                }
                C64::new(0.0, 0.0)
            } else {
                C64::new(running, 0.0) / denom
            };
            let (r, c) = (idx * n - m, (idx + 1) * n - m);
            h[(r, c)] = entry;
            h[(c, r)] = entry.conj();
        }
    }
    EtHamiltonian::assemble(h, code, Construction::Theorem2, target)
}

/// Solves `H E|+-_L> = +-E|+-_L>` for every `E` in `errors`, with `H` restricted to the
/// block off-diagonals listed in `allowed` (odd grid offsets). Underdetermined systems
/// return the minimum-norm Hamiltonian.
pub fn direct_solve(
    code: &CodeSpec,
    errors: &ErrorSet,
    allowed: &BTreeSet<usize>,
) -> Result<EtHamiltonian> {
    if allowed.is_empty() {
        return Err(Error::InvalidParameter("no off-diagonals allowed".into()));
    }
    if let Some(even) = allowed.iter().find(|&&j| j % 2 == 0) {
        return Err(Error::InvalidParameter(format!(
            "off-diagonal {even} is not odd; only odd block off-diagonals mix the codewords"
        )));
    }
    let (n, k) = (code.spacing(), code.cutoff());
    let dim = code.dim();

    // Upper-triangle positions (row, col) in Fock indices.
    let mut slots = Vec::new();
    for m in 0..n {
        let sites: Vec<usize> = (0..=k).filter(|&g| g * n >= m).map(|g| g * n - m).collect();
        for (a, &ra) in sites.iter().enumerate() {
            for &rb in &sites[a + 1..] {
                if allowed.contains(&((rb - ra) / n)) {
                    slots.push((ra, rb));
                }
            }
        }
    }

    let (plus, minus) = dual_codewords(code);
    let mut constraints: Vec<(State, f64)> = Vec::new();
    for &term in errors.iter() {
        for (logical, sign) in [(&plus, 1.0), (&minus, -1.0)] {
            let image = apply_error(term, logical);
            let norm = image.norm();
            if norm > 0.0 {
                constraints.push((image / C64::new(norm, 0.0), sign));
            }
        }
    }

    let rows = 2 * dim * constraints.len();
    let cols = 2 * slots.len();
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    let mut b = DVector::<f64>::zeros(rows);
    let i = C64::new(0.0, 1.0);
    for (ci, (v, sign)) in constraints.iter().enumerate() {
        let base = 2 * dim * ci;
        for row in 0..dim {
            b[base + row] = sign * v[row].re;
            b[base + dim + row] = sign * v[row].im;
        }
        for (si, &(r, c)) in slots.iter().enumerate() {
            // real part of the entry: contributes v[c] to row r and v[r] to row c
            let re_r = v[c];
            let re_c = v[r];
            // imaginary part: i v[c] to row r and -i v[r] to row c
            let im_r = i * v[c];
            let im_c = -i * v[r];
            a[(base + r, 2 * si)] += re_r.re;
            a[(base + dim + r, 2 * si)] += re_r.im;
            a[(base + c, 2 * si)] += re_c.re;
            a[(base + dim + c, 2 * si)] += re_c.im;
            a[(base + r, 2 * si + 1)] += im_r.re;
            a[(base + dim + r, 2 * si + 1)] += im_r.im;
            a[(base + c, 2 * si + 1)] += im_c.re;
            a[(base + dim + c, 2 * si + 1)] += im_c.im;
        }
    }

    let x = min_norm_lstsq(&a, &b, 1e-10);
    let mut h = DenseOperator::zeros(dim, dim);
    for (si, &(r, c)) in slots.iter().enumerate() {
        let entry = C64::new(x[2 * si], x[2 * si + 1]);
        h[(r, c)] = entry;
        h[(c, r)] = entry.conj();
    }

    let residual = constraints
        .iter()
        .map(|(v, sign)| (&h * v - v * C64::new(*sign, 0.0)).norm())
        .fold(0.0, f64::max);
    if residual > DIRECT_SOLVE_TOL {
        return Err(Error::Inconsistent { residual });
    }
    EtHamiltonian::assemble(h, code, Construction::Direct, errors.clone())
}

/// Diagonal Hamiltonian putting phase `theta` on every Fock state reached from
/// `|1_L>` by `a^m`, `m = 0..=l`, so `exp(-iH)` acts as a logical Z rotation on the
/// code and on each error space.
pub fn phase_gate(code: &CodeSpec, theta: f64, l: usize) -> Result<EtHamiltonian> {
    if l >= code.spacing() {
        return Err(Error::InvalidParameter(format!(
            "order {l} is not below the spacing {}; error spaces would overlap",
            code.spacing()
        )));
    }
    let n = code.spacing();
    let dim = code.dim();
    let mut h = DenseOperator::zeros(dim, dim);
    for (k, c) in code.coeffs().iter().enumerate() {
        if k % 2 == 0 || c.norm() == 0.0 {
            continue;
        }
        for m in 0..=l.min(k * n) {
            h[(k * n - m, k * n - m)] = C64::new(theta, 0.0);
        }
    }
    EtHamiltonian::assemble(h, code, Construction::Phase, ErrorSet::full(l))
}

/// `|0_L><1_L| + |1_L><0_L|`, the logical X generator with no error protection.
pub fn basic(code: &CodeSpec) -> Result<EtHamiltonian> {
    let (zero, one) = codewords(code);
    let h = &zero * one.adjoint() + &one * zero.adjoint();
    EtHamiltonian::assemble(h, code, Construction::Basic, ErrorSet::jumps_only(0))
}

pub fn idle(code: &CodeSpec) -> Result<EtHamiltonian> {
    let dim = code.dim();
    EtHamiltonian::assemble(
        DenseOperator::zeros(dim, dim),
        code,
        Construction::Idle,
        ErrorSet::jumps_only(0),
    )
}

/// Spin-`J` `J_x` with `J = two_j / 2`, in the basis `|J, J>, |J, J-1>, ..., |J, -J>`.
pub fn spin_jx(two_j: usize) -> Result<DenseOperator> {
    if two_j == 0 {
        return Err(Error::InvalidParameter("spin must be positive".into()));
    }
    let j = two_j as f64 / 2.0;
    let size = two_j + 1;
    let mut jx = DenseOperator::zeros(size, size);
    for k in 0..two_j {
        let m = j - k as f64;
        let v = 0.5 * (j * (j + 1.0) - (m - 1.0) * m).sqrt();
        jx[(k, k + 1)] = C64::new(v, 0.0);
        jx[(k + 1, k)] = C64::new(v, 0.0);
    }
    Ok(jx)
}
