//! Operator algebra on the truncated Fock space.
//!
//! Every operator in this crate is a dense complex matrix on the Fock states
//! `|0>, ..., |dim-1>`. For a code with spacing `N` and cutoff `K` the working
//! dimension is `N*K + 1`, which is exact for photon loss because loss only lowers
//! the photon number and no constructed Hamiltonian reaches above `|KN>`.
//!
//! Fock states with `n = -m (mod N)` form the parity sector `m`. A Hamiltonian that
//! never couples different sectors is *parity nested*; [`to_parity_blocks`] splits it
//! into one block per sector and [`squeezing_orders`] reports which multiples of `N`
//! it populates off the diagonal.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type DenseOperator = DMatrix<C64>;
pub type State = DVector<C64>;

/// Relative threshold below which a matrix entry is treated as a structural zero.
pub const DEFAULT_ENTRY_TOL: f64 = 1e-10;

/// The error `a^m n^k`, with `n^k` applied first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ErrorTerm {
    /// Jump power `m`.
    pub jumps: usize,
    /// Dephasing (no-jump) power `k`.
    pub dephasing: usize,
}

impl ErrorTerm {
    pub const IDENTITY: ErrorTerm = ErrorTerm {
        jumps: 0,
        dephasing: 0,
    };

    pub fn new(jumps: usize, dephasing: usize) -> Self {
        Self { jumps, dephasing }
    }

    pub fn is_identity(&self) -> bool {
        self.jumps == 0 && self.dephasing == 0
    }

    /// Parity sector the error maps the code space into, for spacing `spacing`.
    pub fn sector(&self, spacing: usize) -> usize {
        self.jumps % spacing
    }
}

impl fmt::Display for ErrorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.jumps {
            0 => String::new(),
            1 => "a".to_string(),
            m => format!("a^{m}"),
        };
        let n = match self.dephasing {
            0 => String::new(),
            1 => "n".to_string(),
            k => format!("n^{k}"),
        };
        match (a.is_empty(), n.is_empty()) {
            (true, true) => f.write_str("I"),
            (false, true) => f.write_str(&a),
            (true, false) => f.write_str(&n),
            (false, false) => write!(f, "{a} {n}"),
        }
    }
}

/// An ordered list of errors whose first entry is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorSet {
    terms: Vec<ErrorTerm>,
}

impl ErrorSet {
    /// Builds a set from an explicit ordering. The identity must come first and no
    /// term may repeat; the order fixes the Gram-Schmidt sequence of error words.
    pub fn new(terms: Vec<ErrorTerm>) -> Result<Self> {
        match terms.first() {
            Some(t) if t.is_identity() => {}
            _ => {
                return Err(Error::InvalidParameter(
                    "error set must start with the identity".into(),
                ))
            }
        }
        let unique: BTreeSet<_> = terms.iter().collect();
        if unique.len() != terms.len() {
            return Err(Error::InvalidParameter(
                "error set contains duplicate terms".into(),
            ));
        }
        Ok(Self { terms })
    }

    /// All `a^m n^k` with `m/2 + k <= l/2`, ordered by jump power then dephasing power.
    pub fn full(l: usize) -> Self {
        let mut terms = Vec::new();
        for m in 0..=l {
            for k in 0..=((l - m) / 2) {
                terms.push(ErrorTerm::new(m, k));
            }
        }
        Self { terms }
    }

    /// The pure jumps `I, a, ..., a^l`.
    pub fn jumps_only(l: usize) -> Self {
        Self {
            terms: (0..=l).map(|m| ErrorTerm::new(m, 0)).collect(),
        }
    }

    pub fn terms(&self) -> &[ErrorTerm] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = &ErrorTerm> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_jumps(&self) -> usize {
        self.terms.iter().map(|t| t.jumps).max().unwrap_or(0)
    }
}

pub fn identity(dim: usize) -> DenseOperator {
    DenseOperator::identity(dim, dim)
}

/// Lowering operator with `<n-1|a|n> = sqrt(n)`.
pub fn annihilation(dim: usize) -> DenseOperator {
    let mut a = DenseOperator::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn creation(dim: usize) -> DenseOperator {
    annihilation(dim).adjoint()
}

pub fn number_operator(dim: usize) -> DenseOperator {
    DenseOperator::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::new(i as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Matrix of `a^m n^k`.
///
/// The only nonzero entries are `<n-m| a^m n^k |n> = sqrt(n (n-1) ... (n-m+1)) * n^k`.
pub fn error_operator(term: ErrorTerm, dim: usize) -> DenseOperator {
    let mut op = DenseOperator::zeros(dim, dim);
    for n in term.jumps..dim {
        let ladder: f64 = (0..term.jumps)
            .map(|i| (n - i) as f64)
            .product::<f64>()
            .sqrt();
        let dephase = (n as f64).powi(term.dephasing as i32);
        op[(n - term.jumps, n)] = C64::new(ladder * dephase, 0.0);
    }
    op
}

/// Applies `a^m n^k` to a state without forming the matrix.
pub fn apply_error(term: ErrorTerm, state: &State) -> State {
    let dim = state.len();
    let mut out = State::zeros(dim);
    for n in term.jumps..dim {
        let ladder: f64 = (0..term.jumps)
            .map(|i| (n - i) as f64)
            .product::<f64>()
            .sqrt();
        let dephase = (n as f64).powi(term.dephasing as i32);
        out[n - term.jumps] = state[n] * (ladder * dephase);
    }
    out
}

/// Sector index of Fock state `n` for spacing `spacing` (`n = -m mod N`).
pub fn sector_of(n: usize, spacing: usize) -> usize {
    (spacing - n % spacing) % spacing
}

/// Diagonal projector onto the Fock states with `n = -sector (mod spacing)`.
pub fn parity_projector(spacing: usize, sector: usize, dim: usize) -> Result<DenseOperator> {
    if spacing == 0 || sector >= spacing {
        return Err(Error::InvalidParameter(format!(
            "sector {sector} out of range for spacing {spacing}"
        )));
    }
    Ok(DenseOperator::from_fn(dim, dim, |i, j| {
        if i == j && sector_of(i, spacing) == sector {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Position of Fock state `n` after the parity-sorting permutation:
/// `ceil(n/N) + (-n mod N) * K`.
pub fn parity_index(n: usize, spacing: usize, cutoff: usize) -> usize {
    n.div_ceil(spacing) + sector_of(n, spacing) * cutoff
}

/// Permutation matrix `M = sum_n |ceil(n/N) + (-n mod N) K><n|` on dimension `N*K + 1`.
pub fn parity_permutation(spacing: usize, cutoff: usize) -> Result<DenseOperator> {
    check_spacing_cutoff(spacing, cutoff)?;
    let dim = spacing * cutoff + 1;
    let mut m = DenseOperator::zeros(dim, dim);
    for n in 0..dim {
        m[(parity_index(n, spacing, cutoff), n)] = C64::new(1.0, 0.0);
    }
    Ok(m)
}

fn check_spacing_cutoff(spacing: usize, cutoff: usize) -> Result<()> {
    if spacing == 0 || cutoff == 0 {
        return Err(Error::InvalidParameter(format!(
            "spacing and cutoff must be positive, got N={spacing}, K={cutoff}"
        )));
    }
    Ok(())
}

pub fn max_abs(op: &DenseOperator) -> f64 {
    op.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest magnitude of any entry coupling two different parity sectors.
pub fn cross_sector_residual(op: &DenseOperator, spacing: usize) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..op.ncols() {
        for i in 0..op.nrows() {
            if !(i + spacing - j % spacing).is_multiple_of(spacing) {
                worst = worst.max(op[(i, j)].norm());
            }
        }
    }
    worst
}

/// Maximum deviation from hermiticity, `max |A - A^dagger|`.
pub fn hermiticity_defect(op: &DenseOperator) -> f64 {
    max_abs(&(op - op.adjoint()))
}

/// The per-sector sub-Hamiltonians of a parity-nested operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityBlocks {
    pub spacing: usize,
    pub cutoff: usize,
    /// Block 0 is `(K+1) x (K+1)`; blocks `1..N` are `K x K`. Row `i` of block `m > 0`
    /// is the Fock state `(i+1) N - m`.
    pub blocks: Vec<DenseOperator>,
    /// Largest cross-sector magnitude of the source operator.
    pub residual_norm: f64,
}

impl ParityBlocks {
    /// Rebuilds `M^T blockdiag(blocks) M` on the full Fock space.
    pub fn assemble(&self) -> DenseOperator {
        let dim = self.spacing * self.cutoff + 1;
        let mut stacked = DenseOperator::zeros(dim, dim);
        let mut offset = 0;
        for block in &self.blocks {
            let size = block.nrows();
            stacked
                .view_mut((offset, offset), (size, size))
                .copy_from(block);
            offset += size;
        }
        let mut out = DenseOperator::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let pi = parity_index(i, self.spacing, self.cutoff);
                let pj = parity_index(j, self.spacing, self.cutoff);
                out[(i, j)] = stacked[(pi, pj)];
            }
        }
        out
    }

    pub fn block(&self, sector: usize) -> &DenseOperator {
        &self.blocks[sector]
    }
}

/// Splits `h` into its parity-sector blocks.
///
/// `tol` is relative to `max |h|`; if any cross-sector entry exceeds it the operator is
/// rejected with [`Error::ParityViolation`].
pub fn to_parity_blocks(
    h: &DenseOperator,
    spacing: usize,
    cutoff: usize,
    tol: f64,
) -> Result<ParityBlocks> {
    check_spacing_cutoff(spacing, cutoff)?;
    let dim = spacing * cutoff + 1;
    if h.nrows() != dim || h.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: h.nrows(),
        });
    }
    let residual = cross_sector_residual(h, spacing);
    let threshold = tol * max_abs(h);
    if residual > threshold {
        return Err(Error::ParityViolation {
            residual,
            threshold,
        });
    }

    let mut permuted = DenseOperator::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            permuted[(
                parity_index(i, spacing, cutoff),
                parity_index(j, spacing, cutoff),
            )] = h[(i, j)];
        }
    }
    let mut blocks = Vec::with_capacity(spacing);
    blocks.push(permuted.view((0, 0), (cutoff + 1, cutoff + 1)).into_owned());
    for m in 1..spacing {
        let start = m * cutoff + 1;
        blocks.push(permuted.view((start, start), (cutoff, cutoff)).into_owned());
    }
    Ok(ParityBlocks {
        spacing,
        cutoff,
        blocks,
        residual_norm: residual,
    })
}

/// The multiples `j >= 1` such that the `j*N`-th off-diagonal of `h` carries an entry
/// larger than `tol * max |h|`.
pub fn squeezing_orders(h: &DenseOperator, spacing: usize, tol: f64) -> Result<BTreeSet<usize>> {
    if spacing == 0 {
        return Err(Error::InvalidParameter("spacing must be positive".into()));
    }
    let residual = cross_sector_residual(h, spacing);
    let scale = max_abs(h);
    let threshold = tol * scale;
    if residual > threshold {
        return Err(Error::ParityViolation {
            residual,
            threshold,
        });
    }
    let mut orders = BTreeSet::new();
    if scale == 0.0 {
        return Ok(orders);
    }
    let dim = h.nrows();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let offset = j - i;
            if offset % spacing == 0
                && (h[(i, j)].norm() > threshold || h[(j, i)].norm() > threshold)
            {
                orders.insert(offset / spacing);
            }
        }
    }
    Ok(orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn two_level_ladder() {
        let a = annihilation(2);
        assert_eq!(a[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(a[(0, 0)], C64::new(0.0, 0.0));
        assert_eq!(a[(1, 0)], C64::new(0.0, 0.0));
        assert_eq!(a[(1, 1)], C64::new(0.0, 0.0));
        assert!(close(annihilation(3)[(1, 2)].re, 2f64.sqrt()));
    }

    #[test]
    fn number_operator_matches_ladder_product() {
        for dim in 1..6 {
            let a = annihilation(dim);
            let n = number_operator(dim);
            assert!(max_abs(&(a.adjoint() * &a - &n)) < 1e-14);
            for i in 0..dim {
                assert!(close(n[(i, i)].re, i as f64));
            }
        }
        assert_eq!(number_operator(1)[(0, 0)], C64::new(0.0, 0.0));
    }

    #[test]
    fn canonical_commutator_away_from_truncation_edge() {
        let dim = 8;
        let a = annihilation(dim);
        let comm = &a * a.adjoint() - a.adjoint() * &a;
        for i in 0..dim - 1 {
            for j in 0..dim - 1 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((comm[(i, j)] - C64::new(want, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn error_operator_ordering() {
        assert!(max_abs(&(error_operator(ErrorTerm::IDENTITY, 4) - identity(4))) < 1e-15);

        // a n on dim 3: <0|a n|1> = 1, <1|a n|2> = sqrt(2) * 2
        let an = error_operator(ErrorTerm::new(1, 1), 3);
        let by_hand = annihilation(3) * number_operator(3);
        assert!(max_abs(&(&an - &by_hand)) < 1e-14);
        assert!(close(an[(1, 2)].re, 2.0 * 2f64.sqrt()));
        assert!(close(an[(0, 1)].re, 1.0));

        let a2 = error_operator(ErrorTerm::new(2, 0), 3);
        assert!(close(a2[(0, 2)].re, 2f64.sqrt()));
        assert!((max_abs(&a2) - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(a2.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn apply_error_agrees_with_matrix() {
        let dim = 9;
        let state = State::from_fn(dim, |i, _| C64::new(1.0 + i as f64, 0.5 * i as f64));
        for term in ErrorSet::full(4).iter() {
            let direct = error_operator(*term, dim) * &state;
            assert!((direct - apply_error(*term, &state)).norm() < 1e-10);
        }
    }

    #[test]
    fn projectors_partition_identity() {
        assert!(max_abs(&(parity_projector(1, 0, 5).unwrap() - identity(5))) < 1e-15);

        let p = parity_projector(3, 1, 7).unwrap();
        let ones: Vec<usize> = (0..7).filter(|&i| p[(i, i)].re == 1.0).collect();
        assert_eq!(ones, vec![2, 5]);

        let dim = 10;
        let mut sum = DenseOperator::zeros(dim, dim);
        let projs: Vec<_> = (0..3)
            .map(|m| parity_projector(3, m, dim).unwrap())
            .collect();
        for (i, pi) in projs.iter().enumerate() {
            sum += pi;
            assert!(max_abs(&(pi * pi - pi)) < 1e-15);
            for (j, pj) in projs.iter().enumerate() {
                if i != j {
                    assert!(max_abs(&(pi * pj)) < 1e-15);
                }
            }
        }
        assert!(max_abs(&(sum - identity(dim))) < 1e-15);
        assert!(parity_projector(3, 3, dim).is_err());
    }

    #[test]
    fn permutation_index_map() {
        assert!(max_abs(&(parity_permutation(1, 4).unwrap() - identity(5))) < 1e-15);
        assert_eq!(parity_index(5, 3, 3), 5);
        assert_eq!(parity_index(2, 3, 3), 4);
        assert_eq!(parity_index(1, 3, 3), 7);
        assert_eq!(parity_index(9, 3, 3), 3);
        let m = parity_permutation(3, 3).unwrap();
        assert!(max_abs(&(&m * m.adjoint() - identity(10))) < 1e-15);
    }

    #[test]
    fn number_operator_blocks() {
        let n = number_operator(10);
        let blocks = to_parity_blocks(&n, 3, 3, DEFAULT_ENTRY_TOL).unwrap();
        assert_eq!(blocks.residual_norm, 0.0);
        assert_eq!(blocks.blocks[0].nrows(), 4);
        assert_eq!(blocks.blocks[1].nrows(), 3);
        let diag1: Vec<f64> = (0..3).map(|i| blocks.blocks[1][(i, i)].re).collect();
        assert_eq!(diag1, vec![2.0, 5.0, 8.0]);
        let diag2: Vec<f64> = (0..3).map(|i| blocks.blocks[2][(i, i)].re).collect();
        assert_eq!(diag2, vec![1.0, 4.0, 7.0]);
        assert!(max_abs(&(blocks.assemble() - n)) < 1e-15);
        assert!(squeezing_orders(&number_operator(10), 3, DEFAULT_ENTRY_TOL)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn ladder_is_not_parity_nested() {
        let a = annihilation(10);
        assert!(matches!(
            to_parity_blocks(&a, 3, 3, DEFAULT_ENTRY_TOL),
            Err(Error::ParityViolation { .. })
        ));
        assert!(matches!(
            to_parity_blocks(&annihilation(7), 2, 3, DEFAULT_ENTRY_TOL),
            Err(Error::ParityViolation { .. })
        ));
        assert!(to_parity_blocks(&a, 1, 9, DEFAULT_ENTRY_TOL).is_ok());
    }

    #[test]
    fn full_set_contents() {
        let e2: Vec<_> = ErrorSet::full(2).terms().to_vec();
        assert_eq!(
            e2,
            vec![
                ErrorTerm::new(0, 0),
                ErrorTerm::new(0, 1),
                ErrorTerm::new(1, 0),
                ErrorTerm::new(2, 0)
            ]
        );
        assert_eq!(ErrorSet::jumps_only(3).len(), 4);
        assert!(ErrorSet::new(vec![ErrorTerm::new(1, 0)]).is_err());
        assert!(ErrorSet::new(vec![ErrorTerm::IDENTITY, ErrorTerm::IDENTITY]).is_err());
        assert_eq!(ErrorTerm::new(2, 1).to_string(), "a^2 n");
        assert_eq!(ErrorTerm::IDENTITY.to_string(), "I");
    }
}
