//! Rotation-symmetric codes with a hard Fock cutoff.
//!
//! A code is fixed by its spacing `N`, cutoff `K` and grid coefficients `c_0..c_K`:
//! `|0_L> = sum_{k even} c_k |kN>` and `|1_L> = sum_{k odd} c_k |kN>`. Binomial codes
//! take `c_k = sqrt(K choose k)` before normalization.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{apply_error, ErrorSet, ErrorTerm, State, C64};
use crate::linalg::binomial;

/// Projected error images shorter than this (relative to the raw image) are degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// Absolute tolerance on alternating moment sums.
pub const MOMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    spacing: usize,
    cutoff: usize,
    coeffs: Vec<C64>,
}

impl CodeSpec {
    /// Builds a code from raw grid coefficients, normalizing the even and odd
    /// sub-sequences separately.
    pub fn new(spacing: usize, cutoff: usize, coeffs: Vec<C64>) -> Result<Self> {
        if spacing == 0 || cutoff == 0 {
            return Err(Error::InvalidParameter(format!(
                "spacing and cutoff must be positive, got N={spacing}, K={cutoff}"
            )));
        }
        if coeffs.len() != cutoff + 1 {
            return Err(Error::DimensionMismatch {
                expected: cutoff + 1,
                actual: coeffs.len(),
            });
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidCode("coefficients must be finite".into()));
        }
        let parity_norm = |parity: usize| -> f64 {
            coeffs
                .iter()
                .skip(parity)
                .step_by(2)
                .map(|c| c.norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let (even, odd) = (parity_norm(0), parity_norm(1));
        if even == 0.0 || odd == 0.0 {
            return Err(Error::InvalidCode(
                "need a nonzero even-index and a nonzero odd-index coefficient".into(),
            ));
        }
        let coeffs = coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c / even } else { c / odd })
            .collect();
        Ok(Self {
            spacing,
            cutoff,
            coeffs,
        })
    }

    pub fn binomial(spacing: usize, cutoff: usize) -> Result<Self> {
        let coeffs = (0..=cutoff)
            .map(|k| C64::new(binomial(cutoff, k).sqrt(), 0.0))
            .collect();
        Self::new(spacing, cutoff, coeffs)
    }

    /// Binomial code of cutoff `unit_cutoff` whose grid is shifted up by `shift`
    /// inside a code frame of cutoff `cutoff`.
    pub fn shifted_binomial(
        spacing: usize,
        cutoff: usize,
        unit_cutoff: usize,
        shift: usize,
    ) -> Result<Self> {
        if shift + unit_cutoff > cutoff {
            return Err(Error::InvalidParameter(format!(
                "unit of cutoff {unit_cutoff} shifted by {shift} exceeds cutoff {cutoff}"
            )));
        }
        let coeffs = (0..=cutoff)
            .map(|k| {
                let b = if k >= shift {
                    binomial(unit_cutoff, k - shift)
                } else {
                    0.0
                };
                C64::new(b.sqrt(), 0.0)
            })
            .collect();
        Self::new(spacing, cutoff, coeffs)
    }

    pub fn spacing(&self) -> usize {
        self.spacing
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Working Fock dimension `N*K + 1`.
    pub fn dim(&self) -> usize {
        self.spacing * self.cutoff + 1
    }

    /// Largest `l` for which a binomial code of this shape corrects `l` losses.
    pub fn default_order(&self) -> usize {
        (self.spacing - 1).min(self.cutoff - 1)
    }

    pub fn squared_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// `(|0_L>, |1_L>)`.
pub fn codewords(code: &CodeSpec) -> (State, State) {
    let dim = code.dim();
    let mut zero = State::zeros(dim);
    let mut one = State::zeros(dim);
    for (k, &c) in code.coeffs.iter().enumerate() {
        let target = if k % 2 == 0 { &mut zero } else { &mut one };
        target[k * code.spacing] = c;
    }
    (zero, one)
}

/// `(|+_L>, |-_L>)` with `|+-_L> = (1/sqrt 2) sum_k (+-1)^k c_k |kN>`.
pub fn dual_codewords(code: &CodeSpec) -> (State, State) {
    let dim = code.dim();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = State::zeros(dim);
    let mut minus = State::zeros(dim);
    for (k, &c) in code.coeffs.iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        plus[k * code.spacing] = c * s;
        minus[k * code.spacing] = c * (s * sign);
    }
    (plus, minus)
}

/// The `+` and `-` error words of one error, plus the coefficients they carry on
/// the shifted grid `|kN - m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorWordSet {
    pub term: ErrorTerm,
    pub plus: State,
    pub minus: State,
    /// Reciprocal length of the (projected) image `E|+_L>`.
    pub norm_const: f64,
    /// `d_k` such that `|+-_E> = (1/sqrt 2) sum_k (+-1)^k d_k |kN - m>`.
    pub shifted_coeffs: Vec<C64>,
}

impl ErrorWordSet {
    pub fn zero(&self) -> State {
        (&self.plus + &self.minus) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    }

    pub fn one(&self) -> State {
        (&self.plus - &self.minus) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    }

    fn from_words(code: &CodeSpec, term: ErrorTerm, plus: State, minus: State, norm: f64) -> Self {
        let shifted_coeffs = (0..=code.cutoff)
            .map(|k| {
                let n = k * code.spacing;
                if n < term.jumps {
                    return C64::new(0.0, 0.0);
                }
                let idx = n - term.jumps;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                (plus[idx] + minus[idx] * sign) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect();
        Self {
            term,
            plus,
            minus,
            norm_const: norm,
            shifted_coeffs,
        }
    }
}

/// Closed-form words for the pure jump `a^m`:
/// `|+-_{a^m}> = (N_m / sqrt 2) sum_k (+-1)^k eps_k c_k |kN - m>` with
/// `eps_k = sqrt((kN - m + 1) ... (kN))`.
pub fn jump_error_words(code: &CodeSpec, m: usize) -> Result<ErrorWordSet> {
    if m >= code.spacing {
        return Err(Error::InvalidParameter(format!(
            "jump power {m} must be below the spacing {}",
            code.spacing
        )));
    }
    let term = ErrorTerm::new(m, 0);
    let eps = |k: usize| -> f64 {
        let n = k * code.spacing;
        if n < m {
            0.0
        } else {
            ((n - m + 1)..=n).map(|x| x as f64).product::<f64>().sqrt()
        }
    };
    let mut parity_sums = [0.0f64; 2];
    for (k, c) in code.coeffs.iter().enumerate() {
        parity_sums[k % 2] += eps(k).powi(2) * c.norm_sqr();
    }
    if parity_sums[0] == 0.0 || parity_sums[1] == 0.0 {
        return Err(Error::DegenerateError { term, norm: 0.0 });
    }
    let norm_const = (2.0 / (parity_sums[0] + parity_sums[1])).sqrt();

    let dim = code.dim();
    let s = norm_const * std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = State::zeros(dim);
    let mut minus = State::zeros(dim);
    for (k, &c) in code.coeffs.iter().enumerate() {
        let n = k * code.spacing;
        if n < m {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        plus[n - m] = c * (s * eps(k));
        minus[n - m] = c * (s * eps(k) * sign);
    }
    Ok(ErrorWordSet::from_words(
        code, term, plus, minus, norm_const,
    ))
}

/// Gram-Schmidt error words in the order given by `errors`.
///
/// Each image `E|+-_L>` is projected off every earlier code or error word (both
/// signs) and normalized. The first entry of the result is the dual codeword pair.
pub fn orthogonalized_error_words(code: &CodeSpec, errors: &ErrorSet) -> Result<Vec<ErrorWordSet>> {
    let (plus_l, minus_l) = dual_codewords(code);
    let mut basis: Vec<State> = Vec::new();
    let mut out = Vec::with_capacity(errors.len());

    for &term in errors.iter() {
        if term.is_identity() {
            basis.push(plus_l.clone());
            basis.push(minus_l.clone());
            out.push(ErrorWordSet::from_words(
                code,
                term,
                plus_l.clone(),
                minus_l.clone(),
                1.0,
            ));
            continue;
        }
        let mut words = Vec::with_capacity(2);
        let mut norm_const = 0.0;
        for (sign_idx, logical) in [&plus_l, &minus_l].into_iter().enumerate() {
            let raw = apply_error(term, logical);
            let raw_norm = raw.norm();
            if raw_norm == 0.0 {
                return Err(Error::DegenerateError { term, norm: 0.0 });
            }
            let mut v = raw;
            // Two passes keep the result orthogonal to round-off.
            for _ in 0..2 {
                for b in &basis {
                    let overlap = b.dotc(&v);
                    v -= b * overlap;
                }
            }
            let norm = v.norm();
            if norm < DEGENERATE_TOL * raw_norm {
                return Err(Error::DegenerateError {
                    term,
                    norm: norm / raw_norm,
                });
            }
            if sign_idx == 0 {
                norm_const = 1.0 / norm;
            }
            words.push(v / C64::new(norm, 0.0));
        }
        let minus = words.pop().expect("two words");
        let plus = words.pop().expect("two words");
        basis.push(plus.clone());
        basis.push(minus.clone());
        out.push(ErrorWordSet::from_words(
            code, term, plus, minus, norm_const,
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KLReport {
    /// `a_ij = <0_L| E_i^dagger E_j |0_L>`.
    pub a_matrix: DMatrix<C64>,
    pub max_violation: f64,
    pub passes: bool,
}

/// Exact Knill-Laflamme test `<mu| E_i^dagger E_j |nu> = delta_{mu nu} a_ij`.
pub fn check_knill_laflamme(code: &CodeSpec, errors: &ErrorSet, tol: f64) -> KLReport {
    let (zero, one) = codewords(code);
    let images: Vec<(State, State)> = errors
        .iter()
        .map(|&t| (apply_error(t, &zero), apply_error(t, &one)))
        .collect();
    let n = images.len();
    let mut a = DMatrix::zeros(n, n);
    let mut worst = 0.0f64;
    for (i, (zi, oi)) in images.iter().enumerate() {
        for (j, (zj, oj)) in images.iter().enumerate() {
            let a00 = zi.dotc(zj);
            let a11 = oi.dotc(oj);
            let a01 = zi.dotc(oj);
            let a10 = oi.dotc(zj);
            a[(i, j)] = a00;
            worst = worst
                .max((a11 - a00).norm())
                .max(a01.norm())
                .max(a10.norm());
        }
    }
    KLReport {
        a_matrix: a,
        max_violation: worst,
        passes: worst <= tol,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    /// `sum_k (-1)^k k^p |c_k|^2` for `p = 0..=l`.
    pub sums: Vec<f64>,
    pub passes: bool,
}

/// Alternating moments of the squared coefficients; all vanish iff the code corrects
/// the first `l` losses together with their no-jump terms (given `l < N`).
pub fn moment_check(code: &CodeSpec, l: usize) -> MomentReport {
    let sq = code.squared_coeffs();
    let sums: Vec<f64> = (0..=l)
        .map(|p| {
            sq.iter()
                .enumerate()
                .map(|(k, &w)| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * (k as f64).powi(p as i32) * w
                })
                .sum()
        })
        .collect();
    let passes = sums.iter().all(|s| s.abs() <= MOMENT_TOL);
    MomentReport { sums, passes }
}

/// Squared coefficients written as a weighted sum of shifted binomial rows of
/// length `l + 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitDecomposition {
    pub unit_cutoff: usize,
    /// Weight of the row shifted by `j`, for `j = 0..K-l`.
    pub weights: Vec<f64>,
    /// Largest entrywise reconstruction error.
    pub residual: f64,
}

impl UnitDecomposition {
    pub fn reconstruct(&self, cutoff: usize) -> Vec<f64> {
        let mut sq = vec![0.0; cutoff + 1];
        for (j, &w) in self.weights.iter().enumerate() {
            for (i, slot) in sq.iter_mut().enumerate().skip(j).take(self.unit_cutoff + 1) {
                *slot += w * binomial(self.unit_cutoff, i - j);
            }
        }
        sq
    }
}

pub const DECOMPOSITION_TOL: f64 = 1e-10;

/// Solves `|c_k|^2 = sum_j w_j C(l+1, k-j)` by forward substitution and checks the
/// remaining equations.
pub fn lemma1_decompose(code: &CodeSpec, l: usize) -> Result<UnitDecomposition> {
    let target = format!("errors up to order {l}");
    if l >= code.spacing {
        return Err(Error::NotCorrectable {
            target,
            reason: format!("order {l} is not below the spacing {}", code.spacing),
        });
    }
    if l >= code.cutoff {
        return Err(Error::NotCorrectable {
            target,
            reason: format!("order {l} is not below the cutoff {}", code.cutoff),
        });
    }
    let unit = l + 1;
    let count = code.cutoff - l;
    let sq = code.squared_coeffs();
    let mut weights = Vec::with_capacity(count);
    for (k, &target_sq) in sq.iter().enumerate().take(count) {
        let carried: f64 = weights
            .iter()
            .enumerate()
            .map(|(j, &w): (usize, &f64)| w * binomial(unit, k - j))
            .sum();
        weights.push(target_sq - carried);
    }
    let mut decomposition = UnitDecomposition {
        unit_cutoff: unit,
        weights,
        residual: 0.0,
    };
    decomposition.residual = decomposition
        .reconstruct(code.cutoff)
        .iter()
        .zip(&sq)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if decomposition.residual > DECOMPOSITION_TOL {
        return Err(Error::NotCorrectable {
            target,
            reason: format!(
                "squared coefficients leave residual {:e} against shifted binomial rows",
                decomposition.residual
            ),
        });
    }
    Ok(decomposition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn assert_state(actual: &State, expected: &[(usize, f64)]) {
        let mut want = State::zeros(actual.len());
        for &(i, v) in expected {
            want[i] = c(v);
        }
        assert!((actual - want).norm() < 1e-12, "got {actual:?}");
    }

    #[test]
    fn binomial_three_three_codewords() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        let (zero, one) = codewords(&code);
        let r3 = 3f64.sqrt();
        assert_state(&zero, &[(0, 0.5), (6, r3 / 2.0)]);
        assert_state(&one, &[(3, r3 / 2.0), (9, 0.5)]);

        let (plus, minus) = dual_codewords(&code);
        let s = 1.0 / (2.0 * 2f64.sqrt());
        assert_state(&plus, &[(0, s), (3, r3 * s), (6, r3 * s), (9, s)]);
        assert_state(&minus, &[(0, s), (3, -r3 * s), (6, r3 * s), (9, -s)]);
    }

    #[test]
    fn smallest_binomial_code() {
        let code = CodeSpec::binomial(2, 1).unwrap();
        let (zero, one) = codewords(&code);
        assert_state(&zero, &[(0, 1.0)]);
        assert_state(&one, &[(2, 1.0)]);
    }

    #[test]
    fn binomial_four_four_squares() {
        let sq = CodeSpec::binomial(4, 4).unwrap().squared_coeffs();
        // row 4 = (1,4,6,4,1); even part sums to 8, odd part to 8
        let want = [1.0, 4.0, 6.0, 4.0, 1.0].map(|x| x / 8.0);
        for (a, b) in sq.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn dual_basis_identities() {
        let code = CodeSpec::new(2, 3, vec![c(1.0), C64::new(0.3, 0.4), c(-2.0), c(0.7)]).unwrap();
        let (zero, _) = codewords(&code);
        let (plus, minus) = dual_codewords(&code);
        assert!(((&plus + &minus) - zero * c(2f64.sqrt())).norm() < 1e-12);
        assert!(plus.dotc(&minus).norm() < 1e-12);
    }

    #[test]
    fn rejects_one_sided_codes() {
        assert!(matches!(
            CodeSpec::new(2, 2, vec![c(1.0), c(0.0), c(1.0)]),
            Err(Error::InvalidCode(_))
        ));
        assert!(CodeSpec::new(2, 2, vec![c(1.0), c(1.0)]).is_err());
        assert!(CodeSpec::binomial(0, 2).is_err());
    }

    #[test]
    fn single_loss_words_of_three_three_code() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        let w = jump_error_words(&code, 1).unwrap();
        // eps^2 |c|^2 = (0, 9/4, 18/4, 9/4) so N_1 = sqrt(2/9)
        assert!((w.norm_const - (2.0f64 / 9.0).sqrt()).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_state(&w.zero(), &[(5, 1.0)]);
        assert_state(&w.one(), &[(2, r), (8, r)]);
        let want = [0.0, r, 1.0, r];
        for (got, want) in w.shifted_coeffs.iter().zip(want) {
            assert!((got - c(want)).norm() < 1e-14);
        }

        let id = jump_error_words(&code, 0).unwrap();
        assert!((id.norm_const - 1.0).abs() < 1e-15);
        let (plus, _) = dual_codewords(&code);
        assert!((id.plus - plus).norm() < 1e-14);
    }

    #[test]
    fn jump_words_reject_out_of_range_and_annihilated() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        assert!(matches!(
            jump_error_words(&code, 3),
            Err(Error::InvalidParameter(_))
        ));
        // a annihilates |0_L> = |0>
        let code = CodeSpec::binomial(2, 1).unwrap();
        assert!(matches!(
            jump_error_words(&code, 1),
            Err(Error::DegenerateError { .. })
        ));
    }

    #[test]
    fn gram_schmidt_reproduces_closed_form() {
        for (n, k) in [(3, 3), (4, 4), (3, 5), (5, 4)] {
            let code = CodeSpec::binomial(n, k).unwrap();
            let l = code.default_order();
            let gs = orthogonalized_error_words(&code, &ErrorSet::jumps_only(l)).unwrap();
            for (m, words) in gs.iter().enumerate() {
                let closed = jump_error_words(&code, m).unwrap();
                assert!(closed.plus.dotc(&words.plus).norm() > 1.0 - 1e-10);
                assert!(closed.minus.dotc(&words.minus).norm() > 1.0 - 1e-10);
                assert!((closed.norm_const - words.norm_const).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dephasing_words_of_three_three_code() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        let words = orthogonalized_error_words(&code, &ErrorSet::full(2)).unwrap();
        assert_eq!(words[1].term, ErrorTerm::new(0, 1));
        let n_plus = &words[1].plus;
        // Support only on |0>,|3>,|6>,|9>, orthogonal to both dual codewords.
        let (plus, minus) = dual_codewords(&code);
        assert!(plus.dotc(n_plus).norm() < 1e-12);
        assert!(minus.dotc(n_plus).norm() < 1e-12);
        let zero_n = words[1].zero();
        let r3 = 3f64.sqrt();
        // n|0_L> minus its projection on |0_L> is proportional to (-sqrt3, 1) on |0>,|6>
        assert!((zero_n[0] / zero_n[6] - c(-r3)).norm() < 1e-12);
        let all: Vec<State> = words
            .iter()
            .flat_map(|w| [w.plus.clone(), w.minus.clone()])
            .collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.dotc(b) - c(want)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn identity_only_words_are_dual_codewords() {
        let code = CodeSpec::binomial(3, 2).unwrap();
        let words = orthogonalized_error_words(&code, &ErrorSet::jumps_only(0)).unwrap();
        let (plus, minus) = dual_codewords(&code);
        assert_eq!(words.len(), 1);
        assert!((&words[0].plus - plus).norm() < 1e-15);
        assert!((&words[0].minus - minus).norm() < 1e-15);
    }

    #[test]
    fn knill_laflamme_on_three_three_code() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        let full = check_knill_laflamme(&code, &ErrorSet::full(2), 1e-12);
        assert!(full.passes, "violation {}", full.max_violation);
        let jumps = check_knill_laflamme(&code, &ErrorSet::jumps_only(3), 1e-12);
        assert!(!jumps.passes);
        // <0_L|a^3† a^3|0_L> = 90 while <1_L|...|1_L> = 130.5
        assert!((jumps.max_violation - 40.5).abs() < 1e-9);

        let trivial = CodeSpec::new(2, 1, vec![c(1.0), c(1.0)]).unwrap();
        assert!(check_knill_laflamme(&trivial, &ErrorSet::jumps_only(0), 1e-12).passes);
    }

    #[test]
    fn moments() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        let report = moment_check(&code, 3);
        assert!(report.sums[..3].iter().all(|s| s.abs() < 1e-12));
        // (1,3,3,1)/4 weighted by (-1)^k k^3: -3/4 + 6 - 27/4
        assert!((report.sums[3] + 1.5).abs() < 1e-12);
        assert!(!report.passes);
        assert!(moment_check(&code, 2).passes);
        for k in 1..7 {
            assert!(moment_check(&CodeSpec::binomial(2, k).unwrap(), k - 1).passes);
        }
    }

    #[test]
    fn decomposition_of_three_three_code_is_one_unit() {
        let code = CodeSpec::binomial(3, 3).unwrap();
        let d = lemma1_decompose(&code, 2).unwrap();
        assert_eq!(d.weights.len(), 1);
        assert!((d.weights[0] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn decomposition_matches_brute_force_solve() {
        // Oracle: least squares on the full 5x2 system of shifted (1,3,3,1) rows.
        let code = CodeSpec::binomial(3, 4).unwrap();
        let sq = code.squared_coeffs();
        let a = nalgebra::DMatrix::from_row_slice(
            5,
            2,
            &[1.0, 0.0, 3.0, 1.0, 3.0, 3.0, 1.0, 3.0, 0.0, 1.0],
        );
        let b = DVector::from_vec(sq.clone());
        let oracle = a.clone().svd(true, true).solve(&b, 1e-14).unwrap();
        assert!((&a * &oracle - &b).norm() < 1e-14);

        let d = lemma1_decompose(&code, 2).unwrap();
        assert_eq!(d.weights.len(), 2);
        for j in 0..2 {
            assert!((d.weights[j] - oracle[j]).abs() < 1e-13);
        }
        assert!((d.weights[0] - 0.125).abs() < 1e-14 && (d.weights[1] - 0.125).abs() < 1e-14);
        assert!(d.residual < 1e-14);
    }

    #[test]
    fn decomposition_with_single_unit() {
        for (n, k) in [(5, 2), (6, 3), (4, 4), (7, 5)] {
            let code = CodeSpec::binomial(n, k).unwrap();
            let d = lemma1_decompose(&code, k - 1).unwrap();
            assert_eq!(d.weights.len(), 1);
            assert!((d.weights[0] - code.squared_coeffs()[0]).abs() < 1e-14);
        }
    }

    #[test]
    fn decomposition_failures() {
        let code = CodeSpec::binomial(2, 2).unwrap();
        assert!(matches!(
            lemma1_decompose(&code, 2),
            Err(Error::NotCorrectable { .. })
        ));
        let code = CodeSpec::binomial(3, 3).unwrap();
        assert!(matches!(
            lemma1_decompose(&code, 3),
            Err(Error::NotCorrectable { .. })
        ));
        let lopsided = CodeSpec::new(4, 3, vec![c(1.0), c(1.0), c(1.0), c(1.0)]).unwrap();
        assert!(matches!(
            lemma1_decompose(&lopsided, 1),
            Err(Error::NotCorrectable { .. })
        ));
    }
}
