//! Fixed-step RK4 propagation of operators under
//! `dX/dt = -i[H, X] + kappa (a X a^dagger - {n, X}/2)`.

use crate::error::{Error, Result};
use crate::fock::{DenseOperator, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Target step size; the actual step is `t / ceil(t / step)`.
    pub step: f64,
    /// Re-run with half the step and compare.
    pub check_halving: bool,
    /// Largest entrywise change tolerated by the halving check.
    pub halving_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: std::f64::consts::FRAC_PI_2 / 2000.0,
            check_halving: true,
            halving_tol: 1e-8,
        }
    }
}

impl IntegratorConfig {
    pub fn steps_for(&self, t: f64) -> usize {
        ((t / self.step).ceil() as usize).max(1)
    }
}

pub fn lindblad_evolve(
    h: &DenseOperator,
    kappa: f64,
    t: f64,
    x0: &DenseOperator,
) -> Result<DenseOperator> {
    lindblad_evolve_with(h, kappa, t, x0, &IntegratorConfig::default())
}

pub fn lindblad_evolve_with(
    h: &DenseOperator,
    kappa: f64,
    t: f64,
    x0: &DenseOperator,
    cfg: &IntegratorConfig,
) -> Result<DenseOperator> {
    let dim = h.nrows();
    if h.ncols() != dim || x0.nrows() != dim || x0.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: x0.nrows(),
        });
    }
    if !(kappa >= 0.0 && kappa.is_finite() && t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need finite non-negative kappa and t, got kappa={kappa}, t={t}"
        )));
    }
    if cfg.step.is_nan() || cfg.step <= 0.0 {
        return Err(Error::InvalidParameter(
            "integrator step must be positive".into(),
        ));
    }
    if t == 0.0 {
        return Ok(x0.clone());
    }
    let generator = Generator::new(h, kappa);
    let steps = cfg.steps_for(t);
    let coarse = generator.integrate(x0, t, steps);
    if !cfg.check_halving {
        return Ok(coarse);
    }
    let fine = generator.integrate(x0, t, 2 * steps);
    let deviation = (&fine - &coarse)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if deviation > cfg.halving_tol {
        return Err(Error::StepSizeFailure { deviation });
    }
    Ok(fine)
}

struct Generator {
    dim: usize,
    /// Nonzero entries of `-iH`.
    minus_ih: Vec<(usize, usize, C64)>,
    kappa: f64,
    sqrt_n: Vec<f64>,
}

impl Generator {
    fn new(h: &DenseOperator, kappa: f64) -> Self {
        let dim = h.nrows();
        let mut minus_ih = Vec::new();
        for j in 0..dim {
            for i in 0..dim {
                let v = h[(i, j)];
                if v.norm() != 0.0 {
                    minus_ih.push((i, j, C64::new(v.im, -v.re)));
                }
            }
        }
        let sqrt_n = (0..dim).map(|n| (n as f64).sqrt()).collect();
        Self {
            dim,
            minus_ih,
            kappa,
            sqrt_n,
        }
    }

    /// Writes the time derivative of `x` (row-major) into `out`.
    fn rhs(&self, x: &[C64], out: &mut [C64]) {
        let d = self.dim;
        let half = 0.5 * self.kappa;
        for i in 0..d {
            for j in 0..d {
                let mut v = x[i * d + j] * (-half * (i + j) as f64);
                if i + 1 < d && j + 1 < d {
                    v += x[(i + 1) * d + j + 1]
                        * (self.kappa * self.sqrt_n[i + 1] * self.sqrt_n[j + 1]);
                }
                out[i * d + j] = v;
            }
        }
        // -iH X + X (iH)
        for &(r, c, w) in &self.minus_ih {
            for k in 0..d {
                out[r * d + k] += w * x[c * d + k];
                out[k * d + c] -= x[k * d + r] * w;
            }
        }
    }

    fn integrate(&self, x0: &DenseOperator, t: f64, steps: usize) -> DenseOperator {
        let d = self.dim;
        let n = d * d;
        let dt = t / steps as f64;
        let mut x: Vec<C64> = (0..n).map(|idx| x0[(idx / d, idx % d)]).collect();
        let zero = C64::new(0.0, 0.0);
        let (mut k1, mut k2, mut k3, mut k4) =
            (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
        let mut tmp = vec![zero; n];
        for _ in 0..steps {
            self.rhs(&x, &mut k1);
            for idx in 0..n {
                tmp[idx] = x[idx] + k1[idx] * (0.5 * dt);
            }
            self.rhs(&tmp, &mut k2);
            for idx in 0..n {
                tmp[idx] = x[idx] + k2[idx] * (0.5 * dt);
            }
            self.rhs(&tmp, &mut k3);
            for idx in 0..n {
                tmp[idx] = x[idx] + k3[idx] * dt;
            }
            self.rhs(&tmp, &mut k4);
            for idx in 0..n {
                x[idx] += (k1[idx] + (k2[idx] + k3[idx]) * 2.0 + k4[idx]) * (dt / 6.0);
            }
        }
        DenseOperator::from_fn(d, d, |i, j| x[i * d + j])
    }
}
