//! Double-exponential quadrature at arbitrary precision.
//!
//! Both rules refine by halving the step and reusing every earlier node, so
//! the difference between consecutive levels serves as the error estimate.

use rug::Complex;
use serde::{Deserialize, Serialize};

use super::MagicError;
use crate::exactfield::{pi, BigFloat, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Finest level; the step is `2^{−level}`.
    pub max_level: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub precision: Precision,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            max_level: 10,
            abs_tol: 1e-30,
            rel_tol: 1e-24,
            precision: Precision::default(),
        }
    }
}

impl QuadratureConfig {
    pub fn prec(&self) -> u32 {
        self.precision.bits()
    }

    pub fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quad {
    pub value: Complex,
    /// `|I_k − I_{k−1}|` at the last level, plus the truncation guard.
    pub error: f64,
    pub level: u32,
    pub evaluations: usize,
}

impl Quad {
    pub fn converged(&self, cfg: &QuadratureConfig) -> bool {
        self.error <= cfg.tolerance(self.value.real().to_f64())
    }
}

/// Abscissa data handed to the integrand.
pub struct Node {
    pub x: BigFloat,
    /// `x − a` for finite rules, `x` for the half-line rule.
    pub from_lo: BigFloat,
    /// `b − x`; infinite for the half-line rule.
    pub to_hi: BigFloat,
}

const T_CAP: f64 = 12.0;
const U_CAP: f64 = 7.0;

/// `∫_a^b f`. The integrand receives distances to both ends, so endpoint
/// singularities can be evaluated without cancellation.
pub fn tanh_sinh<F>(a: &BigFloat, b: &BigFloat, cfg: &QuadratureConfig, f: F) -> Result<Quad, MagicError>
where
    F: FnMut(&Node) -> Result<Complex, MagicError>,
{
    let p = cfg.prec() + 16;
    let len = BigFloat::with_val(p, b - a);
    let half_pi = pi(p) / 2u32;
    let node = move |t: &BigFloat| -> (Node, BigFloat) {
        let s = BigFloat::with_val(p, t.sinh_ref()) * &half_pi;
        let e = BigFloat::with_val(p, -BigFloat::with_val(p, s.abs_ref()) * 2u32).exp();
        let one_e = BigFloat::with_val(p, &e + 1u32);
        // Near end gets len·e/(1+e), far end len/(1+e).
        let near = BigFloat::with_val(p, &len * &e) / &one_e;
        let far = BigFloat::with_val(p, &len / &one_e);
        let (from_lo, to_hi) = if s.is_sign_negative() { (near, far) } else { (far, near) };
        let x = if s.is_sign_negative() {
            BigFloat::with_val(p, a + &from_lo)
        } else {
            BigFloat::with_val(p, b - &to_hi)
        };
        // dx/dt = 2·len·(π/2)·cosh t·e/(1+e)².
        let w = BigFloat::with_val(p, t.cosh_ref()) * &half_pi * &len * &e * 2u32
            / BigFloat::with_val(p, one_e.square_ref());
        (Node { x, from_lo, to_hi }, w)
    };
    refine(cfg, T_CAP, node, f)
}

/// `∫_0^∞ f` for integrands with at most algebraic decay.
pub fn exp_sinh<F>(cfg: &QuadratureConfig, f: F) -> Result<Quad, MagicError>
where
    F: FnMut(&Node) -> Result<Complex, MagicError>,
{
    let p = cfg.prec() + 16;
    let half_pi = pi(p) / 2u32;
    let node = move |u: &BigFloat| -> (Node, BigFloat) {
        let x = (BigFloat::with_val(p, u.sinh_ref()) * &half_pi).exp();
        let w = BigFloat::with_val(p, u.cosh_ref()) * &half_pi * &x;
        let inf = BigFloat::with_val(p, rug::float::Special::Infinity);
        (
            Node {
                from_lo: x.clone(),
                x,
                to_hi: inf,
            },
            w,
        )
    };
    refine(cfg, U_CAP, node, f)
}

fn refine<N, F>(cfg: &QuadratureConfig, cap: f64, mut node: N, mut f: F) -> Result<Quad, MagicError>
where
    N: FnMut(&BigFloat) -> (Node, BigFloat),
    F: FnMut(&Node) -> Result<Complex, MagicError>,
{
    let p = cfg.prec() + 16;
    let eps = BigFloat::with_val(p, BigFloat::i_exp(1, -(cfg.prec() as i32)));
    let mut evaluations = 0usize;
    let mut term = |t: &BigFloat, evaluations: &mut usize| -> Result<Complex, MagicError> {
        let (nd, w) = node(t);
        *evaluations += 1;
        if w.is_zero() || !w.is_finite() {
            return Ok(Complex::new(p));
        }
        Ok(f(&nd)? * w)
    };

    // Level 0: unit step, walk outwards until terms are negligible.
    let mut sum = term(&BigFloat::new(p), &mut evaluations)?;
    let mut reach = [0i64; 2];
    let mut tail = BigFloat::new(p);
    for (side, sign) in [(0usize, 1i64), (1, -1)] {
        let mut small = 0;
        let mut j = 1i64;
        while (j as f64) <= cap {
            let v = term(&BigFloat::with_val(p, sign * j), &mut evaluations)?;
            let mag = BigFloat::with_val(p, v.abs_ref());
            sum += &v;
            reach[side] = j;
            let scale = BigFloat::with_val(p, sum.abs_ref()).max(&BigFloat::with_val(p, 1e-300));
            if mag <= BigFloat::with_val(p, &eps * &scale) {
                small += 1;
                if small >= 2 {
                    break;
                }
            } else {
                small = 0;
            }
            if (j + 1) as f64 > cap {
                tail = tail.max(&mag);
            }
            j += 1;
        }
    }

    let mut estimate = sum.clone();
    let mut last_err = f64::INFINITY;
    for level in 1..=cfg.max_level {
        let denom = 1i64 << level;
        let step = BigFloat::with_val(p, BigFloat::i_exp(1, -(level as i32)));
        let lo = -reach[1] * denom;
        let hi = reach[0] * denom;
        let mut k = lo + 1;
        while k < hi {
            let t = BigFloat::with_val(p, &step * k);
            sum += term(&t, &mut evaluations)?;
            k += 2;
        }
        let next = Complex::with_val(p, &sum * &step);
        last_err = BigFloat::with_val(p, Complex::with_val(p, &next - &estimate).abs_ref()).to_f64()
            + BigFloat::with_val(p, &tail * &step).to_f64();
        estimate = next;
        if level >= 3 && last_err <= cfg.tolerance(BigFloat::with_val(p, estimate.abs_ref()).to_f64()) {
            return Ok(Quad {
                value: Complex::with_val(cfg.prec(), &estimate),
                error: last_err,
                level,
                evaluations,
            });
        }
    }
    Ok(Quad {
        value: Complex::with_val(cfg.prec(), &estimate),
        error: last_err,
        level: cfg.max_level,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: 1e-40,
            ..QuadratureConfig::default()
        }
    }

    fn real(x: BigFloat) -> Complex {
        Complex::with_val(x.prec(), (x, 0))
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{−1/2} (1−x)^{−1/3} dx = B(1/2, 2/3).
        let p = 256;
        let q = tanh_sinh(&BigFloat::new(p), &BigFloat::with_val(p, 1), &cfg(), |n| {
            let a = BigFloat::with_val(p, n.from_lo.sqrt_ref()).recip();
            let b = BigFloat::with_val(p, n.to_hi.cbrt_ref()).recip();
            Ok(real(a * b))
        })
        .unwrap();
        let g = |num: u32, den: u32| (BigFloat::with_val(p, num) / den).gamma();
        let exact = g(1, 2) * g(2, 3) / g(7, 6);
        let err = (BigFloat::with_val(p, q.value.real() - &exact)).abs().to_f64();
        assert!(err < 1e-40, "err {err:e}");
        assert!(q.converged(&cfg()));
    }

    #[test]
    fn algebraic_decay_on_half_line() {
        // ∫_0^∞ dx/(1+x)^{8/3} = 3/5.
        let p = 256;
        let q = exp_sinh(&cfg(), |n| {
            let e = BigFloat::with_val(p, 8) / 3u32;
            let v = BigFloat::with_val(p, &n.x + 1u32).ln() * e;
            Ok(real((-v).exp()))
        })
        .unwrap();
        let err = (BigFloat::with_val(p, q.value.real()) - BigFloat::with_val(p, 3) / 5u32)
            .abs()
            .to_f64();
        assert!(err < 1e-40, "err {err:e}");
    }

    #[test]
    fn smooth_integrand_converges_early() {
        let p = 256;
        let q = tanh_sinh(
            &BigFloat::with_val(p, 0.5),
            &BigFloat::with_val(p, 2),
            &QuadratureConfig::default(),
            |n| Ok(real(BigFloat::with_val(p, n.x.exp_ref()))),
        )
        .unwrap();
        let exact = BigFloat::with_val(p, 2).exp() - BigFloat::with_val(p, 0.5).exp();
        assert!((BigFloat::with_val(p, q.value.real() - &exact)).abs().to_f64() < 1e-30);
        assert!(q.level < 8);
    }
}
