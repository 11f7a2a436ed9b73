//! `λ(τ)` from its `q^{1/2}`-expansion with a rigorous truncation bound.
//!
//! With `p = q^{1/2}`, `λ = 16p Π_n ((1+p^{2n})/(1+p^{2n−1}))^8`. Replacing each
//! `1/(1+x)` by `1/(1−x)` gives a series with nonnegative coefficients that
//! dominates λ coefficientwise, so its tail at `|p|` bounds the tail of λ.

use rug::{Complex, Integer};

use super::agm::lambda_inv;
use super::MagicError;
use crate::exactfield::{pi, BigFloat};
use crate::qseries::lambda_series;

#[derive(Debug, Clone)]
pub struct LambdaEvaluator {
    prec: u32,
    /// Coefficient of `p^{k+1}` in λ.
    coeffs: Vec<BigFloat>,
    /// Coefficient of `p^{k+1}` in the majorant.
    majorant: Vec<BigFloat>,
}

#[derive(Debug, Clone)]
pub struct LambdaValue {
    pub value: Complex,
    pub tail_bound: BigFloat,
}

fn majorant_coeffs(len: usize) -> Vec<Integer> {
    let mut c = vec![Integer::new(); len];
    if len == 0 {
        return c;
    }
    c[0] = Integer::from(1);
    for m in 1..len {
        for _ in 0..8 {
            if m % 2 == 0 {
                for i in (m..len).rev() {
                    let (lo, hi) = c.split_at_mut(i);
                    hi[0] += &lo[i - m];
                }
            } else {
                for i in m..len {
                    let (lo, hi) = c.split_at_mut(i);
                    hi[0] += &lo[i - m];
                }
            }
        }
    }
    c.iter().map(|x| Integer::from(x * 16u32)).collect()
}

impl LambdaEvaluator {
    pub fn new(terms: usize, prec: u32) -> Self {
        let series = lambda_series(terms);
        let coeffs = series.coeffs().iter().map(|r| BigFloat::with_val(prec, r)).collect();
        let majorant = majorant_coeffs(terms)
            .iter()
            .map(|n| BigFloat::with_val(prec, n))
            .collect();
        LambdaEvaluator { prec, coeffs, majorant }
    }

    /// The majorant's closed product at `ρ < 1`.
    fn majorant_value(&self, rho: &BigFloat) -> BigFloat {
        let p = self.prec;
        let eps = BigFloat::with_val(p, BigFloat::i_exp(1, -(p as i32) - 20));
        let mut prod = BigFloat::with_val(p, 16) * rho;
        let mut pw = rho.clone();
        let mut m = 1u32;
        while pw > eps {
            let f = if m % 2 == 0 {
                BigFloat::with_val(p, &pw + 1u32)
            } else {
                BigFloat::with_val(p, 1u32 - &pw).recip()
            };
            let f2 = BigFloat::with_val(p, f.square_ref());
            let f4 = BigFloat::with_val(p, f2.square_ref());
            prod *= BigFloat::with_val(p, f4.square_ref());
            pw *= rho;
            m += 1;
        }
        prod
    }

    pub fn eval(&self, tau: &Complex) -> Result<LambdaValue, MagicError> {
        let p = self.prec;
        let i_pi_tau = Complex::with_val(p, tau * pi(p)) * Complex::with_val(p, (0, 1));
        let nome = i_pi_tau.exp();
        let rho = BigFloat::with_val(p, nome.abs_ref());
        if rho >= 1u32 {
            return Err(MagicError::Domain("τ is not in the upper half-plane".into()));
        }
        let mut value = Complex::new(p);
        let mut partial = BigFloat::new(p);
        let mut pw = nome.clone();
        let mut rpw = rho.clone();
        for (c, m) in self.coeffs.iter().zip(&self.majorant) {
            value += Complex::with_val(p, &pw * c);
            partial += BigFloat::with_val(p, &rpw * m);
            pw *= &nome;
            rpw *= &rho;
        }
        let tail_bound = (self.majorant_value(&rho) - partial).max(&BigFloat::new(p));
        Ok(LambdaValue { value, tail_bound })
    }
}

/// `max |λ(λ⁻¹(z)) − z| + tail` over the given points.
pub fn roundtrip_max_err(points: &[Complex], terms: usize) -> Result<f64, MagicError> {
    let Some(first) = points.first() else {
        return Ok(0.0);
    };
    let p = first.prec().0;
    let ev = LambdaEvaluator::new(terms, p);
    let mut worst = 0f64;
    for z in points {
        let tau = lambda_inv(z)?;
        let lv = ev.eval(&tau)?;
        let d = BigFloat::with_val(p, Complex::with_val(p, &lv.value - z).abs_ref()) + &lv.tail_bound;
        worst = worst.max(d.to_f64());
    }
    Ok(worst)
}
