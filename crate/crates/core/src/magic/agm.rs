//! Complex arithmetic-geometric mean and the inverse of the modular λ-function.

use rug::Complex;

use super::MagicError;
use crate::exactfield::BigFloat;

pub const AGM_MAX_ITER: usize = 64;

/// `M(a, b)` with the optimal square root at every step.
pub fn agm(a: &Complex, b: &Complex) -> Result<Complex, MagicError> {
    let prec = a.prec().0.max(b.prec().0);
    let p = prec + 32;
    if a.is_zero() || b.is_zero() {
        return Err(MagicError::Domain("agm argument is zero".into()));
    }
    let mut x = Complex::with_val(p, a);
    let mut y = Complex::with_val(p, b);
    let thresh = BigFloat::with_val(p, BigFloat::i_exp(1, -(prec as i32) - 8));
    for _ in 0..AGM_MAX_ITER {
        let diff = BigFloat::with_val(p, Complex::with_val(p, &x - &y).abs_ref());
        let size = BigFloat::with_val(p, x.abs_ref());
        if diff <= BigFloat::with_val(p, &size * &thresh) {
            return Ok(Complex::with_val(prec, Complex::with_val(p, &x + &y) / 2u32));
        }
        let mean = Complex::with_val(p, &x + &y) / 2u32;
        let mut root = Complex::with_val(p, &x * &y).sqrt();
        let d_plus = BigFloat::with_val(p, Complex::with_val(p, &mean - &root).abs_ref());
        let d_minus = BigFloat::with_val(p, Complex::with_val(p, &mean + &root).abs_ref());
        if d_minus < d_plus {
            root = -root;
        }
        x = mean;
        y = root;
    }
    Err(MagicError::NonConvergence(format!(
        "agm after {AGM_MAX_ITER} iterations"
    )))
}

/// `₂F₁(½, ½; 1; w) = 1/M(1, √(1−w))`, given `1 − w`.
pub fn hyp2f1_half(one_minus_w: &Complex) -> Result<Complex, MagicError> {
    let p = one_minus_w.prec().0;
    let one = Complex::with_val(p, 1);
    Ok(agm(&one, &Complex::with_val(p, one_minus_w.sqrt_ref()))?.recip())
}

/// Partial sums of the hypergeometric series, for `|w| < 1`.
pub fn hyp2f1_half_series(w: &Complex, terms: usize) -> Complex {
    let p = w.prec().0;
    let mut term = Complex::with_val(p, 1);
    let mut sum = term.clone();
    for n in 1..terms {
        // ((n − ½)/n)² w
        let r = BigFloat::with_val(p, 2 * n as u32 - 1) / (2 * n as u32);
        term *= w;
        term *= BigFloat::with_val(p, r.square_ref());
        sum += &term;
    }
    sum
}

/// `τ = λ⁻¹(z) = i·₂F₁(1−z)/₂F₁(z)`, given both `z` and `1 − z` so that either
/// end can be approached without cancellation.
pub fn lambda_inv_pair(z: &Complex, one_minus_z: &Complex) -> Result<Complex, MagicError> {
    if z.is_zero() || one_minus_z.is_zero() {
        return Err(MagicError::Domain("λ⁻¹ is singular at z = 0 and z = 1".into()));
    }
    let p = z.prec().0;
    let one = Complex::with_val(p, 1);
    let num = agm(&one, &Complex::with_val(p, one_minus_z.sqrt_ref()))?;
    let den = agm(&one, &Complex::with_val(p, z.sqrt_ref()))?;
    let tau = Complex::with_val(p, num / den) * Complex::with_val(p, (0, 1));
    if !tau.imag().is_sign_positive() || tau.imag().is_zero() {
        return Err(MagicError::Domain(format!("λ⁻¹ left the upper half-plane at z = {z}")));
    }
    Ok(tau)
}

pub fn lambda_inv(z: &Complex) -> Result<Complex, MagicError> {
    let p = z.prec().0;
    lambda_inv_pair(z, &Complex::with_val(p, 1 - z))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(P, (re, im))
    }

    fn dist(a: &Complex, b: &Complex) -> f64 {
        BigFloat::with_val(P, Complex::with_val(P, a - b).abs_ref()).to_f64()
    }

    #[test]
    fn agm_fixed_point() {
        assert!(dist(&agm(&c(1.0, 0.0), &c(1.0, 0.0)).unwrap(), &c(1.0, 0.0)) < 1e-70);
    }

    #[test]
    fn agm_gives_lemniscate_constant() {
        // M(1, √2) = π/ϖ with ϖ = Γ(1/4)²/(2√(2π)).
        let root2 = BigFloat::with_val(P, 2).sqrt();
        let m = agm(&c(1.0, 0.0), &Complex::with_val(P, (root2, 0))).unwrap();
        let pi = crate::exactfield::pi(P);
        let g = BigFloat::with_val(P, 0.25).gamma();
        let varpi = BigFloat::with_val(P, g.square_ref()) / (BigFloat::with_val(P, &pi * 2u32).sqrt() * 2u32);
        assert!(dist(&m, &Complex::with_val(P, (pi / varpi, 0))) < 1e-70);
    }

    #[test]
    fn agm_matches_hypergeometric_series() {
        let w = c(0.3, 0.0);
        let via_agm = hyp2f1_half(&Complex::with_val(P, 1 - &w)).unwrap();
        let series = hyp2f1_half_series(&w, 400);
        assert!(dist(&via_agm, &series) < 1e-30);

        let w = c(0.2, -0.35);
        let via_agm = hyp2f1_half(&Complex::with_val(P, 1 - &w)).unwrap();
        assert!(dist(&via_agm, &hyp2f1_half_series(&w, 600)) < 1e-30);
    }

    #[test]
    fn symmetric_point_maps_to_i() {
        let tau = lambda_inv(&c(0.5, 0.0)).unwrap();
        assert!(dist(&tau, &c(0.0, 1.0)) < 1e-70);
    }

    #[test]
    fn real_interval_maps_to_imaginary_axis() {
        for x in [0.01, 0.3, 0.7, 0.99] {
            let tau = lambda_inv(&c(x, 0.0)).unwrap();
            assert!(tau.real().clone().abs().to_f64() < 1e-70);
            assert!(tau.imag().is_sign_positive());
        }
        // Smaller z means larger Im τ.
        let a = lambda_inv(&c(0.1, 0.0)).unwrap();
        let b = lambda_inv(&c(0.2, 0.0)).unwrap();
        assert!(a.imag() > b.imag());
    }

    #[test]
    fn vertical_line_maps_to_unit_arc() {
        for t in [0.01, 1.0, 40.0, 1e8] {
            let tau = lambda_inv(&c(0.5, t)).unwrap();
            let r = (BigFloat::with_val(P, tau.abs_ref()) - 1u32).abs().to_f64();
            assert!(r < 1e-60, "t = {t}: ||τ| − 1| = {r:e}");
            assert!(tau.real().is_sign_positive());
        }
    }

    #[test]
    fn endpoints_rejected() {
        assert!(lambda_inv(&c(0.0, 0.0)).is_err());
        assert!(lambda_inv(&c(1.0, 0.0)).is_err());
    }
}
