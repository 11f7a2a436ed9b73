//! The contour functional built from the magic rational functions `A_c`, `B_c`
//! for `c ∈ {8, 24}`, and the numerical checks around it.
//!
//! `H_{c,h}(z) = (z(1−z))^{−c/24} exp(2πi(h − c/24) λ⁻¹(z))` is evaluated
//! through the AGM form of `λ⁻¹`. On the vertical line `Re z = ½` the image
//! `λ⁻¹(z)` runs along the unit circle from `i` towards the cusp at `±1`;
//! every contour node is checked against that arc.

pub mod agm;
pub mod quad;
pub mod ratfn;
pub mod roundtrip;

use rug::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{pi, BigFloat, Rat, RatPoly};
use crate::sdp::serial;
pub use agm::{agm, lambda_inv, lambda_inv_pair};
pub use quad::{Quad, QuadratureConfig};
pub use ratfn::RatFn;
pub use roundtrip::{roundtrip_max_err, LambdaEvaluator};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MagicError {
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    ToleranceNotMet { estimate: f64, tolerance: f64 },
    #[error("h = {h} is within {margin} of the pole at c/16 + 1/2; use the contour functional")]
    NearPole { h: f64, margin: f64 },
    #[error("unsupported central charge {0}; only 8 and 24 have magic functions")]
    UnsupportedCharge(String),
}

/// Smallest admissible distance from `c/16 + 1/2` for the sine formula.
pub const POLE_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct MagicCharge {
    pub c: u32,
    pub a: RatFn,
    pub b: RatFn,
}

impl MagicCharge {
    pub fn new(c: u32) -> Result<Self, MagicError> {
        let z2 = RatPoly::from_ints(&[0, 0, 1]);
        let omz = RatPoly::from_ints(&[1, -1]);
        let zm1 = RatPoly::from_ints(&[-1, 1]);
        let (p, k, e) = match c {
            8 => (RatPoly::from_ints(&[2, 1, 2]), 5, 1),
            24 => (RatPoly::from_ints(&[2, 3, 2]), 7, 3),
            _ => return Err(MagicError::UnsupportedCharge(c.to_string())),
        };
        let a = RatFn::new(omz.pow(e).mul(&p), z2.clone());
        // −(k(z−1)z + 2)/((z−1)² z²)
        let b_num = RatPoly::from_ints(&[0, -1, 1])
            .scale(&Rat::from(k))
            .add(&RatPoly::constant(2))
            .neg();
        let b = RatFn::new(b_num, zm1.pow(2).mul(&z2));
        Ok(MagicCharge { c, a, b })
    }

    pub fn from_rat(c: &Rat) -> Result<Self, MagicError> {
        match c.numer().to_u32() {
            Some(v @ (8 | 24)) if *c.denom() == 1 => MagicCharge::new(v),
            _ => Err(MagicError::UnsupportedCharge(c.to_string())),
        }
    }

    /// `c/8 − 2`.
    fn t_weight(&self) -> i32 {
        self.c as i32 / 8 - 2
    }

    pub fn pole(&self) -> f64 {
        self.c as f64 / 16.0 + 0.5
    }

    pub fn c_float(&self, prec: u32) -> BigFloat {
        BigFloat::with_val(prec, self.c)
    }

    /// `A_c` from `z` and `1 − z`: `(1−z)^{c/8} P(z)/z²`.
    pub fn a_value(&self, z: &Complex, omz: &Complex) -> Complex {
        let p = z.prec().0;
        let (q1, e) = if self.c == 8 { (1, 1) } else { (3, 3) };
        let poly = Complex::with_val(p, z * 2u32) * z + Complex::with_val(p, z * q1) + 2u32;
        let mut pow = Complex::with_val(p, 1);
        for _ in 0..e {
            pow *= omz;
        }
        pow * poly / Complex::with_val(p, z.square_ref())
    }

    /// `B_c = −(2 − k z(1−z))/(z(1−z))²`.
    pub fn b_value(&self, z: &Complex, omz: &Complex) -> Complex {
        let p = z.prec().0;
        let k = if self.c == 8 { 5u32 } else { 7 };
        let u = Complex::with_val(p, z * omz);
        let num = Complex::with_val(p, 2u32 - Complex::with_val(p, &u * k));
        -(num / Complex::with_val(p, u.square_ref()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityChecks {
    /// `A + A|S − (1−z)^{c/8−2} A|T = 0`.
    pub functional_equation: bool,
    /// `B|S = B`.
    pub b_s_invariant: bool,
    /// `B = −(1−z)^{c/8−2} A|T`.
    pub b_matches_a: bool,
}

impl IdentityChecks {
    pub fn all(&self) -> bool {
        self.functional_equation && self.b_s_invariant && self.b_matches_a
    }
}

pub fn identity_checks(m: &MagicCharge) -> IdentityChecks {
    let weight = RatFn::one_minus_z().powi(m.t_weight());
    let a_t = weight.mul(&m.a.t_action());
    IdentityChecks {
        functional_equation: m.a.add(&m.a.s_action()).sub(&a_t).is_zero(),
        b_s_invariant: m.b.s_action().same_as(&m.b),
        b_matches_a: m.b.same_as(&a_t.neg()),
    }
}

pub fn magic_identity_check(c: u32) -> Result<bool, MagicError> {
    Ok(identity_checks(&MagicCharge::new(c)?).all())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HParams {
    pub c: Rat,
    pub h: BigFloat,
}

impl HParams {
    pub fn new(c: Rat, h: BigFloat) -> Result<Self, MagicError> {
        if h.is_sign_negative() && !h.is_zero() || h.is_nan() {
            return Err(MagicError::Domain(format!("h must be nonnegative, got {h}")));
        }
        Ok(HParams { c, h })
    }
}

/// `H_{c,h}` and the `τ` it used.
fn h_and_tau(c: &BigFloat, h: &BigFloat, z: &Complex, omz: &Complex) -> Result<(Complex, Complex), MagicError> {
    let p = z.prec().0;
    let tau = lambda_inv_pair(z, omz)?;
    let c24 = BigFloat::with_val(p, c / 24u32);
    let w = Complex::with_val(p, z * omz);
    let pre = (w.ln() * BigFloat::with_val(p, -&c24)).exp();
    let two_pi_i = Complex::with_val(p, (0, pi(p) * 2u32));
    let phase = (tau.clone() * two_pi_i * BigFloat::with_val(p, h - &c24)).exp();
    Ok((pre * phase, tau))
}

pub fn eval_h(params: &HParams, z: &Complex) -> Result<Complex, MagicError> {
    let p = z.prec().0;
    let c = BigFloat::with_val(p, &params.c);
    let omz = Complex::with_val(p, 1 - z);
    Ok(h_and_tau(&c, &params.h, z, &omz)?.0)
}

/// A real quantity obtained by quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagicValue {
    #[serde(with = "serial::float")]
    pub value: BigFloat,
    /// Quadrature error estimate.
    pub error: f64,
    /// Imaginary part discarded from a quantity that is real in exact arithmetic.
    pub imag_residue: f64,
    pub evaluations: usize,
}

fn require(q: &Quad, cfg: &QuadratureConfig) -> Result<(), MagicError> {
    if q.converged(cfg) {
        Ok(())
    } else {
        Err(MagicError::ToleranceNotMet {
            estimate: q.error,
            tolerance: cfg.tolerance(q.value.real().to_f64()),
        })
    }
}

/// `f_c(h) = 2 sin²(πh) ∫_0^1 H_{c,h} A_c`, for `h > c/16 + 1/2`.
pub fn f_sine(m: &MagicCharge, h: &BigFloat, cfg: &QuadratureConfig) -> Result<MagicValue, MagicError> {
    let hf = h.to_f64();
    if !(hf - m.pole() >= POLE_MARGIN) {
        return Err(MagicError::NearPole {
            h: hf,
            margin: POLE_MARGIN,
        });
    }
    let p = cfg.prec();
    let c = m.c_float(p);
    let zero = BigFloat::new(p);
    let one = BigFloat::with_val(p, 1);
    let q = quad::tanh_sinh(&zero, &one, cfg, |n| {
        let z = Complex::with_val(p, &n.from_lo);
        let omz = Complex::with_val(p, &n.to_hi);
        let (hv, _) = h_and_tau(&c, h, &z, &omz)?;
        Ok(hv * m.a_value(&z, &omz))
    })?;
    require(&q, cfg)?;
    let s = BigFloat::with_val(p, h * pi(p)).sin();
    let factor = BigFloat::with_val(p, s.square_ref()) * 2u32;
    Ok(MagicValue {
        value: BigFloat::with_val(p, q.value.real() * &factor),
        error: q.error * factor.to_f64(),
        imag_residue: BigFloat::with_val(p, q.value.imag() * &factor).abs().to_f64(),
        evaluations: q.evaluations,
    })
}

fn check_arc(tau: &Complex, upper: bool, t: &BigFloat) -> Result<(), MagicError> {
    let p = tau.prec().0;
    let r = (BigFloat::with_val(p, tau.abs_ref()) - 1u32).abs();
    let tol = BigFloat::with_val(p, BigFloat::i_exp(1, -(p as i32) / 2));
    let side_ok = tau.real().is_zero() || tau.real().is_sign_positive() == upper;
    if r > tol || !side_ok {
        return Err(MagicError::NonConvergence(format!(
            "λ⁻¹ left the unit arc at Im z = {} (τ = {})",
            t.to_f64(),
            tau
        )));
    }
    Ok(())
}

/// `𝒟_c[H_{c,h}|(id − S)]`: the segment `(½, 1)` plus half the vertical ray `½ + i[0, ∞)`.
pub fn contour_functional(m: &MagicCharge, h: &BigFloat, cfg: &QuadratureConfig) -> Result<MagicValue, MagicError> {
    if h.is_sign_negative() && !h.is_zero() {
        return Err(MagicError::Domain(format!("h must be nonnegative, got {h}")));
    }
    let p = cfg.prec();
    let c = m.c_float(p);
    let half = BigFloat::with_val(p, 0.5);
    let one = BigFloat::with_val(p, 1);
    let phi = |z: &Complex, omz: &Complex| -> Result<(Complex, Complex, Complex), MagicError> {
        let (h1, t1) = h_and_tau(&c, h, z, omz)?;
        let (h2, t2) = h_and_tau(&c, h, omz, z)?;
        Ok((h1 - h2, t1, t2))
    };
    let seg = quad::tanh_sinh(&half, &one, cfg, |n| {
        let z = Complex::with_val(p, &n.x);
        let omz = Complex::with_val(p, &n.to_hi);
        let (f, _, _) = phi(&z, &omz)?;
        Ok(f * m.a_value(&z, &omz))
    })?;
    require(&seg, cfg)?;
    let ray = quad::exp_sinh(cfg, |n| {
        let z = Complex::with_val(p, (&half, &n.x));
        let omz = Complex::with_val(p, (&half, -n.x.clone()));
        let (f, t1, t2) = phi(&z, &omz)?;
        check_arc(&t1, true, &n.x)?;
        check_arc(&t2, false, &n.x)?;
        // dz = i dt
        Ok(f * m.b_value(&z, &omz) * Complex::with_val(p, (0, 1)))
    })?;
    require(&ray, cfg)?;
    let total = Complex::with_val(p, &seg.value + Complex::with_val(p, &ray.value / 2u32));
    let value = BigFloat::with_val(p, total.real());
    let error = seg.error + ray.error / 2.0;
    let imag = BigFloat::with_val(p, total.imag()).abs().to_f64();
    if imag > 10.0 * cfg.tolerance(value.to_f64()).max(error) {
        return Err(MagicError::NonConvergence(format!(
            "contour value has imaginary part {imag:e}"
        )));
    }
    Ok(MagicValue {
        value,
        error,
        imag_residue: imag,
        evaluations: seg.evaluations + ray.evaluations,
    })
}

/// `f_c(h)` by whichever representation is valid at `h`.
pub fn f_value(m: &MagicCharge, h: &BigFloat, cfg: &QuadratureConfig) -> Result<MagicValue, MagicError> {
    if h.to_f64() - m.pole() >= POLE_MARGIN {
        f_sine(m, h, cfg)
    } else {
        contour_functional(m, h, cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub n: usize,
    #[serde(with = "serial::float")]
    pub h: BigFloat,
    pub value: MagicValue,
}

pub const MAX_LADDER: usize = 5;

/// `f_c` at `h = c/16 + 1/2 + n`, `n < count`.
pub fn zero_ladder(m: &MagicCharge, count: usize, cfg: &QuadratureConfig) -> Result<Vec<LadderPoint>, MagicError> {
    if count > MAX_LADDER {
        return Err(MagicError::Domain(format!(
            "ladder length {count} exceeds {MAX_LADDER}"
        )));
    }
    let p = cfg.prec();
    let base = BigFloat::with_val(p, m.c) / 16u32 + BigFloat::with_val(p, 0.5);
    (0..count)
        .map(|n| {
            let h = BigFloat::with_val(p, &base + n as u32);
            // The sine formula is 0·∞ at the bottom rung.
            let value = if n == 0 {
                contour_functional(m, &h, cfg)?
            } else {
                f_sine(m, &h, cfg)?
            };
            Ok(LadderPoint { n, h, value })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationCheck {
    #[serde(with = "serial::float")]
    pub h: BigFloat,
    pub contour: MagicValue,
    pub sine: MagicValue,
    pub rel_err: f64,
}

pub fn deformation_check(
    m: &MagicCharge,
    h: &BigFloat,
    cfg: &QuadratureConfig,
) -> Result<DeformationCheck, MagicError> {
    let contour = contour_functional(m, h, cfg)?;
    let sine = f_sine(m, h, cfg)?;
    let p = cfg.prec();
    let diff = BigFloat::with_val(p, &contour.value - &sine.value).abs();
    let rel_err = (diff / BigFloat::with_val(p, sine.value.abs_ref())).to_f64();
    Ok(DeformationCheck {
        h: h.clone(),
        contour,
        sine,
        rel_err,
    })
}

/// Thresholds of the verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyThresholds {
    pub roundtrip: f64,
    pub ladder: f64,
    pub vacuum: f64,
    pub deformation: f64,
}

impl Default for VerifyThresholds {
    fn default() -> Self {
        VerifyThresholds {
            roundtrip: 1e-25,
            ladder: 1e-8,
            vacuum: 1e-8,
            deformation: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderCheck {
    pub point: LadderPoint,
    /// `f_c(h + ½)`, the scale the zero is measured against.
    pub midpoint: MagicValue,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagicReport {
    pub c: u32,
    pub identity_checks: IdentityChecks,
    pub roundtrip_max_err: f64,
    pub ladder_values: Vec<LadderCheck>,
    pub vacuum: MagicValue,
    pub deformation_rel_errs: Vec<DeformationCheck>,
    pub thresholds: VerifyThresholds,
    pub passed: bool,
}

/// Default probe heights for the deformation identity.
pub fn deformation_points(c: u32) -> Vec<f64> {
    match c {
        8 => vec![1.1, 1.3, 1.7],
        _ => vec![2.1, 2.6],
    }
}

/// Evenly spread points in `(0.05, 0.95)`.
pub fn roundtrip_points(count: usize, prec: u32) -> Vec<Complex> {
    (0..count)
        .map(|k| {
            let x = BigFloat::with_val(prec, 0.05)
                + BigFloat::with_val(prec, 0.9) * (2 * k as u32 + 1) / (2 * count as u32);
            Complex::with_val(prec, (x, 0))
        })
        .collect()
}

/// Runs the full suite for one charge.
pub fn verify(m: &MagicCharge, cfg: &QuadratureConfig, th: &VerifyThresholds) -> Result<MagicReport, MagicError> {
    let p = cfg.prec();
    let identity = identity_checks(m);
    let roundtrip = roundtrip_max_err(&roundtrip_points(20, p), 256)?;
    let rungs = if m.c == 8 { 3 } else { 2 };
    let ladder = zero_ladder(m, rungs, cfg)?
        .into_iter()
        .map(|point| {
            let mid = f_sine(m, &BigFloat::with_val(p, &point.h + 0.5f64), cfg)?;
            let scale = mid.value.to_f64().max(1.0);
            let passed = point.value.value.clone().abs().to_f64() < th.ladder * scale && mid.value.is_sign_positive();
            Ok(LadderCheck {
                point,
                midpoint: mid,
                passed,
            })
        })
        .collect::<Result<Vec<_>, MagicError>>()?;
    let vacuum = contour_functional(m, &BigFloat::new(p), cfg)?;
    let deformation = deformation_points(m.c)
        .into_iter()
        .map(|h| deformation_check(m, &BigFloat::with_val(p, h), cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = identity.all()
        && roundtrip < th.roundtrip
        && ladder.iter().all(|l| l.passed)
        && vacuum.value.clone().abs().to_f64() < th.vacuum
        && deformation.iter().all(|d| d.rel_err < th.deformation);
    Ok(MagicReport {
        c: m.c,
        identity_checks: identity,
        roundtrip_max_err: roundtrip,
        ladder_values: ladder,
        vacuum,
        deformation_rel_errs: deformation,
        thresholds: *th,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn identities_hold_exactly() {
        assert!(magic_identity_check(8).unwrap());
        assert!(magic_identity_check(24).unwrap());
        assert!(magic_identity_check(12).is_err());
    }

    #[test]
    fn perturbed_a_fails() {
        let mut m = MagicCharge::new(8).unwrap();
        // 2z² + z + 2 → 3z² + z + 2
        let omz = RatPoly::from_ints(&[1, -1]);
        m.a = RatFn::new(omz.mul(&RatPoly::from_ints(&[2, 1, 3])), RatPoly::from_ints(&[0, 0, 1]));
        let ch = identity_checks(&m);
        assert!(!ch.functional_equation);
        assert!(!ch.all());
    }

    #[test]
    fn numeric_forms_match_exact_ones() {
        for c in [8, 24] {
            let m = MagicCharge::new(c).unwrap();
            for (num, den) in [(1, 3), (7, 9), (-2, 5), (11, 4)] {
                let r = Rat::from((num, den));
                let z = Complex::with_val(256, (&r, 0));
                let omz = Complex::with_val(256, 1 - &z);
                let a = m.a.eval(&r).unwrap();
                let b = m.b.eval(&r).unwrap();
                let da = BigFloat::with_val(
                    256,
                    (m.a_value(&z, &omz) - Complex::with_val(256, (&a, 0))).abs().real(),
                );
                let db = BigFloat::with_val(
                    256,
                    (m.b_value(&z, &omz) - Complex::with_val(256, (&b, 0))).abs().real(),
                );
                assert!(da.to_f64() < 1e-60 && db.to_f64() < 1e-60);
            }
        }
    }

    #[test]
    fn a_is_positive_on_unit_interval() {
        for c in [8, 24] {
            let m = MagicCharge::new(c).unwrap();
            for k in 1..20 {
                assert!(m.a.eval(&Rat::from((k, 20))).unwrap() > 0);
            }
        }
    }

    #[test]
    fn h_is_real_on_unit_interval() {
        let params = HParams::new(Rat::from(8), BigFloat::with_val(256, 1.5)).unwrap();
        for x in [0.1, 0.5, 0.9] {
            let v = eval_h(&params, &Complex::with_val(256, (x, 0))).unwrap();
            assert!(v.imag().clone().abs().to_f64() <= 1e-70 * v.real().to_f64().abs());
            assert!(v.real().is_sign_positive());
        }
        assert!(eval_h(&params, &Complex::with_val(256, (0, 0))).is_err());
        assert!(HParams::new(Rat::from(8), BigFloat::with_val(64, -1)).is_err());
    }

    #[test]
    fn sine_formula_refuses_the_pole() {
        let m = MagicCharge::new(8).unwrap();
        let h = BigFloat::with_val(256, 1.0005);
        assert!(matches!(f_sine(&m, &h, &cfg()), Err(MagicError::NearPole { .. })));
    }

    #[test]
    fn sine_formula_vanishes_on_integers_and_is_positive_between() {
        let m = MagicCharge::new(8).unwrap();
        let zero = f_sine(&m, &BigFloat::with_val(256, 2), &cfg()).unwrap();
        assert!(zero.value.clone().abs().to_f64() < 1e-20);
        let pos = f_sine(&m, &BigFloat::with_val(256, 1.5), &cfg()).unwrap();
        assert!(pos.value.to_f64() > 0.0);
    }

    #[test]
    fn ladder_length_is_capped() {
        let m = MagicCharge::new(8).unwrap();
        assert!(zero_ladder(&m, 6, &cfg()).is_err());
    }
}
