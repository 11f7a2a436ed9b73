#![allow(dead_code)]

use rug::float::Constant;
use rug::{Complex, Float};

/// Taylor derivatives `f^{(m)}(0)` for `m = 0..=max_order` from the trapezoid rule
/// on the circle `|z| = radius` with `nodes` points.
pub fn cauchy_derivatives(
    f: impl Fn(&Complex) -> Complex,
    max_order: usize,
    radius: f64,
    nodes: usize,
    prec: u32,
) -> Vec<Float> {
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let r = Float::with_val(prec, radius);
    let mut sums = vec![Complex::new(prec); max_order + 1];
    for k in 0..nodes {
        let theta = Float::with_val(prec, &two_pi * k as u32) / nodes as u32;
        let (s, c) = theta.clone().sin_cos(Float::new(prec));
        let z = Complex::with_val(prec, (Float::with_val(prec, &c * &r), Float::with_val(prec, &s * &r)));
        let v = f(&z);
        for (m, acc) in sums.iter_mut().enumerate() {
            // e^{−i m θ}
            let phase = Float::with_val(prec, &theta * m as u32);
            let (ps, pc) = phase.sin_cos(Float::new(prec));
            let w = Complex::with_val(prec, (pc, -ps));
            *acc += Complex::with_val(prec, &v * &w);
        }
    }
    let mut fact = Float::with_val(prec, 1);
    let mut rpow = Float::with_val(prec, 1);
    let mut out = Vec::with_capacity(max_order + 1);
    for (m, s) in sums.into_iter().enumerate() {
        if m > 0 {
            fact *= m as u32;
            rpow *= &r;
        }
        let re = s.into_real_imag().0;
        out.push(re * &fact / &rpow / nodes as u32);
    }
    out
}

/// `exp(α z − β e^z)`: the function `t^α e^{−βt}` in the variable `z = log t`.
pub fn exp_term(alpha: &Float, beta: &Float, sign: i32, prec: u32) -> impl Fn(&Complex) -> Complex {
    let alpha = alpha.clone();
    let beta = beta.clone();
    move |z: &Complex| {
        let z = if sign < 0 {
            Complex::with_val(prec, -z)
        } else {
            z.clone()
        };
        let ez = z.clone().exp();
        let arg = Complex::with_val(prec, &z * &alpha) - Complex::with_val(prec, &ez * &beta);
        arg.exp()
    }
}

pub fn rel_err(got: &Float, want: &Float) -> f64 {
    let d = Float::with_val(got.prec(), got - want).abs();
    let scale = want.clone().abs().max(&Float::with_val(got.prec(), 1e-300));
    (d / scale).to_f64()
}

/// Largest normalized residual of the odd functional applied to `t^α e^{−βt} + t^{−α} e^{−β/t}`
/// over `draws` random choices of `α`, `β`, `N` and coefficients.
///
/// The first term goes through the exact recurrence polynomials, the second through
/// numerical differentiation, so the identity checks one against the other.
pub fn annihilation_residual(draws: usize, seed: u64, prec: u32) -> f64 {
    use dualbound::exactfield::Rat;
    use dualbound::functional::deriv_polys;
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let work = prec * 2;
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let alpha = Rat::from((rng.gen_range(1..=480i64), 40));
        let beta = Rat::from((rng.gen_range(1..=800i64), 40));
        let n_top = rng.gen_range(0..=6usize);
        let a: Vec<Float> = (0..=n_top)
            .map(|_| Float::with_val(prec, rng.gen_range(-1.0..1.0f64)))
            .collect();
        let af = Float::with_val(work, &alpha);
        let bf = Float::with_val(work, &beta);
        let polys = deriv_polys(&alpha, &Rat::new(), 2 * n_top + 1);
        let e = Float::with_val(work, -&bf).exp();
        let mirrored = cauchy_derivatives(exp_term(&af, &bf, -1, work), 2 * n_top + 1, 1.0, 256, work);
        let mut total = Float::new(work);
        let mut scale = Float::new(work);
        for (m, am) in a.iter().enumerate() {
            let order = 2 * m + 1;
            let direct = polys[order].poly_in_beta.eval_float(&bf) * &e;
            scale += Float::with_val(work, &direct * am).abs();
            total += Float::with_val(work, &direct + &mirrored[order]) * am;
        }
        let r = (total.abs() / scale).to_f64();
        worst = worst.max(r);
    }
    worst
}
