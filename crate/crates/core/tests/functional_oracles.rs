mod common;

use common::{cauchy_derivatives, exp_term, rel_err};
use dualbound::exactfield::{pi, Precision, Rat};
use dualbound::functional::{eval_p, vacuum_terms, FunctionalSpec};
use rug::{Complex, Float};

const P: u32 = 256;
const W: u32 = 512;

/// `10^{−P/4}` with `P` in bits.
fn tolerance() -> f64 {
    10f64.powi(-(P as i32) / 4)
}

#[test]
fn eval_p_matches_numerical_derivatives() {
    let spec = FunctionalSpec::lattice(8, 4, Precision::default()).unwrap();
    let a: Vec<Float> = [0.3, -1.2, 0.7, 0.05, -0.4]
        .iter()
        .map(|&x| Float::with_val(P, x))
        .collect();
    for h in [0.0, 0.37, 1.5, 2.9] {
        let hf = Float::with_val(P, h);
        let got = eval_p(&spec, &a, &hf).unwrap();
        let alpha = Float::with_val(W, 2);
        let beta = Float::with_val(W, &hf) * pi(W) * 2u32;
        let d = cauchy_derivatives(exp_term(&alpha, &beta, 1, W), 9, 1.0, 256, W);
        let mut want = Float::new(W);
        for (m, am) in a.iter().enumerate() {
            want += Float::with_val(W, &d[2 * m + 1] * am);
        }
        want *= Float::with_val(W, &beta).exp();
        assert!(rel_err(&Float::with_val(W, &got), &want) < tolerance(), "h = {h}");
    }
}

#[test]
fn vacuum_terms_match_numerical_derivatives() {
    for c in [Rat::from(8), Rat::from(24), Rat::from((8, 7))] {
        let r = vacuum_terms(&c, 5, Precision::default()).unwrap();
        let beta0 = Float::with_val(W, Rat::from(1 - c.clone()) / 12u32) * pi(W);
        let two_pi = pi(W) * 2u32;
        let b0 = beta0.clone();
        let f = move |z: &Complex| {
            let ez = z.clone().exp();
            let base = Complex::with_val(W, z * Float::with_val(W, 0.25)) - Complex::with_val(W, &ez * &b0);
            let damp = Complex::with_val(W, &ez * &two_pi);
            let one_minus = Complex::with_val(W, 1) - Complex::with_val(W, -damp).exp();
            base.exp() * one_minus
        };
        let d = cauchy_derivatives(f, 11, 1.0, 256, W);
        for (m, rm) in r.r_values.iter().enumerate() {
            let want = &d[2 * m + 1];
            assert!(rel_err(&Float::with_val(W, rm), want) < tolerance(), "c = {c}, m = {m}");
        }
    }
}

#[test]
fn odd_functionals_annihilate_inversion_symmetric_functions() {
    let worst = common::annihilation_residual(100, 7, P);
    assert!(worst < tolerance(), "worst residual {worst:e}");
}

#[test]
fn numerical_oracle_recovers_known_derivatives() {
    // exp(z): every derivative is 1.
    let d = cauchy_derivatives(|z: &Complex| z.clone().exp(), 12, 1.0, 128, W);
    for x in d {
        assert!(rel_err(&x, &Float::with_val(W, 1)) < 1e-100);
    }
}
