use std::cmp::Ordering;

use dualbound::exactfield::{HomoPoly2, QSqrt2, Rat};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-1000i64..=1000, 1i64..=300).prop_map(|(p, q)| Rat::from((p, q)))
}

fn qs() -> impl Strategy<Value = QSqrt2> {
    (rat(), rat()).prop_map(|(a, b)| QSqrt2::new(a, b))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Vec<QSqrt2>> {
    prop::collection::vec(qs(), 1..=max_deg + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(x in qs(), y in qs(), z in qs()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), QSqrt2::one());
        }
    }

    #[test]
    fn sign_matches_high_precision_float(x in qs()) {
        let f = x.to_float(256);
        let expected = if x.is_zero() { Ordering::Equal } else { f.cmp0().unwrap() };
        prop_assert_eq!(x.sign(), expected);
    }

    #[test]
    fn sign_near_cancellation(k in 1i64..100_000) {
        // Convergents of √2 make a + b√2 tiny.
        let (mut p, mut q) = (1i64, 1i64);
        for _ in 0..(k % 20) {
            let np = p + 2 * q;
            q += p;
            p = np;
        }
        let x = QSqrt2::new(-p, q);
        let f = x.to_float(256);
        prop_assert_eq!(x.sign(), f.cmp0().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn polynomial_product_laws(p in poly(4), q in poly(4), r in poly(4)) {
        let (p, q, r) = (HomoPoly2::new(p), HomoPoly2::new(q), HomoPoly2::new(r));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q).degree(), p.degree() + q.degree());
    }
}
