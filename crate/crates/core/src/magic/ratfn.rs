//! Rational functions over ℚ, kept as unreduced numerator/denominator pairs.

use std::fmt;

use crate::exactfield::{Rat, RatPoly};

#[derive(Debug, Clone)]
pub struct RatFn {
    pub num: RatPoly,
    pub den: RatPoly,
}

impl RatFn {
    /// Panics on a zero denominator.
    pub fn new(num: RatPoly, den: RatPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFn { num, den }
    }

    pub fn poly(p: RatPoly) -> Self {
        RatFn::new(p, RatPoly::constant(1))
    }

    pub fn one_minus_z() -> Self {
        RatFn::poly(RatPoly::from_ints(&[1, -1]))
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        RatFn::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> RatFn {
        RatFn::new(self.num.neg(), self.den.clone())
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn powi(&self, e: i32) -> RatFn {
        let k = e.unsigned_abs();
        if e >= 0 {
            RatFn::new(self.num.pow(k), self.den.pow(k))
        } else {
            RatFn::new(self.den.pow(k), self.num.pow(k))
        }
    }

    /// `f((a z + b)/(c z + d))`.
    pub fn mobius(&self, a: i64, b: i64, c: i64, d: i64) -> RatFn {
        let top = RatPoly::from_ints(&[b, a]);
        let bot = RatPoly::from_ints(&[d, c]);
        let homog = |p: &RatPoly, deg: usize| -> RatPoly {
            let mut out = RatPoly::zero();
            for (k, ck) in p.coeffs().iter().enumerate() {
                let term = top.pow(k as u32).mul(&bot.pow((deg - k) as u32)).scale(ck);
                out = out.add(&term);
            }
            out
        };
        let n = self.num.degree().unwrap_or(0);
        let m = self.den.degree().unwrap_or(0);
        // N(w) = Ñ/bot^n and D(w) = D̃/bot^m.
        let num = homog(&self.num, n).mul(&bot.pow(m as u32));
        let den = homog(&self.den, m).mul(&bot.pow(n as u32));
        RatFn::new(num, den)
    }

    /// `z ↦ 1 − z`.
    pub fn s_action(&self) -> RatFn {
        self.mobius(-1, 1, 0, 1)
    }

    /// `z ↦ z/(z − 1)`.
    pub fn t_action(&self) -> RatFn {
        self.mobius(1, 0, 1, -1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn same_as(&self, o: &RatFn) -> bool {
        self.num.mul(&o.den).sub(&o.num.mul(&self.den)).is_zero()
    }

    /// `None` at a pole.
    pub fn eval(&self, z: &Rat) -> Option<Rat> {
        let d = self.den.eval(z);
        if d == 0 {
            None
        } else {
            Some(self.num.eval(z) / d)
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn s_and_t_are_involutions() {
        let f = RatFn::new(p(&[2, 1, 2]), p(&[0, 0, 1]));
        assert!(f.s_action().s_action().same_as(&f));
        assert!(f.t_action().t_action().same_as(&f));
        assert!(!f.t_action().same_as(&f));
    }

    #[test]
    fn mobius_agrees_with_pointwise_evaluation() {
        let f = RatFn::new(p(&[1, -3, 0, 2]), p(&[5, 0, 1]));
        let g = f.t_action();
        for k in [2i64, 5, -4, 7] {
            let z = Rat::from((k, 3));
            let w = Rat::from(&z / Rat::from(&z - 1u32));
            assert_eq!(g.eval(&z), f.eval(&w));
        }
    }

    #[test]
    fn negative_powers() {
        let f = RatFn::one_minus_z();
        assert!(f.powi(-2).mul(&f.powi(2)).same_as(&RatFn::poly(RatPoly::constant(1))));
        assert!(f.powi(0).same_as(&RatFn::poly(RatPoly::constant(1))));
    }
}
