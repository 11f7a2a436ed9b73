use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rug::{Assign, Float};

use super::{FieldError, OrderedField, Rat};

/// An element `a + b·√2` of the real quadratic field ℚ(√2).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    a: Rat,
    b: Rat,
}

impl QSqrt2 {
    pub fn new(a: impl Into<Rat>, b: impl Into<Rat>) -> Self {
        QSqrt2 {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_rat(a: impl Into<Rat>) -> Self {
        QSqrt2 {
            a: a.into(),
            b: Rat::new(),
        }
    }

    pub fn zero() -> Self {
        QSqrt2::default()
    }

    pub fn one() -> Self {
        QSqrt2::from_rat(1)
    }

    pub fn sqrt2() -> Self {
        QSqrt2::new(0, 1)
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    /// Coefficient `b` of √2.
    pub fn sqrt2_part(&self) -> &Rat {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.cmp0() == Ordering::Equal && self.b.cmp0() == Ordering::Equal
    }

    pub fn is_rational(&self) -> bool {
        self.b.cmp0() == Ordering::Equal
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conjugate(&self) -> Self {
        QSqrt2 {
            a: self.a.clone(),
            b: Rat::from(-&self.b),
        }
    }

    /// Field norm `a² − 2b²`.
    pub fn norm(&self) -> Rat {
        let a2 = Rat::from(self.a.square_ref());
        let b2 = Rat::from(self.b.square_ref());
        a2 - b2 * 2u32
    }

    /// Exact sign of the real number `a + b·√2`.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp0();
        let sb = self.b.cmp0();
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Opposite signs: the term of larger absolute value wins.
            (sa, _) => {
                let a2 = Rat::from(self.a.square_ref());
                let b2 = Rat::from(self.b.square_ref()) * 2u32;
                match a2.cmp(&b2) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                }
            }
        }
    }

    /// Multiplicative inverse `(a − b√2)/(a² − 2b²)`.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QSqrt2 {
            a: Rat::from(&self.a / &n),
            b: -Rat::from(&self.b / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        QSqrt2 {
            a: Rat::from(&self.a * r),
            b: Rat::from(&self.b * r),
        }
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let s = Float::with_val(prec, 2).sqrt();
        Float::with_val(prec, &self.a) + s * &self.b
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QSqrt2::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self -= x·y` with fewer temporaries than the operator form.
    pub fn sub_mul_assign(&mut self, x: &Self, y: &Self) {
        let mut t = Rat::from(&x.a * &y.a);
        self.a -= &t;
        t.assign(&x.b * &y.b);
        t *= 2u32;
        self.a -= &t;
        t.assign(&x.a * &y.b);
        self.b -= &t;
        t.assign(&x.b * &y.a);
        self.b -= &t;
    }
}

impl From<i64> for QSqrt2 {
    fn from(v: i64) -> Self {
        QSqrt2::from_rat(v)
    }
}

impl From<Rat> for QSqrt2 {
    fn from(v: Rat) -> Self {
        QSqrt2::from_rat(v)
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.cmp0(), self.b.cmp0()) {
            (_, Ordering::Equal) => write!(f, "{}", self.a),
            (Ordering::Equal, _) => write!(f, "{}√2", self.b),
            (_, Ordering::Less) => write!(f, "{} - {}√2", self.a, Rat::from(-&self.b)),
            _ => write!(f, "{} + {}√2", self.a, self.b),
        }
    }
}

impl<'a> Add<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 {
            a: Rat::from(&self.a + &rhs.a),
            b: Rat::from(&self.b + &rhs.b),
        }
    }
}

impl<'a> Sub<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 {
            a: Rat::from(&self.a - &rhs.a),
            b: Rat::from(&self.b - &rhs.b),
        }
    }
}

impl<'a> Mul<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let mut a = Rat::from(&self.a * &rhs.a);
        a += Rat::from(&self.b * &rhs.b) * 2u32;
        let mut b = Rat::from(&self.a * &rhs.b);
        b += Rat::from(&self.b * &rhs.a);
        QSqrt2 { a, b }
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: QSqrt2) -> QSqrt2 {
        &self + &rhs
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: QSqrt2) -> QSqrt2 {
        &self - &rhs
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: QSqrt2) -> QSqrt2 {
        &self * &rhs
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -self.a, b: -self.b }
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 {
            a: Rat::from(-&self.a),
            b: Rat::from(-&self.b),
        }
    }
}

impl AddAssign<&QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, rhs: &QSqrt2) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&QSqrt2> for QSqrt2 {
    fn sub_assign(&mut self, rhs: &QSqrt2) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl OrderedField for QSqrt2 {
    fn zero() -> Self {
        QSqrt2::zero()
    }
    fn one() -> Self {
        QSqrt2::one()
    }
    fn sign(&self) -> Ordering {
        QSqrt2::sign(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.checked_div(rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul_assign(&mut self, x: &Self, y: &Self) {
        QSqrt2::sub_mul_assign(self, x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64)) -> QSqrt2 {
        QSqrt2::new(Rat::from(a), Rat::from(b))
    }

    #[test]
    fn sign_examples() {
        assert_eq!(QSqrt2::new(3, -2).sign(), Ordering::Greater);
        assert_eq!(QSqrt2::zero().sign(), Ordering::Equal);
        assert_eq!(QSqrt2::new(-1, 1).sign(), Ordering::Greater);
        assert_eq!(QSqrt2::new(1, -1).sign(), Ordering::Less);
        assert_eq!(QSqrt2::new(-3, 2).sign(), Ordering::Less);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(QSqrt2::new(1, 1).inv().unwrap(), QSqrt2::new(-1, 1));
        assert_eq!(QSqrt2::new(2, 0).inv().unwrap(), q((1, 2), (0, 1)));
        assert_eq!(QSqrt2::sqrt2().inv().unwrap(), q((0, 1), (1, 2)));
        assert_eq!(QSqrt2::zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn conjugate_product_is_norm() {
        let x = q((7, 3), (-5, 11));
        let p = &x * &x.conjugate();
        assert!(p.is_rational());
        assert_eq!(p.rational_part(), &x.norm());
    }

    #[test]
    fn sub_mul_matches_operators() {
        let mut acc = q((1, 2), (3, 4));
        let x = q((-2, 3), (1, 5));
        let y = q((4, 1), (-7, 2));
        let expected = &acc - &(&x * &y);
        acc.sub_mul_assign(&x, &y);
        assert_eq!(acc, expected);
    }

    #[test]
    fn display_forms() {
        assert_eq!(QSqrt2::new(3, -2).to_string(), "3 - 2√2");
        assert_eq!(QSqrt2::new(0, 1).to_string(), "1√2");
        assert_eq!(QSqrt2::new(5, 0).to_string(), "5");
    }
}
