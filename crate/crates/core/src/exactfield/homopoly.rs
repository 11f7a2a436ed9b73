use std::fmt;

use super::QSqrt2;

/// Homogeneous polynomial in `x, y` over ℚ(√2).
///
/// `coeffs[i]` is the coefficient of `x^i y^(degree - i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomoPoly2 {
    coeffs: Vec<QSqrt2>,
}

impl HomoPoly2 {
    /// Builds from coefficients indexed by the power of `x`. Panics on an empty vector.
    pub fn new(coeffs: Vec<QSqrt2>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a homogeneous polynomial needs degree + 1 coefficients"
        );
        HomoPoly2 { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        HomoPoly2 {
            coeffs: vec![QSqrt2::zero(); degree + 1],
        }
    }

    /// The constant `1` (degree 0).
    pub fn one() -> Self {
        HomoPoly2 {
            coeffs: vec![QSqrt2::one()],
        }
    }

    /// `p·x + q·y`
    pub fn linear(p: QSqrt2, q: QSqrt2) -> Self {
        HomoPoly2 { coeffs: vec![q, p] }
    }

    pub fn x() -> Self {
        Self::linear(QSqrt2::one(), QSqrt2::zero())
    }

    pub fn y() -> Self {
        Self::linear(QSqrt2::zero(), QSqrt2::one())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[QSqrt2] {
        &self.coeffs
    }

    /// Coefficient of `x^i y^(degree - i)`.
    pub fn coeff(&self, i: usize) -> &QSqrt2 {
        &self.coeffs[i]
    }

    pub fn mul(&self, other: &HomoPoly2) -> HomoPoly2 {
        let mut out = vec![QSqrt2::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        HomoPoly2 { coeffs: out }
    }

    pub fn pow(&self, e: usize) -> HomoPoly2 {
        let mut acc = HomoPoly2::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Sum of two polynomials of the same degree.
    pub fn add(&self, other: &HomoPoly2) -> HomoPoly2 {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in addition");
        HomoPoly2 {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &QSqrt2) -> HomoPoly2 {
        HomoPoly2 {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Substitutes `x → (y − x)/√2`, `y → (x + y)/√2`.
    pub fn s_action(&self) -> HomoPoly2 {
        let d = self.degree();
        let u = HomoPoly2::linear(QSqrt2::from(-1), QSqrt2::one()); // y − x
        let v = HomoPoly2::linear(QSqrt2::one(), QSqrt2::one()); // x + y
        let mut u_pows = Vec::with_capacity(d + 1);
        let mut v_pows = Vec::with_capacity(d + 1);
        u_pows.push(HomoPoly2::one());
        v_pows.push(HomoPoly2::one());
        for k in 1..=d {
            u_pows.push(u_pows[k - 1].mul(&u));
            v_pows.push(v_pows[k - 1].mul(&v));
        }
        let mut acc = HomoPoly2::zero(d);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&u_pows[i].mul(&v_pows[d - i]).scale(c));
        }
        // (1/√2)^d
        let half = QSqrt2::new(rug::Rational::from((1, 2)), 0);
        let mut factor = half.pow(d as u32 / 2);
        if d % 2 == 1 {
            factor = &factor * &QSqrt2::new(0, rug::Rational::from((1, 2)));
        }
        acc.scale(&factor)
    }
}

impl fmt::Display for HomoPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})x^{i}y^{}", d - i)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
