use std::cmp::Ordering;
use std::fmt;

use rug::Float;

use super::Rat;

/// Dense univariate polynomial with rational coefficients, lowest degree first.
///
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        let mut p = RatPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| Rat::from(c)).collect())
    }

    pub fn zero() -> Self {
        RatPoly::default()
    }

    pub fn constant(c: impl Into<Rat>) -> Self {
        RatPoly::new(vec![c.into()])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        RatPoly::from_ints(&[0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.cmp0() == Ordering::Equal) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeff(i);
            if let Some(o) = other.coeffs.get(i) {
                c += o;
            }
            out.push(c);
        }
        RatPoly::new(out)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| Rat::from(-c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| Rat::from(c * s)).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0() == Ordering::Equal {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rat::from(a * b);
            }
        }
        RatPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        let mut acc = RatPoly::constant(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rat::from(c * i as u32))
                .collect(),
        )
    }

    /// `self(other(t))`
    pub fn compose(&self, other: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&RatPoly::constant(c.clone()));
        }
        acc
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::new();
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, t: &Float) -> Float {
        let mut acc = Float::new(t.prec());
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r` and `deg r < deg d`.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dl = d.leading().expect("division by the zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (RatPoly::zero(), self.clone());
        }
        let mut q = vec![Rat::new(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = Rat::from(&r[k + dd] / &dl);
            if f.cmp0() != Ordering::Equal {
                for (j, c) in d.coeffs.iter().enumerate() {
                    r[k + j] -= Rat::from(&f * c);
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.cmp0() == Ordering::Equal {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·t")?,
                _ => write!(f, "{c}·t^{i}")?,
            }
        }
        Ok(())
    }
}
