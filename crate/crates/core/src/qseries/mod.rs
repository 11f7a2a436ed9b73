//! Truncated q-expansions with exact rational coefficients.

mod modular;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use thiserror::Error;

use crate::exactfield::Rat;

pub use modular::{
    eta_series, j_cube_root, j_from_lambda, lambda_series, partition_numbers, series_reversion, virasoro_char,
    virasoro_decompose, VirasoroDecomposition,
};

/// Default number of retained grid terms.
pub const DEFAULT_TRUNC: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("leading coefficient is zero or unknown")]
    ZeroLeading,
    #[error("exponent grids are incompatible")]
    Grid,
    #[error("leading exponent must equal the grid step for reversion")]
    NotUniformizer,
    #[error("leading exponent {found} does not match the required {expected}")]
    LeadingExponent { expected: String, found: String },
    #[error("negative multiplicity {coeff} at h = {h}")]
    Negative { h: String, coeff: String },
    #[error("series terms off the grid of the requested step")]
    OffGrid,
}

fn lcm(a: u32, b: u32) -> u32 {
    let g = gcd(a, b);
    a / g * b
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn small_denom(r: &Rat) -> u32 {
    r.denom().to_u32().expect("exponent denominator fits in u32")
}

/// `q^shift · Σ_m coeffs[m] q^{m/denom}`, known exactly below exponent [`order`](Self::order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    shift: Rat,
    denom: u32,
    coeffs: Vec<Rat>,
}

impl PuiseuxSeries {
    pub fn new(shift: Rat, denom: u32, coeffs: Vec<Rat>) -> Self {
        assert!(denom >= 1);
        PuiseuxSeries { shift, denom, coeffs }
    }

    pub fn from_ints(shift: Rat, denom: u32, coeffs: &[i64]) -> Self {
        Self::new(shift, denom, coeffs.iter().map(|&c| Rat::from(c)).collect())
    }

    /// `q^shift` known to `len` grid terms.
    pub fn monomial(shift: Rat, denom: u32, len: usize) -> Self {
        let mut coeffs = vec![Rat::new(); len];
        if len > 0 {
            coeffs[0] = Rat::from(1);
        }
        Self::new(shift, denom, coeffs)
    }

    pub fn shift(&self) -> &Rat {
        &self.shift
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Number of retained grid terms.
    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent of the grid term `m`.
    pub fn exponent(&self, m: usize) -> Rat {
        Rat::from(&self.shift + Rat::from((m as u64, self.denom)))
    }

    /// First exponent not determined by the retained terms.
    pub fn order(&self) -> Rat {
        self.exponent(self.coeffs.len())
    }

    /// Coefficient of `q^e`; `None` at or beyond the truncation order.
    pub fn coeff_at(&self, e: &Rat) -> Option<Rat> {
        if *e >= self.order() {
            return None;
        }
        if *e < self.shift {
            return Some(Rat::new());
        }
        let steps = Rat::from(e - &self.shift) * self.denom;
        if *steps.denom() != 1 {
            return Some(Rat::new());
        }
        let m = steps.numer().to_usize().expect("index fits");
        Some(self.coeffs[m].clone())
    }

    /// Index and value of the first nonzero coefficient.
    pub fn leading(&self) -> Option<(usize, &Rat)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| c.cmp0() != Ordering::Equal)
    }

    /// Drops leading zeros so that the first retained coefficient is nonzero.
    pub fn normalize(&self) -> Self {
        match self.leading() {
            Some((i, _)) if i > 0 => PuiseuxSeries {
                shift: self.exponent(i),
                denom: self.denom,
                coeffs: self.coeffs[i..].to_vec(),
            },
            _ => self.clone(),
        }
    }

    /// Rewrites on the finer grid `1/d`, where `d` is a multiple of the current step.
    pub fn regrid(&self, d: u32) -> Self {
        assert_eq!(d % self.denom, 0, "target grid must refine the current one");
        let f = (d / self.denom) as usize;
        if f == 1 {
            return self.clone();
        }
        let mut coeffs = vec![Rat::new(); self.coeffs.len() * f];
        for (m, c) in self.coeffs.iter().enumerate() {
            coeffs[m * f] = c.clone();
        }
        PuiseuxSeries {
            shift: self.shift.clone(),
            denom: d,
            coeffs,
        }
    }

    /// Rewrites on the coarser grid `1/d`; fails if a nonzero term falls off it.
    pub fn coarsen(&self, d: u32) -> Result<Self, SeriesError> {
        if self.denom % d != 0 {
            return Err(SeriesError::OffGrid);
        }
        let f = (self.denom / d) as usize;
        let mut coeffs = Vec::with_capacity(self.coeffs.len() / f);
        for (m, c) in self.coeffs.iter().enumerate() {
            if m % f == 0 {
                if m + f <= self.coeffs.len() {
                    coeffs.push(c.clone());
                }
            } else if c.cmp0() != Ordering::Equal {
                return Err(SeriesError::OffGrid);
            }
        }
        Ok(PuiseuxSeries {
            shift: self.shift.clone(),
            denom: d,
            coeffs,
        })
    }

    /// Cuts the series down to at most `len` terms.
    pub fn truncate(&self, len: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(len);
        s
    }

    pub fn scale(&self, r: &Rat) -> Self {
        PuiseuxSeries {
            shift: self.shift.clone(),
            denom: self.denom,
            coeffs: self.coeffs.iter().map(|c| Rat::from(c * r)).collect(),
        }
    }

    /// Multiplies by `q^e`.
    pub fn shift_by(&self, e: &Rat) -> Self {
        PuiseuxSeries {
            shift: Rat::from(&self.shift + e),
            denom: self.denom,
            coeffs: self.coeffs.clone(),
        }
    }

    fn common_grid(&self, other: &Self) -> u32 {
        let diff = Rat::from(&self.shift - &other.shift);
        lcm(lcm(self.denom, other.denom), small_denom(&diff))
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.common_grid(other);
        let a = self.regrid(d);
        let b = other.regrid(d);
        let shift = if a.shift <= b.shift {
            a.shift.clone()
        } else {
            b.shift.clone()
        };
        let order = if a.order() <= b.order() { a.order() } else { b.order() };
        let len = Rat::from(&order - &shift) * d;
        let len = len.numer().to_usize().unwrap_or(0);
        let mut coeffs = vec![Rat::new(); len];
        for s in [&a, &b] {
            let off = Rat::from(&s.shift - &shift) * d;
            let off = off.numer().to_usize().expect("offset fits");
            for (m, c) in s.coeffs.iter().enumerate() {
                if off + m < len {
                    coeffs[off + m] += c;
                }
            }
        }
        PuiseuxSeries {
            shift,
            denom: d,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rat::from(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Adds a constant term, which must be known at this truncation.
    pub fn add_const(&self, c: &Rat) -> Self {
        let d = self.denom;
        let len = (Rat::from(&self.order() * d)).numer().to_usize().unwrap_or(0);
        self.add(&PuiseuxSeries::monomial(Rat::new(), d, len).scale(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = lcm(self.denom, other.denom);
        let a = self.regrid(d);
        let b = other.regrid(d);
        let len = a.coeffs.len().min(b.coeffs.len());
        let mut coeffs = vec![Rat::new(); len];
        let mut t = Rat::new();
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if x.cmp0() == Ordering::Equal {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if y.cmp0() != Ordering::Equal {
                    rug::Assign::assign(&mut t, x * y);
                    coeffs[i + j] += &t;
                }
            }
        }
        PuiseuxSeries {
            shift: Rat::from(&a.shift + &b.shift),
            denom: d,
            coeffs,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap_or_else(|| PuiseuxSeries::monomial(Rat::new(), self.denom, self.coeffs.len()))
    }

    /// Multiplicative inverse; the first retained coefficient must be nonzero.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let a0 = match self.coeffs.first() {
            Some(c) if c.cmp0() != Ordering::Equal => c.clone(),
            _ => return Err(SeriesError::ZeroLeading),
        };
        let inv0 = Rat::from(a0.recip_ref());
        let n = self.coeffs.len();
        let mut g: Vec<Rat> = Vec::with_capacity(n);
        g.push(inv0.clone());
        let mut t = Rat::new();
        for m in 1..n {
            let mut s = Rat::new();
            for k in 1..=m {
                if self.coeffs[k].cmp0() != Ordering::Equal {
                    rug::Assign::assign(&mut t, &self.coeffs[k] * &g[m - k]);
                    s += &t;
                }
            }
            g.push(-(s * &inv0));
        }
        Ok(PuiseuxSeries {
            shift: Rat::from(-&self.shift),
            denom: self.denom,
            coeffs: g,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inv()?))
    }

    /// `self^α` for a series whose first coefficient is `1`.
    pub fn pow_rat(&self, alpha: &Rat) -> Result<Self, SeriesError> {
        match self.coeffs.first() {
            Some(c) if *c == 1 => {}
            _ => return Err(SeriesError::ZeroLeading),
        }
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut g: Vec<Rat> = Vec::with_capacity(n);
        g.push(Rat::from(1));
        let alpha1 = Rat::from(alpha + 1u32);
        let mut t = Rat::new();
        for m in 1..n {
            let mut s = Rat::new();
            for k in 1..=m {
                if a[k].cmp0() == Ordering::Equal {
                    continue;
                }
                // ((α+1)k − m)·a_k·g_{m−k}
                let w = Rat::from(&alpha1 * k as u64) - m as u64;
                rug::Assign::assign(&mut t, &a[k] * &g[m - k]);
                t *= w;
                s += &t;
            }
            g.push(s / m as u64);
        }
        Ok(PuiseuxSeries {
            shift: Rat::from(&self.shift * alpha),
            denom: self.denom,
            coeffs: g,
        })
    }

    /// `[[exp_num, exp_den, coeff_num, coeff_den], …]` for the nonzero terms.
    pub fn to_json(&self) -> serde_json::Value {
        let num = |i: &Integer| {
            serde_json::Value::Number(serde_json::Number::from_str(&i.to_string()).expect("integer literal"))
        };
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.cmp0() != Ordering::Equal)
            .map(|(m, c)| {
                let e = self.exponent(m);
                serde_json::Value::Array(vec![num(e.numer()), num(e.denom()), num(c.numer()), num(c.denom())])
            })
            .collect();
        serde_json::Value::Array(terms)
    }

    /// Whether every retained coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.cmp0() == Ordering::Equal {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}·q^({})", self.exponent(m))?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^({}))", self.order())
    }
}

/// Exact rational from an integer pair, for tests and tables.
pub fn rat(n: i64, d: i64) -> Rat {
    Rational::from((n, d))
}
