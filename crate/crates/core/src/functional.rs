//! Odd derivative functionals at the self-dual point `t = 1`.
//!
//! For `f(t) = t^α e^{−βt}` one has `(t∂_t)^m f |_{t=1} = p_m(β) e^{−β}` with
//! `p_m` a polynomial of degree `m`. Lattices use `α = n/4`, `β = 2πh`; vertex
//! operator algebras use `α = 1/4`, `β = 2π(h + (1−c)/24)`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{pi, BigFloat, Precision, Rat, RatPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctionalError {
    #[error("lattice rank must be at least 1")]
    Rank,
    #[error("central charge must exceed 1, got {0}")]
    CentralCharge(String),
    #[error("expected {expected} coefficients, got {got}")]
    Length { expected: usize, got: usize },
}

/// `p_m` as an exact polynomial in `β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivPoly {
    pub alpha: Rat,
    /// Shift `δ` in `β = 2π(h + δ)`.
    pub delta: Rat,
    pub order: usize,
    pub poly_in_beta: RatPoly,
}

/// `p_0, …, p_M` from `Q_0 = 1`, `Q_{m+1} = t∂_t Q_m + (α − βt) Q_m`, `p_m = Q_m(1, β)`.
pub fn deriv_polys(alpha: &Rat, delta: &Rat, max_order: usize) -> Vec<DerivPoly> {
    // q[i][j]: coefficient of t^i β^j.
    let mut q = vec![vec![Rat::from(1)]];
    let mut out = Vec::with_capacity(max_order + 1);
    for m in 0..=max_order {
        let mut p = vec![Rat::new(); m + 1];
        for row in &q {
            for (j, c) in row.iter().enumerate() {
                p[j] += c;
            }
        }
        out.push(DerivPoly {
            alpha: alpha.clone(),
            delta: delta.clone(),
            order: m,
            poly_in_beta: RatPoly::new(p),
        });
        if m == max_order {
            break;
        }
        let mut next = vec![vec![Rat::new(); m + 2]; m + 2];
        for (i, row) in q.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.cmp0() == Ordering::Equal {
                    continue;
                }
                next[i][j] += Rat::from(c * (Rat::from(i as u64) + alpha));
                next[i + 1][j + 1] -= c;
            }
        }
        q = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    Lattice {
        n: u32,
    },
    /// Central charge as an exact rational string such as `"8/7"`.
    Voa {
        #[serde(with = "rat_str")]
        c: Rat,
    },
}

mod rat_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exactfield::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// The family of functionals with odd orders `1, 3, …, 2N+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalSpec {
    pub flavor: Flavor,
    #[serde(rename = "N")]
    pub n_top: usize,
    pub precision: Precision,
}

impl FunctionalSpec {
    pub fn lattice(n: u32, n_top: usize, precision: Precision) -> Result<Self, FunctionalError> {
        if n < 1 {
            return Err(FunctionalError::Rank);
        }
        Ok(FunctionalSpec {
            flavor: Flavor::Lattice { n },
            n_top,
            precision,
        })
    }

    pub fn voa(c: Rat, n_top: usize, precision: Precision) -> Result<Self, FunctionalError> {
        if c <= 1 {
            return Err(FunctionalError::CentralCharge(c.to_string()));
        }
        Ok(FunctionalSpec {
            flavor: Flavor::Voa { c },
            n_top,
            precision,
        })
    }

    pub fn alpha(&self) -> Rat {
        match &self.flavor {
            Flavor::Lattice { n } => Rat::from((*n, 4)),
            Flavor::Voa { .. } => Rat::from((1, 4)),
        }
    }

    pub fn delta(&self) -> Rat {
        match &self.flavor {
            Flavor::Lattice { .. } => Rat::new(),
            Flavor::Voa { c } => Rat::from(1 - c.clone()) / 24u32,
        }
    }

    pub fn prec(&self) -> u32 {
        self.precision.bits()
    }

    /// `p_1, p_3, …, p_{2N+1}` in `β`.
    pub fn odd_polys(&self) -> Vec<DerivPoly> {
        deriv_polys(&self.alpha(), &self.delta(), 2 * self.n_top + 1)
            .into_iter()
            .filter(|p| p.order % 2 == 1)
            .collect()
    }

    /// `β = 2π(h + δ)`.
    pub fn beta(&self, h: &BigFloat) -> BigFloat {
        let p = self.prec();
        let two_pi = pi(p) * 2u32;
        (BigFloat::with_val(p, h) + BigFloat::with_val(p, &self.delta())) * two_pi
    }

    /// Coefficients in `h` (lowest first) of each odd `p_{2m+1}`.
    pub fn odd_polys_in_h(&self) -> Vec<Vec<BigFloat>> {
        let p = self.prec();
        let two_pi = pi(p) * 2u32;
        let two_pi_delta = BigFloat::with_val(p, &self.delta()) * &two_pi;
        self.odd_polys()
            .iter()
            .map(|dp| poly_affine_substitute(dp.poly_in_beta.coeffs(), &two_pi, &two_pi_delta, p))
            .collect()
    }
}

/// Coefficients in `h` of `P(s·h + t)` for `P` given by rational coefficients.
pub fn poly_affine_substitute(c: &[Rat], s: &BigFloat, t: &BigFloat, prec: u32) -> Vec<BigFloat> {
    // Horner in the polynomial ring: acc ← acc·(s h + t) + c_k.
    let mut acc: Vec<BigFloat> = Vec::new();
    for ck in c.iter().rev() {
        let mut next = vec![BigFloat::new(prec); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i] += BigFloat::with_val(prec, a * t);
            next[i + 1] += BigFloat::with_val(prec, a * s);
        }
        next[0] += ck;
        acc = next;
    }
    if acc.is_empty() {
        acc.push(BigFloat::new(prec));
    }
    acc
}

/// `Σ_m a_{2m+1} p_{2m+1}(β(h))`.
pub fn eval_p(spec: &FunctionalSpec, a: &[BigFloat], h: &BigFloat) -> Result<BigFloat, FunctionalError> {
    let polys = spec.odd_polys();
    if a.len() != polys.len() {
        return Err(FunctionalError::Length {
            expected: polys.len(),
            got: a.len(),
        });
    }
    let beta = spec.beta(h);
    let mut acc = BigFloat::new(spec.prec());
    for (am, pm) in a.iter().zip(&polys) {
        acc += pm.poly_in_beta.eval_float(&beta) * am;
    }
    Ok(acc)
}

/// `r_{2m+1}`: the functional applied to `t^{1/4} e^{−β₀t}(1 − e^{−2πt})`, `β₀ = 2π(1−c)/24`.
#[derive(Debug, Clone, PartialEq)]
pub struct VacuumTerm {
    pub r_values: Vec<BigFloat>,
}

pub fn vacuum_terms(c: &Rat, n_top: usize, precision: Precision) -> Result<VacuumTerm, FunctionalError> {
    let spec = FunctionalSpec::voa(c.clone(), n_top, precision)?;
    let p = spec.prec();
    let beta0 = spec.beta(&BigFloat::new(p));
    let beta1 = spec.beta(&BigFloat::with_val(p, 1));
    let e0 = BigFloat::with_val(p, -&beta0).exp();
    let e1 = BigFloat::with_val(p, -&beta1).exp();
    let r_values = spec
        .odd_polys()
        .iter()
        .map(|dp| dp.poly_in_beta.eval_float(&beta0) * &e0 - dp.poly_in_beta.eval_float(&beta1) * &e1)
        .collect();
    Ok(VacuumTerm { r_values })
}

/// Which vacuum contribution normalizes VOA functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum VacuumConvention {
    /// Only `p(0) e^{−β₀}`, the vacuum without its level-one null state.
    #[default]
    Leading,
    /// The full `r_{2m+1}` of [`vacuum_terms`].
    Subtracted,
}

/// `p_{2m+1}(0) e^{−β₀}` for `m = 0..=N`.
pub fn leading_vacuum_terms(c: &Rat, n_top: usize, precision: Precision) -> Result<Vec<BigFloat>, FunctionalError> {
    let spec = FunctionalSpec::voa(c.clone(), n_top, precision)?;
    let beta0 = spec.beta(&BigFloat::new(spec.prec()));
    let e0 = BigFloat::with_val(spec.prec(), -&beta0).exp();
    Ok(spec
        .odd_polys()
        .iter()
        .map(|dp| dp.poly_in_beta.eval_float(&beta0) * &e0)
        .collect())
}

/// Normalization functional on the coefficient vector `a`: `p(0)` for lattices, the vacuum term for VOAs.
pub fn normalization_row(spec: &FunctionalSpec, vacuum: VacuumConvention) -> Vec<BigFloat> {
    match &spec.flavor {
        Flavor::Lattice { .. } => spec
            .odd_polys_in_h()
            .into_iter()
            .map(|c| c.into_iter().next().expect("nonempty"))
            .collect(),
        Flavor::Voa { c } => match vacuum {
            VacuumConvention::Leading => {
                leading_vacuum_terms(c, spec.n_top, spec.precision).expect("spec already validated")
            }
            VacuumConvention::Subtracted => {
                vacuum_terms(c, spec.n_top, spec.precision)
                    .expect("spec already validated")
                    .r_values
            }
        },
    }
}
