use std::cmp::Ordering;
use std::collections::BTreeMap;

use rug::Integer;

use super::{PuiseuxSeries, SeriesError};
use crate::exactfield::Rat;

/// `p(0), …, p(len−1)` by Euler's pentagonal recurrence.
pub fn partition_numbers(len: usize) -> Vec<Integer> {
    let mut p = vec![Integer::new(); len];
    if len == 0 {
        return p;
    }
    p[0] = Integer::from(1);
    for n in 1..len {
        let mut acc = Integer::new();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let positive = k % 2 == 1;
            for g in [g1, g1 + k] {
                if g <= n {
                    if positive {
                        acc += &p[n - g];
                    } else {
                        acc -= &p[n - g];
                    }
                }
            }
        }
        p[n] = acc;
    }
    p
}

/// `Π_{n≥1}(1 − q^n)` to `len` terms via the pentagonal number theorem.
fn euler_product(len: usize) -> Vec<Rat> {
    let mut c = vec![Rat::new(); len];
    if len > 0 {
        c[0] = Rat::from(1);
    }
    for k in 1i64.. {
        let g1 = (k * (3 * k - 1) / 2) as usize;
        if g1 >= len {
            break;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        c[g1] = Rat::from(sign);
        let g2 = g1 + k as usize;
        if g2 < len {
            c[g2] = Rat::from(sign);
        }
    }
    c
}

/// `η = q^{1/24} Π(1 − q^n)` to `trunc` integer-spaced terms.
pub fn eta_series(trunc: usize) -> PuiseuxSeries {
    PuiseuxSeries::new(Rat::from((1, 24)), 1, euler_product(trunc))
}

/// In-place multiplication of a dense series by `1 + t^m`.
fn mul_one_plus(c: &mut [Rat], m: usize) {
    for i in (m..c.len()).rev() {
        let (lo, hi) = c.split_at_mut(i);
        hi[0] += &lo[i - m];
    }
}

/// In-place division of a dense series by `1 + t^m`.
fn div_one_plus(c: &mut [Rat], m: usize) {
    for i in m..c.len() {
        let (lo, hi) = c.split_at_mut(i);
        hi[0] -= &lo[i - m];
    }
}

/// `λ = 16 q^{1/2} Π_{n≥1} ((1 + q^n)/(1 + q^{n−1/2}))^8` to `trunc` terms on the half-integer grid.
pub fn lambda_series(trunc: usize) -> PuiseuxSeries {
    // Work in p = q^{1/2}: the product is Π_k (1 + p^k)^{(−1)^k}.
    let mut c = vec![Rat::new(); trunc];
    if trunc == 0 {
        return PuiseuxSeries::new(Rat::from((1, 2)), 2, c);
    }
    c[0] = Rat::from(1);
    for k in 1..trunc {
        if k % 2 == 0 {
            mul_one_plus(&mut c, k);
        } else {
            div_one_plus(&mut c, k);
        }
    }
    let base = PuiseuxSeries::new(Rat::new(), 2, c);
    base.pow(8).scale(&Rat::from(16)).shift_by(&Rat::from((1, 2)))
}

/// Compositional inverse of `s(u) = a_1 u + a_2 u² + …`, where `u = q^{1/d}` is the grid step of `s`.
///
/// The result expresses `u` as a power series in `z = s(u)`: it has shift 1 and
/// unit grid, and reads `Σ_{n≥1} b_n z^n`.
pub fn series_reversion(s: &PuiseuxSeries) -> Result<PuiseuxSeries, SeriesError> {
    if *s.shift() != Rat::from((1, s.denom())) {
        return Err(SeriesError::NotUniformizer);
    }
    let a = s.coeffs();
    let l = a.len();
    let a1 = match a.first() {
        Some(x) if x.cmp0() != Ordering::Equal => x.clone(),
        _ => return Err(SeriesError::NotUniformizer),
    };
    // Lagrange inversion: n·b_n = [u^{n−1}] (u/s(u))^n and u/s(u) = a_1^{−1}·ψ with ψ(0) = 1.
    let a1_inv = Rat::from(a1.recip_ref());
    let psi_inv = PuiseuxSeries::new(Rat::new(), 1, a.iter().map(|x| Rat::from(x * &a1_inv)).collect());
    let mut out = Vec::with_capacity(l);
    let mut a1_pow = Rat::from(1);
    for n in 1..=l {
        a1_pow *= &a1_inv;
        let pn = psi_inv.truncate(n).pow_rat(&Rat::from(-(n as i64)))?;
        let b = Rat::from(&pn.coeffs()[n - 1] * &a1_pow) / n as u64;
        out.push(b);
    }
    Ok(PuiseuxSeries::new(Rat::from(1), 1, out))
}

/// `j = 256(1 − λ + λ²)³ / (λ²(1 − λ)²)` on the integer grid, starting at `q^{−1}`.
pub fn j_from_lambda(trunc: usize) -> PuiseuxSeries {
    let lam = lambda_series(2 * trunc);
    let one = Rat::from(1);
    let lam2 = lam.mul(&lam);
    let num = lam2.sub(&lam).add_const(&one).pow(3);
    let one_minus = lam.neg().add_const(&one);
    let den = lam2.mul(&one_minus.mul(&one_minus));
    let j = num
        .div(&den)
        .expect("λ has a nonzero leading term")
        .scale(&Rat::from(256));
    let j = j.coarsen(1).expect("j has integral exponents");
    debug_assert!(j.trunc() >= trunc);
    j.truncate(trunc)
}

/// `j^{1/3} = q^{−1/3}(1 + 248q + …)` on the branch with leading coefficient 1.
pub fn j_cube_root(trunc: usize) -> PuiseuxSeries {
    j_from_lambda(trunc)
        .pow_rat(&Rat::from((1, 3)))
        .expect("j has leading coefficient 1")
}

/// `χ_{c,h} = q^{h − c/24} / Π(1 − q^n)`, or the vacuum character `(1 − q)·χ_{c,0}`.
pub fn virasoro_char(c: &Rat, h: &Rat, vacuum: bool, trunc: usize) -> PuiseuxSeries {
    let p = partition_numbers(trunc);
    let coeffs = (0..trunc)
        .map(|n| {
            let mut x = Rat::from(&p[n]);
            if vacuum && n > 0 {
                x -= &p[n - 1];
            }
            x
        })
        .collect();
    let shift = Rat::from(h - Rat::from(c / 24u32));
    PuiseuxSeries::new(shift, 1, coeffs)
}

/// Multiplicities in `f = c_0 χ̄_c + Σ_{h>0} c_h χ_{c,h}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirasoroDecomposition {
    pub c: Rat,
    /// Nonzero multiplicities keyed by `h`; the key `0` holds `c_0`.
    pub coefficients: BTreeMap<Rat, Rat>,
    /// Exponent of `q` up to which the decomposition is exact.
    pub remainder_order: Rat,
    grid: u32,
}

impl VirasoroDecomposition {
    /// `c_h`, or `None` when `h` lies beyond the exact range.
    pub fn coefficient(&self, h: &Rat) -> Option<Rat> {
        let e = Rat::from(h - Rat::from(&self.c / 24u32));
        if e >= self.remainder_order {
            return None;
        }
        Some(self.coefficients.get(h).cloned().unwrap_or_default())
    }

    pub fn c0(&self) -> Rat {
        self.coefficient(&Rat::new()).unwrap_or_default()
    }

    /// Rebuilds the character sum up to the remainder order.
    pub fn reconstruct(&self) -> PuiseuxSeries {
        let base = Rat::from(-Rat::from(&self.c / 24u32));
        let span = Rat::from(&self.remainder_order - &base);
        let len = Rat::from(&span * self.grid).numer().to_usize().unwrap_or(0);
        let int_len = span.ceil().numer().to_usize().unwrap_or(0) + 1;
        let mut acc = PuiseuxSeries::new(base.clone(), self.grid, vec![Rat::new(); len]);
        for (h, m) in &self.coefficients {
            let chi = virasoro_char(&self.c, h, h.cmp0() == Ordering::Equal, int_len);
            acc = acc.add(&chi.scale(m));
        }
        acc
    }
}

/// Greedy peeling of characters from the bottom of `f`.
///
/// With `nonnegative` set, a negative multiplicity is an error.
pub fn virasoro_decompose(f: &PuiseuxSeries, c: &Rat, nonnegative: bool) -> Result<VirasoroDecomposition, SeriesError> {
    let base = Rat::from(-Rat::from(c / 24u32));
    let g = f.normalize();
    if *g.shift() != base {
        return Err(SeriesError::LeadingExponent {
            expected: base.to_string(),
            found: g.shift().to_string(),
        });
    }
    let d = g.denom();
    let len = g.trunc();
    let int_len = len / d as usize + 2;
    let mut residual = g.clone();
    let mut coefficients = BTreeMap::new();
    let check = |h: &Rat, m: &Rat| {
        if nonnegative && m.cmp0() == Ordering::Less {
            Err(SeriesError::Negative {
                h: h.to_string(),
                coeff: m.to_string(),
            })
        } else {
            Ok(())
        }
    };
    let c0 = g.coeffs()[0].clone();
    check(&Rat::new(), &c0)?;
    residual = residual.sub(&virasoro_char(c, &Rat::new(), true, int_len).scale(&c0));
    coefficients.insert(Rat::new(), c0);
    for m in 1..len {
        let h = Rat::from((m as u64, d));
        let e = Rat::from(&base + &h);
        let ch = residual.coeff_at(&e).expect("within the truncation order");
        if ch.cmp0() == Ordering::Equal {
            continue;
        }
        check(&h, &ch)?;
        residual = residual.sub(&virasoro_char(c, &h, false, int_len).scale(&ch));
        coefficients.insert(h, ch);
    }
    Ok(VirasoroDecomposition {
        c: c.clone(),
        coefficients,
        remainder_order: g.order(),
        grid: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::rat;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&c| Rat::from(c)).collect()
    }

    /// Π(1 − q^n) by direct multiplication of the factors.
    fn product_oracle(len: usize) -> Vec<Rat> {
        let mut c = vec![Rat::new(); len];
        c[0] = Rat::from(1);
        for n in 1..len {
            for i in (n..len).rev() {
                let t = c[i - n].clone();
                c[i] -= t;
            }
        }
        c
    }

    fn sigma3(n: u64) -> Integer {
        (1..=n).filter(|d| n % d == 0).map(|d| Integer::from(d * d * d)).sum()
    }

    #[test]
    fn eta_expansion() {
        let eta = eta_series(8);
        assert_eq!(eta.shift(), &rat(1, 24));
        assert_eq!(eta.coeffs(), ints(&[1, -1, -1, 0, 0, 1, 0, 1]).as_slice());
        assert_eq!(eta.coeffs(), product_oracle(8).as_slice());
        let cube = eta.pow(3);
        assert_eq!(cube.shift(), &rat(1, 8));
        assert_eq!(cube.coeffs()[1], -3);
        assert_eq!(euler_product(40), product_oracle(40));
    }

    #[test]
    fn partitions() {
        let p = partition_numbers(11);
        let want = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        assert!(p.iter().zip(want).all(|(a, b)| *a == b));
        assert_eq!(partition_numbers(101)[100], Integer::from(190_569_292u64));
    }

    #[test]
    fn lambda_goldens() {
        let lam = lambda_series(6);
        assert_eq!(lam.shift(), &rat(1, 2));
        assert_eq!(lam.coeffs(), ints(&[16, -128, 704, -3072, 11488, -38400]).as_slice());
    }

    #[test]
    fn lambda_matches_eta_quotient() {
        // λ = 16 η(τ/2)^8 η(2τ)^16 / η(τ)^24
        let len = 40;
        let e = euler_product(len);
        let half = PuiseuxSeries::new(rat(0, 1), 2, e.clone());
        let one = PuiseuxSeries::new(rat(0, 1), 1, e.clone()).regrid(2);
        let mut two = vec![Rat::new(); len];
        for (i, x) in e.iter().enumerate() {
            if 4 * i < len {
                two[4 * i] = x.clone();
            }
        }
        let two = PuiseuxSeries::new(rat(0, 1), 2, two);
        let quot = half.pow(8).mul(&two.pow(16)).div(&one.pow(24)).unwrap();
        let oracle = quot.scale(&Rat::from(16)).shift_by(&rat(1, 2));
        assert_eq!(lambda_series(len), oracle);
    }

    #[test]
    fn reversion_examples() {
        let id = PuiseuxSeries::from_ints(rat(1, 1), 1, &[1, 0, 0, 0]);
        assert_eq!(series_reversion(&id).unwrap(), id);
        let lin = PuiseuxSeries::from_ints(rat(1, 1), 1, &[2, 0, 0]);
        let half = PuiseuxSeries::new(rat(1, 1), 1, vec![rat(1, 2), Rat::new(), Rat::new()]);
        assert_eq!(series_reversion(&lin).unwrap(), half);
        let bad = PuiseuxSeries::from_ints(rat(0, 1), 1, &[1, 1]);
        assert_eq!(series_reversion(&bad), Err(SeriesError::NotUniformizer));
    }

    #[test]
    fn nome_in_terms_of_lambda() {
        let p = series_reversion(&lambda_series(8)).unwrap();
        let q = p.mul(&p);
        assert_eq!(q.shift(), &rat(2, 1));
        assert_eq!(&q.coeffs()[..3], &[rat(1, 256), rat(1, 256), rat(29, 8192)]);
    }

    #[test]
    fn j_goldens() {
        let j = j_from_lambda(6);
        assert_eq!(j.shift(), &rat(-1, 1));
        assert!(j.is_integral());
        assert_eq!(j.coeffs()[0], 1);
        assert_eq!(j.coeffs()[1], 744);
        assert_eq!(j.coeffs()[2], 196_884);
        assert_eq!(j.coeffs()[3], 21_493_760);
        assert_eq!(j.coeffs()[4], 864_299_970u64);
    }

    #[test]
    fn j_cube_root_matches_e4_over_eta8() {
        let len = 12;
        let r = j_cube_root(len);
        assert_eq!(r.shift(), &rat(-1, 3));
        assert_eq!(r.coeffs()[1], 248);
        let e4: Vec<Rat> = (0..len as u64)
            .map(|n| {
                if n == 0 {
                    Rat::from(1)
                } else {
                    Rat::from(sigma3(n) * 240u32)
                }
            })
            .collect();
        let e4 = PuiseuxSeries::new(rat(0, 1), 1, e4);
        let oracle = e4.div(&eta_series(len).pow(8)).unwrap();
        assert_eq!(r, oracle);
        assert_eq!(r.pow(3), j_from_lambda(len));
    }

    #[test]
    fn vacuum_character() {
        let c = rat(24, 1);
        let chi = virasoro_char(&c, &Rat::new(), true, 6);
        assert_eq!(chi.shift(), &rat(-1, 1));
        assert_eq!(chi.coeffs(), ints(&[1, 0, 1, 1, 2, 2]).as_slice());
        let plain = virasoro_char(&c, &Rat::new(), false, 6);
        let one_minus_q = PuiseuxSeries::from_ints(rat(0, 1), 1, &[1, -1, 0, 0, 0, 0]);
        assert_eq!(plain.mul(&one_minus_q), chi);
        assert_eq!(virasoro_char(&rat(8, 7), &rat(3, 2), false, 3).shift(), &rat(61, 42));
    }

    #[test]
    fn decompositions() {
        let c = rat(24, 1);
        let j = j_from_lambda(10);
        let f = j.sub(&PuiseuxSeries::monomial(Rat::new(), 1, 9).scale(&Rat::from(744)));
        let dec = virasoro_decompose(&f, &c, true).unwrap();
        assert_eq!(dec.c0(), 1);
        assert_eq!(dec.coefficient(&rat(1, 1)), Some(Rat::new()));
        assert_eq!(dec.coefficient(&rat(2, 1)), Some(Rat::from(196_883)));
        assert_eq!(dec.reconstruct(), f.normalize());

        let vac = virasoro_char(&c, &Rat::new(), true, 8);
        let dec = virasoro_decompose(&vac, &c, true).unwrap();
        assert_eq!(dec.coefficients.len(), 1);

        let dec = virasoro_decompose(&j_cube_root(8), &rat(8, 1), true).unwrap();
        assert_eq!(dec.c0(), 1);
        assert_eq!(dec.coefficient(&rat(1, 1)), Some(Rat::from(248)));
        assert_eq!(dec.reconstruct(), j_cube_root(8));
    }

    #[test]
    fn decomposition_errors() {
        let c = rat(24, 1);
        let wrong = virasoro_char(&rat(8, 1), &Rat::new(), true, 5);
        assert!(matches!(
            virasoro_decompose(&wrong, &c, false),
            Err(SeriesError::LeadingExponent { .. })
        ));
        let neg = PuiseuxSeries::from_ints(rat(-1, 1), 1, &[1, -5, 0]);
        assert!(matches!(
            virasoro_decompose(&neg, &c, true),
            Err(SeriesError::Negative { .. })
        ));
        assert!(virasoro_decompose(&neg, &c, false).is_ok());
    }
}
