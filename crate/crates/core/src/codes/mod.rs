//! Linear programming bounds for binary codes.
//!
//! The S-symmetrized weight enumerator `F_C = ½(W_C + W_C|S)` lies in the ring
//! generated by `A = (√2−1)x + y` and `B = x² + y²`. Writing
//! `F_C = Σ_j b_j A^{n−2j} B^j`, each monomial coefficient `c_i` is linear in the
//! `b_j`, and a code of length `n` with `min(μ, μ*) > k` forces the system
//! `c_0 = 1`, `c_1 = … = c_k = 0`, `c_i ≥ 0` to be feasible. Everything here is
//! exact arithmetic in ℚ(√2).

pub mod simplex;

use std::cmp::Ordering;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactfield::{HomoPoly2, QSqrt2, Rat};
use simplex::{Dictionary, RowKind, SolveStatus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodesError {
    #[error("dual index {0} is not a power of two")]
    DualIndex(String),
    #[error("coefficient of x^{index} has a nonzero √2 part after the transform")]
    Irrational { index: usize },
    #[error("need 1 ≤ k ≤ n, got n = {n}, k = {k}")]
    BadThreshold { n: usize, k: usize },
    #[error("length must be at least 1")]
    ZeroLength,
}

/// Weight distribution of a binary code: `coeffs[i]` counts words of weight `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightEnumerator {
    pub n: usize,
    #[serde(serialize_with = "ser_rats")]
    pub coeffs: Vec<Rat>,
}

fn ser_rats<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ser_qsqrt2<S: Serializer>(v: &Option<QSqrt2>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl WeightEnumerator {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        WeightEnumerator {
            n: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn from_counts(counts: &[i64]) -> Self {
        WeightEnumerator::new(counts.iter().map(|&c| Rat::from(c)).collect())
    }

    /// Enumerates the span of the given generator rows (bit `i` of a row is coordinate `i`).
    pub fn of_generators(n: usize, rows: &[u64]) -> Self {
        assert!(n <= 64 && rows.len() < 32);
        let mut counts = vec![0i64; n + 1];
        for mask in 0u64..(1 << rows.len()) {
            let mut w = 0u64;
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    w ^= r;
                }
            }
            counts[w.count_ones() as usize] += 1;
        }
        WeightEnumerator::from_counts(&counts)
    }

    pub fn size(&self) -> Rat {
        self.coeffs.iter().sum()
    }

    pub fn to_poly(&self) -> HomoPoly2 {
        HomoPoly2::new(self.coeffs.iter().cloned().map(QSqrt2::from).collect())
    }
}

/// `√(dual_index) · W(S(x, y))` for a power of two `dual_index = |C⊥/C|`.
pub fn macwilliams(w: &WeightEnumerator, dual_index: &Rat) -> Result<WeightEnumerator, CodesError> {
    let scale = sqrt_power_of_two(dual_index)?;
    let t = w.to_poly().s_action().scale(&scale);
    let coeffs = t
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.is_rational() {
                Ok(c.rational_part().clone())
            } else {
                Err(CodesError::Irrational { index: i })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeightEnumerator { n: w.n, coeffs })
}

/// `√(2^e)` as an element of ℚ(√2).
fn sqrt_power_of_two(r: &Rat) -> Result<QSqrt2, CodesError> {
    let bad = || CodesError::DualIndex(r.to_string());
    if r.cmp0() != Ordering::Greater {
        return Err(bad());
    }
    let (num, den) = (r.numer(), r.denom());
    let e: i64 = if *den == 1 && num.is_power_of_two() {
        num.significant_bits() as i64 - 1
    } else if *num == 1 && den.is_power_of_two() {
        -(den.significant_bits() as i64 - 1)
    } else {
        return Err(bad());
    };
    let half = e.div_euclid(2);
    let pow = if half >= 0 {
        Rat::from(rug::Integer::from(1) << half as u32)
    } else {
        Rat::from((rug::Integer::from(1), rug::Integer::from(1) << (-half) as u32))
    };
    Ok(if e.rem_euclid(2) == 1 {
        QSqrt2::new(0, pow)
    } else {
        QSqrt2::from(pow)
    })
}

/// `(√2 − 1)x + y`
pub fn generator_a() -> HomoPoly2 {
    HomoPoly2::linear(QSqrt2::new(-1, 1), QSqrt2::one())
}

/// `x² + y²`
pub fn generator_b() -> HomoPoly2 {
    HomoPoly2::new(vec![QSqrt2::one(), QSqrt2::zero(), QSqrt2::one()])
}

/// `[A^{n−2j} B^j for j = 0..=n/2]`
pub fn invariant_basis(n: usize) -> Vec<HomoPoly2> {
    let a = generator_a();
    let b = generator_b();
    let m = n / 2;
    let mut a_pows = vec![HomoPoly2::one()];
    for k in 1..=n {
        a_pows.push(a_pows[k - 1].mul(&a));
    }
    let mut out = Vec::with_capacity(m + 1);
    let mut b_pow = HomoPoly2::one();
    for j in 0..=m {
        out.push(a_pows[n - 2 * j].mul(&b_pow));
        b_pow = b_pow.mul(&b);
    }
    out
}

pub fn s_invariance_check(p: &HomoPoly2) -> bool {
    p.s_action() == *p
}

/// `M[i][j]`: coefficient of `x^i y^{n−i}` in the `j`-th basis element.
pub fn constraint_matrix(n: usize) -> Vec<Vec<QSqrt2>> {
    let basis = invariant_basis(n);
    (0..=n)
        .map(|i| basis.iter().map(|p| p.coeff(i).clone()).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Feasible,
    Infeasible,
}

/// Exact witness for the LP verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpCertificate {
    /// A point `b` satisfying every constraint.
    Point(Vec<QSqrt2>),
    /// Weights `w` with `w_0 = 1`, `w_i ≥ 0` for `i > k` and `Σ w_i c_i ≡ 0` in `b`.
    /// Evaluated at a feasible point this gives `0 = 1 + (non-negative)`.
    Farkas(Vec<QSqrt2>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpOutcome {
    pub n: usize,
    pub k: usize,
    pub status: LpStatus,
    /// Maximum of `Σ c_i`, when feasible and bounded.
    #[serde(serialize_with = "ser_qsqrt2")]
    pub objective: Option<QSqrt2>,
    pub unbounded: bool,
    #[serde(skip)]
    pub certificate: LpCertificate,
    pub pivots: usize,
}

/// Decides feasibility of `c_0 = 1, c_1..c_k = 0, c_i ≥ 0 (i > k)` and maximizes `Σ c_i`.
pub fn code_lp(n: usize, k: usize) -> Result<LpOutcome, CodesError> {
    if n == 0 {
        return Err(CodesError::ZeroLength);
    }
    if k < 1 || k > n {
        return Err(CodesError::BadThreshold { n, k });
    }
    Ok(solve_lp(n, k, &constraint_matrix(n)))
}

fn solve_lp(n: usize, k: usize, mat: &[Vec<QSqrt2>]) -> LpOutcome {
    let m = mat[0].len();
    // Row 0 is the slack of c_0 ≤ 1; the cone is homogeneous otherwise.
    let mut rows = Vec::with_capacity(n + 1);
    let mut consts = Vec::with_capacity(n + 1);
    let mut kinds = Vec::with_capacity(n + 1);
    rows.push(mat[0].iter().map(|e| -e).collect());
    consts.push(QSqrt2::one());
    kinds.push(RowKind::NonNeg);
    for (i, row) in mat.iter().enumerate().skip(1) {
        rows.push(row.clone());
        consts.push(QSqrt2::zero());
        kinds.push(if i <= k { RowKind::Zero } else { RowKind::NonNeg });
    }
    let mut dict = Dictionary::new(m, rows, consts, &kinds);
    dict.set_objective(&mat[0]);
    let (value, multipliers) = match dict.maximize() {
        SolveStatus::Optimal { value, multipliers } => (value, multipliers),
        SolveStatus::Unbounded => unreachable!("c_0 is capped at 1"),
    };
    if value.is_zero() {
        // c_0 ≡ Σ_{i≥1} y_i c_i with y_i ≤ 0 beyond k.
        let mut w: Vec<QSqrt2> = multipliers.iter().map(|y| -y).collect();
        w[0] = QSqrt2::one();
        return LpOutcome {
            n,
            k,
            status: LpStatus::Infeasible,
            objective: None,
            unbounded: false,
            certificate: LpCertificate::Farkas(w),
            pivots: dict.pivots(),
        };
    }
    debug_assert_eq!(value, QSqrt2::one());
    dict.fix_row(0);
    let total: Vec<QSqrt2> = (0..m)
        .map(|j| mat.iter().fold(QSqrt2::zero(), |acc, row| &acc + &row[j]))
        .collect();
    dict.set_objective(&total);
    let status = dict.maximize();
    let point = dict.solution();
    let (objective, unbounded) = match status {
        SolveStatus::Optimal { value, .. } => (Some(value), false),
        SolveStatus::Unbounded => (None, true),
    };
    LpOutcome {
        n,
        k,
        status: LpStatus::Feasible,
        objective,
        unbounded,
        certificate: LpCertificate::Point(point),
        pivots: dict.pivots(),
    }
}

/// Re-checks an LP verdict from its certificate with exact arithmetic alone.
pub fn verify_lp(outcome: &LpOutcome) -> bool {
    let mat = constraint_matrix(outcome.n);
    let k = outcome.k;
    match (&outcome.status, &outcome.certificate) {
        (LpStatus::Feasible, LpCertificate::Point(b)) => {
            let c = apply(&mat, b);
            c[0] == QSqrt2::one()
                && c[1..=k].iter().all(QSqrt2::is_zero)
                && c[k + 1..].iter().all(|x| x.sign() != Ordering::Less)
                && outcome
                    .objective
                    .as_ref()
                    .is_none_or(|obj| c.iter().fold(QSqrt2::zero(), |acc, x| &acc + x) == *obj)
        }
        (LpStatus::Infeasible, LpCertificate::Farkas(w)) => {
            if w.len() != mat.len() || w[0] != QSqrt2::one() {
                return false;
            }
            if w[k + 1..].iter().any(|x| x.sign() == Ordering::Less) {
                return false;
            }
            let m = mat[0].len();
            (0..m).all(|j| {
                mat.iter()
                    .zip(w)
                    .fold(QSqrt2::zero(), |acc, (row, wi)| &acc + &(&row[j] * wi))
                    .is_zero()
            })
        }
        _ => false,
    }
}

fn apply(mat: &[Vec<QSqrt2>], b: &[QSqrt2]) -> Vec<QSqrt2> {
    mat.iter()
        .map(|row| row.iter().zip(b).fold(QSqrt2::zero(), |acc, (x, y)| &acc + &(x * y)))
        .collect()
}

/// Result of the upward `k`-scan for one length.
#[derive(Debug, Clone, Serialize)]
pub struct CodeBound {
    pub n: usize,
    pub mu: usize,
    /// One outcome per `k = 1..=mu`; the last one is infeasible.
    pub outcomes: Vec<LpOutcome>,
}

impl CodeBound {
    /// Optimum of `Σ c_i` at `k = μ − 1`, if that LP exists and is bounded.
    pub fn objective_below_mu(&self) -> Option<&QSqrt2> {
        if self.mu < 2 {
            return None;
        }
        self.outcomes[self.mu - 2].objective.as_ref()
    }
}

/// Least `k` whose LP is infeasible, with every intermediate outcome.
pub fn code_bound(n: usize) -> Result<CodeBound, CodesError> {
    if n == 0 {
        return Err(CodesError::ZeroLength);
    }
    let mat = constraint_matrix(n);
    let mut outcomes = Vec::new();
    for k in 1..=n {
        let out = solve_lp(n, k, &mat);
        let done = out.status == LpStatus::Infeasible;
        log::debug!("n = {n}, k = {k}: {:?} after {} pivots", out.status, out.pivots);
        outcomes.push(out);
        if done {
            return Ok(CodeBound { n, mu: k, outcomes });
        }
    }
    // c_1 = … = c_n = 0 and c_0 = 1 would make F_C = y^n, which is not S-invariant.
    unreachable!("the LP at k = n is always infeasible")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&c| Rat::from(c)).collect()
    }

    /// Extended Hamming [8,4] code, generator rows as bitmasks.
    fn hamming8() -> WeightEnumerator {
        WeightEnumerator::of_generators(8, &[0b1111_0000, 0b1100_1100, 0b1010_1010, 0b1111_1111])
    }

    #[test]
    fn hamming_code_is_self_dual() {
        let w = hamming8();
        assert_eq!(w.coeffs, ints(&[1, 0, 0, 0, 14, 0, 0, 0, 1]));
        assert_eq!(macwilliams(&w, &Rat::from(1)).unwrap(), w);
    }

    #[test]
    fn macwilliams_small_cases() {
        // {0} of length 1 has W = y.
        let zero = WeightEnumerator::from_counts(&[1, 0]);
        assert_eq!(macwilliams(&zero, &Rat::from(2)).unwrap().coeffs, ints(&[1, 1]));
        let full = WeightEnumerator::from_counts(&[1, 2, 1]);
        assert_eq!(macwilliams(&full, &Rat::from((1, 4))).unwrap().coeffs, ints(&[1, 0, 0]));
    }

    #[test]
    fn macwilliams_matches_brute_force_dual() {
        // [7,4] Hamming code and its dual, the [7,3] simplex code.
        let gens = [0b1000_110u64, 0b0100_101, 0b0010_011, 0b0001_111];
        let w = WeightEnumerator::of_generators(7, &gens);
        let mut dual = Vec::new();
        for v in 0u64..128 {
            if gens.iter().all(|g| (g & v).count_ones() % 2 == 0) {
                dual.push(v);
            }
        }
        let mut counts = vec![0i64; 8];
        for v in dual {
            counts[v.count_ones() as usize] += 1;
        }
        // |C⊥/C| = |C⊥|/|C| = 8/16.
        let got = macwilliams(&w, &Rat::from((1, 2))).unwrap();
        assert_eq!(got, WeightEnumerator::from_counts(&counts));
        assert_eq!(macwilliams(&got, &Rat::from(2)).unwrap(), w);
    }

    #[test]
    fn macwilliams_rejects_bad_input() {
        let w = WeightEnumerator::from_counts(&[1, 0]);
        assert!(matches!(macwilliams(&w, &Rat::from(3)), Err(CodesError::DualIndex(_))));
        assert!(matches!(
            macwilliams(&w, &Rat::from(1)),
            Err(CodesError::Irrational { .. })
        ));
    }

    #[test]
    fn basis_shapes() {
        assert_eq!(invariant_basis(1), vec![generator_a()]);
        assert_eq!(invariant_basis(2), vec![generator_a().pow(2), generator_b()]);
        let b2 = HomoPoly2::new(vec![
            QSqrt2::one(),
            QSqrt2::zero(),
            QSqrt2::from(2),
            QSqrt2::zero(),
            QSqrt2::one(),
        ]);
        assert_eq!(invariant_basis(4)[2], b2);
        for n in 1..=12 {
            assert!(invariant_basis(n)
                .iter()
                .all(|p| p.degree() == n && s_invariance_check(p)));
        }
    }

    #[test]
    fn invariance_examples() {
        assert!(s_invariance_check(&generator_a()));
        assert!(s_invariance_check(&generator_b()));
        assert!(!s_invariance_check(&HomoPoly2::x()));
    }

    #[test]
    fn lp_examples() {
        let out = code_lp(8, 3).unwrap();
        assert_eq!(out.status, LpStatus::Feasible);
        assert_eq!(out.objective, Some(QSqrt2::from(16)));
        assert!(verify_lp(&out));
        for (n, k) in [(8, 4), (24, 8)] {
            let out = code_lp(n, k).unwrap();
            assert_eq!(out.status, LpStatus::Infeasible);
            assert!(verify_lp(&out));
        }
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let mut out = code_lp(8, 4).unwrap();
        if let LpCertificate::Farkas(w) = &mut out.certificate {
            w[5] = &w[5] + &QSqrt2::one();
        }
        assert!(!verify_lp(&out));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(code_bound(14).unwrap().mu, 5);
        assert_eq!(code_bound(23).unwrap().mu, 7);
        assert!(code_lp(3, 0).is_err());
    }
}
