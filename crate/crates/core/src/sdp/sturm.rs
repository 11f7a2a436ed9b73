//! Exact real-root counting with Sturm sequences over `ℚ`.

use std::cmp::Ordering;

use crate::exactfield::{BigFloat, Rat, RatPoly};

/// Converts finite binary floats exactly.
pub fn to_exact(coeffs: &[BigFloat]) -> RatPoly {
    RatPoly::new(
        coeffs
            .iter()
            .map(|c| Rat::try_from(c).expect("finite coefficient"))
            .collect(),
    )
}

#[derive(Debug, Clone)]
pub struct SturmSequence {
    seq: Vec<RatPoly>,
}

impl SturmSequence {
    pub fn new(p: &RatPoly) -> Self {
        let mut seq = Vec::new();
        if p.is_zero() {
            return SturmSequence { seq };
        }
        seq.push(monic_abs(p));
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(monic_abs(&d));
        }
        while seq.len() >= 2 {
            let (_, r) = seq[seq.len() - 2].div_rem(&seq[seq.len() - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(monic_abs(&r.neg()));
        }
        SturmSequence { seq }
    }

    /// The last element: `gcd(p, p')` up to a positive constant.
    pub fn gcd(&self) -> Option<&RatPoly> {
        self.seq.last()
    }

    fn changes(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut last = Ordering::Equal;
        let mut n = 0;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if last != Ordering::Equal && s != last {
                n += 1;
            }
            last = s;
        }
        n
    }

    fn changes_at(&self, x: &Rat) -> usize {
        Self::changes(self.seq.iter().map(|q| q.eval(x).cmp0()))
    }

    fn changes_at_infinity(&self) -> usize {
        Self::changes(self.seq.iter().map(|q| q.leading().map_or(Ordering::Equal, Rat::cmp0)))
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_between(&self, a: &Rat, b: &Rat) -> usize {
        self.changes_at(a).saturating_sub(self.changes_at(b))
    }

    /// Distinct real roots in `(a, ∞)`.
    pub fn count_above(&self, a: &Rat) -> usize {
        self.changes_at(a).saturating_sub(self.changes_at_infinity())
    }
}

/// Divides by the absolute value of the leading coefficient, which keeps signs and tames growth.
fn monic_abs(p: &RatPoly) -> RatPoly {
    match p.leading() {
        Some(l) => {
            let inv = Rat::from(1) / Rat::from(l.abs_ref());
            p.scale(&inv)
        }
        None => p.clone(),
    }
}

/// Cauchy bound: every real root has absolute value below the returned number.
pub fn root_bound(p: &RatPoly) -> Rat {
    let lead = p.leading().expect("nonzero polynomial").clone().abs();
    let mut m = Rat::new();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = Rat::from(c.abs_ref()) / &lead;
        if r > m {
            m = r;
        }
    }
    m + 1u32
}

/// Disjoint intervals `(lo, hi]` of width at most `width`, each holding exactly one distinct root
/// of `p` in `(a, b]`.
pub fn isolate(p: &RatPoly, a: &Rat, b: &Rat, width: &Rat) -> Vec<(Rat, Rat)> {
    let s = SturmSequence::new(p);
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let n = s.count_between(&lo, &hi);
        if n == 0 {
            continue;
        }
        let w = Rat::from(&hi - &lo);
        if n == 1 && w <= *width {
            out.push((lo, hi));
            continue;
        }
        if w <= Rat::from(width / 1024u32) {
            // A cluster tighter than the resolution; keep it whole.
            out.push((lo, hi));
            continue;
        }
        let mid = Rat::from(&lo + &hi) / 2u32;
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}
