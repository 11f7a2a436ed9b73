//! Dictionary simplex over an exact ordered field.
//!
//! Variables are the structural unknowns `x_0..x_{m-1}` (free) followed by one
//! slack per constraint row. Row `i` reads `s_i = const_i + A_i·x` and its slack
//! is either non-negative or fixed at zero. The origin `x = 0` must be feasible,
//! which is all the code LP needs, so there is no phase one.

use std::cmp::Ordering;

use crate::exactfield::OrderedField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// `s_i = 0`
    Zero,
    /// `s_i ≥ 0`
    NonNeg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarKind {
    Free,
    NonNeg,
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus<F> {
    Optimal {
        value: F,
        /// Multiplier `y_i` per row with `objective = value + Σ y_i·s_i` identically in `x`.
        /// `y_i ≤ 0` on non-negative rows, `y_i = 0` on basic rows.
        multipliers: Vec<F>,
    },
    Unbounded,
}

#[derive(Debug)]
pub struct Dictionary<F> {
    m: usize,
    kinds: Vec<VarKind>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    /// `rows[r][c]` is the coefficient of `nonbasic[c]` in the row of `basic[r]`.
    rows: Vec<Vec<F>>,
    consts: Vec<F>,
    obj: Vec<F>,
    obj_const: F,
    pivots: usize,
}

impl<F: OrderedField> Dictionary<F> {
    /// Panics if the origin is infeasible or the row data is ragged.
    pub fn new(m: usize, rows: Vec<Vec<F>>, consts: Vec<F>, kinds: &[RowKind]) -> Self {
        assert_eq!(rows.len(), consts.len());
        assert_eq!(rows.len(), kinds.len());
        let nrows = rows.len();
        let mut vk = vec![VarKind::Free; m];
        for (i, k) in kinds.iter().enumerate() {
            assert_eq!(rows[i].len(), m, "row {i} has the wrong width");
            match k {
                RowKind::Zero => {
                    assert!(consts[i].is_zero(), "origin violates equality row {i}");
                    vk.push(VarKind::Fixed);
                }
                RowKind::NonNeg => {
                    assert!(consts[i].sign() != Ordering::Less, "origin violates row {i}");
                    vk.push(VarKind::NonNeg);
                }
            }
        }
        let mut d = Dictionary {
            m,
            kinds: vk,
            basic: (m..m + nrows).collect(),
            nonbasic: (0..m).collect(),
            rows,
            consts,
            obj: vec![F::zero(); m],
            obj_const: F::zero(),
            pivots: 0,
        };
        d.settle();
        d
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    /// Degenerate pivots that move fixed slacks out of and free variables into the basis.
    fn settle(&mut self) {
        for r in 0..self.basic.len() {
            if self.kinds[self.basic[r]] != VarKind::Fixed || !self.consts[r].is_zero() {
                continue;
            }
            let col = self
                .pick_column(r, |k| k == VarKind::Free)
                .or_else(|| self.pick_column(r, |k| k == VarKind::NonNeg));
            if let Some(c) = col {
                self.pivot(r, c);
            }
        }
        for c in 0..self.nonbasic.len() {
            if self.kinds[self.nonbasic[c]] != VarKind::Free {
                continue;
            }
            let row = (0..self.basic.len()).find(|&r| {
                self.kinds[self.basic[r]] != VarKind::Free && self.consts[r].is_zero() && !self.rows[r][c].is_zero()
            });
            if let Some(r) = row {
                self.pivot(r, c);
            }
        }
    }

    fn pick_column(&self, r: usize, want: impl Fn(VarKind) -> bool) -> Option<usize> {
        (0..self.nonbasic.len())
            .filter(|&c| want(self.kinds[self.nonbasic[c]]) && !self.rows[r][c].is_zero())
            .min_by_key(|&c| self.nonbasic[c])
    }

    /// Replaces the objective by `Σ o_j x_j` expressed in the current basis.
    pub fn set_objective(&mut self, o: &[F]) {
        assert_eq!(o.len(), self.m);
        let mut obj = vec![F::zero(); self.nonbasic.len()];
        let mut k = F::zero();
        for (c, &v) in self.nonbasic.iter().enumerate() {
            if v < self.m {
                obj[c] = o[v].clone();
            }
        }
        for (r, &v) in self.basic.iter().enumerate() {
            if v < self.m && !o[v].is_zero() {
                k = k.add(&o[v].mul(&self.consts[r]));
                for (c, e) in obj.iter_mut().enumerate() {
                    *e = e.add(&o[v].mul(&self.rows[r][c]));
                }
            }
        }
        self.obj = obj;
        self.obj_const = k;
    }

    /// Pins slack `i` to zero from now on. Its current value must already be zero.
    pub fn fix_row(&mut self, i: usize) {
        let v = self.m + i;
        if let Some(r) = self.basic.iter().position(|&b| b == v) {
            assert!(self.consts[r].is_zero(), "cannot fix a row with a nonzero value");
        }
        self.kinds[v] = VarKind::Fixed;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let a = self.rows[r][c].clone();
        let inv = F::one().div(&a).expect("pivot element is nonzero");
        let ncols = self.nonbasic.len();
        // Solve row r for the entering variable.
        let mut newrow: Vec<F> = self.rows[r].iter().map(|e| e.mul(&inv).neg()).collect();
        newrow[c] = inv.clone();
        let newconst = self.consts[r].mul(&inv).neg();
        for s in 0..self.basic.len() {
            if s == r || self.rows[s][c].is_zero() {
                continue;
            }
            let e = self.rows[s][c].clone();
            for j in 0..ncols {
                if j == c {
                    self.rows[s][j] = e.mul(&newrow[c]);
                } else if !newrow[j].is_zero() {
                    self.rows[s][j].sub_mul_assign(&e.neg(), &newrow[j]);
                }
            }
            self.consts[s].sub_mul_assign(&e.neg(), &newconst);
        }
        if !self.obj[c].is_zero() {
            let e = self.obj[c].clone();
            for j in 0..ncols {
                if j == c {
                    self.obj[j] = e.mul(&newrow[c]);
                } else if !newrow[j].is_zero() {
                    self.obj[j].sub_mul_assign(&e.neg(), &newrow[j]);
                }
            }
            self.obj_const.sub_mul_assign(&e.neg(), &newconst);
        }
        self.rows[r] = newrow;
        self.consts[r] = newconst;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[c]);
    }

    /// Maximizes the current objective using Bland's rule.
    pub fn maximize(&mut self) -> SolveStatus<F> {
        loop {
            // Entering variable: smallest index with an improving direction.
            let mut enter: Option<(usize, bool)> = None;
            for c in 0..self.nonbasic.len() {
                let v = self.nonbasic[c];
                let dir_up = match (self.kinds[v], self.obj[c].sign()) {
                    (VarKind::Fixed, _) | (_, Ordering::Equal) => continue,
                    (VarKind::NonNeg, Ordering::Less) => continue,
                    (_, Ordering::Greater) => true,
                    (VarKind::Free, Ordering::Less) => false,
                };
                if enter.is_none_or(|(ec, _)| v < self.nonbasic[ec]) {
                    enter = Some((c, dir_up));
                }
            }
            let Some((c, up)) = enter else {
                return self.optimal();
            };
            // Ratio test with smallest-index tie break.
            let mut leave: Option<(usize, F)> = None;
            for r in 0..self.basic.len() {
                let b = self.basic[r];
                let a = &self.rows[r][c];
                let slope = if up { a.clone() } else { a.neg() };
                let limit = match self.kinds[b] {
                    VarKind::Free => continue,
                    VarKind::Fixed => {
                        if slope.is_zero() {
                            continue;
                        }
                        F::zero()
                    }
                    VarKind::NonNeg => {
                        if slope.sign() != Ordering::Less {
                            continue;
                        }
                        self.consts[r].div(&slope.neg()).expect("nonzero slope")
                    }
                };
                let better = match &leave {
                    None => true,
                    Some((lr, ll)) => match limit.sub(ll).sign() {
                        Ordering::Less => true,
                        Ordering::Equal => b < self.basic[*lr],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((r, limit));
                }
            }
            match leave {
                None => return SolveStatus::Unbounded,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn optimal(&self) -> SolveStatus<F> {
        let nrows = self.kinds.len() - self.m;
        let mut multipliers = vec![F::zero(); nrows];
        for (c, &v) in self.nonbasic.iter().enumerate() {
            if v >= self.m {
                multipliers[v - self.m] = self.obj[c].clone();
            }
        }
        SolveStatus::Optimal {
            value: self.obj_const.clone(),
            multipliers,
        }
    }

    /// Current basic solution for the structural variables.
    pub fn solution(&self) -> Vec<F> {
        let mut x = vec![F::zero(); self.m];
        for (r, &v) in self.basic.iter().enumerate() {
            if v < self.m {
                x[v] = self.consts[r].clone();
            }
        }
        x
    }
}
