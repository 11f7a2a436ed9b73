//! Small dense matrices over `BigFloat`.

use std::ops::{Index, IndexMut};

use crate::exactfield::BigFloat;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    prec: u32,
    data: Vec<BigFloat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        Mat {
            rows,
            cols,
            prec,
            data: vec![BigFloat::new(prec); rows * cols],
        }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Mat::zeros(n, n, prec);
        for i in 0..n {
            m[(i, i)] = BigFloat::with_val(prec, 1);
        }
        m
    }

    pub fn scalar(n: usize, s: &BigFloat) -> Self {
        let mut m = Mat::zeros(n, n, s.prec());
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigFloat>>, prec: u32) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.into_iter().map(|x| BigFloat::with_val(prec, x)));
        }
        Mat {
            rows: r,
            cols: c,
            prec,
            data,
        }
    }

    pub fn from_f64(rows: &[Vec<f64>], prec: u32) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigFloat::with_val(prec, x)).collect())
                .collect(),
            prec,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn to_rows(&self) -> Vec<Vec<BigFloat>> {
        self.data.chunks(self.cols.max(1)).map(<[BigFloat]>::to_vec).collect()
    }

    pub fn row_major(&self) -> &[BigFloat] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows, self.prec);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols, self.prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = BigFloat::with_val(self.prec, a * &other[(k, j)]);
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigFloat]) -> Vec<BigFloat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v, self.prec))
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.zip(other, |a, b| BigFloat::with_val(a.prec(), a + b))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.zip(other, |a, b| BigFloat::with_val(a.prec(), a - b))
    }

    pub fn scale(&self, s: &BigFloat) -> Mat {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= s;
        }
        out
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &Mat, s: &BigFloat) -> Mat {
        self.zip(other, |a, b| {
            BigFloat::with_val(a.prec(), a + BigFloat::with_val(a.prec(), b * s))
        })
    }

    fn zip(&self, other: &Mat, f: impl Fn(&BigFloat, &BigFloat) -> BigFloat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            prec: self.prec,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// `(M + Mᵀ)/2`.
    pub fn sym(&self) -> Mat {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                let s = BigFloat::with_val(self.prec, &self[(i, j)] + &self[(j, i)]) / 2u32;
                out[(i, j)] = s.clone();
                out[(j, i)] = s;
            }
        }
        out
    }

    pub fn trace(&self) -> BigFloat {
        let mut t = BigFloat::new(self.prec);
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    /// `Tr(self · other)` for equal shapes, i.e. the Frobenius pairing with `otherᵀ`.
    pub fn trace_mul(&self, other: &Mat) -> BigFloat {
        assert_eq!(self.cols, other.rows);
        let mut t = BigFloat::new(self.prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                t += BigFloat::with_val(self.prec, &self[(i, k)] * &other[(k, i)]);
            }
        }
        t
    }

    pub fn max_abs(&self) -> BigFloat {
        max_abs(&self.data, self.prec)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Lower-triangular `L` with `L Lᵀ = self`, or `None` if a pivot is not positive.
    pub fn cholesky(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut l = Mat::zeros(n, n, self.prec);
        for j in 0..n {
            let mut d = self[(j, j)].clone();
            for k in 0..j {
                d -= BigFloat::with_val(self.prec, l[(j, k)].square_ref());
            }
            if !(d > 0) {
                return None;
            }
            let djj = d.sqrt();
            for i in j + 1..n {
                let mut s = self[(i, j)].clone();
                for k in 0..j {
                    s -= BigFloat::with_val(self.prec, &l[(i, k)] * &l[(j, k)]);
                }
                l[(i, j)] = s / &djj;
            }
            l[(j, j)] = djj;
        }
        Some(l)
    }

    /// Solves `L z = b` for lower-triangular `self`.
    pub fn forward_solve(&self, b: &[BigFloat]) -> Vec<BigFloat> {
        let n = self.rows;
        let mut z: Vec<BigFloat> = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = BigFloat::with_val(self.prec, &b[i]);
            for (k, zk) in z.iter().enumerate() {
                s -= BigFloat::with_val(self.prec, &self[(i, k)] * zk);
            }
            z.push(s / &self[(i, i)]);
        }
        z
    }

    /// Solves `Lᵀ z = b` for lower-triangular `self`.
    pub fn backward_solve_t(&self, b: &[BigFloat]) -> Vec<BigFloat> {
        let n = self.rows;
        let mut z = vec![BigFloat::new(self.prec); n];
        for i in (0..n).rev() {
            let mut s = BigFloat::with_val(self.prec, &b[i]);
            for k in i + 1..n {
                s -= BigFloat::with_val(self.prec, &self[(k, i)] * &z[k]);
            }
            z[i] = s / &self[(i, i)];
        }
        z
    }

    /// Solves `L Lᵀ z = b` given the Cholesky factor `self`.
    pub fn chol_solve(&self, b: &[BigFloat]) -> Vec<BigFloat> {
        self.backward_solve_t(&self.forward_solve(b))
    }

    /// `(L Lᵀ)⁻¹` given the Cholesky factor `self`.
    pub fn chol_inverse(&self) -> Mat {
        let n = self.rows;
        let mut inv = Mat::zeros(n, n, self.prec);
        for j in 0..n {
            let mut e = vec![BigFloat::new(self.prec); n];
            e[j] = BigFloat::with_val(self.prec, 1);
            let col = self.chol_solve(&e);
            for (i, c) in col.into_iter().enumerate() {
                inv[(i, j)] = c;
            }
        }
        inv.sym()
    }

    /// `L⁻¹ M L⁻ᵀ` for lower-triangular `self`.
    pub fn congruence_inv(&self, m: &Mat) -> Mat {
        let n = self.rows;
        let mut half = Mat::zeros(n, n, self.prec);
        for j in 0..n {
            let col: Vec<BigFloat> = (0..n).map(|i| m[(i, j)].clone()).collect();
            for (i, z) in self.forward_solve(&col).into_iter().enumerate() {
                half[(i, j)] = z;
            }
        }
        let mut out = Mat::zeros(n, n, self.prec);
        for i in 0..n {
            let row: Vec<BigFloat> = (0..n).map(|j| half[(i, j)].clone()).collect();
            for (j, z) in self.forward_solve(&row).into_iter().enumerate() {
                out[(i, j)] = z;
            }
        }
        out.sym()
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<BigFloat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.prec;
        let mut a = self.sym();
        let scale = a.max_abs();
        if scale.is_zero() {
            return vec![BigFloat::new(p); n];
        }
        let eps = BigFloat::with_val(p, 1) >> (p as i32 - 8);
        let thresh = BigFloat::with_val(p, &scale * &eps);
        for _sweep in 0..100 {
            let mut off = BigFloat::new(p);
            for i in 0..n {
                for j in i + 1..n {
                    off = off.max(&BigFloat::with_val(p, a[(i, j)].abs_ref()));
                }
            }
            if off <= thresh {
                break;
            }
            for i in 0..n {
                for j in i + 1..n {
                    if BigFloat::with_val(p, a[(i, j)].abs_ref()) <= BigFloat::with_val(p, &thresh * &eps) {
                        continue;
                    }
                    // Rotation annihilating a[i][j].
                    let theta =
                        BigFloat::with_val(p, &a[(j, j)] - &a[(i, i)]) / BigFloat::with_val(p, &a[(i, j)] * 2u32);
                    let root = (BigFloat::with_val(p, theta.square_ref()) + 1u32).sqrt();
                    let t = if theta >= 0 {
                        BigFloat::with_val(p, 1) / (BigFloat::with_val(p, &theta + &root))
                    } else {
                        BigFloat::with_val(p, -1) / (BigFloat::with_val(p, &root - &theta))
                    };
                    let c = BigFloat::with_val(p, 1) / (BigFloat::with_val(p, t.square_ref()) + 1u32).sqrt();
                    let s = BigFloat::with_val(p, &t * &c);
                    for k in 0..n {
                        let aki = a[(k, i)].clone();
                        let akj = a[(k, j)].clone();
                        a[(k, i)] = BigFloat::with_val(p, &c * &aki) - BigFloat::with_val(p, &s * &akj);
                        a[(k, j)] = BigFloat::with_val(p, &s * &aki) + BigFloat::with_val(p, &c * &akj);
                    }
                    for k in 0..n {
                        let aik = a[(i, k)].clone();
                        let ajk = a[(j, k)].clone();
                        a[(i, k)] = BigFloat::with_val(p, &c * &aik) - BigFloat::with_val(p, &s * &ajk);
                        a[(j, k)] = BigFloat::with_val(p, &s * &aik) + BigFloat::with_val(p, &c * &ajk);
                    }
                }
            }
        }
        let mut ev: Vec<BigFloat> = (0..n).map(|i| a[(i, i)].clone()).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        ev
    }

    pub fn min_eigenvalue(&self) -> BigFloat {
        self.symmetric_eigenvalues()
            .into_iter()
            .next()
            .unwrap_or_else(|| BigFloat::new(self.prec))
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = BigFloat;
    fn index(&self, (i, j): (usize, usize)) -> &BigFloat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigFloat {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[BigFloat], b: &[BigFloat], prec: u32) -> BigFloat {
    let mut s = BigFloat::new(prec);
    for (x, y) in a.iter().zip(b) {
        s += BigFloat::with_val(prec, x * y);
    }
    s
}

pub fn max_abs(v: &[BigFloat], prec: u32) -> BigFloat {
    let mut m = BigFloat::new(prec);
    for x in v {
        let a = BigFloat::with_val(prec, x.abs_ref());
        if a > m {
            m = a;
        }
    }
    m
}

/// Coefficients of `p(x + Δ)` from those of `p(h)`, lowest degree first.
pub fn shift_poly(coeffs: &[BigFloat], delta: &BigFloat) -> Vec<BigFloat> {
    let prec = coeffs
        .iter()
        .map(BigFloat::prec)
        .max()
        .unwrap_or(delta.prec())
        .max(delta.prec());
    // Repeated synthetic division (Taylor shift).
    let mut c: Vec<BigFloat> = coeffs.iter().map(|x| BigFloat::with_val(prec, x)).collect();
    let n = c.len();
    for i in 0..n {
        for k in (i..n.saturating_sub(1)).rev() {
            let t = BigFloat::with_val(prec, &c[k + 1] * delta);
            c[k] += t;
        }
    }
    c
}

/// `Σ c_k x^k` by Horner.
pub fn horner(coeffs: &[BigFloat], x: &BigFloat) -> BigFloat {
    let prec = x.prec().max(coeffs.first().map_or(0, BigFloat::prec));
    let mut acc = BigFloat::new(prec);
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}
