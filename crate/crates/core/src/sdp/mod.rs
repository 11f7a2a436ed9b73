//! Sum-of-squares bounds from the odd derivative functionals.
//!
//! For a candidate gap `Δ` we look for coefficients `a` with the normalization
//! functional equal to `1` and
//!
//! ```text
//! p(Δ + (1+Δ)y) = v(y)ᵀ G0 v(y) + y · v(y)ᵀ G1 v(y),   v(y) = (1, y, …, y^N),
//! ```
//!
//! with `G0, G1 ⪰ 0`. The solver maximizes a margin `λ` with `Gi − λI ⪰ 0`;
//! `λ > 0` gives a strictly positive certificate and a negative dual value
//! proves that none exists.

pub mod ipm;
pub mod linalg;
pub mod serial;
pub mod sturm;

use std::time::Instant;

use log::{info, warn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{BigFloat, Precision, Rat};
use crate::functional::{normalization_row, Flavor, FunctionalError, FunctionalSpec, VacuumConvention};
use ipm::{Block, IpmOptions, IpmStop, RankOneSdp};
use linalg::{dot, max_abs};
pub use linalg::{horner, shift_poly, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Normalization,
    Psd,
    Residual,
    Grid,
    Sturm,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Check::Normalization => "normalization",
            Check::Psd => "psd",
            Check::Residual => "residual",
            Check::Grid => "grid",
            Check::Sturm => "sturm",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SdpError {
    #[error("solver stopped after {iterations} iterations without a decision")]
    MaxIterations { iterations: usize },
    #[error("solver lost positive definiteness at {precision} bits; more precision is needed")]
    IllConditioned { precision: u32 },
    #[error("no bracket found between {lo} and {hi}")]
    BracketNotFound { lo: f64, hi: f64 },
    #[error("certificate verification failed ({check}): {detail}")]
    VerificationFailed { check: Check, detail: String },
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    LatticeP0,
    VoaVacuum(VacuumConvention),
}

/// The positivity problem for one candidate `Δ`.
///
/// The gap variable is the conformal weight `h` for VOAs and the squared length
/// `ν = 2h` for lattices, so `Δ` is directly comparable with minimal norms.
#[derive(Debug, Clone)]
pub struct SOSProblem {
    pub spec: FunctionalSpec,
    pub delta: BigFloat,
    /// Coefficients of `p_1, p_3, …, p_{2N+1}` in the gap variable.
    pub basis_polys: Vec<Vec<BigFloat>>,
    pub normalization: Normalization,
    pub normalization_row: Vec<BigFloat>,
}

impl SOSProblem {
    pub fn new(spec: &FunctionalSpec, delta: &BigFloat) -> Result<Self, SdpError> {
        Self::with_vacuum(spec, delta, VacuumConvention::default())
    }

    pub fn with_vacuum(spec: &FunctionalSpec, delta: &BigFloat, vacuum: VacuumConvention) -> Result<Self, SdpError> {
        if spec.n_top < 1 {
            return Err(SdpError::Invalid("N must be at least 1".into()));
        }
        if !(*delta > 0) {
            return Err(SdpError::Invalid(format!("Δ must be positive, got {delta}")));
        }
        let normalization = match spec.flavor {
            Flavor::Lattice { .. } => Normalization::LatticeP0,
            Flavor::Voa { .. } => Normalization::VoaVacuum(vacuum),
        };
        let mut basis_polys = spec.odd_polys_in_h();
        if normalization == Normalization::LatticeP0 {
            // Lattice gaps are squared lengths ν = 2h.
            let half = BigFloat::with_val(spec.prec(), 0.5);
            basis_polys = basis_polys.iter().map(|c| rescale(c, &half)).collect();
        }
        Ok(SOSProblem {
            spec: spec.clone(),
            delta: BigFloat::with_val(spec.prec(), delta),
            basis_polys,
            normalization,
            normalization_row: normalization_row(spec, vacuum),
        })
    }

    pub fn prec(&self) -> u32 {
        self.spec.prec()
    }

    pub fn n_top(&self) -> usize {
        self.spec.n_top
    }

    /// `1 + Δ`, the scale of the certificate variable `y = x/(1+Δ)`.
    pub fn basis_scale(&self) -> BigFloat {
        BigFloat::with_val(self.prec(), &self.delta + 1u32)
    }

    /// Coefficients in `y` of `p_{2m+1}(Δ + (1+Δ)y)`, padded to degree `2N+1`.
    pub fn shifted_basis(&self) -> Vec<Vec<BigFloat>> {
        let deg = 2 * self.n_top() + 2;
        let s = self.basis_scale();
        self.basis_polys
            .iter()
            .map(|c| {
                let mut v = rescale(&shift_poly(c, &self.delta), &s);
                v.resize(deg, BigFloat::new(self.prec()));
                v
            })
            .collect()
    }

    /// Coefficients in the gap variable of `p = Σ a_m p_{2m+1}`.
    pub fn aggregate(&self, a: &[BigFloat]) -> Vec<BigFloat> {
        combine(&self.basis_polys, a, 2 * self.n_top() + 2, self.prec())
    }

    pub fn normalization_value(&self, a: &[BigFloat]) -> BigFloat {
        dot(&self.normalization_row, a, self.prec())
    }
}

/// `c_k ↦ c_k s^k`.
fn rescale(c: &[BigFloat], s: &BigFloat) -> Vec<BigFloat> {
    let mut pw = BigFloat::with_val(s.prec(), 1);
    c.iter()
        .map(|ck| {
            let v = BigFloat::with_val(s.prec(), ck * &pw);
            pw *= s;
            v
        })
        .collect()
}

fn combine(polys: &[Vec<BigFloat>], a: &[BigFloat], len: usize, prec: u32) -> Vec<BigFloat> {
    let mut out = vec![BigFloat::new(prec); len];
    for (pm, am) in polys.iter().zip(a) {
        for (o, c) in out.iter_mut().zip(pm) {
            *o += BigFloat::with_val(prec, c * am);
        }
    }
    out
}

/// Antidiagonal sums of `G0` plus those of `G1` shifted by one degree.
fn gram_poly(g0: &Mat, g1: &Mat, len: usize) -> Vec<BigFloat> {
    let mut out = vec![BigFloat::new(g0.prec()); len];
    for (g, off) in [(g0, 0), (g1, 1)] {
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                out[i + j + off] += &g[(i, j)];
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SOSCertificate {
    #[serde(with = "serial::float")]
    pub delta: BigFloat,
    /// `1 + Δ`: the monomials are powers of `y = (h − Δ)/(1+Δ)`.
    #[serde(with = "serial::float")]
    pub basis_scale: BigFloat,
    /// `a_1, a_3, …, a_{2N+1}`.
    #[serde(with = "serial::float_vec")]
    pub a: Vec<BigFloat>,
    #[serde(rename = "G0")]
    pub g0: Mat,
    #[serde(rename = "G1")]
    pub g1: Mat,
    #[serde(with = "serial::float")]
    pub margin: BigFloat,
    #[serde(with = "serial::float")]
    pub min_eig_g0: BigFloat,
    #[serde(with = "serial::float")]
    pub min_eig_g1: BigFloat,
    #[serde(with = "serial::float")]
    pub residual: BigFloat,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible {
        certificate: Box<SOSCertificate>,
        iterations: usize,
    },
    /// `dual_bound` is an upper bound on the best margin.
    Infeasible { dual_bound: f64, iterations: usize },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }

    pub fn iterations(&self) -> usize {
        match self {
            Feasibility::Feasible { iterations, .. } | Feasibility::Infeasible { iterations, .. } => *iterations,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Duality gap tolerance, and the threshold the dual objective must fall below to prove
    /// infeasibility. The optimal margin shrinks quickly with `N` and the rank (about 1e-31 for
    /// rank 24 at `N = 24`, `Δ = 4.3`), so this must sit well below it.
    pub tol: f64,
    /// Relative primal and dual residual accepted in a decision. A feasible verdict further
    /// needs the margin to exceed 16 times the primal residual.
    pub feas_tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-40,
            feas_tol: 1e-20,
            max_iterations: 250,
        }
    }
}

/// The scaled sample-point SDP together with the maps back to certificate data.
struct Assembled {
    sdp: RankOneSdp,
    x0: Vec<BigFloat>,
    /// `ā = a0 + E a′`, then `a_m = col_scale_m ā_m`.
    a0: Vec<BigFloat>,
    e: Mat,
    col_scale: Vec<BigFloat>,
    /// Internal variable `z = y/ρ`.
    rho: BigFloat,
    /// Rows hold the coefficients in `z` of the orthonormal bases for `σ0` and `σ1`.
    t0: Mat,
    t1: Mat,
}

/// Points spread over `(0, ~d]` on the scale `z = 2π(h − Δ)`.
fn sample_points(degree: usize, prec: u32) -> Vec<BigFloat> {
    let pi2 = BigFloat::with_val(prec, crate::exactfield::pi(prec).square_ref());
    let root2 = BigFloat::with_val(prec, 2).sqrt();
    let log_term = (BigFloat::with_val(prec, 3) - root2 * 2u32).ln();
    let denom = log_term * (64 * (degree as i64 + 1)) * -1i32;
    (0..=degree)
        .map(|k| {
            let t = (4 * k as i64 - 1).pow(2);
            BigFloat::with_val(prec, &pi2 * t) / &denom
        })
        .collect()
}

/// `L⁻¹` for the Cholesky factor `L` of `Σ_k w_k z_k^{i+j}`: rows are orthonormal polynomials.
fn orthonormal_basis(points: &[BigFloat], weights: &[BigFloat], dim: usize, prec: u32) -> Mat {
    let mut mom = vec![BigFloat::new(prec); 2 * dim - 1];
    for (z, w) in points.iter().zip(weights) {
        let mut pw = BigFloat::with_val(prec, w);
        for m in mom.iter_mut() {
            *m += &pw;
            pw *= z;
        }
    }
    let mut gram = Mat::zeros(dim, dim, prec);
    for i in 0..dim {
        for j in 0..dim {
            gram[(i, j)] = mom[i + j].clone();
        }
    }
    let l = gram
        .cholesky()
        .expect("distinct sample points give a positive definite moment matrix");
    let mut t = Mat::zeros(dim, dim, prec);
    for j in 0..dim {
        let mut e = vec![BigFloat::new(prec); dim];
        e[j] = BigFloat::with_val(prec, 1);
        for (i, v) in l.forward_solve(&e).into_iter().enumerate() {
            t[(i, j)] = v;
        }
    }
    t
}

fn monomials(z: &BigFloat, dim: usize) -> Vec<BigFloat> {
    let mut out = Vec::with_capacity(dim);
    let mut pw = BigFloat::with_val(z.prec(), 1);
    for _ in 0..dim {
        out.push(pw.clone());
        pw *= z;
    }
    out
}

fn assemble(problem: &SOSProblem) -> Assembled {
    let p = problem.prec();
    let n = problem.n_top();
    let dim = n + 1;
    let k0 = 2 * n + 2;
    let two_pi = crate::exactfield::pi(p) * 2u32;
    let rho = BigFloat::with_val(p, 1) / (two_pi * problem.basis_scale());

    let points = sample_points(k0 - 1, p);
    let weights: Vec<BigFloat> = points.iter().map(|z| BigFloat::with_val(p, -z).exp()).collect();
    let zw: Vec<BigFloat> = points
        .iter()
        .zip(&weights)
        .map(|(z, w)| BigFloat::with_val(p, z * w))
        .collect();
    let t0 = orthonormal_basis(&points, &weights, dim, p);
    let t1 = orthonormal_basis(&points, &zw, dim, p);

    // Row k: Σ_m ā_m w_k Q_m(z_k) = u0ᵀ G0 u0 + u1ᵀ G1 u1.
    let basis: Vec<Vec<BigFloat>> = problem.shifted_basis().iter().map(|b| rescale(b, &rho)).collect();
    let mut pmat = Mat::zeros(k0, dim, p);
    for (k, (z, w)) in points.iter().zip(&weights).enumerate() {
        for (m, b) in basis.iter().enumerate() {
            pmat[(k, m)] = horner(b, z) * w;
        }
    }
    let mut col_scale = Vec::with_capacity(dim);
    for m in 0..dim {
        let col: Vec<BigFloat> = (0..k0).map(|k| pmat[(k, m)].clone()).collect();
        let s = BigFloat::with_val(p, 1) / max_abs(&col, p);
        for k in 0..k0 {
            pmat[(k, m)] *= &s;
        }
        col_scale.push(s);
    }

    let nrow: Vec<BigFloat> = problem
        .normalization_row
        .iter()
        .zip(&col_scale)
        .map(|(r, s)| BigFloat::with_val(p, r * s))
        .collect();
    let pivot = (0..dim)
        .max_by(|&i, &j| {
            nrow[i]
                .clone()
                .abs()
                .partial_cmp(&nrow[j].clone().abs())
                .expect("finite")
        })
        .expect("nonempty");
    let mut a0 = vec![BigFloat::new(p); dim];
    a0[pivot] = BigFloat::with_val(p, 1) / &nrow[pivot];
    let mut e = Mat::zeros(dim, n, p);
    for (col, i) in (0..dim).filter(|&i| i != pivot).enumerate() {
        e[(i, col)] = BigFloat::with_val(p, 1);
        e[(pivot, col)] = -BigFloat::with_val(p, &nrow[i] / &nrow[pivot]);
    }
    let pe = pmat.mul(&e);
    let pa0 = pmat.mul_vec(&a0);

    let mut terms0 = Vec::with_capacity(k0);
    let mut terms1 = Vec::with_capacity(k0);
    let mut margin = Vec::with_capacity(k0);
    for k in 0..k0 {
        let mono = monomials(&points[k], dim);
        let s0 = BigFloat::with_val(p, weights[k].sqrt_ref());
        let s1 = BigFloat::with_val(p, zw[k].sqrt_ref());
        let u0: Vec<BigFloat> = t0.mul_vec(&mono).into_iter().map(|v| v * &s0).collect();
        let u1: Vec<BigFloat> = t1.mul_vec(&mono).into_iter().map(|v| v * &s1).collect();
        margin.push(dot(&u0, &u0, p) + dot(&u1, &u1, p));
        terms0.push((k, u0));
        terms1.push((k, u1));
    }

    // Rows 0..k0 are sample values, row k0 caps the margin at 1.
    let mut b_mat = Mat::zeros(k0 + 1, n + 1, p);
    for k in 0..k0 {
        for j in 0..n {
            b_mat[(k, j)] = -pe[(k, j)].clone();
        }
        b_mat[(k, n)] = margin[k].clone();
    }
    b_mat[(k0, n)] = BigFloat::with_val(p, 1);
    let mut c = pa0;
    c.push(BigFloat::with_val(p, 1));
    let mut b = vec![BigFloat::new(p); n + 1];
    b[n] = BigFloat::with_val(p, 1);
    let sdp = RankOneSdp {
        blocks: vec![
            Block { dim, terms: terms0 },
            Block { dim, terms: terms1 },
            Block {
                dim: 1,
                terms: vec![(k0, vec![BigFloat::with_val(p, 1)])],
            },
        ],
        b_mat,
        c,
        b,
    };
    Assembled {
        sdp,
        x0: vec![BigFloat::with_val(p, 1); k0 + 1],
        a0,
        e,
        col_scale,
        rho,
        t0,
        t1,
    }
}

/// Decides whether a strictly positive certificate exists at `problem.delta`.
pub fn sos_feasible(problem: &SOSProblem, opts: &SolverOptions) -> Result<Feasibility, SdpError> {
    let asm = assemble(problem);
    let p = problem.prec();
    let tol = opts.tol;
    let c_scale = 1.0 + max_abs(&asm.sdp.c, p).to_f64();
    let lam_index = problem.n_top();
    let ipm_opts = IpmOptions {
        max_iterations: opts.max_iterations,
        gap_tol: tol,
        feas_tol: opts.feas_tol,
        ..IpmOptions::default()
    };
    let feasible_now = |st: &ipm::IpmState| {
        let lam = st.y[lam_index].to_f64();
        let res = st.primal_res.to_f64();
        lam > 0.0 && res <= opts.feas_tol * c_scale && lam > 16.0 * res
    };
    let infeasible_now = |st: &ipm::IpmState| {
        // b·y ≤ c·x + r·y, so the residual must not be able to close the gap.
        let res = st.dual_res.to_f64();
        let y_norm: f64 = st.y.iter().map(|v| v.to_f64().abs()).sum();
        res <= opts.feas_tol && st.dual_obj.to_f64() < -(tol + 16.0 * res * (1.0 + y_norm))
    };
    let (stop, st) = ipm::solve(&asm.sdp, &asm.x0, &ipm_opts, |st| {
        feasible_now(st) || infeasible_now(st)
    });
    let iterations = st.iteration + 1;
    match stop {
        IpmStop::Decided | IpmStop::Converged => {
            if feasible_now(&st) {
                let certificate = Box::new(extract(problem, &asm, &st));
                Ok(Feasibility::Feasible {
                    certificate,
                    iterations,
                })
            } else {
                Ok(Feasibility::Infeasible {
                    dual_bound: st.dual_obj.to_f64(),
                    iterations,
                })
            }
        }
        IpmStop::MaxIterations => Err(SdpError::MaxIterations { iterations }),
        IpmStop::IllConditioned => Err(SdpError::IllConditioned { precision: p }),
    }
}

fn extract(problem: &SOSProblem, asm: &Assembled, st: &ipm::IpmState) -> SOSCertificate {
    let p = problem.prec();
    let n = problem.n_top();
    let lam = st.y[n].clone();
    let a_prime = &st.y[..n];
    let mut abar = asm.e.mul_vec(a_prime);
    for (x, x0) in abar.iter_mut().zip(&asm.a0) {
        *x += x0;
    }
    let a: Vec<BigFloat> = abar
        .iter()
        .zip(&asm.col_scale)
        .map(|(x, s)| BigFloat::with_val(p, x * s))
        .collect();
    // Orthonormal basis to monomials in z, then z = y/ρ: v(z) = D v(y) with D = diag(ρ^{−i}).
    let mut d = Vec::with_capacity(n + 1);
    let mut pw = BigFloat::with_val(p, 1);
    for _ in 0..=n {
        d.push(pw.clone());
        pw /= &asm.rho;
    }
    let lam_i = Mat::scalar(n + 1, &lam);
    let to_monomial = |g: &Mat, t: &Mat, extra: &BigFloat| {
        let gz = t.transpose().mul(&g.add(&lam_i)).mul(t).sym();
        let mut out = gz.clone();
        for i in 0..=n {
            for j in 0..=n {
                out[(i, j)] = BigFloat::with_val(p, &d[i] * &d[j]) * &gz[(i, j)] * extra;
            }
        }
        out
    };
    let g0 = to_monomial(&st.ys[0], &asm.t0, &BigFloat::with_val(p, 1));
    let g1 = to_monomial(&st.ys[1], &asm.t1, &(BigFloat::with_val(p, 1) / &asm.rho));
    let residual = certificate_residual(problem, &a, &g0, &g1);
    SOSCertificate {
        delta: problem.delta.clone(),
        basis_scale: problem.basis_scale(),
        min_eig_g0: g0.min_eigenvalue(),
        min_eig_g1: g1.min_eigenvalue(),
        a,
        g0,
        g1,
        margin: lam,
        residual,
    }
}

/// Largest coefficient of `p(Δ + (1+Δ)y) − vᵀG0v − y·vᵀG1v`.
fn certificate_residual(problem: &SOSProblem, a: &[BigFloat], g0: &Mat, g1: &Mat) -> BigFloat {
    let p = problem.prec();
    let len = 2 * problem.n_top() + 2;
    let lhs = combine(&problem.shifted_basis(), a, len, p);
    let rhs = gram_poly(g0, g1, len);
    let diff: Vec<BigFloat> = lhs
        .iter()
        .zip(&rhs)
        .map(|(x, y)| BigFloat::with_val(p, x - y))
        .collect();
    max_abs(&diff, p)
}

#[derive(Debug, Clone)]
pub struct VerifyTolerances {
    pub normalization: f64,
    /// Relative to the largest coefficient of `p(Δ + (1+Δ)y)`.
    pub residual: f64,
    /// Absolute floor for eigenvalues.
    pub eigenvalue: f64,
    /// `ε_grid` as a multiple of the largest coefficient of `p(Δ + x)`.
    pub grid: f64,
    pub grid_points: usize,
    pub grid_max: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        VerifyTolerances {
            normalization: 1e-15,
            residual: 1e-15,
            eigenvalue: 1e-30,
            grid: 1e-10,
            grid_points: 1000,
            grid_max: 1000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub normalization_error: f64,
    pub min_eig_g0: f64,
    pub min_eig_g1: f64,
    pub relative_residual: f64,
    /// `min p(Δ + x)` over the grid, relative to the largest coefficient.
    pub grid_min: f64,
    /// Distinct roots of `p(Δ + x)` on `(0, ∞)`.
    pub positive_roots: usize,
}

/// `x_i = X (1 − tanh(3(1 − u_i))/tanh 3)`, denser near `0`.
pub fn tanh_grid(points: usize, x_max: f64, prec: u32) -> Vec<BigFloat> {
    let three = BigFloat::with_val(prec, 3);
    let t3 = three.clone().tanh();
    (0..points)
        .map(|i| {
            let u = BigFloat::with_val(prec, i) / (points.max(2) as u32 - 1);
            let w = (BigFloat::with_val(prec, 1) - u) * &three;
            let r = BigFloat::with_val(prec, 1) - w.tanh() / &t3;
            r * x_max
        })
        .collect()
}

fn fail(check: Check, detail: String) -> SdpError {
    SdpError::VerificationFailed { check, detail }
}

/// Re-checks a certificate from its coefficient vector and Gram matrices alone.
pub fn verify_certificate(cert: &SOSCertificate, problem: &SOSProblem) -> Result<VerifyReport, SdpError> {
    verify_certificate_with(cert, problem, &VerifyTolerances::default())
}

pub fn verify_certificate_with(
    cert: &SOSCertificate,
    problem: &SOSProblem,
    tol: &VerifyTolerances,
) -> Result<VerifyReport, SdpError> {
    let p = problem.prec();
    let n = problem.n_top();
    if cert.a.len() != n + 1 || cert.g0.rows() != n + 1 || cert.g1.rows() != n + 1 {
        return Err(fail(Check::Residual, "certificate shape does not match N".into()));
    }
    if cert.delta != problem.delta {
        return Err(fail(Check::Residual, format!("certificate is for Δ = {}", cert.delta)));
    }

    let norm_err = (problem.normalization_value(&cert.a) - 1u32).abs().to_f64();
    if !(norm_err <= tol.normalization) {
        return Err(fail(Check::Normalization, format!("normalization off by {norm_err:e}")));
    }

    let eig = |g: &Mat| {
        let floor = BigFloat::with_val(p, tol.eigenvalue).max(&(g.max_abs() >> (p as i32 - 16)));
        (g.min_eigenvalue(), floor)
    };
    let (e0, f0) = eig(&cert.g0);
    let (e1, f1) = eig(&cert.g1);
    if !cert.g0.is_symmetric() || !cert.g1.is_symmetric() {
        return Err(fail(Check::Psd, "Gram matrix is not symmetric".into()));
    }
    if e0 < -f0 || e1 < -f1 {
        return Err(fail(
            Check::Psd,
            format!("minimum eigenvalues {:e}, {:e}", e0.to_f64(), e1.to_f64()),
        ));
    }

    let len = 2 * n + 2;
    let lhs = combine(&problem.shifted_basis(), &cert.a, len, p);
    let scale_y = max_abs(&lhs, p);
    let res = certificate_residual(problem, &cert.a, &cert.g0, &cert.g1);
    let rel_res = (res / &scale_y).to_f64();
    if !(rel_res <= tol.residual) {
        return Err(fail(
            Check::Residual,
            format!("relative coefficient mismatch {rel_res:e}"),
        ));
    }

    // p(Δ + x) straight from a.
    let px = shift_poly(&problem.aggregate(&cert.a), &problem.delta);
    let scale_x = max_abs(&px, p);
    let eps = BigFloat::with_val(p, &scale_x * tol.grid);
    let mut grid_min: Option<BigFloat> = None;
    for x in tanh_grid(tol.grid_points, tol.grid_max, p) {
        let v = horner(&px, &x);
        if v < -eps.clone() {
            return Err(fail(Check::Grid, format!("p(Δ + {}) = {:e}", x.to_f64(), v.to_f64())));
        }
        if grid_min.as_ref().is_none_or(|m| v < *m) {
            grid_min = Some(v);
        }
    }
    let grid_min = (grid_min.unwrap_or_else(|| BigFloat::new(p)) / &scale_x).to_f64();

    let exact = sturm::to_exact(&px);
    let seq = sturm::SturmSequence::new(&exact);
    let zero = Rat::new();
    let roots = seq.count_above(&zero);
    if roots > 0 {
        let eps_rat = Rat::try_from(&eps).expect("finite");
        let bound = sturm::root_bound(&exact);
        let width = Rat::from((1, 1_000_000));
        for (lo, hi) in sturm::isolate(&exact, &zero, &bound, &width) {
            let neg = -eps_rat.clone();
            if exact.eval(&lo) < neg || exact.eval(&hi) < neg {
                return Err(fail(Check::Sturm, format!("sign change near x = {:e}", hi.to_f64())));
            }
        }
    }

    Ok(VerifyReport {
        normalization_error: norm_err,
        min_eig_g0: e0.to_f64(),
        min_eig_g1: e1.to_f64(),
        relative_residual: rel_res,
        grid_min,
        positive_roots: roots,
    })
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub bisect_tol: f64,
    pub solver: SolverOptions,
    pub min_delta: f64,
    pub max_delta: f64,
    /// Precision is doubled up to this when the solver reports ill-conditioning.
    pub max_precision: u32,
    pub vacuum: VacuumConvention,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            bisect_tol: 1e-4,
            solver: SolverOptions::default(),
            min_delta: 1e-3,
            max_delta: 1e3,
            max_precision: 1024,
            vacuum: VacuumConvention::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub spec: FunctionalSpec,
    #[serde(rename = "N")]
    pub n_top: usize,
    #[serde(with = "serial::float")]
    pub delta_star: BigFloat,
    /// `(feasible Δ, infeasible Δ)`.
    pub bracket: (f64, f64),
    pub certificate: SOSCertificate,
    pub verification: VerifyReport,
    pub solver_iterations: usize,
    /// Seconds.
    pub wall_time: f64,
    /// Lattice ranks 1 to 4 are computed but not trusted.
    pub unverified: bool,
}

struct Prober<'a> {
    spec: &'a FunctionalSpec,
    opts: &'a SearchOptions,
    iterations: usize,
}

impl Prober<'_> {
    /// A verified certificate at `delta`, or `None` when infeasible or undecided.
    fn probe(&mut self, delta: f64) -> Result<Option<(SOSCertificate, VerifyReport)>, SdpError> {
        let mut spec = self.spec.clone();
        loop {
            let d = BigFloat::with_val(spec.prec(), delta);
            let problem = SOSProblem::with_vacuum(&spec, &d, self.opts.vacuum)?;
            match sos_feasible(&problem, &self.opts.solver) {
                Ok(Feasibility::Feasible {
                    certificate,
                    iterations,
                }) => {
                    self.iterations += iterations;
                    return match verify_certificate(&certificate, &problem) {
                        Ok(report) => Ok(Some((*certificate, report))),
                        Err(e) => {
                            warn!("Δ = {delta}: solver certificate rejected ({e}); counting as infeasible");
                            Ok(None)
                        }
                    };
                }
                Ok(Feasibility::Infeasible { iterations, .. }) => {
                    self.iterations += iterations;
                    return Ok(None);
                }
                Err(SdpError::MaxIterations { iterations }) => {
                    self.iterations += iterations;
                    warn!("Δ = {delta}: undecided after {iterations} iterations; counting as infeasible");
                    return Ok(None);
                }
                Err(SdpError::IllConditioned { precision }) => {
                    let next = precision * 2;
                    if next > self.opts.max_precision {
                        warn!("Δ = {delta}: ill-conditioned at {precision} bits; counting as infeasible");
                        return Ok(None);
                    }
                    info!("Δ = {delta}: retrying at {next} bits");
                    spec.precision = Precision::new(next).expect("above minimum");
                }
                Err(e) => return Err(e),
            }
        }
    }
}

/// The smallest `Δ` (to `bisect_tol`) at which a certificate exists.
pub fn bound_search(spec: &FunctionalSpec, bisect_tol: f64) -> Result<BoundResult, SdpError> {
    bound_search_with(
        spec,
        &SearchOptions {
            bisect_tol,
            ..SearchOptions::default()
        },
    )
}

pub fn bound_search_with(spec: &FunctionalSpec, opts: &SearchOptions) -> Result<BoundResult, SdpError> {
    let start = Instant::now();
    let mut prober = Prober {
        spec,
        opts,
        iterations: 0,
    };
    let delta0 = match &spec.flavor {
        Flavor::Lattice { n } => *n as f64 / 8.0,
        Flavor::Voa { c } => c.to_f64() / 12.0,
    };

    // Bracket: `hi` feasible with certificate, `lo` infeasible.
    let (mut lo, mut hi, mut best) = match prober.probe(delta0)? {
        Some(cert) => {
            let mut hi = delta0;
            let mut best = cert;
            loop {
                let d = hi / 2.0;
                if d < opts.min_delta {
                    return Err(SdpError::BracketNotFound { lo: opts.min_delta, hi });
                }
                match prober.probe(d)? {
                    Some(c) => {
                        hi = d;
                        best = c;
                    }
                    None => break (d, hi, best),
                }
            }
        }
        None => {
            let mut lo = delta0;
            loop {
                let d = lo * 2.0;
                if d > opts.max_delta {
                    return Err(SdpError::BracketNotFound { lo, hi: opts.max_delta });
                }
                match prober.probe(d)? {
                    Some(c) => break (lo, d, c),
                    None => lo = d,
                }
            }
        }
    };
    while hi - lo > opts.bisect_tol {
        let mid = 0.5 * (lo + hi);
        match prober.probe(mid)? {
            Some(c) => {
                hi = mid;
                best = c;
            }
            None => lo = mid,
        }
    }
    let (certificate, verification) = best;
    let prec = certificate.delta.prec();
    let unverified = matches!(spec.flavor, Flavor::Lattice { n } if n <= 4);
    if unverified {
        warn!("lattice rank at most 4: result is reported but not trusted");
    }
    Ok(BoundResult {
        spec: spec.clone(),
        n_top: spec.n_top,
        delta_star: BigFloat::with_val(prec, 0.5 * (lo + hi)),
        bracket: (hi, lo),
        certificate,
        verification,
        solver_iterations: prober.iterations,
        wall_time: start.elapsed().as_secs_f64(),
        unverified,
    })
}
