//! Primal-dual interior-point method for SDPs with rank-one constraint matrices.
//!
//! Primal: maximize `bᵀy` subject to `𝒜(Y) + B y = c`, `Y ⪰ 0`.
//! Dual: minimize `cᵀx` subject to `Bᵀx = b`, `𝒜*(x) ⪰ 0`.
//!
//! In block `β` the row-`k` constraint matrix is `u_{βk} u_{βk}ᵀ` (or zero), so
//! `𝒜(Y)_k = Σ_β u_{βk}ᵀ Y_β u_{βk}` and `𝒜*(x)_β = Σ_k x_k u_{βk} u_{βk}ᵀ`.
//! Search directions are HKM with a Mehrotra corrector.

use log::{debug, trace};

use super::linalg::{dot, max_abs, Mat};
use crate::exactfield::BigFloat;

#[derive(Debug, Clone)]
pub struct Block {
    pub dim: usize,
    /// `(row, u)` pairs; rows not listed have a zero matrix in this block.
    pub terms: Vec<(usize, Vec<BigFloat>)>,
}

#[derive(Debug, Clone)]
pub struct RankOneSdp {
    pub blocks: Vec<Block>,
    /// `K × m`.
    pub b_mat: Mat,
    pub c: Vec<BigFloat>,
    pub b: Vec<BigFloat>,
}

#[derive(Debug, Clone)]
pub struct IpmState {
    pub x: Vec<BigFloat>,
    pub ys: Vec<Mat>,
    pub y: Vec<BigFloat>,
    pub iteration: usize,
    pub primal_obj: BigFloat,
    pub dual_obj: BigFloat,
    /// `max |c − 𝒜(Y) − By|`.
    pub primal_res: BigFloat,
    /// `max |b − Bᵀx|`.
    pub dual_res: BigFloat,
    pub mu: BigFloat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpmStop {
    /// The caller's predicate fired.
    Decided,
    Converged,
    MaxIterations,
    IllConditioned,
}

#[derive(Debug, Clone)]
pub struct IpmOptions {
    pub max_iterations: usize,
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub step_fraction: f64,
}

impl Default for IpmOptions {
    fn default() -> Self {
        IpmOptions {
            max_iterations: 200,
            gap_tol: 1e-20,
            feas_tol: 1e-20,
            step_fraction: 0.9,
        }
    }
}

impl RankOneSdp {
    pub fn rows(&self) -> usize {
        self.c.len()
    }

    fn prec(&self) -> u32 {
        self.b_mat.prec()
    }

    /// `𝒜*(x)` restricted to each block.
    pub fn adjoint(&self, x: &[BigFloat]) -> Vec<Mat> {
        let p = self.prec();
        self.blocks
            .iter()
            .map(|blk| {
                let mut m = Mat::zeros(blk.dim, blk.dim, p);
                for (k, u) in &blk.terms {
                    for i in 0..blk.dim {
                        let xi = BigFloat::with_val(p, &x[*k] * &u[i]);
                        for j in i..blk.dim {
                            m[(i, j)] += BigFloat::with_val(p, &xi * &u[j]);
                        }
                    }
                }
                for i in 0..blk.dim {
                    for j in 0..i {
                        m[(i, j)] = m[(j, i)].clone();
                    }
                }
                m
            })
            .collect()
    }

    /// `𝒜(M)`; `M` need not be symmetric.
    pub fn apply_a(&self, ms: &[Mat]) -> Vec<BigFloat> {
        let p = self.prec();
        let mut out = vec![BigFloat::new(p); self.rows()];
        for (blk, m) in self.blocks.iter().zip(ms) {
            for (k, u) in &blk.terms {
                out[*k] += dot(u, &m.mul_vec(u), p);
            }
        }
        out
    }

    fn bt(&self, x: &[BigFloat]) -> Vec<BigFloat> {
        self.b_mat.transpose().mul_vec(x)
    }
}

struct Factorization {
    s_chol: Mat,
    s_inv_b: Mat,
    m_chol: Mat,
}

struct Direction {
    dx: Vec<BigFloat>,
    dys: Vec<Mat>,
    dy: Vec<BigFloat>,
}

/// Largest `α` keeping `Z + α dZ ⪰ 0`, from the spectrum of `L⁻¹ dZ L⁻ᵀ`.
fn max_step(z_chol: &Mat, dz: &Mat) -> f64 {
    let w = z_chol.congruence_inv(dz).to_nalgebra();
    let lam = w.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    if lam < 0.0 {
        -1.0 / lam
    } else {
        f64::INFINITY
    }
}

/// Runs from `x = x0`, `Y = I`, `y = 0` until `decide` fires, the gap closes, or the budget runs out.
pub fn solve(
    sdp: &RankOneSdp,
    x0: &[BigFloat],
    opts: &IpmOptions,
    mut decide: impl FnMut(&IpmState) -> bool,
) -> (IpmStop, IpmState) {
    let p = sdp.prec();
    let k_rows = sdp.rows();
    let n_tot: usize = sdp.blocks.iter().map(|b| b.dim).sum();

    let mut x: Vec<BigFloat> = x0.iter().map(|v| BigFloat::with_val(p, v)).collect();
    let mut ys: Vec<Mat> = sdp.blocks.iter().map(|b| Mat::identity(b.dim, p)).collect();
    let mut y = vec![BigFloat::new(p); sdp.b.len()];

    let mut state = IpmState {
        x: x.clone(),
        ys: ys.clone(),
        y: y.clone(),
        iteration: 0,
        primal_obj: BigFloat::new(p),
        dual_obj: BigFloat::new(p),
        primal_res: BigFloat::new(p),
        dual_res: BigFloat::new(p),
        mu: BigFloat::new(p),
    };

    let c_scale = BigFloat::with_val(p, 1) + max_abs(&sdp.c, p);
    let b_scale = BigFloat::with_val(p, 1) + max_abs(&sdp.b, p);

    for iter in 0..opts.max_iterations {
        let xs = sdp.adjoint(&x);
        let Some(x_chols) = xs.iter().map(Mat::cholesky).collect::<Option<Vec<_>>>() else {
            return (IpmStop::IllConditioned, state);
        };
        let Some(y_chols) = ys.iter().map(Mat::cholesky).collect::<Option<Vec<_>>>() else {
            return (IpmStop::IllConditioned, state);
        };
        let x_invs: Vec<Mat> = x_chols.iter().map(Mat::chol_inverse).collect();

        let ay = sdp.apply_a(&ys);
        let by = sdp.b_mat.mul_vec(&y);
        let r_d: Vec<BigFloat> = (0..k_rows)
            .map(|k| BigFloat::with_val(p, &sdp.c[k] - &ay[k]) - &by[k])
            .collect();
        let btx = sdp.bt(&x);
        let r_p: Vec<BigFloat> = sdp
            .b
            .iter()
            .zip(&btx)
            .map(|(b, v)| BigFloat::with_val(p, b - v))
            .collect();

        let mut xy_trace = BigFloat::new(p);
        for (xm, ym) in xs.iter().zip(&ys) {
            xy_trace += xm.trace_mul(ym);
        }
        let mu = BigFloat::with_val(p, &xy_trace / n_tot as u32);

        state = IpmState {
            x: x.clone(),
            ys: ys.clone(),
            y: y.clone(),
            iteration: iter,
            primal_obj: dot(&sdp.b, &y, p),
            dual_obj: dot(&sdp.c, &x, p),
            primal_res: max_abs(&r_d, p),
            dual_res: max_abs(&r_p, p),
            mu: mu.clone(),
        };
        trace!(
            "iter {iter}: pobj {:.6e} dobj {:.6e} pres {:.3e} dres {:.3e} mu {:.3e}",
            state.primal_obj.to_f64(),
            state.dual_obj.to_f64(),
            state.primal_res.to_f64(),
            state.dual_res.to_f64(),
            mu.to_f64()
        );
        if decide(&state) {
            return (IpmStop::Decided, state);
        }
        let gap = BigFloat::with_val(p, &state.dual_obj - &state.primal_obj).abs();
        let obj_scale = BigFloat::with_val(p, state.primal_obj.abs_ref()) + 1u32;
        if gap <= BigFloat::with_val(p, &obj_scale * opts.gap_tol)
            && state.primal_res <= BigFloat::with_val(p, &c_scale * opts.feas_tol)
            && state.dual_res <= BigFloat::with_val(p, &b_scale * opts.feas_tol)
        {
            return (IpmStop::Converged, state);
        }

        let Some(fact) = factor(sdp, &x_invs, &ys) else {
            return (IpmStop::IllConditioned, state);
        };

        // Predictor: R = −XY.
        let minus_one = BigFloat::with_val(p, -1);
        let r_aff: Vec<Mat> = xs
            .iter()
            .zip(&ys)
            .map(|(xm, ym)| xm.mul(ym).scale(&minus_one))
            .collect();
        let aff = direction(sdp, &fact, &x_invs, &ys, &r_aff, &r_d, &r_p);
        let dxs_aff = sdp.adjoint(&aff.dx);
        let (ap_aff, ad_aff) = step_lengths(&x_chols, &y_chols, &dxs_aff, &aff.dys, 1.0);
        let mut mu_aff = BigFloat::new(p);
        for bi in 0..xs.len() {
            let xn = xs[bi].add_scaled(&dxs_aff[bi], &BigFloat::with_val(p, ad_aff));
            let yn = ys[bi].add_scaled(&aff.dys[bi], &BigFloat::with_val(p, ap_aff));
            mu_aff += xn.trace_mul(&yn);
        }
        mu_aff /= n_tot as u32;
        let ratio = if mu.is_zero() {
            0.0
        } else {
            BigFloat::with_val(p, &mu_aff / &mu).to_f64()
        };
        let sigma = ratio.clamp(0.0, 1.0).powi(3).max(1e-3);

        // Corrector: R = σμI − XY − dX_aff dY_aff.
        let sigma_mu = BigFloat::with_val(p, &mu * sigma);
        let r_cor: Vec<Mat> = (0..xs.len())
            .map(|bi| {
                Mat::scalar(xs[bi].rows(), &sigma_mu)
                    .sub(&xs[bi].mul(&ys[bi]))
                    .sub(&dxs_aff[bi].mul(&aff.dys[bi]))
            })
            .collect();
        let dir = direction(sdp, &fact, &x_invs, &ys, &r_cor, &r_d, &r_p);
        let dxs = sdp.adjoint(&dir.dx);
        let (mut ap, mut ad) = step_lengths(&x_chols, &y_chols, &dxs, &dir.dys, opts.step_fraction);

        // Guard the f64 step estimate with full-precision Cholesky tests.
        loop {
            let xn: Vec<BigFloat> = x
                .iter()
                .zip(&dir.dx)
                .map(|(a, d)| BigFloat::with_val(p, a + BigFloat::with_val(p, d * ad)))
                .collect();
            let ok_x = sdp.adjoint(&xn).iter().all(|m| m.cholesky().is_some());
            let yn: Vec<Mat> = ys
                .iter()
                .zip(&dir.dys)
                .map(|(a, d)| a.add_scaled(d, &BigFloat::with_val(p, ap)))
                .collect();
            let ok_y = yn.iter().all(|m| m.cholesky().is_some());
            if ok_x && ok_y {
                x = xn;
                ys = yn;
                for (a, d) in y.iter_mut().zip(&dir.dy) {
                    *a += BigFloat::with_val(p, d * ap);
                }
                break;
            }
            if !ok_x {
                ad *= 0.5;
            }
            if !ok_y {
                ap *= 0.5;
            }
            if ap < 1e-30 && ad < 1e-30 {
                return (IpmStop::IllConditioned, state);
            }
        }
        debug!("iter {iter}: sigma {sigma:.3e} steps ({ap:.3e}, {ad:.3e})");
    }
    (IpmStop::MaxIterations, state)
}

/// `S_pq = Σ_β (u_pᵀ X⁻¹ u_q)(u_pᵀ Y u_q)`, its Cholesky factor, and the Schur complement `Bᵀ S⁻¹ B`.
fn factor(sdp: &RankOneSdp, x_invs: &[Mat], ys: &[Mat]) -> Option<Factorization> {
    let p = sdp.prec();
    let k_rows = sdp.rows();
    let mut s = Mat::zeros(k_rows, k_rows, p);
    for ((blk, xi), ym) in sdp.blocks.iter().zip(x_invs).zip(ys) {
        let xu: Vec<Vec<BigFloat>> = blk.terms.iter().map(|(_, u)| xi.mul_vec(u)).collect();
        let yu: Vec<Vec<BigFloat>> = blk.terms.iter().map(|(_, u)| ym.mul_vec(u)).collect();
        for (a, (ka, ua)) in blk.terms.iter().enumerate() {
            for (b, (kb, _)) in blk.terms.iter().enumerate().skip(a) {
                let v = dot(ua, &xu[b], p) * dot(ua, &yu[b], p);
                s[(*ka, *kb)] += &v;
                if a != b {
                    s[(*kb, *ka)] += &v;
                }
            }
        }
    }
    let s_chol = s.cholesky()?;
    let m_cols = sdp.b_mat.cols();
    let mut s_inv_b = Mat::zeros(k_rows, m_cols, p);
    for col in 0..m_cols {
        let bcol: Vec<BigFloat> = (0..k_rows).map(|k| sdp.b_mat[(k, col)].clone()).collect();
        for (k, v) in s_chol.chol_solve(&bcol).into_iter().enumerate() {
            s_inv_b[(k, col)] = v;
        }
    }
    let schur = sdp.b_mat.transpose().mul(&s_inv_b).sym();
    let m_chol = schur.cholesky()?;
    Some(Factorization {
        s_chol,
        s_inv_b,
        m_chol,
    })
}

fn direction(
    sdp: &RankOneSdp,
    fact: &Factorization,
    x_invs: &[Mat],
    ys: &[Mat],
    r_c: &[Mat],
    r_d: &[BigFloat],
    r_p: &[BigFloat],
) -> Direction {
    let p = sdp.prec();
    let xinv_r: Vec<Mat> = x_invs.iter().zip(r_c).map(|(xi, r)| xi.mul(r)).collect();
    let a_xr = sdp.apply_a(&xinv_r);
    let rhs1: Vec<BigFloat> = r_d
        .iter()
        .zip(&a_xr)
        .map(|(a, b)| BigFloat::with_val(p, a - b))
        .collect();
    let s_inv_rhs = fact.s_chol.chol_solve(&rhs1);
    let t = sdp.bt(&s_inv_rhs);
    let rhs2: Vec<BigFloat> = r_p.iter().zip(&t).map(|(a, b)| BigFloat::with_val(p, a + b)).collect();
    let dy = fact.m_chol.chol_solve(&rhs2);
    let sib_dy = fact.s_inv_b.mul_vec(&dy);
    let dx: Vec<BigFloat> = sib_dy
        .iter()
        .zip(&s_inv_rhs)
        .map(|(a, b)| BigFloat::with_val(p, a - b))
        .collect();
    let dxs = sdp.adjoint(&dx);
    let dys = (0..sdp.blocks.len())
        .map(|bi| xinv_r[bi].sub(&x_invs[bi].mul(&dxs[bi]).mul(&ys[bi])).sym())
        .collect();
    Direction { dx, dys, dy }
}

fn step_lengths(x_chols: &[Mat], y_chols: &[Mat], dxs: &[Mat], dys: &[Mat], gamma: f64) -> (f64, f64) {
    let mut ad = f64::INFINITY;
    let mut ap = f64::INFINITY;
    for bi in 0..x_chols.len() {
        ad = ad.min(max_step(&x_chols[bi], &dxs[bi]));
        ap = ap.min(max_step(&y_chols[bi], &dys[bi]));
    }
    ((gamma * ap).min(1.0), (gamma * ad).min(1.0))
}
