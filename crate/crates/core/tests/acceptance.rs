//! One PASS/FAIL line per acceptance criterion. Runs without the libtest harness so
//! the lines are always shown; set `ACCEPTANCE_ONLY=3,5` to run a subset.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use dualbound::codes::code_bound;
use dualbound::exactfield::{BigFloat, Precision, QSqrt2, Rat};
use dualbound::functional::FunctionalSpec;
use dualbound::magic::{
    contour_functional, deformation_check, f_sine, magic_identity_check, zero_ladder, MagicCharge, QuadratureConfig,
};
use dualbound::qseries::{j_cube_root, j_from_lambda, lambda_series, series_reversion, virasoro_decompose};
use dualbound::sdp::{bound_search, verify_certificate, BoundResult, SOSProblem};

type Outcome = Result<String, String>;

#[rustfmt::skip]
const CODE_BOUNDS: [(usize, usize); 37] = [
    (1, 1), (2, 2), (3, 2), (4, 2), (5, 2), (6, 3), (7, 3), (8, 4), (9, 4), (10, 4), (11, 4),
    (12, 4), (13, 4), (14, 5), (15, 5), (16, 6), (17, 6), (18, 6), (19, 6), (20, 6), (21, 6), (22, 7), (23, 7),
    (24, 8), (25, 8), (26, 8), (27, 8), (28, 8), (29, 8), (30, 8), (31, 8), (32, 9), (33, 9), (34, 10), (35, 10),
    (40, 10), (48, 12),
];

const BISECT_TOL: f64 = 1e-4;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::from((n, d))
}

fn value(r: &BoundResult) -> f64 {
    r.delta_star.to_f64()
}

/// Runs the search and re-verifies the returned certificate independently.
fn search(spec: &FunctionalSpec) -> Result<(BoundResult, f64), String> {
    let t = Instant::now();
    let r = bound_search(spec, BISECT_TOL).map_err(|e| e.to_string())?;
    let problem = SOSProblem::new(spec, &r.certificate.delta).map_err(|e| e.to_string())?;
    verify_certificate(&r.certificate, &problem).map_err(|e| format!("certificate rejected: {e}"))?;
    Ok((r, t.elapsed().as_secs_f64()))
}

fn lattice(n: u32, n_top: usize) -> Result<(BoundResult, f64), String> {
    search(&FunctionalSpec::lattice(n, n_top, Precision::default()).map_err(|e| e.to_string())?)
}

fn voa(c: Rat, n_top: usize) -> Result<(BoundResult, f64), String> {
    search(&FunctionalSpec::voa(c, n_top, Precision::default()).map_err(|e| e.to_string())?)
}

fn c1_code_bounds() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for (n, mu) in CODE_BOUNDS {
        let got = code_bound(n).map_err(|e| e.to_string())?.mu;
        if got != mu {
            bad.push(format!("n={n}: {got} != {mu}"));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(
        bad.is_empty() && secs < 300.0,
        format!(
            "{} rows, {} mismatches {bad:?}, {secs:.1}s",
            CODE_BOUNDS.len(),
            bad.len()
        ),
    )
}

fn c2_objective() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [8usize, 16, 24] {
        let b = code_bound(n).map_err(|e| e.to_string())?;
        let want = QSqrt2::from_rat(Rat::from(1u64 << (n / 2)));
        let got = b.objective_below_mu().cloned();
        ok &= got.as_ref() == Some(&want);
        parts.push(format!(
            "n={n}: {}",
            got.map(|g| g.to_string()).unwrap_or_else(|| "none".into())
        ));
    }
    check(ok, parts.join(", "))
}

fn c3_lattices() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, want) in [(8u32, 2.00018), (16, 3.028), (24, 4.014)] {
        let (r12, s12) = lattice(n, 12)?;
        let (r24, s24) = lattice(n, 24)?;
        let (d12, d24) = (value(&r12), value(&r24));
        ok &= (d12 - want).abs() < 5e-3 && s12 < 600.0 && d24 <= d12 + BISECT_TOL;
        parts.push(format!("n={n}: N=12 {d12:.5} ({s12:.0}s), N=24 {d24:.5} ({s24:.0}s)"));
    }
    check(ok, parts.join("; "))
}

fn c4_voas() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (c, want) in [
        (rat(8, 7), 0.517),
        (rat(8, 1), 1.0022),
        (rat(24, 1), 2.037),
        (rat(48, 1), 3.603),
    ] {
        let label = c.to_string();
        let (r, s) = voa(c, 12)?;
        let d = value(&r);
        ok &= (d - want).abs() < 5e-3;
        parts.push(format!("c={label}: {d:.5} vs {want} ({s:.0}s)"));
    }
    check(ok, parts.join("; "))
}

fn c5_convergence() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (c, want) in [(8i64, 1.000089), (24, 2.0052)] {
        let d12 = value(&voa(Rat::from(c), 12)?.0);
        let (r24, s24) = voa(Rat::from(c), 24)?;
        let d24 = value(&r24);
        ok &= d24 < d12 && (d24 - want).abs() < 1e-3;
        parts.push(format!("c={c}: N=12 {d12:.6}, N=24 {d24:.6} vs {want} ({s24:.0}s)"));
    }
    check(ok, parts.join("; "))
}

fn c6_identities() -> Outcome {
    let r8 = magic_identity_check(8).map_err(|e| e.to_string())?;
    let r24 = magic_identity_check(24).map_err(|e| e.to_string())?;
    check(r8 && r24, format!("c=8: {r8}, c=24: {r24}"))
}

fn c7_goldens() -> Outcome {
    let lam: Vec<Rat> = lambda_series(6).coeffs().to_vec();
    let lam_want: Vec<Rat> = [16, -128, 704, -3072, 11488, -38400]
        .iter()
        .map(|&x| Rat::from(x))
        .collect();
    let half = series_reversion(&lambda_series(8)).map_err(|e| e.to_string())?;
    let q = half.mul(&half);
    let q_got: Vec<Option<Rat>> = (2..=4).map(|k| q.coeff_at(&Rat::from(k))).collect();
    let q_want = vec![Some(rat(1, 256)), Some(rat(1, 256)), Some(rat(29, 8192))];
    let j = j_from_lambda(4).add_const(&Rat::from(-744));
    let j1 = j.coeff_at(&Rat::from(1));
    let cube = j_cube_root(4).coeff_at(&Rat::from((2, 3)));
    let ok = lam == lam_want && q_got == q_want && j1 == Some(Rat::from(196884)) && cube == Some(Rat::from(248));
    check(
        ok,
        format!(
            "λ {:?}, q∘λ⁻¹ {:?}, j−744 q¹ {:?}, j^(1/3) q^(2/3) {:?}",
            lam.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            q_got.iter().flatten().map(|r| r.to_string()).collect::<Vec<_>>(),
            j1.map(|r| r.to_string()),
            cube.map(|r| r.to_string())
        ),
    )
}

fn c8_deformation() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for (c, hs) in [(8u32, &[1.1, 1.3, 1.7][..]), (24, &[2.1, 2.6][..])] {
        let m = MagicCharge::new(c).map_err(|e| e.to_string())?;
        for &h in hs {
            let t = Instant::now();
            let d = deformation_check(&m, &BigFloat::with_val(cfg.prec(), h), &cfg).map_err(|e| e.to_string())?;
            let secs = t.elapsed().as_secs_f64();
            ok &= d.rel_err < 1e-8 && secs < 60.0;
            parts.push(format!("c={c} h={h}: {:.1e} ({secs:.2}s)", d.rel_err));
        }
    }
    check(ok, parts.join(", "))
}

fn c9_ladder() -> Outcome {
    let cfg = QuadratureConfig::default();
    let p = cfg.prec();
    let mut parts = Vec::new();
    let mut ok = true;
    for (c, rungs) in [(8u32, 3usize), (24, 2)] {
        let m = MagicCharge::new(c).map_err(|e| e.to_string())?;
        for pt in zero_ladder(&m, rungs, &cfg).map_err(|e| e.to_string())? {
            let mid = f_sine(&m, &BigFloat::with_val(p, &pt.h + 0.5f64), &cfg).map_err(|e| e.to_string())?;
            let v = pt.value.value.to_f64().abs();
            ok &= v < 1e-8 * mid.value.to_f64().max(1.0);
            parts.push(format!("f_{c}({}) = {v:.1e}", pt.h.to_f64()));
        }
        let vac = contour_functional(&m, &BigFloat::new(p), &cfg).map_err(|e| e.to_string())?;
        let v = vac.value.to_f64().abs();
        ok &= v < 1e-8;
        parts.push(format!("vacuum_{c} = {v:.1e}"));
    }
    check(ok, parts.join(", "))
}

fn c10_virasoro() -> Outcome {
    let j = j_from_lambda(6).add_const(&Rat::from(-744));
    let dec = virasoro_decompose(&j, &Rat::from(24), true).map_err(|e| e.to_string())?;
    let got: Vec<Option<Rat>> = (0..3).map(|h| dec.coefficient(&Rat::from(h))).collect();
    let want = vec![Some(Rat::from(1)), Some(Rat::new()), Some(Rat::from(196883))];
    check(got == want, format!("c_0, c_1, c_2 = {got:?}"))
}

fn c11_annihilation() -> Outcome {
    let worst = common::annihilation_residual(100, 11, 256);
    let tol = 10f64.powi(-64);
    check(
        worst < tol,
        format!("100 draws, worst residual {worst:.1e} (tolerance {tol:.0e})"),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "code bound table", c1_code_bounds),
        (2, "objective at mu-1", c2_objective),
        (3, "lattice bounds", c3_lattices),
        (4, "VOA bounds", c4_voas),
        (5, "convergence direction", c5_convergence),
        (6, "exact magic identities", c6_identities),
        (7, "series goldens", c7_goldens),
        (8, "deformation identity", c8_deformation),
        (9, "zero ladder and vacuum", c9_ladder),
        (10, "Virasoro decomposition", c10_virasoro),
        (11, "functional annihilation", c11_annihilation),
    ];
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {id:>2} {tag} {name}: {detail}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
