use dualbound::exactfield::{BigFloat, Precision, Rat};
use dualbound::functional::{FunctionalSpec, VacuumConvention};
use dualbound::sdp::{
    sos_feasible, verify_certificate, Check, Feasibility, SOSCertificate, SOSProblem, SdpError, SolverOptions,
};

fn prec() -> Precision {
    Precision::default()
}

fn lattice(n: u32, big_n: usize) -> FunctionalSpec {
    FunctionalSpec::lattice(n, big_n, prec()).unwrap()
}

fn voa(num: i64, den: i64, big_n: usize) -> FunctionalSpec {
    FunctionalSpec::voa(Rat::from((num, den)), big_n, prec()).unwrap()
}

fn problem(spec: &FunctionalSpec, delta: f64) -> SOSProblem {
    SOSProblem::new(spec, &BigFloat::with_val(spec.prec(), delta)).unwrap()
}

fn decide(p: &SOSProblem) -> Feasibility {
    sos_feasible(p, &SolverOptions::default()).unwrap()
}

fn certificate(p: &SOSProblem) -> SOSCertificate {
    match decide(p) {
        Feasibility::Feasible { certificate, .. } => *certificate,
        other => panic!("expected feasible at Δ = {}, got {other:?}", p.delta),
    }
}

#[test]
fn e8_rank_threshold_brackets_two() {
    let spec = lattice(8, 12);
    let above = problem(&spec, 2.1);
    let cert = certificate(&above);
    let report = verify_certificate(&cert, &above).unwrap();
    assert!(report.grid_min > -1e-10);
    assert!(!decide(&problem(&spec, 1.9)).is_feasible());
}

#[test]
fn c24_is_feasible_above_known_bound() {
    let p = problem(&voa(24, 1, 12), 2.1);
    let cert = certificate(&p);
    verify_certificate(&cert, &p).unwrap();
}

#[test]
fn feasibility_is_monotone_on_a_ladder() {
    let spec = lattice(16, 8);
    let verdicts: Vec<bool> = [2.8, 3.2, 3.3, 3.4, 5.0]
        .iter()
        .map(|&d| decide(&problem(&spec, d)).is_feasible())
        .collect();
    assert_eq!(verdicts, vec![false, true, true, true, true]);
}

#[test]
fn vacuum_conventions_differ_only_below_one() {
    let spec = voa(8, 7, 8);
    let at = |d: f64, v: VacuumConvention| {
        let p = SOSProblem::with_vacuum(&spec, &BigFloat::with_val(spec.prec(), d), v).unwrap();
        decide(&p).is_feasible()
    };
    assert!(at(0.53, VacuumConvention::Leading));
    assert!(!at(0.53, VacuumConvention::Subtracted));
    assert!(at(0.56, VacuumConvention::Subtracted));

    let spec = voa(8, 1, 8);
    for v in [VacuumConvention::Leading, VacuumConvention::Subtracted] {
        let p = SOSProblem::with_vacuum(&spec, &BigFloat::with_val(spec.prec(), 1.05), v).unwrap();
        assert!(decide(&p).is_feasible());
        let p = SOSProblem::with_vacuum(&spec, &BigFloat::with_val(spec.prec(), 0.98), v).unwrap();
        assert!(!decide(&p).is_feasible());
    }
}

#[test]
fn certificate_survives_json_and_rejects_edits() {
    let p = problem(&lattice(8, 6), 2.5);
    let cert = certificate(&p);
    let js = serde_json::to_string(&cert).unwrap();
    let back: SOSCertificate = serde_json::from_str(&js).unwrap();
    verify_certificate(&back, &p).unwrap();

    let mut v: serde_json::Value = serde_json::from_str(&js).unwrap();
    v["G1"]["data"][0] = serde_json::Value::String("1.5".into());
    let edited: SOSCertificate = serde_json::from_value(v).unwrap();
    match verify_certificate(&edited, &p) {
        Err(SdpError::VerificationFailed { check, .. }) => assert!(matches!(check, Check::Residual | Check::Psd)),
        other => panic!("edited certificate accepted: {other:?}"),
    }

    let other_delta = problem(&lattice(8, 6), 2.6);
    assert!(verify_certificate(&cert, &other_delta).is_err());
}
