use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dualbound::codes::code_bound;
use dualbound::exactfield::{BigFloat, Precision, Rat};
use dualbound::functional::FunctionalSpec;
use dualbound::magic::{f_sine, lambda_inv, MagicCharge, QuadratureConfig};
use dualbound::qseries::{j_from_lambda, lambda_series, series_reversion};
use dualbound::sdp::{sos_feasible, SOSProblem, SolverOptions};
use rug::Complex;

fn codes(c: &mut Criterion) {
    c.bench_function("code_bound/24", |b| b.iter(|| code_bound(black_box(24)).unwrap()));
}

fn series(c: &mut Criterion) {
    c.bench_function("lambda_series/64", |b| b.iter(|| lambda_series(black_box(64))));
    c.bench_function("series_reversion/32", |b| {
        let s = lambda_series(32);
        b.iter(|| series_reversion(black_box(&s)).unwrap())
    });
    c.bench_function("j_from_lambda/16", |b| b.iter(|| j_from_lambda(black_box(16))));
}

fn sdp(c: &mut Criterion) {
    let mut g = c.benchmark_group("sos_feasible");
    g.sample_size(10);
    for n_top in [4, 8] {
        let spec = FunctionalSpec::lattice(8, n_top, Precision::default()).unwrap();
        let delta = BigFloat::with_val(256, 2.5);
        let problem = SOSProblem::new(&spec, &delta).unwrap();
        g.bench_function(format!("E8/N={n_top}"), |b| {
            b.iter(|| sos_feasible(black_box(&problem), &SolverOptions::default()).unwrap())
        });
    }
    let spec = FunctionalSpec::voa(Rat::from(24), 4, Precision::default()).unwrap();
    let problem = SOSProblem::new(&spec, &BigFloat::with_val(256, 2.2)).unwrap();
    g.bench_function("c=24/N=4", |b| {
        b.iter(|| sos_feasible(black_box(&problem), &SolverOptions::default()).unwrap())
    });
    g.finish();
}

fn magic(c: &mut Criterion) {
    let z = Complex::with_val(256, (0.3, 0.1));
    c.bench_function("lambda_inv", |b| b.iter(|| lambda_inv(black_box(&z)).unwrap()));
    let mut g = c.benchmark_group("f_sine");
    g.sample_size(10);
    for cc in [8u32, 24] {
        let m = MagicCharge::new(cc).unwrap();
        let h = BigFloat::with_val(256, m.pole() + 1.0);
        g.bench_function(format!("c={cc}"), |b| {
            b.iter(|| f_sine(&m, black_box(&h), &QuadratureConfig::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, codes, series, sdp, magic);
criterion_main!(benches);
