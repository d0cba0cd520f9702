use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use laqc_core::swap::swap_oracle;
use laqc_core::{
    concurrence, laqc_oracle, laqc_xstate, make_family, swap_bloch, FamilyId, FamilyTag, MeasurementState, OracleMode,
    XState,
};

fn states() -> (XState, XState) {
    let ab = make_family(FamilyId::new(FamilyTag::Mems, 0.7).unwrap());
    let cd = XState::new(0.15, 0.35, 0.3, 0.2, -0.1, 0.25).unwrap();
    (ab, cd)
}

fn swap(c: &mut Criterion) {
    let (ab, cd) = states();
    let m = MeasurementState::new(0.4).unwrap();
    let (bab, bcd) = (ab.bloch(), cd.bloch());
    c.bench_function("swap_bloch", |b| b.iter(|| swap_bloch(black_box(&bab), black_box(&bcd), m).unwrap()));
    let (rab, rcd) = (ab.density_matrix(), cd.density_matrix());
    c.bench_function("swap_oracle", |b| b.iter(|| swap_oracle(black_box(&rab), black_box(&rcd), m).unwrap()));
}

fn correlations(c: &mut Criterion) {
    let (_, x) = states();
    let rho = x.density_matrix();
    c.bench_function("laqc_xstate", |b| b.iter(|| laqc_xstate(black_box(&x))));
    c.bench_function("concurrence", |b| b.iter(|| concurrence(black_box(&rho)).unwrap()));
    let mut g = c.benchmark_group("laqc_oracle");
    g.sample_size(20);
    g.bench_function("constructive", |b| b.iter(|| laqc_oracle(black_box(&rho), OracleMode::Constructive).unwrap()));
    g.bench_function("literal", |b| b.iter(|| laqc_oracle(black_box(&rho), OracleMode::Literal).unwrap()));
    g.finish();
}

criterion_group!(benches, swap, correlations);
criterion_main!(benches);
