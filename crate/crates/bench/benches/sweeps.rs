use adelie_core::chevalley::{ChevalleyConstants, JacobiMode};
use adelie_core::cotangent::{verify_prop11_induction, verify_remark10};
use adelie_core::flag_cohomology::verify_prop2;
use adelie_core::obstruction::{build_system, check_bianchi, Half};
use adelie_core::surface::resolution_lattice;
use adelie_core::RootSystem;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn roots(c: &mut Criterion) {
    c.bench_function("build E8", |b| b.iter(|| RootSystem::from_spec(black_box("E8")).unwrap()));
}

fn flag(c: &mut Criterion) {
    let rs = RootSystem::from_spec("E8").unwrap();
    c.bench_function("prop2 sweep E8", |b| b.iter(|| verify_prop2(black_box(&rs))));
}

fn chevalley(c: &mut Criterion) {
    let rs = RootSystem::from_spec("E7").unwrap();
    c.bench_function("chevalley build E7", |b| b.iter(|| ChevalleyConstants::build(black_box(&rs)).unwrap()));
    let d5 = RootSystem::from_spec("D5").unwrap();
    let k = ChevalleyConstants::build(&d5).unwrap();
    c.bench_function("jacobi exhaustive D5", |b| b.iter(|| k.check_jacobi(JacobiMode::Exhaustive)));
}

fn cotangent(c: &mut Criterion) {
    let rs = RootSystem::from_spec("E8").unwrap();
    c.bench_function("remark10 E8", |b| b.iter(|| verify_remark10(black_box(&rs))));
    c.bench_function("descent chains E8", |b| b.iter(|| verify_prop11_induction(black_box(&rs))));
}

fn surface(c: &mut Criterion) {
    let rs = RootSystem::from_spec("E8").unwrap();
    let lattice = resolution_lattice(&rs);
    c.bench_function("(-2)-classes E8", |b| b.iter(|| black_box(&lattice).minus_two_classes()));
}

fn obstruction(c: &mut Criterion) {
    let rs = RootSystem::from_spec("D5").unwrap();
    let k = ChevalleyConstants::build(&rs).unwrap();
    c.bench_function("system D5", |b| b.iter(|| build_system(&rs, &k, Half::NegativeHalf).unwrap()));
    let sys = build_system(&rs, &k, Half::NegativeHalf).unwrap();
    c.bench_function("bianchi D5", |b| b.iter(|| check_bianchi(&sys, &k)));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = roots, flag, chevalley, cotangent, surface, obstruction
}
criterion_main!(benches);
