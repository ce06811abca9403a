use criterion::{criterion_group, criterion_main, Criterion};
use sympow_core::counting::{self, AffineVarietySpec, CountCaps};
use sympow_core::etale::{self, ExtensionSpec};
use sympow_core::invariant;
use sympow_core::poly::Caps;
use sympow_core::transfer;

fn bench_groebner_elimination(c: &mut Criterion) {
    let caps = Caps::default();
    c.bench_function("presentation/eliminate-4-of-9", |b| {
        b.iter(|| invariant::compute_presentation(&caps).unwrap())
    });
}

fn bench_sym_counts(c: &mut Criterion) {
    let caps = CountCaps::default();
    let plane = AffineVarietySpec::affine_plane(3);
    c.bench_function("count/sym3-plane-f3", |b| {
        b.iter(|| counting::sym_count(&plane, 3, &caps).unwrap().count)
    });
    c.bench_function("count/orbit-oracle-sym3-plane-f3", |b| {
        b.iter(|| counting::sym_count_oracle(&plane, 3, &caps).unwrap().count)
    });
}

fn bench_symmetrizer(c: &mut Criterion) {
    c.bench_function("transfer/symmetrizer-rank-d3-n4", |b| {
        b.iter(|| {
            let m = transfer::tensor_power_module(3, 4).unwrap();
            transfer::projector_sym(&m).unwrap().2.rank
        })
    });
}

fn bench_invariant_basis(c: &mut Criterion) {
    c.bench_function("etale/invariants-r4-n4", |b| {
        b.iter(|| {
            let spec = ExtensionSpec::canonical(3, 4).unwrap();
            etale::build_invariants(spec, 4).unwrap().dim()
        })
    });
}

criterion_group!(
    kernels,
    bench_groebner_elimination,
    bench_sym_counts,
    bench_symmetrizer,
    bench_invariant_basis
);
criterion_main!(kernels);
