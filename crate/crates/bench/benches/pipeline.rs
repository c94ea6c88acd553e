use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;
use weier_core::algebraic::TowerContext;
use weier_core::curve::Curve;
use weier_core::differentials::{construct_third_kind, haupt_eval, third_kind, third_kind_system_sym};
use weier_core::exact::{rat, BPoly, UPoly};

fn cubic() -> Curve {
    Curve::new(BPoly::from_terms([
        ((3, 0), rat(1)),
        ((0, 3), rat(-1)),
        ((1, 1), rat(2)),
        ((1, 0), rat(1)),
        ((0, 1), rat(-2)),
        ((0, 0), rat(1)),
    ]))
    .unwrap()
}

fn differentials(c: &mut Criterion) {
    let curve = cubic();
    let (ctx, p1) = curve.section_point(&rat(0), 0, &TowerContext::new()).unwrap();
    let (ctx, p2) = curve.section_point(&rat(1), 0, &ctx).unwrap();
    let (ctx, a1) = curve.section_point(&rat(2), 0, &ctx).unwrap();
    let (_, pp) = curve.section_point(&rat(3), 0, &ctx).unwrap();

    c.bench_function("cubic symmetrized system", |b| {
        b.iter(|| third_kind_system_sym(black_box(&curve), &p1, &p2).unwrap())
    });
    c.bench_function("cubic construct", |b| b.iter(|| construct_third_kind(black_box(&curve), &p1, &p2).unwrap()));
    c.bench_function("cubic construct and certify", |b| b.iter(|| third_kind(black_box(&curve), &p1, &p2).unwrap()));
    c.bench_function("cubic fundamental function", |b| {
        b.iter(|| haupt_eval(black_box(&curve), &p1, &p2, &pp, std::slice::from_ref(&a1)).unwrap())
    });
}

fn kernels(c: &mut Criterion) {
    let p = UPoly::from_ints(&[7, -3, 0, 5, -2, 0, 1]);
    c.bench_function("power sums degree 6", |b| b.iter(|| black_box(&p).power_sums(12).unwrap()));

    let (ctx, a) = TowerContext::new().adjoin(&UPoly::from_ints(&[1, -2, 0, -1]), 0).unwrap();
    let (_, b) = ctx.adjoin(&UPoly::from_ints(&[3, 0, 0, -1]), 0).unwrap();
    let x = &(&a * &a) + &b;
    let y = &(&a * &b) - &a;
    c.bench_function("tower multiply", |bch| bch.iter(|| black_box(&x) * black_box(&y)));
    c.bench_function("tower invert", |bch| bch.iter_batched(|| x.clone(), |v| v.invert().unwrap(), BatchSize::SmallInput));
    c.bench_function("approximate 100 digits", |bch| bch.iter(|| black_box(&y).approximate(100)));
}

criterion_group!(benches, differentials, kernels);
criterion_main!(benches);
