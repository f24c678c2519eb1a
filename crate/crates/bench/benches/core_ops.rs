use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use fhs_core::fhs::{hom_fhs, ker_coker_fhs};
use fhs_core::fixtures;
use fhs_core::functors::iota_fhs;
use fhs_core::io::{parse, print_payload, Payload};
use fhs_core::random::{FhsShape, Gen};
use fhs_core::report;

fn hom(c: &mut Criterion) {
    let mut g = Gen::new(7);
    let shape = FhsShape::small(2);
    let (x, y) = (g.fhs(&shape), g.fhs(&shape));
    c.bench_function("hom_fhs level 2", |b| b.iter(|| hom_fhs(black_box(&x), black_box(&y)).unwrap()));
}

fn ker_coker(c: &mut Criterion) {
    let f = Gen::new(11).interesting_morphism(&FhsShape::small(2));
    c.bench_function("ker_coker_fhs level 2", |b| b.iter(|| ker_coker_fhs(black_box(&f)).unwrap()));
}

fn albanese(c: &mut Criterion) {
    let r = fixtures::surface();
    c.bench_function("esv surface", |b| b.iter(|| report::esv(black_box(&r)).unwrap()));
}

fn iota(c: &mut Criterion) {
    let x = fixtures::generic_level_two();
    c.bench_function("iota by 2", |b| b.iter(|| iota_fhs(black_box(&x), 2).unwrap()));
}

fn documents(c: &mut Criterion) {
    let text = print_payload(Payload::Fhs(fixtures::generic_level_two()));
    c.bench_function("parse fhs", |b| b.iter(|| parse(black_box(&text)).unwrap()));
    let doc = parse(&text).unwrap();
    c.bench_function("print fhs", |b| b.iter(|| print_payload(black_box(doc.payload.clone()))));
}

criterion_group!(benches, hom, ker_coker, albanese, iota, documents);
criterion_main!(benches);
