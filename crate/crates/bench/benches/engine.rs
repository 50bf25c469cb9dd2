use criterion::{criterion_group, criterion_main, Criterion};
use psdual_core::module::{is_self_dual, IsoOptions};
use psdual_core::spaces::{rp, SpaceSpec};
use psdual_core::steenrod::{adem_reduce, subalgebra_basis};
use psdual_core::{Letter, Prime, SubalgebraSpec};
use std::hint::black_box;

fn adem(c: &mut Criterion) {
    let word = [Letter::Sq(3), Letter::Sq(5), Letter::Sq(7), Letter::Sq(9)];
    c.bench_function("adem Sq3 Sq5 Sq7 Sq9", |b| b.iter(|| adem_reduce(Prime::TWO, black_box(&word))));
    let odd = [Letter::P(1), Letter::Beta, Letter::P(2), Letter::P(3)];
    c.bench_function("adem P1 b P2 P3 at 3", |b| b.iter(|| adem_reduce(Prime::THREE, black_box(&odd))));
}

fn subalgebras(c: &mut Criterion) {
    c.bench_function("A(2) basis", |b| b.iter(|| subalgebra_basis(&SubalgebraSpec::new(Prime::TWO, 2))));
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("A(3) basis", |b| b.iter(|| subalgebra_basis(&SubalgebraSpec::new(Prime::TWO, 3))));
    g.finish();
}

fn self_duality(c: &mut Criterion) {
    let r = rp(23).unwrap();
    for k in [1, 2, 3] {
        let spec = SubalgebraSpec::new(Prime::TWO, k);
        let m = r.module(spec).unwrap();
        c.bench_function(&format!("RP^23 self-dual over A({k})"), |b| {
            b.iter(|| is_self_dual(black_box(&m), &spec, 23).unwrap())
        });
    }
}

fn reports(c: &mut Criterion) {
    let ps = [Prime::TWO, Prime::THREE, Prime::FIVE];
    let space = "cp:11".parse::<SpaceSpec>().unwrap().build(&ps).unwrap();
    c.bench_function("CP^11 report", |b| b.iter(|| space.report(&IsoOptions::default()).unwrap()));
}

criterion_group!(benches, adem, subalgebras, self_duality, reports);
criterion_main!(benches);
