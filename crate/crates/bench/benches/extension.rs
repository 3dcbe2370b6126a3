use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use selfext_core::instances::{mt4, mt5};
use selfext_core::r3::r3_extend;
use selfext_core::rational::{int, rat};
use selfext_core::{min_norm_extension, ExtensionProblem, Mat, PolyhedralSpace, Subspace};

fn sum_zero(n: usize, op: Mat) -> ExtensionProblem {
    let x = PolyhedralSpace::l1(n);
    ExtensionProblem::new(x.clone(), Subspace::sum_zero(x).unwrap(), op).unwrap()
}

fn extension_lp(c: &mut Criterion) {
    let p4 = sum_zero(4, mt4());
    c.bench_function("min_norm_extension l1:4", |b| b.iter(|| min_norm_extension(black_box(&p4)).unwrap()));
    let p5 = sum_zero(5, mt5());
    c.bench_function("min_norm_extension l1:5", |b| b.iter(|| min_norm_extension(black_box(&p5)).unwrap()));
}

fn subspace_vertices(c: &mut Criterion) {
    for n in [4, 6] {
        let y = Subspace::sum_zero(PolyhedralSpace::l1(n)).unwrap();
        c.bench_function(&format!("sum-zero ball vertices l1:{n}"), |b| b.iter(|| black_box(&y).ball_vertices().unwrap()));
    }
    let y = Subspace::kernel_of(PolyhedralSpace::linf(6), &[int(1), int(2), int(-1), int(0), int(3), int(1)]).unwrap();
    c.bench_function("hyperplane ball vertices linf:6", |b| b.iter(|| black_box(&y).ball_vertices().unwrap()));
}

fn plane_extension(c: &mut Criterion) {
    let f = [int(1), int(2), int(-3)];
    let t = Mat::from_row_major(2, 2, vec![rat(1, 2), rat(-3, 4), rat(2, 3), int(1)]).unwrap();
    c.bench_function("r3_extend", |b| b.iter(|| r3_extend(black_box(&f), black_box(&t)).unwrap()));
}

criterion_group!(benches, extension_lp, subspace_vertices, plane_extension);
criterion_main!(benches);
