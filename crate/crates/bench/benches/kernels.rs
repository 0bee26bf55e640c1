use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use valgeo::algebra::{exact_suite, SoAlgebra};
use valgeo::geometry::{ball_approx, cube, simplex};
use valgeo::harness::intersection_kinematic_mc_all;
use valgeo::sampling::{random_polytope, uniform_in_polytope, RngStream};
use valgeo::valuations::{formal_convolve, formal_evaluate, mu_a_expand};
use valgeo::Polytope;

fn points(n: usize, m: usize) -> Vec<Vec<f64>> {
    let mut rng = RngStream::new(1).rng();
    let box_ = cube(n, 1.0).unwrap();
    (0..m).map(|_| uniform_in_polytope(&mut rng, &box_).unwrap().point.0[..n].to_vec()).collect()
}

fn hull(c: &mut Criterion) {
    for (n, m) in [(2, 200), (3, 100), (4, 40)] {
        let pts = points(n, m);
        c.bench_function(&format!("hull/{n}d/{m}"), |b| b.iter(|| Polytope::hull(black_box(&pts), n).unwrap()));
    }
}

fn minkowski(c: &mut Criterion) {
    let a = ball_approx(3, 1.0, 60).unwrap();
    let s = simplex(3, 1.0).unwrap();
    c.bench_function("minkowski/ball60+simplex", |b| b.iter(|| black_box(&a).minkowski_sum(&s).unwrap()));
}

fn intersect(c: &mut Criterion) {
    let a = cube(3, 1.0).unwrap();
    let b = simplex(3, 1.5).unwrap().translate(&[0.2, 0.2, 0.2]).unwrap();
    c.bench_function("intersect/cube∩simplex", |bn| bn.iter(|| black_box(&a).intersect(&b).unwrap()));
}

fn monte_carlo(c: &mut Criterion) {
    let sq = cube(2, 1.0).unwrap();
    c.bench_function("kinematic_mc/2d/4096", |b| {
        b.iter(|| intersection_kinematic_mc_all(&sq, &sq, 4096, RngStream::new(2)).unwrap())
    });
}

fn convolution(c: &mut Criterion) {
    let mut rng = RngStream::new(3).rng();
    let a = random_polytope(&mut rng, 3, 6).unwrap();
    let b = random_polytope(&mut rng, 3, 6).unwrap();
    let k = random_polytope(&mut rng, 3, 6).unwrap();
    c.bench_function("formal_convolve/3d", |bn| {
        bn.iter(|| formal_evaluate(&formal_convolve(&mu_a_expand(&a), &mu_a_expand(&b)).unwrap(), &k).unwrap())
    });
}

fn exact(c: &mut Criterion) {
    for n in [2, 4] {
        c.bench_function(&format!("exact_suite/n={n}"), |b| b.iter(|| exact_suite(&SoAlgebra::new(n).unwrap()).unwrap()));
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = hull, minkowski, intersect, monte_carlo, convolution, exact
}
criterion_main!(benches);
