mod common;

use common::*;
use std::f64::consts::PI;
use valgeo::algebra::{Constant, InvariantValuation, ScaledRational, SoAlgebra};
use valgeo::geometry::{cube, intrinsic_volumes, Polytope};
use valgeo::harness::*;
use valgeo::sampling::{haar_rotation, RngStream};

fn square() -> Polytope {
    cube(2, 1.0).unwrap()
}

fn triangle() -> Polytope {
    Polytope::hull(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], 2).unwrap()
}

fn rows2(p: &Polytope) -> Vec<[f64; 2]> {
    p.vertex_rows().iter().map(|v| [v[0], v[1]]).collect()
}

#[test]
fn squares_pin_the_normalization() {
    let e = intersection_kinematic_mc(0, &square(), &square(), 200_000, RngStream::new(61)).unwrap();
    assert!(z_score(&e, 2.0 + 8.0 / PI) <= Z_MAX, "{e:?}");
}

#[test]
fn all_degrees_match_tables_for_squares_and_tiny_square() {
    let alg = SoAlgebra::new(2).unwrap();
    let tiny = cube(2, 0.01).unwrap();
    for (i, b) in [square(), tiny].iter().enumerate() {
        let est = intersection_kinematic_mc_all(&square(), b, 100_000, RngStream::with_stream(62, i as u64)).unwrap();
        for (k, e) in est.iter().enumerate() {
            let p = predict(&alg, Formula::Intersection, k, &square(), b).unwrap();
            assert!(z_score(e, p) <= Z_MAX, "body {i} k={k}: {e:?} vs {p}");
        }
    }
}

#[test]
fn additive_examples() {
    let q = square();
    let est = additive_kinematic_mc_all(&q, &q, 50_000, RngStream::new(63)).unwrap();
    assert_eq!(est[0].value, 1.0);
    assert_eq!(est[0].stderr, 0.0);
    assert!((est[1].value - 4.0).abs() < 1e-10 && est[1].stderr < 1e-10);
    assert!(z_score(&est[2], 2.0 + 8.0 / PI) <= Z_MAX, "{:?}", est[2]);
    // rotation average of 1 + 1 + 2 V(A, gB) equals the same number
    let mut rng = RngStream::new(64).rng();
    let xs: Vec<f64> = (0..20_000)
        .map(|_| {
            let g = haar_rotation(&mut rng, 2).unwrap();
            2.0 + 2.0 * mixed_area_edges(&rows2(&q), &rows2(&q.rotate(&g).unwrap()))
        })
        .collect();
    let (m, se) = mean_se(&xs);
    assert!((m - (2.0 + 8.0 / PI)).abs() < 4.0 * se);
}

#[test]
fn additive_matches_dualized_kinematic_table() {
    let alg = SoAlgebra::new(2).unwrap();
    let (a, b) = (square(), cube(2, 0.7).unwrap().translate(&[-0.35, -0.35]).unwrap());
    let est = additive_kinematic_mc_all(&a, &b, 50_000, RngStream::new(65)).unwrap();
    let (ma, mb) = (intrinsic_volumes(&a).unwrap(), intrinsic_volumes(&b).unwrap());
    for k in 0..=2 {
        let dual_mu = alg.dual(&InvariantValuation::mu(2, k).unwrap()).unwrap();
        let t = alg.kinematic_of(&dual_mu).unwrap().dual_both();
        assert!(z_score(&est[k], t.evaluate(&ma, &mb).unwrap()) <= Z_MAX, "k={k}");
    }
}

#[test]
fn support_body_characterizes_nonempty_intersections() {
    let a = triangle();
    let b = square();
    let mut rng = RngStream::new(66).rng();
    let g = haar_rotation(&mut rng, 2).unwrap();
    let gb = b.rotate(&g).unwrap();
    let support = a.minkowski_sum(&gb.reflect()).unwrap();
    let (ta, tb) = (rows2(&a), rows2(&gb));
    let h = 5.0 / 200.0;
    for i in 0..200 {
        for j in 0..200 {
            let x = [-2.5 + (i as f64 + 0.5) * h, -2.5 + (j as f64 + 0.5) * h];
            let deep_in = support.contains(&x, -1e-6).unwrap();
            let far_out = !support.contains(&x, 1e-6).unwrap();
            if !(deep_in || far_out) {
                continue;
            }
            let moved: Vec<[f64; 2]> = tb.iter().map(|p| [p[0] + x[0], p[1] + x[1]]).collect();
            assert_eq!(polygons_meet(&ta, &moved), deep_in, "x={x:?}");
            let cut = a.intersect(&gb.translate(&x).unwrap()).unwrap();
            assert_eq!(cut.is_some(), deep_in, "x={x:?}");
        }
    }
}

#[test]
fn stderr_scales_like_inverse_root() {
    let mut prev: Option<f64> = None;
    for (i, m) in [20_000, 40_000, 80_000].iter().enumerate() {
        let e = intersection_kinematic_mc(1, &square(), &triangle(), *m, RngStream::with_stream(67, i as u64)).unwrap();
        if let Some(p) = prev {
            let ratio = p / e.stderr;
            assert!((2f64.sqrt() / 2.0..=2.0 * 2f64.sqrt()).contains(&ratio), "ratio {ratio}");
        }
        prev = Some(e.stderr);
    }
}

fn small_suite() -> SuiteConfig {
    SuiteConfig {
        formulas: vec![Formula::Intersection, Formula::Additive],
        pairs: vec![
            (NamedBody::new("square", square()), NamedBody::new("square", square())),
            (NamedBody::new("square", square()), NamedBody::new("triangle", triangle())),
        ],
        samples: 100_000,
        z_max: Z_MAX,
    }
}

#[test]
fn suite_passes_and_is_reproducible() {
    let alg = SoAlgebra::new(2).unwrap();
    let a = run_identity_suite(&alg, &small_suite(), RngStream::new(68)).unwrap();
    assert!(a.pass, "{:#?}", a.comparisons.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    assert_eq!(a.comparisons.len(), 2 * 2 * 3);
    let b = run_identity_suite(&alg, &small_suite(), RngStream::new(68)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn corrupted_table_fails_the_suite() {
    let alg = SoAlgebra::new(2).unwrap();
    let bad = alg.perturbed(Constant::Kinematic { k: 0, i: 1, j: 1 }, &ScaledRational::ratio(21, 20));
    let r = run_identity_suite(&bad, &small_suite(), RngStream::new(69)).unwrap();
    assert!(!r.pass);
}

#[test]
fn convolution_campaign_passes() {
    let r = convolution_campaign(2, 5, 6, 1e-6, RngStream::new(70)).unwrap();
    assert!(r.pass, "{}", r.max_relative_error);
    assert_eq!(r.checks.len(), 5);
}
