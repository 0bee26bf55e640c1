//! Oracles shared by the integration tests. Nothing here calls the library's
//! hull, intersection or volume code.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// `p` in the closed triangle `abc`.
pub fn in_triangle(p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    let d1 = cross(a, b, p);
    let d2 = cross(b, c, p);
    let d3 = cross(c, a, p);
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// Brute-force extreme points: a point is not extreme iff it lies in a
/// triangle spanned by three other points (or duplicates an earlier one).
pub fn extreme_points_brute(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let m = pts.len();
    let mut out = Vec::new();
    'outer: for i in 0..m {
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    if [a, b, c].contains(&i) {
                        continue;
                    }
                    if in_triangle(pts[i], pts[a], pts[b], pts[c]) {
                        continue 'outer;
                    }
                }
            }
        }
        out.push(pts[i]);
    }
    out
}

/// Membership in the hull of `pts` by triangle cover.
pub fn in_hull_brute(p: [f64; 2], pts: &[[f64; 2]]) -> bool {
    let m = pts.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                if in_triangle(p, pts[a], pts[b], pts[c]) {
                    return true;
                }
            }
        }
    }
    false
}

/// Polygon vertices sorted counterclockwise around their mean.
pub fn ccw(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / pts.len() as f64;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / pts.len() as f64;
    pts.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    pts
}

pub fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let m = poly.len();
    (0..m).map(|i| poly[i][0] * poly[(i + 1) % m][1] - poly[(i + 1) % m][0] * poly[i][1]).sum::<f64>().abs() / 2.0
}

pub fn support2(pts: &[[f64; 2]], u: [f64; 2]) -> f64 {
    pts.iter().map(|p| p[0] * u[0] + p[1] * u[1]).fold(f64::NEG_INFINITY, f64::max)
}

/// Mixed area `V(K, L) = 1/2 sum_e h_K(u_e) len(e)` over the edges of the convex polygon `l`.
pub fn mixed_area_edges(k: &[[f64; 2]], l: &[[f64; 2]]) -> f64 {
    let l = ccw(l.to_vec());
    let m = l.len();
    let mut s = 0.0;
    for i in 0..m {
        let (a, b) = (l[i], l[(i + 1) % m]);
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len = (dx * dx + dy * dy).sqrt();
        let u = [dy / len, -dx / len];
        s += support2(k, u) * len;
    }
    s / 2.0
}

/// Separating-axis test for two convex polygons given by their vertices.
pub fn polygons_meet(p: &[[f64; 2]], q: &[[f64; 2]]) -> bool {
    for poly in [p, q] {
        let poly = ccw(poly.to_vec());
        let m = poly.len();
        for i in 0..m {
            let (a, b) = (poly[i], poly[(i + 1) % m]);
            let n = [b[1] - a[1], a[0] - b[0]];
            let proj = |s: &[[f64; 2]]| {
                s.iter().map(|v| v[0] * n[0] + v[1] * n[1]).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
            };
            let (lp, hp) = proj(p);
            let (lq, hq) = proj(q);
            if hp < lq || hq < lp {
                return false;
            }
        }
    }
    true
}

/// Barycentric membership in a 3-simplex.
pub fn in_tetra(p: [f64; 3], t: &[[f64; 3]; 4]) -> bool {
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let det = |a: [f64; 3], b: [f64; 3], c: [f64; 3]| {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
    };
    let (e1, e2, e3, d) = (sub(t[1], t[0]), sub(t[2], t[0]), sub(t[3], t[0]), sub(p, t[0]));
    let v = det(e1, e2, e3);
    let l1 = det(d, e2, e3) / v;
    let l2 = det(e1, d, e3) / v;
    let l3 = det(e1, e2, d) / v;
    l1 >= 0.0 && l2 >= 0.0 && l3 >= 0.0 && l1 + l2 + l3 <= 1.0
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize, m: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..m).map(|_| (0..n).map(|_| rng.random_range(lo..hi)).collect()).collect()
}

/// Unit-ball volumes by `omega_k = 2 pi / k * omega_{k-2}`.
pub fn ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / k as f64 * ball_volume(k - 2),
    }
}

pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
