//! Closed-form intrinsic volumes of polytopes.
//!
//! Intrinsic volumes do not depend on the ambient space, so everything is
//! computed relative to the affine hull of dimension `r`:
//! `mu_r` is the relative volume, `mu_{r-1}` half the facet volume, and for
//! `r = 3` the remaining `mu_1` is the edge sum `sum len(e) * theta(e) / 2pi` over
//! exterior dihedral angles. Four-dimensional bodies have no closed form for
//! `mu_1` and `mu_2` here.

use std::f64::consts::PI;

use super::hull::Facet;
use super::polytope::Polytope;
use crate::error::{Error, Result};

fn facet_volume(p: &Polytope, f: &Facet) -> Result<f64> {
    let r = p.affine_dim();
    match r {
        0 => Ok(0.0),
        1 => Ok(1.0),
        2 => {
            let v = p.vertices();
            let mut len = 0.0f64;
            for (a, &i) in f.vertices.iter().enumerate() {
                for &j in &f.vertices[a + 1..] {
                    len = len.max(v[i].dist(&v[j]));
                }
            }
            Ok(len)
        }
        _ => {
            let pts: Vec<_> = f.vertices.iter().map(|&i| p.vertices()[i]).collect();
            Ok(Polytope::from_points(p.dim(), &pts)?.relative_volume())
        }
    }
}

/// Total `(r-1)`-volume of the relative boundary (perimeter, surface area, ...).
pub fn boundary_volume(p: &Polytope) -> Result<f64> {
    if p.affine_dim() == 0 {
        return Ok(0.0);
    }
    p.facets().iter().map(|f| facet_volume(p, f)).sum()
}

fn edge_angle_sum(p: &Polytope) -> f64 {
    let facets = p.facets();
    let v = p.vertices();
    let mut total = 0.0;
    for i in 0..facets.len() {
        for j in i + 1..facets.len() {
            let common: Vec<usize> =
                facets[i].vertices.iter().copied().filter(|x| facets[j].vertices.contains(x)).collect();
            if common.len() < 2 {
                continue;
            }
            let mut len = 0.0f64;
            for (a, &x) in common.iter().enumerate() {
                for &y in &common[a + 1..] {
                    len = len.max(v[x].dist(&v[y]));
                }
            }
            let theta = facets[i].normal.dot(&facets[j].normal).clamp(-1.0, 1.0).acos();
            total += len * theta;
        }
    }
    total / (2.0 * PI)
}

/// `mu_k(P)` from the face structure.
pub fn intrinsic_volume(p: &Polytope, k: usize) -> Result<f64> {
    let r = p.affine_dim();
    if k > p.dim() {
        return Err(Error::OutOfRange { what: "degree", value: k as i64, lo: 0, hi: p.dim() as i64 });
    }
    if k == 0 {
        return Ok(1.0);
    }
    if k > r {
        return Ok(0.0);
    }
    if k == r {
        return Ok(p.relative_volume());
    }
    if k + 1 == r {
        return Ok(0.5 * boundary_volume(p)?);
    }
    if r == 3 && k == 1 {
        return Ok(edge_angle_sum(p));
    }
    Err(Error::Unsupported(format!("closed-form mu_{k} of a {r}-dimensional polytope")))
}

/// `(mu_0, ..., mu_n)`.
pub fn intrinsic_volumes(p: &Polytope) -> Result<Vec<f64>> {
    (0..=p.dim()).map(|k| intrinsic_volume(p, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cube, simplex, Frame, Point};

    #[test]
    fn unit_cube() {
        let v = intrinsic_volumes(&cube(3, 1.0).unwrap()).unwrap();
        for (got, want) in v.iter().zip([1.0, 3.0, 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn corner_simplex_edge_sum() {
        // three axis edges with angle pi/2, three diagonal edges of length sqrt 2
        let s = simplex(3, 1.0).unwrap();
        let slanted = PI - (1.0 / 3f64.sqrt()).acos();
        let want = (3.0 * PI / 2.0 + 3.0 * 2f64.sqrt() * slanted) / (2.0 * PI);
        assert!((intrinsic_volume(&s, 1).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn lower_dimensional_square_in_space() {
        let f = Frame::new(3, vec![Point::unit(0), Point::unit(2)]).unwrap();
        let q = Polytope::unit_cube_in(&f).unwrap();
        let v = intrinsic_volumes(&q).unwrap();
        for (got, want) in v.iter().zip([1.0, 2.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn four_dimensional_middle_degrees_are_unsupported() {
        let c = cube(4, 1.0).unwrap();
        assert!(intrinsic_volume(&c, 3).is_ok());
        assert!(matches!(intrinsic_volume(&c, 2), Err(Error::Unsupported(_))));
    }
}
