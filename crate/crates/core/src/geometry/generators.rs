//! Named test bodies.

use std::f64::consts::PI;

use super::linalg::{Point, MAX_DIM};
use super::polytope::Polytope;
use crate::error::{Error, Result};

fn check(n: usize, t: f64) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveSide(t));
    }
    Ok(())
}

/// The cube `[0, t]^n`.
pub fn cube(n: usize, t: f64) -> Result<Polytope> {
    box_body(&vec![t; n])
}

/// The box `[0, a_1] x ... x [0, a_n]`.
pub fn box_body(sides: &[f64]) -> Result<Polytope> {
    let n = sides.len();
    for &a in sides {
        check(n, a)?;
    }
    let pts: Vec<Point> = (0..1u32 << n)
        .map(|mask| {
            let mut p = Point::ZERO;
            for (i, &a) in sides.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p[i] = a;
                }
            }
            p
        })
        .collect();
    Polytope::from_points(n, &pts)
}

/// The corner simplex `conv(0, t e_1, ..., t e_n)`.
pub fn simplex(n: usize, t: f64) -> Result<Polytope> {
    check(n, t)?;
    let mut pts = vec![Point::ZERO];
    pts.extend((0..n).map(|i| Point::unit(i) * t));
    Polytope::from_points(n, &pts)
}

/// `conv(+-t e_i)`.
pub fn cross_polytope(n: usize, t: f64) -> Result<Polytope> {
    check(n, t)?;
    let pts: Vec<Point> = (0..n).flat_map(|i| [Point::unit(i) * t, Point::unit(i) * -t]).collect();
    Polytope::from_points(n, &pts)
}

/// Deterministic, roughly uniform directions on the unit sphere of `R^n`.
fn sphere_directions(n: usize, count: usize) -> Vec<Point> {
    match n {
        1 => vec![Point::unit(0), -Point::unit(0)],
        2 => (0..count)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / count as f64;
                Point::from_slice(&[a.cos(), a.sin()])
            })
            .collect(),
        3 => {
            // Fibonacci lattice
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * i as f64;
                    Point::from_slice(&[r * a.cos(), r * a.sin(), z])
                })
                .collect()
        }
        _ => {
            // Hopf coordinates on a product grid
            let m = ((count as f64).cbrt().round() as usize).max(2);
            let mut out = Vec::with_capacity(m * m * m);
            for j in 0..m {
                let eta = ((j as f64 + 0.5) / m as f64).sqrt().asin();
                for a in 0..m {
                    let xi1 = 2.0 * PI * (a as f64 + 0.5 * (j % 2) as f64) / m as f64;
                    for b in 0..m {
                        let xi2 = 2.0 * PI * (b as f64 + 0.5 * (a % 2) as f64) / m as f64;
                        out.push(Point::from_slice(&[
                            eta.cos() * xi1.cos(),
                            eta.cos() * xi1.sin(),
                            eta.sin() * xi2.cos(),
                            eta.sin() * xi2.sin(),
                        ]));
                    }
                }
            }
            out
        }
    }
}

/// Polytope inscribed in the ball of radius `radius`. In the plane this is the
/// regular `refinement`-gon; in higher dimension the hull of about `refinement`
/// sphere points.
pub fn ball_approx(n: usize, radius: f64, refinement: usize) -> Result<Polytope> {
    check(n, radius)?;
    if refinement < n + 1 {
        return Err(Error::Invalid(format!("ball approximant needs at least {} facets", n + 1)));
    }
    let pts: Vec<Point> = sphere_directions(n, refinement).into_iter().map(|p| p * radius).collect();
    let body = Polytope::from_points(n, &pts)?;
    if !body.is_full_dimensional() {
        return Err(Error::DegenerateBody);
    }
    Ok(body)
}

/// Inner and outer polytopes with `inner ⊆ B ⊆ outer` for the unit ball `B`.
pub fn ball_bracket(n: usize, refinement: usize) -> Result<(Polytope, Polytope)> {
    let inner = ball_approx(n, 1.0, refinement)?;
    let inradius = inner.facets().iter().map(|f| f.offset).fold(f64::INFINITY, f64::min);
    if !(inradius > 0.0) {
        return Err(Error::DegenerateBody);
    }
    let outer = inner.scale(1.0 / inradius)?;
    Ok((inner, outer))
}
