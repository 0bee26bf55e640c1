//! Convex hulls in dimension up to four.
//!
//! Full-dimensional inputs in the plane use the monotone chain; in three and four
//! dimensions a beneath-beyond insertion over simplicial facets is used. Lower
//! dimensional inputs are first expressed in an orthonormal frame of their affine
//! hull. Simplicial facets are then merged into true facets and the surviving
//! vertices are filtered down to the extreme points.

use std::collections::HashMap;

use super::linalg::{affine_basis, orthogonal_complement, Point, MAX_DIM};
use crate::error::{Error, Result};

/// Relative tolerance for visibility and incidence tests (scaled by the input's
/// coordinate magnitude).
pub(crate) const EPS_HULL: f64 = 1e-10;
/// Absolute tolerance for vertex deduplication.
pub const EPS_VERTEX: f64 = 1e-9;

/// A facet of the relative boundary: `normal . x <= offset` with unit `normal`
/// lying in the direction space of the affine hull.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Point,
    pub offset: f64,
    /// Indices into the canonical vertex list.
    pub vertices: Vec<usize>,
}

/// Everything derived from a point set at construction time.
#[derive(Clone, Debug)]
pub(crate) struct Shape {
    pub affine_dim: usize,
    /// Orthonormal directions spanning the affine hull.
    pub basis: Vec<Point>,
    pub vertices: Vec<Point>,
    pub facets: Vec<Facet>,
    /// Volume relative to the affine hull (length of a segment, area of a planar polygon, ...).
    pub relative_volume: f64,
    pub scale: f64,
}

pub(crate) fn coordinate_scale(points: &[Point]) -> f64 {
    points.iter().fold(1.0f64, |m, p| m.max(p.max_abs()))
}

pub(crate) fn build(dim: usize, input: &[Point]) -> Result<Shape> {
    if input.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut points: Vec<Point> = input.to_vec();
    points.sort_by(|a, b| a.lex_cmp(b));
    points.dedup();
    let scale = coordinate_scale(&points);
    let tol = EPS_HULL * scale;

    let (_, aff_basis, chosen) = affine_basis(&points, 10.0 * tol);
    let r = aff_basis.len();
    let (origin, basis) = if r == dim {
        (Point::ZERO, (0..dim).map(Point::unit).collect::<Vec<_>>())
    } else {
        (points[0], aff_basis)
    };
    let local: Vec<Point> = if r == dim {
        points.clone()
    } else {
        points
            .iter()
            .map(|p| {
                let d = *p - origin;
                let mut y = Point::ZERO;
                for (i, b) in basis.iter().enumerate() {
                    y[i] = d.dot(b);
                }
                y
            })
            .collect()
    };

    let (candidates, local_facets, relative_volume) = match r {
        0 => (vec![0], Vec::new(), 1.0),
        1 => {
            let (lo, hi) = extremes_1d(&local);
            let len = local[hi][0] - local[lo][0];
            let facets = vec![
                LocalFacet { normal: -Point::unit(0), offset: -local[lo][0] },
                LocalFacet { normal: Point::unit(0), offset: local[hi][0] },
            ];
            (vec![lo, hi], facets, len)
        }
        2 => {
            let ring = monotone_chain(&local, tol);
            let area = shoelace(&local, &ring);
            let mut facets = Vec::with_capacity(ring.len());
            for i in 0..ring.len() {
                let a = local[ring[i]];
                let b = local[ring[(i + 1) % ring.len()]];
                let e = b - a;
                let mut nrm = Point::ZERO;
                nrm[0] = e[1];
                nrm[1] = -e[0];
                let nrm = nrm * (1.0 / nrm.norm());
                facets.push(LocalFacet { normal: nrm, offset: nrm.dot(&a) });
            }
            (ring, facets, area)
        }
        _ => {
            let mut init = vec![0usize];
            init.extend_from_slice(&chosen);
            if r == dim {
                // chosen indices refer to the same sorted point list either way
            }
            let simplices = beneath_beyond(r, &local, &init, tol);
            let interior = centroid(&local, &init);
            let mut volume = 0.0;
            let mut verts = Vec::new();
            let mut raw = Vec::with_capacity(simplices.len());
            let fact: f64 = (1..=r).map(|i| i as f64).product();
            for s in &simplices {
                let diffs: Vec<Point> = (0..r).map(|i| local[s.v[i]] - interior).collect();
                let mut m = [[0.0; MAX_DIM]; MAX_DIM];
                for (i, d) in diffs.iter().enumerate() {
                    m[i] = d.0;
                }
                volume += super::linalg::det(r, &m).abs() / fact;
                verts.extend_from_slice(&s.v[..r]);
                raw.push(LocalFacet { normal: s.n, offset: s.b });
            }
            verts.sort_unstable();
            verts.dedup();
            (verts, merge_facets(raw, tol), volume)
        }
    };

    // extremality filter: a boundary point is a vertex iff the facets through
    // it have normals spanning the affine hull's direction space
    let on_tol = 10.0 * tol;
    let mut extreme: Vec<usize> = candidates
        .into_iter()
        .filter(|&i| {
            if r <= 1 {
                return true;
            }
            let active: Vec<Point> = local_facets
                .iter()
                .filter(|f| (f.normal.dot(&local[i]) - f.offset).abs() <= on_tol)
                .map(|f| f.normal)
                .collect();
            rank(&active, 1e-9) >= r
        })
        .collect();
    extreme.sort_unstable();

    let mut vertices: Vec<Point> = Vec::with_capacity(extreme.len());
    for &i in &extreme {
        let p = points[i];
        if !vertices.iter().any(|v| v.dist(&p) <= EPS_VERTEX) {
            vertices.push(p);
        }
    }
    vertices.sort_by(|a, b| a.lex_cmp(b));

    let facets = local_facets
        .iter()
        .map(|lf| {
            let mut normal = Point::ZERO;
            for (i, b) in basis.iter().enumerate() {
                normal += *b * lf.normal[i];
            }
            let normal = normal * (1.0 / normal.norm());
            let base = lf.offset + normal.dot(&origin);
            let incident: Vec<usize> = vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| (normal.dot(v) - base).abs() <= on_tol)
                .map(|(i, _)| i)
                .collect();
            let offset = if incident.is_empty() {
                base
            } else {
                incident.iter().map(|&i| normal.dot(&vertices[i])).fold(f64::MIN, f64::max)
            };
            Facet { normal, offset, vertices: incident }
        })
        .collect();

    Ok(Shape { affine_dim: r, basis, vertices, facets, relative_volume, scale })
}

#[derive(Clone, Copy, Debug)]
struct LocalFacet {
    normal: Point,
    offset: f64,
}

fn extremes_1d(pts: &[Point]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for (i, p) in pts.iter().enumerate() {
        if p[0] < pts[lo][0] {
            lo = i;
        }
        if p[0] > pts[hi][0] {
            hi = i;
        }
    }
    (lo, hi)
}

fn centroid(pts: &[Point], idx: &[usize]) -> Point {
    let mut c = Point::ZERO;
    for &i in idx {
        c += pts[i];
    }
    c * (1.0 / idx.len() as f64)
}

/// Counter-clockwise hull ring (indices) of planar points; collinear points dropped.
fn monotone_chain(pts: &[Point], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]).then(pts[a][1].total_cmp(&pts[b][1])));
    // left turn test with a distance tolerance
    let turns_left = |o: usize, a: usize, b: usize| {
        let (po, pa, pb) = (pts[o], pts[a], pts[b]);
        let cross = (pa[0] - po[0]) * (pb[1] - po[1]) - (pa[1] - po[1]) * (pb[0] - po[0]);
        cross > tol * pb.dist(&po)
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && !turns_left(lower[lower.len() - 2], lower[lower.len() - 1], i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && !turns_left(upper[upper.len() - 2], upper[upper.len() - 1], i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn shoelace(pts: &[Point], ring: &[usize]) -> f64 {
    let mut s = 0.0;
    for i in 0..ring.len() {
        let a = pts[ring[i]];
        let b = pts[ring[(i + 1) % ring.len()]];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s.abs()
}

#[derive(Clone, Debug)]
struct Simplex {
    v: [usize; MAX_DIM],
    n: Point,
    b: f64,
    alive: bool,
}

fn make_simplex(r: usize, pts: &[Point], v: [usize; MAX_DIM], interior: &Point) -> Simplex {
    let diffs: Vec<Point> = (1..r).map(|i| pts[v[i]] - pts[v[0]]).collect();
    let n = orthogonal_complement(r, &diffs);
    let mut n = n * (1.0 / n.norm());
    let mut b = n.dot(&pts[v[0]]);
    if n.dot(interior) > b {
        n = -n;
        b = -b;
    }
    Simplex { v, n, b, alive: true }
}

/// Incremental hull in `R^r` (r = 3 or 4) starting from the simplex `init`.
fn beneath_beyond(r: usize, pts: &[Point], init: &[usize], tol: f64) -> Vec<Simplex> {
    debug_assert_eq!(init.len(), r + 1);
    let interior = centroid(pts, init);
    let mut facets: Vec<Simplex> = Vec::new();
    for skip in 0..=r {
        let mut v = [usize::MAX; MAX_DIM];
        let mut c = 0;
        for (j, &i) in init.iter().enumerate() {
            if j != skip {
                v[c] = i;
                c += 1;
            }
        }
        facets.push(make_simplex(r, pts, v, &interior));
    }

    let mut order: Vec<usize> = (0..pts.len()).filter(|i| !init.contains(i)).collect();
    order.sort_by(|&a, &b| pts[b].dist(&interior).total_cmp(&pts[a].dist(&interior)));

    let mut ridges: HashMap<[usize; 3], u32> = HashMap::new();
    let mut visible: Vec<usize> = Vec::new();
    for &p in &order {
        let x = pts[p];
        visible.clear();
        visible.extend(
            facets
                .iter()
                .enumerate()
                .filter(|(_, f)| f.alive && f.n.dot(&x) - f.b > tol)
                .map(|(i, _)| i),
        );
        if visible.is_empty() {
            continue;
        }
        ridges.clear();
        for &fi in &visible {
            let f = &facets[fi];
            for skip in 0..r {
                let mut key = [usize::MAX; 3];
                let mut c = 0;
                for j in 0..r {
                    if j != skip {
                        key[c] = f.v[j];
                        c += 1;
                    }
                }
                key[..r - 1].sort_unstable();
                *ridges.entry(key).or_insert(0) += 1;
            }
        }
        for &fi in &visible {
            facets[fi].alive = false;
        }
        let mut horizon: Vec<[usize; 3]> = ridges.iter().filter(|(_, &c)| c == 1).map(|(k, _)| *k).collect();
        horizon.sort_unstable();
        for ridge in horizon {
            let mut v = [usize::MAX; MAX_DIM];
            v[..r - 1].copy_from_slice(&ridge[..r - 1]);
            v[r - 1] = p;
            facets.push(make_simplex(r, pts, v, &interior));
        }
        if facets.len() > 64 && facets.iter().filter(|f| !f.alive).count() * 2 > facets.len() {
            facets.retain(|f| f.alive);
        }
    }
    facets.retain(|f| f.alive);
    facets
}

fn merge_facets(raw: Vec<LocalFacet>, tol: f64) -> Vec<LocalFacet> {
    let mut merged: Vec<LocalFacet> = Vec::new();
    for f in raw {
        let dup = merged
            .iter()
            .any(|m| (m.normal - f.normal).norm() < 1e-8 && (m.offset - f.offset).abs() < 10.0 * tol);
        if !dup {
            merged.push(f);
        }
    }
    merged
}

/// Numerical rank of a family of vectors.
pub(crate) fn rank(vecs: &[Point], tol: f64) -> usize {
    let mut basis: Vec<Point> = Vec::new();
    for v in vecs {
        let mut r = *v;
        for b in &basis {
            r = r - *b * r.dot(b);
        }
        let nr = r.norm();
        if nr > tol {
            basis.push(r * (1.0 / nr));
            if basis.len() == MAX_DIM {
                break;
            }
        }
    }
    basis.len()
}
