//! The [`Polytope`] type and the operations of the geometry kernel.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hull::{self, Facet, Shape, EPS_VERTEX};
use super::linalg::{complement_basis, orthogonal_complement, solve, Matrix, Point, MAX_DIM};
use crate::error::{Error, Result};

/// Tolerance for feasibility and round-trip checks.
pub const EPS_GEOM: f64 = 1e-7;

/// A nonempty compact convex polytope in `R^n`, stored by its extreme points.
///
/// Vertices are deduplicated and sorted lexicographically, so two polytopes
/// built from the same point set compare equal vertex for vertex. Cloning is
/// cheap: the derived hull data is shared.
#[derive(Clone)]
pub struct Polytope {
    dim: usize,
    shape: Arc<Shape>,
}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope")
            .field("dim", &self.dim)
            .field("vertices", &self.shape.vertices.iter().map(|v| v.coords(self.dim).to_vec()).collect::<Vec<_>>())
            .finish()
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && (Arc::ptr_eq(&self.shape, &other.shape) || self.shape.vertices == other.shape.vertices)
    }
}

/// `normal . x <= offset` with unit `normal`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

/// H-representation of a full-dimensional polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfspaceRep {
    pub dim: usize,
    pub rows: Vec<Halfspace>,
    pub irredundant: bool,
}

/// A proper rotation of `R^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    matrix: Matrix,
}

impl Rotation {
    pub fn new(matrix: Matrix) -> Result<Rotation> {
        let n = matrix.n;
        let gram = matrix.transpose().mul(&matrix);
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((gram.rows[i][j] - target).abs());
            }
        }
        dev = dev.max((matrix.det() - 1.0).abs());
        if dev >= 1e-10 {
            return Err(Error::Invalid(format!("not a rotation (deviation {dev:.3e})")));
        }
        Ok(Rotation { matrix })
    }

    pub fn identity(n: usize) -> Rotation {
        Rotation { matrix: Matrix::identity(n) }
    }

    /// Rotation by `angle` in the plane of coordinates `i` and `j`.
    pub fn plane(n: usize, i: usize, j: usize, angle: f64) -> Rotation {
        let mut m = Matrix::identity(n);
        let (s, c) = angle.sin_cos();
        m.rows[i][i] = c;
        m.rows[i][j] = -s;
        m.rows[j][i] = s;
        m.rows[j][j] = c;
        Rotation { matrix: m }
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Rotation {
        Rotation { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.matrix.apply(p)
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation { matrix: self.matrix.mul(&other.matrix) }
    }
}

/// An orthonormal `k`-frame in `R^n`; its span is a point of the Grassmannian.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    n: usize,
    cols: Vec<Point>,
}

impl Frame {
    pub fn new(n: usize, cols: Vec<Point>) -> Result<Frame> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        if cols.len() > n {
            return Err(Error::OutOfRange { what: "frame size", value: cols.len() as i64, lo: 0, hi: n as i64 });
        }
        let mut dev = 0.0f64;
        for (i, a) in cols.iter().enumerate() {
            if a.coords(MAX_DIM)[n..].iter().any(|&x| x != 0.0) {
                return Err(Error::DimensionMismatch { expected: n, found: MAX_DIM });
            }
            for (j, b) in cols.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((a.dot(b) - target).abs());
            }
        }
        if dev >= 1e-10 {
            return Err(Error::NonOrthonormalFrame(dev));
        }
        Ok(Frame { n, cols })
    }

    pub fn identity(n: usize) -> Frame {
        Frame { n, cols: (0..n).map(Point::unit).collect() }
    }

    pub(crate) fn from_columns_unchecked(n: usize, cols: Vec<Point>) -> Frame {
        Frame { n, cols }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[Point] {
        &self.cols
    }

    /// Orthonormal frame of the orthogonal complement of the span.
    pub fn complement(&self) -> Frame {
        Frame { n: self.n, cols: complement_basis(self.n, &self.cols) }
    }
}

fn check_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

impl Polytope {
    /// Convex hull of a finite point set given as coordinate rows.
    pub fn hull(points: &[Vec<f64>], dim: usize) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut pts = Vec::with_capacity(points.len());
        for p in points {
            check_dim(dim, p.len())?;
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid("non-finite coordinate".into()));
            }
            pts.push(Point::from_slice(p));
        }
        Polytope::from_points(dim, &pts)
    }

    /// Convex hull of padded points (coordinates past `dim` must be zero).
    pub fn from_points(dim: usize, points: &[Point]) -> Result<Polytope> {
        let shape = hull::build(dim, points)?;
        Ok(Polytope { dim, shape: Arc::new(shape) })
    }

    pub fn point(coords: &[f64]) -> Result<Polytope> {
        Polytope::hull(&[coords.to_vec()], coords.len())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.shape.vertices
    }

    pub fn vertex_rows(&self) -> Vec<Vec<f64>> {
        self.shape.vertices.iter().map(|v| v.coords(self.dim).to_vec()).collect()
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.shape.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.shape.affine_dim == self.dim
    }

    /// Facets of the relative boundary, merged and with unit normals.
    pub fn facets(&self) -> &[Facet] {
        &self.shape.facets
    }

    /// Orthonormal directions of the affine hull.
    pub fn affine_basis(&self) -> &[Point] {
        &self.shape.basis
    }

    /// `n`-dimensional Lebesgue volume; zero for lower-dimensional bodies.
    pub fn volume(&self) -> f64 {
        if self.is_full_dimensional() {
            self.shape.relative_volume
        } else {
            0.0
        }
    }

    /// Volume measured inside the affine hull.
    pub fn relative_volume(&self) -> f64 {
        self.shape.relative_volume
    }

    pub fn centroid(&self) -> Point {
        let mut c = Point::ZERO;
        for v in self.vertices() {
            c += *v;
        }
        c * (1.0 / self.vertices().len() as f64)
    }

    pub fn diameter(&self) -> f64 {
        let v = self.vertices();
        let mut d = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max(v[i].dist(&v[j]));
            }
        }
        d
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = self.vertices()[0];
        let mut hi = lo;
        for v in self.vertices() {
            for i in 0..self.dim {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        check_dim(self.dim, other.dim)?;
        if other.vertices().len() == 1 {
            return self.translate_point(&other.vertices()[0]);
        }
        if self.vertices().len() == 1 {
            return other.translate_point(&self.vertices()[0]);
        }
        let mut pts = Vec::with_capacity(self.vertices().len() * other.vertices().len());
        for a in self.vertices() {
            for b in other.vertices() {
                pts.push(*a + *b);
            }
        }
        Polytope::from_points(self.dim, &pts)
    }

    pub fn reflect(&self) -> Polytope {
        self.map_vertices(|v| -v).expect("reflection preserves validity")
    }

    pub fn scale(&self, t: f64) -> Result<Polytope> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeScale(t));
        }
        if t == 0.0 {
            return Polytope::from_points(self.dim, &[Point::ZERO]);
        }
        self.map_vertices(|v| v * t)
    }

    pub fn translate(&self, x: &[f64]) -> Result<Polytope> {
        check_dim(self.dim, x.len())?;
        self.translate_point(&Point::from_slice(x))
    }

    pub fn translate_point(&self, x: &Point) -> Result<Polytope> {
        let x = *x;
        self.map_vertices(|v| v + x)
    }

    pub fn rotate(&self, g: &Rotation) -> Result<Polytope> {
        check_dim(self.dim, g.dim())?;
        self.map_vertices(|v| g.apply(&v))
    }

    fn map_vertices(&self, f: impl Fn(Point) -> Point) -> Result<Polytope> {
        let pts: Vec<Point> = self.vertices().iter().map(|v| f(*v)).collect();
        Polytope::from_points(self.dim, &pts)
    }

    /// Support function `max_{v} <u, v>`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        check_dim(self.dim, u.len())?;
        let u = Point::from_slice(u);
        if u.norm() == 0.0 {
            return Err(Error::ZeroDirection);
        }
        Ok(self.support_point(&u))
    }

    pub(crate) fn support_point(&self, u: &Point) -> f64 {
        self.vertices().iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Orthogonal projection onto the span of `frame`, in frame coordinates.
    pub fn project(&self, frame: &Frame) -> Result<Polytope> {
        check_dim(self.dim, frame.ambient_dim())?;
        if frame.k() == 0 {
            return Err(Error::OutOfRange { what: "frame size", value: 0, lo: 1, hi: self.dim as i64 });
        }
        let pts: Vec<Point> = self
            .vertices()
            .iter()
            .map(|v| {
                let mut y = Point::ZERO;
                for (j, c) in frame.columns().iter().enumerate() {
                    y[j] = v.dot(c);
                }
                y
            })
            .collect();
        Polytope::from_points(frame.k(), &pts)
    }

    /// `k`-volume of the projection onto the span of `frame`.
    pub fn projected_volume(&self, frame: &Frame) -> Result<f64> {
        if frame.k() == 1 {
            let u = frame.columns()[0];
            let (lo, hi) = self
                .vertices()
                .iter()
                .map(|v| v.dot(&u))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
            return Ok(hi - lo);
        }
        Ok(self.project(frame)?.volume())
    }

    /// Linear constraints describing the body: facets of the relative boundary
    /// plus equality pairs for the directions normal to the affine hull.
    pub(crate) fn constraints(&self) -> Vec<Halfspace> {
        let mut rows: Vec<Halfspace> =
            self.facets().iter().map(|f| Halfspace { normal: f.normal, offset: f.offset }).collect();
        if !self.is_full_dimensional() {
            let origin = self.vertices()[0];
            for w in complement_basis(self.dim, self.affine_basis()) {
                let c = w.dot(&origin);
                rows.push(Halfspace { normal: w, offset: c });
                rows.push(Halfspace { normal: -w, offset: -c });
            }
        }
        rows
    }

    pub(crate) fn scale_hint(&self) -> f64 {
        self.shape.scale
    }

    /// Membership test with absolute tolerance `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        Ok(self.contains_point(&Point::from_slice(x), tol))
    }

    pub(crate) fn contains_point(&self, x: &Point, tol: f64) -> bool {
        if self.is_full_dimensional() {
            return self.facets().iter().all(|f| f.normal.dot(x) <= f.offset + tol);
        }
        self.constraints().iter().all(|h| h.normal.dot(x) <= h.offset + tol)
    }

    /// Intersection by vertex enumeration over all `n`-subsets of the combined
    /// constraint system. `None` when the bodies are disjoint.
    pub fn intersect(&self, other: &Polytope) -> Result<Option<Polytope>> {
        check_dim(self.dim, other.dim)?;
        let mut rows = self.constraints();
        rows.extend(other.constraints());
        let scale = self.scale_hint().max(other.scale_hint());
        let pts = enumerate_vertices(self.dim, &rows, EPS_GEOM * scale);
        if pts.is_empty() {
            return Ok(None);
        }
        Polytope::from_points(self.dim, &pts).map(Some)
    }

    pub fn to_halfspaces(&self) -> Result<HalfspaceRep> {
        if !self.is_full_dimensional() {
            return Err(Error::DegenerateBody);
        }
        Ok(HalfspaceRep {
            dim: self.dim,
            rows: self.facets().iter().map(|f| Halfspace { normal: f.normal, offset: f.offset }).collect(),
            irredundant: true,
        })
    }

    pub fn from_halfspaces(h: &HalfspaceRep) -> Result<Polytope> {
        let n = h.dim;
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        let rows: Vec<Halfspace> = h
            .rows
            .iter()
            .map(|r| {
                let len = r.normal.norm();
                Halfspace { normal: r.normal * (1.0 / len), offset: r.offset / len }
            })
            .collect();
        if !is_bounded(n, &rows) {
            return Err(Error::Unbounded);
        }
        let scale = rows.iter().fold(1.0f64, |m, r| m.max(r.offset.abs()));
        let pts = enumerate_vertices(n, &rows, EPS_GEOM * scale);
        if pts.is_empty() {
            return Err(Error::Infeasible);
        }
        Polytope::from_points(n, &pts)
    }

    /// Points of the unit `k`-cube spanned by a frame.
    pub fn unit_cube_in(frame: &Frame) -> Result<Polytope> {
        let k = frame.k();
        let mut pts = Vec::with_capacity(1 << k);
        for mask in 0..(1u32 << k) {
            let mut p = Point::ZERO;
            for (j, c) in frame.columns().iter().enumerate() {
                if mask & (1 << j) != 0 {
                    p += *c;
                }
            }
            pts.push(p);
        }
        Polytope::from_points(frame.ambient_dim(), &pts)
    }

    /// Vertices match pairwise within `tol` (same count, same canonical order).
    pub fn approx_eq(&self, other: &Polytope, tol: f64) -> bool {
        if self.dim != other.dim || self.vertices().len() != other.vertices().len() {
            return false;
        }
        self.vertices().iter().all(|v| other.vertices().iter().any(|w| v.dist(w) <= tol))
    }
}

fn is_bounded(n: usize, rows: &[Halfspace]) -> bool {
    let normals: Vec<Point> = rows.iter().map(|r| r.normal).collect();
    if hull::rank(&normals, 1e-12) < n {
        return false;
    }
    // a pointed nontrivial recession cone has an extreme ray cut out by n-1 rows
    let mut bounded = true;
    for_each_subset(rows.len(), n - 1, |idx| {
        if !bounded {
            return;
        }
        let vecs: Vec<Point> = idx.iter().map(|&i| rows[i].normal).collect();
        if n > 1 && hull::rank(&vecs, 1e-12) < n - 1 {
            return;
        }
        let d = orthogonal_complement(n, &vecs);
        let d = d * (1.0 / d.norm());
        for dir in [d, -d] {
            if rows.iter().all(|r| r.normal.dot(&dir) <= 1e-12) {
                bounded = false;
            }
        }
    });
    bounded
}

fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + m - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Feasible intersection points of every `n`-subset of constraints.
fn enumerate_vertices(n: usize, rows: &[Halfspace], tol: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    if n == 0 {
        return out;
    }
    let mut m = [[0.0; MAX_DIM]; MAX_DIM];
    let mut b = [0.0; MAX_DIM];
    for_each_subset(rows.len(), n, |idx| {
        for (r, &i) in idx.iter().enumerate() {
            m[r] = rows[i].normal.0;
            b[r] = rows[i].offset;
        }
        if let Some(x) = solve(n, &m, &b, 1e-10) {
            if rows.iter().all(|h| h.normal.dot(&x) <= h.offset + tol)
                && !out.iter().any(|p| p.dist(&x) <= EPS_VERTEX)
            {
                out.push(x);
            }
        }
    });
    out
}

/// JSON shape `{"dim": n, "vertices": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl From<&Polytope> for PolytopeJson {
    fn from(p: &Polytope) -> Self {
        PolytopeJson { dim: p.dim, vertices: p.vertex_rows() }
    }
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson::from(self).serialize(s)
    }
}
