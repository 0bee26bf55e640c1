//! Fixed-capacity vectors and the handful of dense routines the kernel needs.
//!
//! All points live in `[f64; MAX_DIM]`; coordinates past the active dimension are
//! kept at zero so that sums and dot products never need the dimension.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub const MAX_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point(pub [f64; MAX_DIM]);

impl Point {
    pub const ZERO: Point = Point([0.0; MAX_DIM]);

    /// Builds a point from a coordinate slice of length at most `MAX_DIM`.
    pub fn from_slice(coords: &[f64]) -> Point {
        debug_assert!(coords.len() <= MAX_DIM);
        let mut p = [0.0; MAX_DIM];
        p[..coords.len()].copy_from_slice(coords);
        Point(p)
    }

    pub fn unit(i: usize) -> Point {
        let mut p = Point::ZERO;
        p.0[i] = 1.0;
        p
    }

    #[inline]
    pub fn dot(&self, other: &Point) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2] + self.0[3] * other.0[3]
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn coords(&self, dim: usize) -> &[f64] {
        &self.0[..dim]
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (*self - *other).norm()
    }

    /// Lexicographic comparison with a total order on floats.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        for i in 0..MAX_DIM {
            match self.0[i].total_cmp(&other.0[i]) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl Index<usize> for Point {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Point {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }
}

impl AddAssign for Point {
    #[inline]
    fn add_assign(&mut self, o: Point) {
        *self = *self + o;
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2], self.0[3] - o.0[3]])
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, t: f64) -> Point {
        Point([self.0[0] * t, self.0[1] * t, self.0[2] * t, self.0[3] * t])
    }
}

/// Square matrix of size `n <= MAX_DIM`, row-major, zero-padded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub n: usize,
    pub rows: [[f64; MAX_DIM]; MAX_DIM],
}

impl Matrix {
    pub fn identity(n: usize) -> Matrix {
        let mut rows = [[0.0; MAX_DIM]; MAX_DIM];
        for (i, row) in rows.iter_mut().enumerate().take(n) {
            row[i] = 1.0;
        }
        Matrix { n, rows }
    }

    pub fn from_columns(n: usize, cols: &[Point]) -> Matrix {
        let mut rows = [[0.0; MAX_DIM]; MAX_DIM];
        for (j, c) in cols.iter().enumerate() {
            for (i, row) in rows.iter_mut().enumerate().take(n) {
                row[j] = c[i];
            }
        }
        Matrix { n, rows }
    }

    pub fn column(&self, j: usize) -> Point {
        let mut p = Point::ZERO;
        for i in 0..self.n {
            p[i] = self.rows[i][j];
        }
        p
    }

    #[inline]
    pub fn apply(&self, p: &Point) -> Point {
        let mut out = Point::ZERO;
        for i in 0..self.n {
            out[i] = Point(self.rows[i]).dot(p);
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut rows = [[0.0; MAX_DIM]; MAX_DIM];
        for (i, row) in rows.iter_mut().enumerate().take(self.n) {
            for (j, x) in row.iter_mut().enumerate().take(self.n) {
                *x = self.rows[j][i];
            }
        }
        Matrix { n: self.n, rows }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        let mut rows = [[0.0; MAX_DIM]; MAX_DIM];
        for (i, row) in rows.iter_mut().enumerate().take(self.n) {
            for (j, x) in row.iter_mut().enumerate().take(self.n) {
                *x = (0..self.n).map(|k| self.rows[i][k] * o.rows[k][j]).sum();
            }
        }
        Matrix { n: self.n, rows }
    }

    pub fn det(&self) -> f64 {
        det(self.n, &self.rows)
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(n: usize, m: &[[f64; MAX_DIM]; MAX_DIM]) -> f64 {
    let mut a = *m;
    let mut d = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    d
}

/// Solves `A x = b` for `n x n` `A`. Returns `None` when a pivot falls below
/// `pivot_tol` (in units of the largest row norm).
pub fn solve(n: usize, m: &[[f64; MAX_DIM]; MAX_DIM], b: &[f64; MAX_DIM], pivot_tol: f64) -> Option<Point> {
    let mut a = *m;
    let mut rhs = *b;
    let scale = (0..n)
        .map(|i| a[i][..n].iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= pivot_tol * scale {
            return None;
        }
        a.swap(piv, col);
        rhs.swap(piv, col);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = Point::ZERO;
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

/// Vector orthogonal to the `d - 1` given vectors in `R^d` (generalized cross
/// product via cofactor expansion). Not normalized.
pub fn orthogonal_complement(d: usize, vecs: &[Point]) -> Point {
    debug_assert_eq!(vecs.len() + 1, d);
    let mut out = Point::ZERO;
    match d {
        1 => out[0] = 1.0,
        2 => {
            out[0] = vecs[0][1];
            out[1] = -vecs[0][0];
        }
        _ => {
            for i in 0..d {
                // minor deleting column i
                let mut m = [[0.0; MAX_DIM]; MAX_DIM];
                for (r, v) in vecs.iter().enumerate() {
                    let mut c = 0;
                    for j in 0..d {
                        if j != i {
                            m[r][c] = v[j];
                            c += 1;
                        }
                    }
                }
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                out[i] = sign * det(d - 1, &m);
            }
        }
    }
    out
}

/// Orthonormal basis of the affine hull of `points`, found greedily by largest
/// residual. Returns `(origin index, basis, indices of the spanning points)`.
pub fn affine_basis(points: &[Point], tol: f64) -> (usize, Vec<Point>, Vec<usize>) {
    let origin = 0;
    let o = points[origin];
    let mut basis: Vec<Point> = Vec::new();
    let mut chosen = Vec::new();
    loop {
        if basis.len() == MAX_DIM {
            break;
        }
        let mut best = (0.0, usize::MAX, Point::ZERO);
        for (i, p) in points.iter().enumerate() {
            let mut r = *p - o;
            for b in &basis {
                r = r - *b * r.dot(b);
            }
            let nr = r.norm();
            if nr > best.0 {
                best = (nr, i, r);
            }
        }
        if best.0 <= tol {
            break;
        }
        let mut r = best.2;
        // re-orthogonalize once for stability
        for b in &basis {
            r = r - *b * r.dot(b);
        }
        basis.push(r * (1.0 / r.norm()));
        chosen.push(best.1);
    }
    (origin, basis, chosen)
}

/// Completes an orthonormal family in `R^n` to an orthonormal basis of the
/// orthogonal complement of its span.
pub fn complement_basis(n: usize, basis: &[Point]) -> Vec<Point> {
    let mut all: Vec<Point> = basis.to_vec();
    let mut out = Vec::new();
    for i in 0..n {
        let mut r = Point::unit(i);
        for b in &all {
            r = r - *b * r.dot(b);
        }
        for b in &all {
            r = r - *b * r.dot(b);
        }
        let nr = r.norm();
        if nr > 1e-6 {
            let u = r * (1.0 / nr);
            all.push(u);
            out.push(u);
        }
        if all.len() == n {
            break;
        }
    }
    out
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
