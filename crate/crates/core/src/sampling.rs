//! Seeded random generators: Haar rotations, Grassmannian frames, uniform
//! points in polytopes, plus the chunked parallel accumulator used by every
//! Monte Carlo estimator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Frame, Matrix, Point, Polytope, Rotation, MAX_DIM};

/// Samples per parallel chunk. Fixed so results do not depend on the thread count.
pub const CHUNK: usize = 4096;

/// A `(seed, stream)` pair naming one reproducible random sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> RngStream {
        RngStream { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> RngStream {
        RngStream { seed, stream }
    }

    /// The generator for this stream; equal streams give equal sequences.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Child stream `i`, disjoint from the parent and from its siblings.
    pub fn substream(&self, i: u64) -> RngStream {
        RngStream { seed: self.seed, stream: splitmix(self.stream ^ splitmix(i.wrapping_add(1))) }
    }
}

fn gaussian_points<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Vec<Point> {
    (0..m)
        .map(|_| {
            let mut p = Point::ZERO;
            for i in 0..n {
                p[i] = rng.sample(StandardNormal);
            }
            p
        })
        .collect()
}

/// Haar-distributed element of SO(n).
///
/// Gram-Schmidt on a Gaussian matrix is QR with a positive diagonal in R, which
/// is Haar on O(n); negating the first column when the determinant is negative
/// maps O(n) onto SO(n) measure-preservingly.
pub fn haar_rotation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Rotation> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    loop {
        let mut cols = gaussian_points(rng, n, n);
        let mut ok = true;
        for j in 0..n {
            for i in 0..j {
                let c = cols[j].dot(&cols[i]);
                cols[j] = cols[j] - cols[i] * c;
            }
            let norm = cols[j].norm();
            if norm < 1e-12 {
                ok = false;
                break;
            }
            cols[j] = cols[j] * (1.0 / norm);
        }
        if !ok {
            continue;
        }
        let mut m = Matrix::from_columns(n, &cols);
        if m.det() < 0.0 {
            for row in m.rows.iter_mut().take(n) {
                row[0] = -row[0];
            }
        }
        return Ok(Rotation::from_matrix_unchecked(m));
    }
}

/// Orthonormal `k`-frame whose span is uniform on the Grassmannian `Gr_k(R^n)`.
pub fn uniform_grassmannian<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize) -> Result<Frame> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::OutOfRange {
            what: "subspace dimension",
            value: k as i64,
            lo: 1,
            hi: n as i64 - 1,
        });
    }
    let g = haar_rotation(rng, n)?;
    Ok(frame_of(&g, k))
}

/// The first `k` columns of a rotation.
pub fn frame_of(g: &Rotation, k: usize) -> Frame {
    let n = g.dim();
    Frame::from_columns_unchecked(n, (0..k).map(|j| g.matrix().column(j)).collect())
}

/// A uniform point together with the bookkeeping of the rejection loop.
#[derive(Clone, Copy, Debug)]
pub struct UniformSample {
    pub point: Point,
    pub box_volume: f64,
    pub attempts: u64,
}

/// Uniform point in a full-dimensional polytope by rejection from its bounding box.
pub fn uniform_in_polytope<R: Rng + ?Sized>(rng: &mut R, p: &Polytope) -> Result<UniformSample> {
    if !p.is_full_dimensional() || p.volume() <= 0.0 {
        return Err(Error::DegenerateBody);
    }
    let n = p.dim();
    let (lo, hi) = p.bounding_box();
    let box_volume: f64 = (0..n).map(|i| hi[i] - lo[i]).product();
    let mut attempts = 0;
    loop {
        attempts += 1;
        let mut x = Point::ZERO;
        for i in 0..n {
            x[i] = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
        }
        if p.contains_point(&x, 0.0) {
            return Ok(UniformSample { point: x, box_volume, attempts });
        }
    }
}

/// Hull of `m` standard Gaussian points; full-dimensional with probability one.
pub fn random_polytope<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<Polytope> {
    let pts = gaussian_points(rng, n, m);
    Polytope::from_points(n, &pts)
}

/// Hull of `m` Gaussian points and their negatives.
pub fn random_symmetric_polytope<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<Polytope> {
    let mut pts = gaussian_points(rng, n, m);
    let neg: Vec<Point> = pts.iter().map(|p| -*p).collect();
    pts.extend(neg);
    Polytope::from_points(n, &pts)
}

/// Streaming mean and variance (Welford), mergeable in a fixed order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningStats {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, o: &RunningStats) {
        if o.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *o;
            return;
        }
        let n = (self.count + o.count) as f64;
        let d = o.mean - self.mean;
        self.mean += d * o.count as f64 / n;
        self.m2 += o.m2 + d * d * self.count as f64 * o.count as f64 / n;
        self.count += o.count;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// A Monte Carlo result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Estimate {
    pub fn from_stats(s: &RunningStats, seed: u64) -> Estimate {
        Estimate { value: s.mean, stderr: s.stderr(), samples: s.count, seed }
    }

    pub fn scaled(self, c: f64) -> Estimate {
        Estimate { value: self.value * c, stderr: self.stderr * c.abs(), ..self }
    }
}

/// Runs `f` once per sample, each call writing `width` values, and returns one
/// accumulator per value. Chunk `i` draws from `stream.substream(i)`, so the
/// result is identical for any number of worker threads.
pub fn parallel_stats<F>(stream: RngStream, samples: usize, width: usize, f: F) -> Result<Vec<RunningStats>>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) -> Result<()> + Sync,
{
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<RunningStats>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream.substream(c as u64).rng();
            let len = CHUNK.min(samples - c * CHUNK);
            let mut acc = vec![RunningStats::default(); width];
            let mut buf = vec![0.0; width];
            for _ in 0..len {
                f(&mut rng, &mut buf)?;
                for (a, &x) in acc.iter_mut().zip(&buf) {
                    a.push(x);
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![RunningStats::default(); width];
    for part in parts {
        for (t, p) in total.iter_mut().zip(part?) {
            t.merge(&p);
        }
    }
    Ok(total)
}
