//! Numerical valuations on polytopes: intrinsic volumes, mixed volumes,
//! `mu_A(K) = vol(A + K)` and its graded parts, formal mixed-volume
//! valuations with their convolution, Klain values, and the Monte Carlo
//! product `mu_A . phi(K) = int phi(K ∩ (x - A)) dx`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::flag;
use crate::error::{Error, Result};
use crate::geometry::linalg::{binomial, factorial};
use crate::geometry::{intrinsic_volume, Frame, Polytope};
use crate::sampling::{frame_of, haar_rotation, parallel_stats, uniform_in_polytope, Estimate, RngStream};

/// A real-valued function on polytopes in a fixed ambient dimension.
pub trait Valuation: Sync {
    fn dim(&self) -> usize;
    fn evaluate(&self, k: &Polytope) -> Result<f64>;
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct EulerCharacteristic {
    pub dim: usize,
}

impl Valuation for EulerCharacteristic {
    fn dim(&self) -> usize {
        self.dim
    }
    fn evaluate(&self, k: &Polytope) -> Result<f64> {
        check_dim(self.dim, k.dim())?;
        Ok(1.0)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Volume {
    pub dim: usize,
}

impl Valuation for Volume {
    fn dim(&self) -> usize {
        self.dim
    }
    fn evaluate(&self, k: &Polytope) -> Result<f64> {
        check_dim(self.dim, k.dim())?;
        Ok(k.volume())
    }
}

/// `sum c_k mu_k`, evaluated with the closed-form intrinsic volumes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicCombination {
    pub coeffs: Vec<f64>,
}

impl IntrinsicCombination {
    pub fn mu(n: usize, k: usize) -> IntrinsicCombination {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[k] = 1.0;
        IntrinsicCombination { coeffs }
    }
}

impl Valuation for IntrinsicCombination {
    fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }
    fn evaluate(&self, k: &Polytope) -> Result<f64> {
        check_dim(self.dim(), k.dim())?;
        let mut s = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                s += c * intrinsic_volume(k, i)?;
            }
        }
        Ok(s)
    }
}

/// `K -> vol(A + K)`.
#[derive(Clone, Debug)]
pub struct MuA {
    pub a: Polytope,
}

impl Valuation for MuA {
    fn dim(&self) -> usize {
        self.a.dim()
    }
    fn evaluate(&self, k: &Polytope) -> Result<f64> {
        mu_a_eval(&self.a, k)
    }
}

/// `mu_A(K) = vol(A + K)`.
pub fn mu_a_eval(a: &Polytope, k: &Polytope) -> Result<f64> {
    Ok(a.minkowski_sum(k)?.volume())
}

/// `coeff * V(K[k]; bodies)` with `k = n - bodies.len()`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormalTerm {
    pub coeff: f64,
    pub bodies: Vec<Polytope>,
}

/// Finite linear combination of mixed-volume valuations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormalValuation {
    dim: usize,
    terms: Vec<FormalTerm>,
}

impl FormalValuation {
    pub fn new(dim: usize) -> FormalValuation {
        FormalValuation { dim, terms: Vec::new() }
    }

    /// Pure volume, the unit of convolution.
    pub fn volume(dim: usize) -> FormalValuation {
        let mut v = FormalValuation::new(dim);
        v.terms.push(FormalTerm { coeff: 1.0, bodies: Vec::new() });
        v
    }

    pub fn push(&mut self, coeff: f64, bodies: Vec<Polytope>) -> Result<()> {
        if bodies.len() > self.dim {
            return Err(Error::OutOfRange {
                what: "number of bodies",
                value: bodies.len() as i64,
                lo: 0,
                hi: self.dim as i64,
            });
        }
        for b in &bodies {
            check_dim(self.dim, b.dim())?;
        }
        self.terms.push(FormalTerm { coeff, bodies });
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[FormalTerm] {
        &self.terms
    }

    pub fn term_degree(&self, t: &FormalTerm) -> usize {
        self.dim - t.bodies.len()
    }

    /// Terms of degree `k`.
    pub fn degree_part(&self, k: usize) -> FormalValuation {
        FormalValuation {
            dim: self.dim,
            terms: self.terms.iter().filter(|t| self.term_degree(t) == k).cloned().collect(),
        }
    }

    /// The common degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let first = self.term_degree(self.terms.first()?);
        self.terms.iter().all(|t| self.term_degree(t) == first).then_some(first)
    }

    pub fn scaled(&self, c: f64) -> FormalValuation {
        FormalValuation {
            dim: self.dim,
            terms: self.terms.iter().map(|t| FormalTerm { coeff: t.coeff * c, bodies: t.bodies.clone() }).collect(),
        }
    }

    pub fn plus(&self, o: &FormalValuation) -> Result<FormalValuation> {
        check_dim(self.dim, o.dim)?;
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(FormalValuation { dim: self.dim, terms })
    }
}

impl Valuation for FormalValuation {
    fn dim(&self) -> usize {
        self.dim
    }
    fn evaluate(&self, k: &Polytope) -> Result<f64> {
        formal_evaluate(self, k)
    }
}

/// Volumes of `sum_i j_i B_i`, memoized by the multiplicity vector.
struct SumVolumes<'a> {
    bodies: Vec<&'a Polytope>,
    memo: HashMap<Vec<usize>, f64>,
}

impl<'a> SumVolumes<'a> {
    fn new() -> SumVolumes<'a> {
        SumVolumes { bodies: Vec::new(), memo: HashMap::new() }
    }

    fn index_of(&mut self, b: &'a Polytope) -> usize {
        match self.bodies.iter().position(|x| *x == b) {
            Some(i) => i,
            None => {
                self.bodies.push(b);
                self.bodies.len() - 1
            }
        }
    }

    fn volume(&mut self, j: &[usize]) -> Result<f64> {
        if let Some(&v) = self.memo.get(j) {
            return Ok(v);
        }
        let mut sum: Option<Polytope> = None;
        for (i, &m) in j.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let part = self.bodies[i].scale(m as f64)?;
            sum = Some(match sum {
                None => part,
                Some(s) => s.minkowski_sum(&part)?,
            });
        }
        let v = sum.map_or(0.0, |s| s.volume());
        self.memo.insert(j.to_vec(), v);
        Ok(v)
    }

    /// `V(B_1[m_1], ..., B_p[m_p])` by inclusion-exclusion over sub-multisets:
    /// `(1/n!) sum_{j <= m} (-1)^{n - |j|} prod C(m_i, j_i) vol(sum j_i B_i)`.
    fn mixed(&mut self, m: &[usize], n: usize) -> Result<f64> {
        let mut j = vec![0usize; m.len()];
        let mut total = 0.0;
        loop {
            let used: usize = j.iter().sum();
            if used > 0 {
                let weight: f64 = j.iter().zip(m).map(|(&a, &b)| binomial(b, a)).product();
                let sign = if (n - used).is_multiple_of(2) { 1.0 } else { -1.0 };
                total += sign * weight * self.volume(&j)?;
            }
            // odometer over 0..=m_i
            let mut pos = 0;
            loop {
                if pos == m.len() {
                    return Ok(total / factorial(n));
                }
                if j[pos] < m[pos] {
                    j[pos] += 1;
                    break;
                }
                j[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Mixed volume `V(A_1, ..., A_n)` of `n` bodies in `R^n`.
pub fn mixed_volume(bodies: &[Polytope]) -> Result<f64> {
    let n = bodies.first().ok_or(Error::EmptyPointSet)?.dim();
    if bodies.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: bodies.len() });
    }
    let mut sums = SumVolumes::new();
    let mut mult = Vec::new();
    for b in bodies {
        check_dim(n, b.dim())?;
        let i = sums.index_of(b);
        if i == mult.len() {
            mult.push(0);
        }
        mult[i] += 1;
    }
    sums.mixed(&mult, n)
}

/// `sum coeff * V(K[k]; bodies)` over the terms of `phi`.
pub fn formal_evaluate(phi: &FormalValuation, k: &Polytope) -> Result<f64> {
    let n = phi.dim;
    check_dim(n, k.dim())?;
    let mut sums = SumVolumes::new();
    sums.index_of(k);
    let mut total = 0.0;
    for t in &phi.terms {
        let mut idx: Vec<usize> = t.bodies.iter().map(|b| sums.index_of(b)).collect();
        idx.extend(std::iter::repeat_n(0, n - t.bodies.len()));
        let mut mult = vec![0usize; sums.bodies.len()];
        for i in idx {
            mult[i] += 1;
        }
        total += t.coeff * sums.mixed(&mult, n)?;
    }
    Ok(total)
}

/// `mu_A = sum_k C(n,k) V(K[k]; A[n-k])`.
pub fn mu_a_expand(a: &Polytope) -> FormalValuation {
    let n = a.dim();
    let mut v = FormalValuation::new(n);
    for k in 0..=n {
        v.terms.push(FormalTerm { coeff: binomial(n, k), bodies: vec![a.clone(); n - k] });
    }
    v
}

/// Convolution of formal valuations, also returning how many term pairs were
/// dropped because their degrees sum to less than `n`.
pub fn formal_convolve_counted(phi: &FormalValuation, psi: &FormalValuation) -> Result<(FormalValuation, usize)> {
    check_dim(phi.dim, psi.dim)?;
    let n = phi.dim;
    let mut out = FormalValuation::new(n);
    let mut dropped = 0;
    for s in &phi.terms {
        for t in &psi.terms {
            let (k, l) = (phi.term_degree(s), psi.term_degree(t));
            if k + l < n {
                dropped += 1;
                continue;
            }
            let c = binomial(k + l, n) / binomial(k + l, k);
            let mut bodies = s.bodies.clone();
            bodies.extend(t.bodies.iter().cloned());
            out.terms.push(FormalTerm { coeff: s.coeff * t.coeff * c, bodies });
        }
    }
    Ok((out, dropped))
}

/// `V_{A..} * V_{B..} = C(k+l,k)^-1 C(k+l,n) V_{A..,B..}`, extended bilinearly.
pub fn formal_convolve(phi: &FormalValuation, psi: &FormalValuation) -> Result<FormalValuation> {
    let (out, dropped) = formal_convolve_counted(phi, psi)?;
    if dropped > 0 {
        log::warn!("formal_convolve: dropped {dropped} term pairs of total degree below {}", phi.dim);
    }
    Ok(out)
}

/// Klain function of a degree-`k` valuation at the span of a `k`-frame:
/// its value on the unit cube spanned by the frame.
pub fn klain_eval(phi: &FormalValuation, frame: &Frame) -> Result<f64> {
    check_dim(phi.dim, frame.ambient_dim())?;
    let k = phi.homogeneous_degree().ok_or(Error::NonHomogeneous)?;
    if k != frame.k() {
        return Err(Error::DimensionMismatch { expected: k, found: frame.k() });
    }
    formal_evaluate(phi, &Polytope::unit_cube_in(frame)?)
}

/// `(mu_0, ..., mu_n)` with optional standard errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicVector {
    pub dim: usize,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub exact: bool,
}

/// Intrinsic volumes from the face structure (exact up to rounding).
pub fn intrinsic_volumes_exact(p: &Polytope) -> Result<IntrinsicVector> {
    Ok(IntrinsicVector { dim: p.dim(), values: crate::geometry::intrinsic_volumes(p)?, stderr: None, exact: true })
}

/// Box `prod [0, a_i]`: `mu_k` is the `k`-th elementary symmetric polynomial of the sides.
pub fn intrinsic_volumes_box(sides: &[f64]) -> Result<IntrinsicVector> {
    if let Some(&s) = sides.iter().find(|&&s| s.is_nan() || s <= 0.0) {
        return Err(Error::NonPositiveSide(s));
    }
    let n = sides.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (i, &a) in sides.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += a * e[k - 1];
        }
    }
    Ok(IntrinsicVector { dim: n, values: e, stderr: None, exact: true })
}

/// `mu_k(P) = [n k] E[vol_k(pi_L P)]` over uniform `L` in `Gr_k`, for `0 < k < n`.
/// `mu_0` and `mu_n` are returned exactly with zero error.
pub fn intrinsic_volumes_mc(p: &Polytope, samples: usize, stream: RngStream) -> Result<IntrinsicVector> {
    let n = p.dim();
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let flags: Vec<f64> = (0..=n).map(|k| flag(n, k).map(|f| f.to_f64())).collect::<Result<_>>()?;
    let stats = parallel_stats(stream, samples, n.saturating_sub(1), |rng, out| {
        let g = haar_rotation(rng, n)?;
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = p.projected_volume(&frame_of(&g, i + 1))?;
        }
        Ok(())
    })?;
    let mut values = vec![1.0];
    let mut stderr = vec![0.0];
    for (i, s) in stats.iter().enumerate() {
        values.push(flags[i + 1] * s.mean);
        stderr.push(flags[i + 1] * s.stderr());
    }
    values.push(p.volume());
    stderr.push(0.0);
    Ok(IntrinsicVector { dim: n, values, stderr: Some(stderr), exact: false })
}

/// `mu_A . phi(K) = int phi(K ∩ (x - A)) dx`, with `x - A = {x - a}`.
///
/// The integrand vanishes unless `x` lies in `K + A`, so `x` is drawn
/// uniformly there and the mean is multiplied by `vol(K + A)`.
pub fn product_mc(a: &Polytope, phi: &dyn Valuation, k: &Polytope, samples: usize, stream: RngStream) -> Result<Estimate> {
    check_dim(a.dim(), k.dim())?;
    check_dim(a.dim(), phi.dim())?;
    let support = k.minkowski_sum(a)?;
    if !support.is_full_dimensional() {
        return Err(Error::DegenerateBody);
    }
    let neg_a = a.reflect();
    let stats = parallel_stats(stream, samples, 1, |rng, out| {
        let x = uniform_in_polytope(rng, &support)?.point;
        out[0] = match k.intersect(&neg_a.translate_point(&x)?)? {
            Some(cut) => phi.evaluate(&cut)?,
            None => 0.0,
        };
        Ok(())
    })?;
    Ok(Estimate::from_stats(&stats[0], stream.seed).scaled(support.volume()))
}
