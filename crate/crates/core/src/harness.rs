//! Monte Carlo estimates of the kinematic integrals
//! `int_{G ⋉ R^n} mu_k(A ∩ gB) dg` and `int_G mu_k(A + gB) dg`, compared with
//! the exact coproduct tables, plus the numerical `mu_A * mu_B = mu_{A+B}` campaign.
//!
//! Rotations carry Haar probability measure and translations Lebesgue measure,
//! the normalization the coproduct tables assume.

use serde::{Deserialize, Serialize};

use crate::algebra::SoAlgebra;
use crate::error::{Error, Result};
use crate::geometry::{intrinsic_volume, intrinsic_volumes, Polytope};
use crate::sampling::{haar_rotation, parallel_stats, uniform_in_polytope, RngStream};
pub use crate::sampling::Estimate;
use crate::valuations::{formal_convolve, formal_evaluate, mu_a_expand};

/// Default pass threshold on `|value - prediction| / stderr`.
pub const Z_MAX: f64 = 4.0;

fn check_bodies(a: &Polytope, b: &Polytope) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if !a.is_full_dimensional() || !b.is_full_dimensional() {
        return Err(Error::DegenerateBody);
    }
    Ok(())
}

/// Estimates of `int mu_k(A ∩ (gB + x)) dx dg` for every `k = 0..=n` from one
/// set of samples. `x` is drawn uniformly from `A - gB`, the set where the
/// intersection is nonempty, and weighted by its volume.
pub fn intersection_kinematic_mc_all(a: &Polytope, b: &Polytope, samples: usize, stream: RngStream) -> Result<Vec<Estimate>> {
    check_bodies(a, b)?;
    let n = a.dim();
    let stats = parallel_stats(stream, samples, n + 1, |rng, out| {
        let g = haar_rotation(rng, n)?;
        let gb = b.rotate(&g)?;
        let support = a.minkowski_sum(&gb.reflect())?;
        let w = support.volume();
        let x = uniform_in_polytope(rng, &support)?.point;
        match a.intersect(&gb.translate_point(&x)?)? {
            Some(cut) => {
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = w * intrinsic_volume(&cut, k)?;
                }
            }
            None => out.fill(0.0),
        }
        Ok(())
    })?;
    Ok(stats.iter().map(|s| Estimate::from_stats(s, stream.seed)).collect())
}

pub fn intersection_kinematic_mc(k: usize, a: &Polytope, b: &Polytope, samples: usize, stream: RngStream) -> Result<Estimate> {
    degree_check(k, a.dim())?;
    Ok(intersection_kinematic_mc_all(a, b, samples, stream)?[k])
}

/// Estimates of `int_G mu_k(A + gB) dg` for every `k`.
pub fn additive_kinematic_mc_all(a: &Polytope, b: &Polytope, samples: usize, stream: RngStream) -> Result<Vec<Estimate>> {
    check_bodies(a, b)?;
    let n = a.dim();
    let stats = parallel_stats(stream, samples, n + 1, |rng, out| {
        let g = haar_rotation(rng, n)?;
        let sum = a.minkowski_sum(&b.rotate(&g)?)?;
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = intrinsic_volume(&sum, k)?;
        }
        Ok(())
    })?;
    Ok(stats.iter().map(|s| Estimate::from_stats(s, stream.seed)).collect())
}

pub fn additive_kinematic_mc(k: usize, a: &Polytope, b: &Polytope, samples: usize, stream: RngStream) -> Result<Estimate> {
    degree_check(k, a.dim())?;
    Ok(additive_kinematic_mc_all(a, b, samples, stream)?[k])
}

fn degree_check(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::OutOfRange { what: "degree", value: k as i64, lo: 0, hi: n as i64 });
    }
    Ok(())
}

/// `|value - prediction| / stderr`, with the error floored at `1e-9 max(1, |prediction|)`
/// so that zero-variance estimates are compared at rounding precision.
pub fn z_score(e: &Estimate, prediction: f64) -> f64 {
    let floor = 1e-9 * prediction.abs().max(1.0);
    (e.value - prediction).abs() / e.stderr.max(floor)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Intersection,
    Additive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub formula: Formula,
    pub pair: (String, String),
    pub k: usize,
    pub estimate: Estimate,
    pub prediction: f64,
    pub z: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub n: usize,
    pub bodies: Vec<String>,
    pub seed: u64,
    pub samples: usize,
    pub z_max: f64,
    pub comparisons: Vec<Comparison>,
    pub pass: bool,
}

/// A named test body.
#[derive(Clone, Debug)]
pub struct NamedBody {
    pub name: String,
    pub body: Polytope,
}

impl NamedBody {
    pub fn new(name: impl Into<String>, body: Polytope) -> NamedBody {
        NamedBody { name: name.into(), body }
    }
}

/// Exact right-hand side `sum T_ij mu_i(A) mu_j(B)` of either formula.
pub fn predict(alg: &SoAlgebra, formula: Formula, k: usize, a: &Polytope, b: &Polytope) -> Result<f64> {
    let t = match formula {
        Formula::Intersection => alg.kinematic(k)?,
        Formula::Additive => alg.additive(k)?,
    };
    t.evaluate(&intrinsic_volumes(a)?, &intrinsic_volumes(b)?)
}

/// Which formulas and pairs to run.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub formulas: Vec<Formula>,
    pub pairs: Vec<(NamedBody, NamedBody)>,
    pub samples: usize,
    pub z_max: f64,
}

/// Runs every `(formula, pair, k)` combination against the tables of `alg`.
/// Each `(formula, pair)` draws from its own substream of `stream`.
pub fn run_identity_suite(alg: &SoAlgebra, cfg: &SuiteConfig, stream: RngStream) -> Result<VerificationReport> {
    let n = alg.dim();
    let mut comparisons = Vec::new();
    let mut bodies = Vec::new();
    for (p, (a, b)) in cfg.pairs.iter().enumerate() {
        for name in [&a.name, &b.name] {
            if !bodies.contains(name) {
                bodies.push(name.clone());
            }
        }
        for &formula in &cfg.formulas {
            let sub = stream.substream((2 * p + formula as usize) as u64);
            let estimates = match formula {
                Formula::Intersection => intersection_kinematic_mc_all(&a.body, &b.body, cfg.samples, sub)?,
                Formula::Additive => additive_kinematic_mc_all(&a.body, &b.body, cfg.samples, sub)?,
            };
            for (k, e) in estimates.into_iter().enumerate() {
                let prediction = predict(alg, formula, k, &a.body, &b.body)?;
                let z = z_score(&e, prediction);
                comparisons.push(Comparison {
                    formula,
                    pair: (a.name.clone(), b.name.clone()),
                    k,
                    estimate: Estimate { seed: stream.seed, ..e },
                    prediction,
                    z,
                    pass: z <= cfg.z_max,
                });
            }
        }
    }
    let pass = comparisons.iter().all(|c| c.pass);
    Ok(VerificationReport {
        identity: "kinematic formulas against exact coproducts".into(),
        n,
        bodies,
        seed: stream.seed,
        samples: cfg.samples,
        z_max: cfg.z_max,
        comparisons,
        pass,
    })
}

/// One `mu_A * mu_B = mu_{A+B}` check on `K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionCheck {
    pub convolved: f64,
    pub direct: f64,
    pub relative_error: f64,
}

/// Evaluates `(mu_A * mu_B)(K)` through formal mixed volumes and compares with `vol(A + B + K)`.
pub fn convolution_check(a: &Polytope, b: &Polytope, k: &Polytope) -> Result<ConvolutionCheck> {
    let conv = formal_convolve(&mu_a_expand(a), &mu_a_expand(b))?;
    let convolved = formal_evaluate(&conv, k)?;
    let direct = a.minkowski_sum(b)?.minkowski_sum(k)?.volume();
    Ok(ConvolutionCheck { convolved, direct, relative_error: (convolved - direct).abs() / direct.abs() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionReport {
    pub identity: String,
    pub n: usize,
    pub seed: u64,
    pub checks: Vec<ConvolutionCheck>,
    pub max_relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// `count` random triples of Gaussian polytopes with `vertices` points each.
pub fn convolution_campaign(n: usize, count: usize, vertices: usize, tolerance: f64, stream: RngStream) -> Result<ConvolutionReport> {
    let mut checks = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = stream.substream(i as u64).rng();
        let a = crate::sampling::random_polytope(&mut rng, n, vertices)?;
        let b = crate::sampling::random_polytope(&mut rng, n, vertices)?;
        let k = crate::sampling::random_polytope(&mut rng, n, vertices)?;
        checks.push(convolution_check(&a, &b, &k)?);
    }
    let max_relative_error = checks.iter().map(|c| c.relative_error).fold(0.0, f64::max);
    Ok(ConvolutionReport {
        identity: "μ_A * μ_B = μ_{A+B}".into(),
        n,
        seed: stream.seed,
        checks,
        max_relative_error,
        tolerance,
        pass: max_relative_error < tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cube;

    #[test]
    fn z_floor() {
        let e = Estimate { value: 4.0 + 1e-13, stderr: 0.0, samples: 10, seed: 0 };
        assert!(z_score(&e, 4.0) < 1.0);
        let e = Estimate { value: 4.1, stderr: 0.0, samples: 10, seed: 0 };
        assert!(z_score(&e, 4.0) > 1e6);
    }

    #[test]
    fn additive_degree_zero_is_one() {
        let q = cube(2, 1.0).unwrap();
        let e = additive_kinematic_mc(0, &q, &q, 100, RngStream::new(1)).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn degenerate_bodies_rejected() {
        let q = cube(2, 1.0).unwrap();
        let s = Polytope::hull(&[vec![0.0, 0.0], vec![1.0, 0.0]], 2).unwrap();
        assert_eq!(intersection_kinematic_mc(0, &q, &s, 10, RngStream::new(1)).unwrap_err(), Error::DegenerateBody);
    }

    #[test]
    fn small_convolution_campaign() {
        let r = convolution_campaign(2, 3, 6, 1e-6, RngStream::new(9)).unwrap();
        assert!(r.pass, "{:?}", r.checks);
    }
}
