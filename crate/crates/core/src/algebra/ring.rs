//! The algebra of rotation-invariant valuations on the intrinsic-volume basis.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::scalar::ScaledRational;
use crate::error::{Error, Result};

fn range_check(what: &'static str, k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::OutOfRange { what, value: k as i64, lo: 0, hi: n as i64 });
    }
    Ok(())
}

fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact binomial coefficient; zero outside `0 <= k <= n`.
pub fn binomial_exact(n: usize, k: usize) -> ScaledRational {
    if k > n {
        return ScaledRational::zero();
    }
    let b = factorial_big(n) / (factorial_big(k) * factorial_big(n - k));
    ScaledRational::new(BigRational::from_integer(b), 0)
}

/// Volume of the unit ball in `R^k`: `pi^m / m!` for `k = 2m`,
/// `2^(2m+1) m! pi^m / (2m+1)!` for `k = 2m + 1`.
pub fn omega(k: usize) -> ScaledRational {
    let m = k / 2;
    let q = if k.is_multiple_of(2) {
        BigRational::new(BigInt::one(), factorial_big(m))
    } else {
        BigRational::new(BigInt::from(2).pow(k as u32) * factorial_big(m), factorial_big(k))
    };
    ScaledRational::new(q, m as i32)
}

/// Flag coefficient `C(n,k) omega_n / (omega_k omega_{n-k})`.
pub fn flag(n: usize, k: usize) -> Result<ScaledRational> {
    range_check("k", k, n)?;
    let num = &binomial_exact(n, k) * &omega(n);
    let den = &omega(k) * &omega(n - k);
    Ok(num.checked_div(&den).expect("ball volumes are nonzero"))
}

/// `c_ij` in `mu_i * mu_j = c_ij mu_{i+j-n}`; zero when `i + j < n`.
pub fn convolution_constant(n: usize, i: usize, j: usize) -> Result<ScaledRational> {
    range_check("i", i, n)?;
    range_check("j", j, n)?;
    if i + j < n {
        return Ok(ScaledRational::zero());
    }
    let num = &(&(&binomial_exact(n, i) * &binomial_exact(n, j)) * &binomial_exact(i + j, n)) * &omega(2 * n - i - j);
    let den = &(&(&binomial_exact(i + j, i) * &binomial_exact(n, i + j - n)) * &omega(n - i)) * &omega(n - j);
    Ok(num.checked_div(&den).expect("nonzero denominator"))
}

/// `k_G(mu_k) = sum_{i+j=n+k} [n+k, k] [n+k, i]^-1 mu_i (x) mu_j`.
pub fn kinematic_coproduct(n: usize, k: usize) -> Result<KinematicTensor> {
    range_check("k", k, n)?;
    let mut t = KinematicTensor::zero(n);
    let top = flag(n + k, k)?;
    for i in k..=n {
        let j = n + k - i;
        t.entries[i][j] = top.checked_div(&flag(n + k, i)?).expect("nonzero flag");
    }
    Ok(t)
}

/// `a_G(mu_k) = [2n-k, n-k] sum_{i+j=k} [2n-k, n-i]^-1 mu_i (x) mu_j`.
pub fn additive_coproduct(n: usize, k: usize) -> Result<KinematicTensor> {
    range_check("k", k, n)?;
    let mut t = KinematicTensor::zero(n);
    let m = 2 * n - k;
    let top = flag(m, n - k)?;
    for i in 0..=k {
        t.entries[i][k - i] = top.checked_div(&flag(m, n - i)?).expect("nonzero flag");
    }
    Ok(t)
}

/// `sum c_k mu_k` in dimension `n`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct InvariantValuation {
    n: usize,
    coeffs: Vec<ScaledRational>,
}

impl InvariantValuation {
    pub fn zero(n: usize) -> InvariantValuation {
        InvariantValuation { n, coeffs: vec![ScaledRational::zero(); n + 1] }
    }

    /// `c mu_k`.
    pub fn monomial(n: usize, k: usize, c: ScaledRational) -> Result<InvariantValuation> {
        range_check("degree", k, n)?;
        let mut v = InvariantValuation::zero(n);
        v.coeffs[k] = c;
        Ok(v)
    }

    pub fn mu(n: usize, k: usize) -> Result<InvariantValuation> {
        InvariantValuation::monomial(n, k, ScaledRational::one())
    }

    /// Euler characteristic `mu_0`.
    pub fn chi(n: usize) -> InvariantValuation {
        InvariantValuation::mu(n, 0).expect("degree 0 is in range")
    }

    pub fn vol(n: usize) -> InvariantValuation {
        InvariantValuation::mu(n, n).expect("degree n is in range")
    }

    pub fn from_coeffs(coeffs: Vec<ScaledRational>) -> Result<InvariantValuation> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("empty coefficient vector".into()));
        }
        Ok(InvariantValuation { n: coeffs.len() - 1, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[ScaledRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &ScaledRational {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ScaledRational::is_zero)
    }

    /// The single degree carrying a nonzero coefficient, if there is exactly one.
    pub fn degree(&self) -> Option<usize> {
        let mut nz = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, _)| k);
        match (nz.next(), nz.next()) {
            (Some(k), None) => Some(k),
            _ => None,
        }
    }

    pub fn scaled(&self, c: &ScaledRational) -> InvariantValuation {
        InvariantValuation { n: self.n, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn checked_add(&self, o: &InvariantValuation) -> Result<InvariantValuation> {
        check_n(self.n, o.n)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(InvariantValuation { n: self.n, coeffs })
    }

    /// Value on a body with intrinsic volumes `mu`.
    pub fn evaluate(&self, mu: &[f64]) -> Result<f64> {
        if mu.len() != self.n + 1 {
            return Err(Error::DimensionMismatch { expected: self.n + 1, found: mu.len() });
        }
        Ok(self.coeffs.iter().zip(mu).map(|(c, m)| c.to_f64() * m).sum())
    }
}

fn check_n(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// `sum T_ij mu_i (x) mu_j`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KinematicTensor {
    n: usize,
    entries: Vec<Vec<ScaledRational>>,
}

impl KinematicTensor {
    pub fn zero(n: usize) -> KinematicTensor {
        KinematicTensor { n, entries: vec![vec![ScaledRational::zero(); n + 1]; n + 1] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ScaledRational {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: ScaledRational) {
        self.entries[i][j] = c;
    }

    pub fn entries(&self) -> &[Vec<ScaledRational>] {
        &self.entries
    }

    pub fn transpose(&self) -> KinematicTensor {
        let mut t = KinematicTensor::zero(self.n);
        for i in 0..=self.n {
            for j in 0..=self.n {
                t.entries[j][i] = self.entries[i][j].clone();
            }
        }
        t
    }

    /// `(D (x) D)`: reverses the degree in both slots.
    pub fn dual_both(&self) -> KinematicTensor {
        let n = self.n;
        let mut t = KinematicTensor::zero(n);
        for i in 0..=n {
            for j in 0..=n {
                t.entries[n - i][n - j] = self.entries[i][j].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Index pairs with nonzero entries.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut s = Vec::new();
        for i in 0..=self.n {
            for j in 0..=self.n {
                if !self.entries[i][j].is_zero() {
                    s.push((i, j));
                }
            }
        }
        s
    }

    pub fn scaled(&self, c: &ScaledRational) -> KinematicTensor {
        KinematicTensor {
            n: self.n,
            entries: self.entries.iter().map(|r| r.iter().map(|x| x * c).collect()).collect(),
        }
    }

    pub fn checked_add(&self, o: &KinematicTensor) -> Result<KinematicTensor> {
        check_n(self.n, o.n)?;
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.checked_add(y)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(KinematicTensor { n: self.n, entries })
    }

    /// `sum T_ij mu_i(A) mu_j(B)`.
    pub fn evaluate(&self, mu_a: &[f64], mu_b: &[f64]) -> Result<f64> {
        for m in [mu_a, mu_b] {
            if m.len() != self.n + 1 {
                return Err(Error::DimensionMismatch { expected: self.n + 1, found: m.len() });
            }
        }
        let mut s = 0.0;
        for (i, a) in mu_a.iter().enumerate() {
            for (j, b) in mu_b.iter().enumerate() {
                let c = &self.entries[i][j];
                if !c.is_zero() {
                    s += c.to_f64() * a * b;
                }
            }
        }
        Ok(s)
    }
}

/// One stored structure constant of an [`SoAlgebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constant {
    Omega(usize),
    Convolution(usize, usize),
    Kinematic { k: usize, i: usize, j: usize },
    Additive { k: usize, i: usize, j: usize },
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Omega(k) => write!(f, "omega[{k}]"),
            Constant::Convolution(i, j) => write!(f, "conv[{i}][{j}]"),
            Constant::Kinematic { k, i, j } => write!(f, "k_G(mu_{k})[{i}][{j}]"),
            Constant::Additive { k, i, j } => write!(f, "a_G(mu_{k})[{i}][{j}]"),
        }
    }
}

/// Structure constants of the invariant valuations in dimension `n`: ball
/// volumes, the convolution table, and both coproduct tables. Every operation
/// reads these tables, so a perturbed copy exercises the verifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoAlgebra {
    n: usize,
    omega: Vec<ScaledRational>,
    conv: Vec<Vec<ScaledRational>>,
    kinematic: Vec<KinematicTensor>,
    additive: Vec<KinematicTensor>,
}

impl SoAlgebra {
    pub fn new(n: usize) -> Result<SoAlgebra> {
        if n == 0 || n > 16 {
            return Err(Error::UnsupportedDimension(n));
        }
        let omega = (0..=n).map(omega).collect();
        let conv = (0..=n)
            .map(|i| (0..=n).map(|j| convolution_constant(n, i, j)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let kinematic = (0..=n).map(|k| kinematic_coproduct(n, k)).collect::<Result<_>>()?;
        let additive = (0..=n).map(|k| additive_coproduct(n, k)).collect::<Result<_>>()?;
        Ok(SoAlgebra { n, omega, conv, kinematic, additive })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn omega(&self, k: usize) -> &ScaledRational {
        &self.omega[k]
    }

    pub fn convolution_table(&self) -> &[Vec<ScaledRational>] {
        &self.conv
    }

    pub fn kinematic(&self, k: usize) -> Result<&KinematicTensor> {
        range_check("k", k, self.n)?;
        Ok(&self.kinematic[k])
    }

    pub fn additive(&self, k: usize) -> Result<&KinematicTensor> {
        range_check("k", k, self.n)?;
        Ok(&self.additive[k])
    }

    /// Every nonzero stored constant.
    pub fn constants(&self) -> Vec<Constant> {
        let n = self.n;
        let mut out: Vec<Constant> = (0..=n).map(Constant::Omega).collect();
        for i in 0..=n {
            for j in 0..=n {
                if !self.conv[i][j].is_zero() {
                    out.push(Constant::Convolution(i, j));
                }
            }
        }
        for k in 0..=n {
            for (i, j) in self.kinematic[k].support() {
                out.push(Constant::Kinematic { k, i, j });
            }
            for (i, j) in self.additive[k].support() {
                out.push(Constant::Additive { k, i, j });
            }
        }
        out
    }

    /// Copy with one constant multiplied by `factor`.
    pub fn perturbed(&self, c: Constant, factor: &ScaledRational) -> SoAlgebra {
        let mut a = self.clone();
        let slot = match c {
            Constant::Omega(k) => &mut a.omega[k],
            Constant::Convolution(i, j) => &mut a.conv[i][j],
            Constant::Kinematic { k, i, j } => &mut a.kinematic[k].entries[i][j],
            Constant::Additive { k, i, j } => &mut a.additive[k].entries[i][j],
        };
        *slot = &*slot * factor;
        a
    }

    fn check(&self, v: &InvariantValuation) -> Result<()> {
        check_n(self.n, v.n)
    }

    pub fn dual(&self, v: &InvariantValuation) -> Result<InvariantValuation> {
        self.check(v)?;
        Ok(InvariantValuation { n: self.n, coeffs: v.coeffs.iter().rev().cloned().collect() })
    }

    /// Bilinear extension of `mu_i * mu_j = c_ij mu_{i+j-n}`.
    pub fn convolve(&self, a: &InvariantValuation, b: &InvariantValuation) -> Result<InvariantValuation> {
        self.check(a)?;
        self.check(b)?;
        let n = self.n;
        let mut out = InvariantValuation::zero(n);
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                if i + j < n || x.is_zero() || y.is_zero() {
                    continue;
                }
                let term = &(x * y) * &self.conv[i][j];
                out.coeffs[i + j - n] = out.coeffs[i + j - n].checked_add(&term)?;
            }
        }
        Ok(out)
    }

    /// `a . b = D(Da * Db)`.
    pub fn product(&self, a: &InvariantValuation, b: &InvariantValuation) -> Result<InvariantValuation> {
        self.dual(&self.convolve(&self.dual(a)?, &self.dual(b)?)?)
    }

    /// Coefficient of `vol` in `a . b`.
    pub fn poincare_pairing(&self, a: &InvariantValuation, b: &InvariantValuation) -> Result<ScaledRational> {
        Ok(self.product(a, b)?.coeffs[self.n].clone())
    }

    /// Pairing between degree `k` and degree `n - k`; a 1x1 matrix on the intrinsic-volume basis.
    pub fn pairing_matrix(&self, k: usize) -> Result<Vec<Vec<ScaledRational>>> {
        range_check("degree", k, self.n)?;
        let a = InvariantValuation::mu(self.n, k)?;
        let b = InvariantValuation::mu(self.n, self.n - k)?;
        Ok(vec![vec![self.poincare_pairing(&a, &b)?]])
    }

    /// `Lambda(phi) = 2 mu_{n-1} * phi`.
    pub fn lefschetz_lambda(&self, v: &InvariantValuation) -> Result<InvariantValuation> {
        let two_mu = InvariantValuation::monomial(self.n, self.n - 1, ScaledRational::integer(2))?;
        self.convolve(&two_mu, v)
    }

    /// `L(phi) = mu_1 . phi`.
    pub fn lefschetz_l(&self, v: &InvariantValuation) -> Result<InvariantValuation> {
        self.product(&InvariantValuation::mu(self.n, 1)?, v)
    }

    fn apply_table(&self, table: &[KinematicTensor], v: &InvariantValuation) -> Result<KinematicTensor> {
        self.check(v)?;
        let mut t = KinematicTensor::zero(self.n);
        for (k, c) in v.coeffs.iter().enumerate() {
            if !c.is_zero() {
                t = t.checked_add(&table[k].scaled(c))?;
            }
        }
        Ok(t)
    }

    /// Linear extension of `k_G` to arbitrary invariant valuations.
    pub fn kinematic_of(&self, v: &InvariantValuation) -> Result<KinematicTensor> {
        self.apply_table(&self.kinematic, v)
    }

    /// Linear extension of `a_G`.
    pub fn additive_of(&self, v: &InvariantValuation) -> Result<KinematicTensor> {
        self.apply_table(&self.additive, v)
    }

    /// `sum_k omega_{n-k} r^{n-k} mu_k`: the coefficients of `mu_{rB}`, indexed by degree,
    /// each stored with the power of `r` it multiplies.
    pub fn steiner_vector(&self) -> Vec<(usize, ScaledRational)> {
        (0..=self.n).map(|k| (self.n - k, self.omega[self.n - k].clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sr(s: &str) -> ScaledRational {
        s.parse().unwrap()
    }

    #[test]
    fn ball_volumes() {
        let want = ["1", "2", "1*pi^1", "4/3*pi^1", "1/2*pi^2", "8/15*pi^2"];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(omega(k), sr(w), "omega_{k}");
        }
    }

    #[test]
    fn flags() {
        assert_eq!(flag(2, 1).unwrap(), sr("1/2*pi^1"));
        assert_eq!(flag(3, 1).unwrap(), sr("2"));
        for n in 0..8 {
            for k in 0..=n {
                assert_eq!(flag(n, k).unwrap(), flag(n, n - k).unwrap());
            }
        }
        assert!(flag(2, 3).is_err());
    }

    #[test]
    fn planar_tables() {
        let t = kinematic_coproduct(2, 0).unwrap();
        assert_eq!(t.support(), vec![(0, 2), (1, 1), (2, 0)]);
        assert_eq!(*t.get(1, 1), sr("2*pi^-1"));
        let a = additive_coproduct(2, 1).unwrap();
        assert_eq!(*a.get(0, 1), ScaledRational::one());
        assert_eq!(*a.get(1, 0), ScaledRational::one());
        assert_eq!(convolution_constant(2, 1, 1).unwrap(), sr("1/2*pi^1"));
    }

    #[test]
    fn product_and_pairing() {
        let alg = SoAlgebra::new(2).unwrap();
        let mu1 = InvariantValuation::mu(2, 1).unwrap();
        let p = alg.product(&mu1, &mu1).unwrap();
        assert_eq!(p, InvariantValuation::monomial(2, 2, sr("1/2*pi^1")).unwrap());
        assert_eq!(alg.poincare_pairing(&InvariantValuation::chi(2), &InvariantValuation::vol(2)).unwrap(), ScaledRational::one());
        assert!(alg.poincare_pairing(&mu1, &InvariantValuation::vol(2)).unwrap().is_zero());
    }

    #[test]
    fn perturbation_touches_one_slot() {
        let alg = SoAlgebra::new(3).unwrap();
        let c = Constant::Convolution(2, 2);
        let p = alg.perturbed(c, &ScaledRational::ratio(21, 20));
        assert_ne!(p, alg);
        assert_eq!(p.convolution_table()[2][2], alg.convolution_table()[2][2].scale(21, 20));
        assert_eq!(p.convolution_table()[1][2], alg.convolution_table()[1][2]);
    }
}
