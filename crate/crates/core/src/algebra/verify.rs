//! Exact identity checks over the structure constants. Each returns a report
//! whose status is `pass` only when both sides agree with zero tolerance.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::ring::{binomial_exact, omega, InvariantValuation as Iv, KinematicTensor, SoAlgebra};
use super::scalar::ScaledRational;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub n: usize,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Collects labelled pairs and builds a report from them.
struct Comparison {
    identity: &'static str,
    n: usize,
    lhs: Vec<Value>,
    rhs: Vec<Value>,
    counterexample: Option<Value>,
}

impl Comparison {
    fn new(identity: &'static str, n: usize) -> Comparison {
        Comparison { identity, n, lhs: Vec::new(), rhs: Vec::new(), counterexample: None }
    }

    fn check<T: Serialize + PartialEq>(&mut self, at: Value, l: &T, r: &T) {
        let (lv, rv) = (to_value(l), to_value(r));
        if l != r && self.counterexample.is_none() {
            self.counterexample = Some(json!({"at": at, "lhs": lv, "rhs": rv}));
        }
        self.lhs.push(json!({"at": at, "value": lv}));
        self.rhs.push(json!({"at": at, "value": rv}));
    }

    fn flag(&mut self, at: Value, ok: bool) {
        self.check(at, &ok, &true);
    }

    fn finish(self) -> IdentityReport {
        IdentityReport {
            identity: self.identity.to_string(),
            n: self.n,
            status: if self.counterexample.is_none() { Status::Pass } else { Status::Fail },
            lhs: Value::Array(self.lhs),
            rhs: Value::Array(self.rhs),
            counterexample: self.counterexample,
        }
    }
}

fn basis(alg: &SoAlgebra) -> Vec<Iv> {
    (0..=alg.dim()).map(|k| Iv::mu(alg.dim(), k).expect("in range")).collect()
}

/// `(D (x) D) k_G(chi) = k_G(chi)`.
pub fn verify_dxd(alg: &SoAlgebra) -> Result<IdentityReport> {
    let mut c = Comparison::new("(D⊗D)(k_G(χ)) = k_G(χ)", alg.dim());
    let t = alg.kinematic(0)?;
    c.check(json!("k_G(mu_0)"), &t.dual_both(), t);
    Ok(c.finish())
}

/// `a_G(mu_k) = (D (x) D) k_G(D mu_k)` for every `k`.
pub fn verify_additive_kf(alg: &SoAlgebra) -> Result<IdentityReport> {
    let n = alg.dim();
    let mut c = Comparison::new("a_G = (D⊗D)∘k_G∘D", n);
    for (k, mu) in basis(alg).iter().enumerate() {
        let rhs = alg.kinematic_of(&alg.dual(mu)?)?.dual_both();
        c.check(json!({ "k": k }), alg.additive(k)?, &rhs);
    }
    Ok(c.finish())
}

/// `(p (x) p) k_G = m_G^* p` through the triple products
/// `<k_G(a), p(b) (x) p(c)> = <abc, vol^*>` over all basis triples.
pub fn verify_abstract(alg: &SoAlgebra) -> Result<IdentityReport> {
    let n = alg.dim();
    let mut c = Comparison::new("(p⊗p)∘k_G = m_G*∘p", n);
    let b = basis(alg);
    let pairing: Vec<Vec<ScaledRational>> = b
        .iter()
        .map(|x| b.iter().map(|y| alg.poincare_pairing(x, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    for (k, a) in b.iter().enumerate() {
        let t = alg.kinematic_of(a)?;
        for i in 0..=n {
            for j in 0..=n {
                let mut lhs = ScaledRational::zero();
                for s in 0..=n {
                    for u in 0..=n {
                        let term = &(t.get(s, u) * &pairing[s][i]) * &pairing[u][j];
                        lhs = lhs.checked_add(&term)?;
                    }
                }
                let rhs = alg.poincare_pairing(&alg.product(a, &b[i])?, &b[j])?;
                c.check(json!([k, i, j]), &lhs, &rhs);
            }
        }
    }
    Ok(c.finish())
}

/// `Lambda = 2 D L D` on the basis.
pub fn verify_lefschetz_duality(alg: &SoAlgebra) -> Result<IdentityReport> {
    let mut c = Comparison::new("Λ = 2 D∘L∘D", alg.dim());
    for (k, mu) in basis(alg).iter().enumerate() {
        let lhs = alg.lefschetz_lambda(mu)?;
        let rhs = alg.dual(&alg.lefschetz_l(&alg.dual(mu)?)?)?.scaled(&ScaledRational::integer(2));
        c.check(json!({ "k": k }), &lhs, &rhs);
    }
    Ok(c.finish())
}

/// `mu_k . mu_{n-k} = D(mu_k * mu_{n-k})`.
pub fn verify_product_convolution_duality(alg: &SoAlgebra) -> Result<IdentityReport> {
    let n = alg.dim();
    let mut c = Comparison::new("φ·ψ = D(φ*ψ) in complementary degrees", n);
    let b = basis(alg);
    for k in 0..=n {
        let lhs = alg.product(&b[k], &b[n - k])?;
        let rhs = alg.dual(&alg.convolve(&b[k], &b[n - k])?)?;
        c.check(json!({ "k": k }), &lhs, &rhs);
    }
    Ok(c.finish())
}

/// `S(r) * S(s) = S(r + s)` where `S(r) = sum_k omega_{n-k} r^{n-k} mu_k`,
/// compared coefficient by coefficient in `mu_m r^a s^b`.
pub fn verify_steiner(alg: &SoAlgebra) -> Result<IdentityReport> {
    let n = alg.dim();
    let mut c = Comparison::new("S(r)*S(s) = S(r+s)", n);
    let s = alg.steiner_vector();
    for a in 0..=n {
        for b in 0..=n - a {
            let m = n - a - b;
            // convolution side: only mu_{n-a} (coefficient omega_a r^a) and mu_{n-b} reach r^a s^b
            let left = Iv::monomial(n, n - a, s[n - a].1.clone())?;
            let right = Iv::monomial(n, n - b, s[n - b].1.clone())?;
            let lhs = alg.convolve(&left, &right)?.coeff(m).clone();
            // S(r+s) at mu_m is omega_{a+b} (r+s)^{a+b}
            let rhs = &binomial_exact(a + b, a) * alg.omega(a + b);
            c.check(json!({ "mu": m, "r": a, "s": b }), &lhs, &rhs);
        }
    }
    Ok(c.finish())
}

/// `Lambda mu_k = (n-k+1) omega_{n-k+1} / omega_{n-k} mu_{k-1}`, the derivative at
/// `r = 0` of `mu_k(K + rB)` by the classical Steiner formula.
pub fn verify_lambda_steiner(alg: &SoAlgebra) -> Result<IdentityReport> {
    let n = alg.dim();
    let mut c = Comparison::new("Λμ_k = d/dr μ_k(·+rB) at r=0", n);
    for (k, mu) in basis(alg).iter().enumerate() {
        let lhs = alg.lefschetz_lambda(mu)?;
        let rhs = if k == 0 {
            Iv::zero(n)
        } else {
            let f = omega(n - k + 1).checked_div(&omega(n - k)).expect("nonzero");
            Iv::monomial(n, k - 1, f.scale((n - k + 1) as i64, 1))?
        };
        c.check(json!({ "k": k }), &lhs, &rhs);
    }
    Ok(c.finish())
}

/// Associativity, commutativity and units of both products, and
/// `D(a . b) = Da * Db`, over all basis elements.
pub fn verify_algebra_laws(alg: &SoAlgebra) -> Result<IdentityReport> {
    let n = alg.dim();
    let mut c = Comparison::new("algebra laws and D intertwining", n);
    let b = basis(alg);
    let (chi, vol) = (Iv::chi(n), Iv::vol(n));
    for i in 0..=n {
        c.check(json!({"law": "vol*x = x", "x": i}), &alg.convolve(&vol, &b[i])?, &b[i]);
        c.check(json!({"law": "chi.x = x", "x": i}), &alg.product(&chi, &b[i])?, &b[i]);
        for j in 0..=n {
            let conv = alg.convolve(&b[i], &b[j])?;
            let prod = alg.product(&b[i], &b[j])?;
            c.check(json!({"law": "x*y = y*x", "x": i, "y": j}), &conv, &alg.convolve(&b[j], &b[i])?);
            c.check(json!({"law": "x.y = y.x", "x": i, "y": j}), &prod, &alg.product(&b[j], &b[i])?);
            c.check(
                json!({"law": "D(x.y) = Dx*Dy", "x": i, "y": j}),
                &alg.dual(&prod)?,
                &alg.convolve(&alg.dual(&b[i])?, &alg.dual(&b[j])?)?,
            );
            for k in 0..=n {
                c.check(
                    json!({"law": "(x*y)*z = x*(y*z)", "x": i, "y": j, "z": k}),
                    &alg.convolve(&conv, &b[k])?,
                    &alg.convolve(&b[i], &alg.convolve(&b[j], &b[k])?)?,
                );
                c.check(
                    json!({"law": "(x.y).z = x.(y.z)", "x": i, "y": j, "z": k}),
                    &alg.product(&prod, &b[k])?,
                    &alg.product(&b[i], &alg.product(&b[j], &b[k])?)?,
                );
            }
        }
    }
    Ok(c.finish())
}

fn graded(t: &KinematicTensor, total: usize) -> bool {
    t.support().iter().all(|&(i, j)| i + j == total)
}

/// Coproduct tables are symmetric and supported on the right antidiagonal.
pub fn verify_tensor_shape(alg: &SoAlgebra) -> Result<IdentityReport> {
    let n = alg.dim();
    let mut c = Comparison::new("coproducts symmetric and graded", n);
    for k in 0..=n {
        let kin = alg.kinematic(k)?;
        let add = alg.additive(k)?;
        c.flag(json!({"k_G": k, "check": "symmetric"}), kin.is_symmetric());
        c.flag(json!({"k_G": k, "check": "i+j=n+k"}), graded(kin, n + k));
        c.flag(json!({"a_G": k, "check": "symmetric"}), add.is_symmetric());
        c.flag(json!({"a_G": k, "check": "i+j=k"}), graded(add, k));
    }
    Ok(c.finish())
}

/// Every exact check, in a fixed order.
pub fn exact_suite(alg: &SoAlgebra) -> Result<Vec<IdentityReport>> {
    Ok(vec![
        verify_dxd(alg)?,
        verify_additive_kf(alg)?,
        verify_abstract(alg)?,
        verify_lefschetz_duality(alg)?,
        verify_product_convolution_duality(alg)?,
        verify_steiner(alg)?,
        verify_lambda_steiner(alg)?,
        verify_algebra_laws(alg)?,
        verify_tensor_shape(alg)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_in_low_dimensions() {
        for n in 1..=5 {
            let alg = SoAlgebra::new(n).unwrap();
            for r in exact_suite(&alg).unwrap() {
                assert!(r.passed(), "n={n}: {} {:?}", r.identity, r.counterexample);
            }
        }
    }

    #[test]
    fn broken_table_is_reported() {
        let alg = SoAlgebra::new(2).unwrap();
        let bad = alg.perturbed(super::super::ring::Constant::Kinematic { k: 0, i: 0, j: 2 }, &ScaledRational::integer(2));
        let r = verify_dxd(&bad).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn every_constant_is_guarded() {
        for n in 2..=4 {
            let alg = SoAlgebra::new(n).unwrap();
            for c in alg.constants() {
                let bad = alg.perturbed(c, &ScaledRational::ratio(21, 20));
                let caught = exact_suite(&bad).unwrap().iter().any(|r| !r.passed());
                assert!(caught, "n={n}: perturbing {c} went unnoticed");
            }
        }
    }
}
