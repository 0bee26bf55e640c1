//! Exact scalars `q * pi^m` with `q` rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `q * pi^pi_exp`. Zero is stored with `pi_exp = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScaledRational {
    q: BigRational,
    pi_exp: i32,
}

impl ScaledRational {
    pub fn new(q: BigRational, pi_exp: i32) -> ScaledRational {
        if q.is_zero() {
            ScaledRational::zero()
        } else {
            ScaledRational { q, pi_exp }
        }
    }

    pub fn zero() -> ScaledRational {
        ScaledRational { q: BigRational::zero(), pi_exp: 0 }
    }

    pub fn one() -> ScaledRational {
        ScaledRational::integer(1)
    }

    pub fn integer(n: i64) -> ScaledRational {
        ScaledRational::new(BigRational::from_integer(BigInt::from(n)), 0)
    }

    pub fn ratio(num: i64, den: i64) -> ScaledRational {
        ScaledRational::new(BigRational::new(BigInt::from(num), BigInt::from(den)), 0)
    }

    pub fn pi_pow(m: i32) -> ScaledRational {
        ScaledRational::new(BigRational::one(), m)
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn pi_exp(&self) -> i32 {
        self.pi_exp
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.q.is_negative()
    }

    /// Sum; zero is compatible with every power of pi.
    pub fn checked_add(&self, o: &ScaledRational) -> Result<ScaledRational> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_exp != o.pi_exp {
            return Err(Error::MixedPiPower { left: self.pi_exp, right: o.pi_exp });
        }
        Ok(ScaledRational::new(&self.q + &o.q, self.pi_exp))
    }

    pub fn checked_sub(&self, o: &ScaledRational) -> Result<ScaledRational> {
        self.checked_add(&-o.clone())
    }

    /// `None` when dividing by zero.
    pub fn checked_div(&self, o: &ScaledRational) -> Option<ScaledRational> {
        if o.is_zero() {
            return None;
        }
        Some(ScaledRational::new(&self.q / &o.q, self.pi_exp - o.pi_exp))
    }

    pub fn recip(&self) -> Option<ScaledRational> {
        ScaledRational::one().checked_div(self)
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.q.numer().to_f64().unwrap_or(f64::NAN) / self.q.denom().to_f64().unwrap_or(f64::NAN);
        q * std::f64::consts::PI.powi(self.pi_exp)
    }

    /// Multiplies by an exact rational factor.
    pub fn scale(&self, num: i64, den: i64) -> ScaledRational {
        self * &ScaledRational::ratio(num, den)
    }
}

impl Default for ScaledRational {
    fn default() -> Self {
        ScaledRational::zero()
    }
}

impl Mul for &ScaledRational {
    type Output = ScaledRational;
    fn mul(self, o: &ScaledRational) -> ScaledRational {
        ScaledRational::new(&self.q * &o.q, self.pi_exp + o.pi_exp)
    }
}

impl Mul for ScaledRational {
    type Output = ScaledRational;
    fn mul(self, o: ScaledRational) -> ScaledRational {
        &self * &o
    }
}

impl Neg for ScaledRational {
    type Output = ScaledRational;
    fn neg(self) -> ScaledRational {
        ScaledRational { q: -self.q, pi_exp: self.pi_exp }
    }
}

impl PartialOrd for ScaledRational {
    /// Ordered only within one power of pi (or against zero).
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        if self.is_zero() || o.is_zero() || self.pi_exp == o.pi_exp {
            return self.q.partial_cmp(&o.q);
        }
        self.to_f64().partial_cmp(&o.to_f64())
    }
}

impl fmt::Display for ScaledRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)?;
        if self.pi_exp != 0 {
            write!(f, "*pi^{}", self.pi_exp)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ScaledRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for ScaledRational {
    type Err = Error;

    /// Accepts `a/b`, `a/b*pi^m` and `a*pi^m`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once("*pi^") {
            Some((q, m)) => {
                let m = m.trim().parse::<i32>().map_err(|_| Error::Invalid(format!("bad pi exponent in {s:?}")))?;
                Ok(ScaledRational::new(parse_rational(q)?, m))
            }
            None => Ok(ScaledRational::new(parse_rational(s)?, 0)),
        }
    }
}

impl Serialize for ScaledRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ScaledRational", 2)?;
        let q = if self.q.is_integer() { format!("{}/1", self.q.numer()) } else { self.q.to_string() };
        st.serialize_field("q", &q)?;
        st.serialize_field("pi_exp", &self.pi_exp)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ScaledRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            q: String,
            pi_exp: i32,
        }
        let raw = Raw::deserialize(d)?;
        let q = parse_rational(&raw.q).map_err(de::Error::custom)?;
        Ok(ScaledRational::new(q, raw.pi_exp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = ScaledRational::ratio(1, 2) * ScaledRational::pi_pow(1);
        let b = ScaledRational::ratio(1, 3) * ScaledRational::pi_pow(1);
        assert_eq!(a.checked_add(&b).unwrap(), "5/6*pi^1".parse().unwrap());
        assert_eq!(
            a.checked_add(&ScaledRational::one()).unwrap_err(),
            Error::MixedPiPower { left: 1, right: 0 }
        );
        assert_eq!(a.checked_add(&ScaledRational::zero()).unwrap(), a);
        assert_eq!(a.checked_sub(&a).unwrap(), ScaledRational::zero());
        assert_eq!((&a * &b).pi_exp(), 2);
        assert!(a.checked_div(&ScaledRational::zero()).is_none());
        assert!((a.to_f64() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn zero_is_canonical() {
        let z = ScaledRational::new(BigRational::zero(), 5);
        assert_eq!(z.pi_exp(), 0);
        assert_eq!(z, ScaledRational::zero());
    }

    #[test]
    fn json_round_trip() {
        let a: ScaledRational = "-4/6*pi^-2".parse().unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"q":"-2/3","pi_exp":-2}"#);
        assert_eq!(serde_json::from_str::<ScaledRational>(&s).unwrap(), a);
        assert_eq!(serde_json::to_string(&ScaledRational::integer(3)).unwrap(), r#"{"q":"3/1","pi_exp":0}"#);
        assert!("1/0".parse::<ScaledRational>().is_err());
    }
}
