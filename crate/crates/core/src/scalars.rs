//! Exact roots of unity.
//!
//! A [`RootOfUnity`] is the value `ζ_N^e` with `ζ_N = exp(2πi/N)`. Values are
//! kept in lowest terms, so structural equality is value equality.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::config::arith::{gcd, lcm};
use crate::error::{Error, Result};

/// Default bound on the order of values produced by checked arithmetic.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawRoot", into = "RawRoot")]
pub struct RootOfUnity {
    order: u64,
    exp: u64,
}

#[derive(Serialize, Deserialize)]
struct RawRoot {
    order: u64,
    exp: u64,
}

impl TryFrom<RawRoot> for RootOfUnity {
    type Error = Error;
    fn try_from(raw: RawRoot) -> Result<Self> {
        RootOfUnity::new(raw.order, raw.exp)
    }
}

impl From<RootOfUnity> for RawRoot {
    fn from(r: RootOfUnity) -> Self {
        RawRoot {
            order: r.order,
            exp: r.exp,
        }
    }
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exp: 0 };

    /// `ζ_order^exp`, reduced to lowest terms. `exp` is taken mod `order`.
    pub fn new(order: u64, exp: u64) -> Result<Self> {
        Self::new_capped(order, exp, DEFAULT_ORDER_CAP)
    }

    pub fn new_capped(order: u64, exp: u64, cap: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::Parse("root of unity order must be positive".into()));
        }
        if order > cap {
            return Err(Error::CapExceeded {
                what: "root of unity order",
                limit: cap,
                actual: order,
            });
        }
        Ok(Self::canonical(order, exp % order))
    }

    /// Value of the residue `exp` read in `μ_modulus`. Never fails for moduli
    /// already in use by a table.
    pub(crate) fn from_residue(modulus: u64, exp: u64) -> Self {
        Self::canonical(modulus, exp % modulus)
    }

    fn canonical(order: u64, exp: u64) -> Self {
        if exp == 0 {
            return Self::ONE;
        }
        let g = gcd(exp, order);
        RootOfUnity {
            order: order / g,
            exp: exp / g,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exp(&self) -> u64 {
        self.exp
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn mul(self, other: Self) -> Self {
        let m = lcm(self.order, other.order);
        let e =
            (self.exp as u128 * (m / self.order) as u128 + other.exp as u128 * (m / other.order) as u128) % m as u128;
        Self::canonical(m, e as u64)
    }

    /// Multiplication that refuses to produce orders above `cap`.
    pub fn checked_mul(self, other: Self, cap: u64) -> Result<Self> {
        let m = lcm(self.order, other.order);
        if m > cap {
            return Err(Error::CapExceeded {
                what: "root of unity order",
                limit: cap,
                actual: m,
            });
        }
        Ok(self.mul(other))
    }

    pub fn inv(self) -> Self {
        Self::canonical(self.order, (self.order - self.exp) % self.order)
    }

    pub fn pow(self, k: i64) -> Self {
        let n = self.order as i128;
        let e = (self.exp as i128 * k as i128).rem_euclid(n);
        Self::canonical(self.order, e as u64)
    }

    /// The residue `r` mod `modulus` with `self = ζ_modulus^r`.
    pub fn embed(self, modulus: u64) -> Result<u64> {
        if modulus == 0 || !modulus.is_multiple_of(self.order) {
            return Err(Error::NotDivisible {
                order: self.order,
                target: modulus,
            });
        }
        Ok(self.exp * (modulus / self.order) % modulus)
    }

    /// `(re, im)` of the value; for display and test oracles only.
    pub fn to_f64_pair(self) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI * self.exp as f64 / self.order as f64;
        (theta.cos(), theta.sin())
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, rhs: Self) -> Self {
        RootOfUnity::mul(self, rhs)
    }
}

impl Default for RootOfUnity {
    fn default() -> Self {
        Self::ONE
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exp) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (n, 1) => write!(f, "ζ{n}"),
            (n, e) => write!(f, "ζ{n}^{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, e: u64) -> RootOfUnity {
        RootOfUnity::new(n, e).unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(r(1, 0) * r(4, 1), r(4, 1));
        let ii = r(4, 1) * r(4, 1);
        assert_eq!((ii.order(), ii.exp()), (2, 1));
        let p = r(3, 1) * r(2, 1);
        assert_eq!((p.order(), p.exp()), (6, 5));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(r(4, 1).pow(0), RootOfUnity::ONE);
        let inv = r(4, 1).pow(-1);
        assert_eq!((inv.order(), inv.exp()), (4, 3));
        let p = r(6, 1).pow(4);
        assert_eq!((p.order(), p.exp()), (3, 2));
    }

    #[test]
    fn embed_examples() {
        assert_eq!(r(2, 1).embed(8), Ok(4));
        assert_eq!(RootOfUnity::ONE.embed(12), Ok(0));
        assert_eq!(r(3, 1).embed(4), Err(Error::NotDivisible { order: 3, target: 4 }));
    }

    #[test]
    fn canonical_form() {
        let x = r(12, 8);
        assert_eq!((x.order(), x.exp()), (3, 2));
        assert_eq!(r(5, 0), RootOfUnity::ONE);
        assert_eq!(r(5, 10), RootOfUnity::ONE);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            RootOfUnity::new(DEFAULT_ORDER_CAP + 1, 1),
            Err(Error::CapExceeded { .. })
        ));
        let a = r(1 << 10, 1);
        let b = r((1 << 10) + 1, 1);
        assert!(a.checked_mul(b, DEFAULT_ORDER_CAP).is_err());
        assert!(a.checked_mul(a, DEFAULT_ORDER_CAP).is_ok());
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&r(8, 6)).unwrap();
        assert_eq!(s, r#"{"order":4,"exp":3}"#);
        let back: RootOfUnity = serde_json::from_str(r#"{"order":8,"exp":6}"#).unwrap();
        assert_eq!(back, r(4, 3));
    }
}
