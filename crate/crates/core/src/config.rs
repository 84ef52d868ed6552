//! Enumeration caps shared by all modules.
//!
//! Every brute-force routine checks its input size against one of these
//! bounds and fails with [`Error::CapExceeded`] instead of truncating.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding [`Caps::group_order`].
pub const CAP_ENV: &str = "FINALG_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest root-of-unity order produced by checked arithmetic.
    pub root_order: u64,
    /// Largest group order for automorphism / form / orthogonal enumeration.
    pub group_order: u64,
    /// Largest group order for subgroup enumeration.
    pub subgroup_order: u64,
    /// Largest number of entries in a cochain table or linear system.
    pub table_entries: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            root_order: 1 << 20,
            group_order: 4096,
            subgroup_order: 256,
            table_entries: 1 << 24,
        }
    }
}

impl Caps {
    /// Defaults, with `group_order` taken from `FINALG_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        if let Ok(raw) = std::env::var(CAP_ENV) {
            let v: u64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{CAP_ENV}={raw:?} is not an integer")))?;
            caps.group_order = v;
        }
        caps.validate()?;
        Ok(caps)
    }

    pub fn with_group_order(mut self, cap: u64) -> Self {
        self.group_order = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.root_order == 0 || self.group_order == 0 || self.subgroup_order == 0 || self.table_entries == 0 {
            return Err(Error::Parse("caps must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn check(&self, what: &'static str, limit: u64, actual: u64) -> Result<()> {
        if actual > limit {
            Err(Error::CapExceeded { what, limit, actual })
        } else {
            Ok(())
        }
    }
}

/// Small number-theory helpers used across modules.
pub(crate) mod arith {
    pub fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }

    pub fn lcm(a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        a / gcd(a, b) * b
    }

    pub fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    /// Squarefree part of a positive integer.
    pub fn squarefree_part(mut n: u64) -> u64 {
        let mut out = 1;
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            if e % 2 == 1 {
                out *= d;
            }
            d += 1;
        }
        out * n
    }

    pub fn isqrt_exact(n: u64) -> Option<u64> {
        let r = (n as f64).sqrt().round() as u64;
        for c in r.saturating_sub(1)..=r + 1 {
            if c * c == n {
                return Some(c);
            }
        }
        None
    }

    pub fn modpow(mut base: u64, mut exp: u64, m: u64) -> u64 {
        let mut acc = 1 % m;
        base %= m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc
    }
}
