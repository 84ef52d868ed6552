//! Quadratic spaces over `F_p`, `p` odd.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::field::{det, Matrix};
use crate::config::arith::is_prime;
use crate::error::{Error, Result};

/// `(F_p^n, q)` given by `q(eᵢ)` and the Gram matrix of
/// `b(u, v) = q(u+v) − q(u) − q(v)`, whose diagonal is `2q(eᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticSpace {
    p: u64,
    q: Vec<u64>,
    gram: Matrix,
}

fn check_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

impl QuadraticSpace {
    pub fn new(p: u64, q: Vec<u64>, gram: Matrix) -> Result<Self> {
        check_prime(p)?;
        let n = q.len();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("Gram matrix must be {n}×{n}")));
        }
        let q: Vec<u64> = q.into_iter().map(|v| v % p).collect();
        let gram: Matrix = gram
            .into_iter()
            .map(|r| r.into_iter().map(|v| v % p).collect())
            .collect();
        for i in 0..n {
            if gram[i][i] != 2 * q[i] % p {
                return Err(Error::RelationViolation(format!("b(e{i}, e{i}) must equal 2q(e{i})")));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::RelationViolation("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(QuadraticSpace { p, q, gram })
    }

    pub fn diagonal(p: u64, q: &[u64]) -> Result<Self> {
        let n = q.len();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 * q[i] } else { 0 }).collect())
            .collect();
        Self::new(p, q.to_vec(), gram)
    }

    /// `L ⊕ L*` with `L = F_p^m`, basis `ℓ₁…ℓ_m, φ₁…φ_m` and
    /// `q(ℓ, φ) = φ(ℓ)`, so `b(ℓᵢ, φⱼ) = δᵢⱼ`.
    pub fn split(p: u64, m: usize) -> Result<Self> {
        let n = 2 * m;
        let gram = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i + m == j || j + m == i)).collect())
            .collect();
        Self::new(p, vec![0; n], gram)
    }

    /// `q(e₁) = 1`, `q(e₂) = −1`.
    pub fn hyperbolic_plane(p: u64) -> Result<Self> {
        Self::diagonal(p, &[1, p.saturating_sub(1)])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn q_basis(&self) -> &[u64] {
        &self.q
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn b_basis(&self, i: usize, j: usize) -> u64 {
        self.gram[i][j]
    }

    pub fn b(&self, x: &[u64], y: &[u64]) -> u64 {
        let p = self.p;
        let mut s = 0;
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                s = (s + xi * yj % p * self.gram[i][j]) % p;
            }
        }
        s
    }

    /// `q(Σ xᵢeᵢ) = Σ xᵢ² q(eᵢ) + Σ_{i<j} xᵢxⱼ b(eᵢ, eⱼ)`.
    pub fn q(&self, x: &[u64]) -> u64 {
        let p = self.p;
        let mut s = 0;
        for (i, &xi) in x.iter().enumerate() {
            s = (s + xi * xi % p * self.q[i]) % p;
            for (j, &xj) in x.iter().enumerate().skip(i + 1) {
                s = (s + xi * xj % p * self.gram[i][j]) % p;
            }
        }
        s
    }

    pub fn is_nondegenerate(&self) -> bool {
        det(&self.gram, self.p) != 0
    }

    /// All vectors of `F_p^n` in lexicographic order.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let n = self.dim();
        let p = self.p;
        let total = p.pow(n as u32);
        (0..total).map(move |mut k| {
            let mut v = vec![0; n];
            for x in v.iter_mut().rev() {
                *x = k % p;
                k /= p;
            }
            v
        })
    }
}

/// `split` or `diag:<q₁>,<q₂>,…`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSpec {
    Split,
    Diagonal(Vec<u64>),
}

impl FromStr for SpaceSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "split" {
            return Ok(SpaceSpec::Split);
        }
        if let Some(rest) = s.strip_prefix("diag:") {
            let q = rest
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad entry {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(SpaceSpec::Diagonal(q));
        }
        Err(Error::Parse(format!("bad form {s:?} (expected split or diag:a,b,…)")))
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Split => write!(f, "split"),
            SpaceSpec::Diagonal(q) => {
                let parts: Vec<String> = q.iter().map(u64::to_string).collect();
                write!(f, "diag:{}", parts.join(","))
            }
        }
    }
}

impl SpaceSpec {
    /// For `Split`, `dim` must be even and gives `L = F_p^{dim/2}`.
    pub fn build(&self, p: u64, dim: usize) -> Result<QuadraticSpace> {
        match self {
            SpaceSpec::Split if dim.is_multiple_of(2) => QuadraticSpace::split(p, dim / 2),
            SpaceSpec::Split => Err(Error::ShapeMismatch(format!(
                "split form needs even dimension, got {dim}"
            ))),
            SpaceSpec::Diagonal(q) if q.len() == dim => QuadraticSpace::diagonal(p, q),
            SpaceSpec::Diagonal(q) => Err(Error::ShapeMismatch(format!(
                "{} diagonal entries for dimension {dim}",
                q.len()
            ))),
        }
    }
}
