//! `Cl(V, q) = T(V)/(v⊗v = q(v))` on the basis `e_S`, `S` a bitmask with
//! `e_S = e_{i₁}⋯e_{i_k}`, `i₁ < … < i_k`.

use std::fmt;
use std::sync::Arc;

use super::field::{inverse, mat_vec, neg, Matrix};
use super::space::QuadraticSpace;
use crate::config::Caps;
use crate::error::{Error, Result};

/// Basis multiplication and transpose tables.
#[derive(Debug, PartialEq, Eq)]
pub struct CliffordAlgebra {
    space: QuadraticSpace,
    /// `e_S · e_T` at `S·2ⁿ + T`.
    products: Vec<Vec<u64>>,
    /// `e_Sᵀ`.
    transposes: Vec<Vec<u64>>,
}

impl CliffordAlgebra {
    pub fn new(space: QuadraticSpace, caps: &Caps) -> Result<Arc<Self>> {
        let n = space.dim();
        let d = 1usize << n;
        caps.check(
            "Clifford multiplication table entries",
            caps.table_entries,
            (d as u64).saturating_pow(3),
        )?;
        let mut alg = CliffordAlgebra {
            space,
            products: Vec::new(),
            transposes: Vec::new(),
        };
        let mut products = Vec::with_capacity(d * d);
        for s in 0..d {
            for t in 0..d {
                let mut v = alg.unit_vec(s);
                for j in 0..n {
                    if t >> j & 1 == 1 {
                        v = alg.right_mul_gen(&v, j);
                    }
                }
                products.push(v);
            }
        }
        alg.products = products;
        // e_Sᵀ = e_{i_k}⋯e_{i₁}
        let transposes = (0..d)
            .map(|s| {
                let mut v = alg.unit_vec(0);
                for j in (0..n).rev() {
                    if s >> j & 1 == 1 {
                        v = alg.right_mul_gen(&v, j);
                    }
                }
                v
            })
            .collect();
        alg.transposes = transposes;
        Ok(Arc::new(alg))
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    /// `2ⁿ`.
    pub fn dim(&self) -> usize {
        1 << self.space.dim()
    }

    fn p(&self) -> u64 {
        self.space.prime()
    }

    fn unit_vec(&self, s: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[s] = 1;
        v
    }

    fn right_mul_gen(&self, v: &[u64], j: usize) -> Vec<u64> {
        let p = self.p();
        let mut out = vec![0; self.dim()];
        for (w, &c) in v.iter().enumerate() {
            if c != 0 {
                for (x, y) in out.iter_mut().zip(self.word_times_gen(w, j)) {
                    *x = (*x + c * y) % p;
                }
            }
        }
        out
    }

    /// `e_w · e_j` by moving `e_j` left past larger generators with
    /// `e_s e_j = −e_j e_s + b(e_s, e_j)` and `e_j² = q(e_j)`.
    fn word_times_gen(&self, w: usize, j: usize) -> Vec<u64> {
        let p = self.p();
        if w == 0 {
            return self.unit_vec(1 << j);
        }
        let s = usize::BITS as usize - 1 - w.leading_zeros() as usize;
        let rest = w & !(1 << s);
        if s < j {
            return self.unit_vec(w | 1 << j);
        }
        if s == j {
            let mut v = self.unit_vec(rest);
            v[rest] = self.space.q_basis()[j] % p;
            return v;
        }
        // e_rest e_s e_j = −(e_rest e_j) e_s + b(e_s, e_j) e_rest
        let mut v: Vec<u64> = self
            .right_mul_gen(&self.word_times_gen(rest, j), s)
            .into_iter()
            .map(|x| neg(x, p))
            .collect();
        v[rest] = (v[rest] + self.space.b_basis(s, j)) % p;
        v
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    alg: Arc<CliffordAlgebra>,
    coeffs: Vec<u64>,
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `2·e{0}e{1} + 1`, terms in basis order.
impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (s, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let word: String = (0..self.alg.space.dim())
                .filter(|j| s >> j & 1 == 1)
                .map(|j| format!("e{j}"))
                .collect();
            terms.push(match (c, word.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => word,
                _ => format!("{c}·{word}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl std::hash::Hash for CliffordAlgebra {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.space.hash(h);
    }
}

impl CliffordElement {
    pub fn new(alg: &Arc<CliffordAlgebra>, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != alg.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for dimension {}",
                coeffs.len(),
                alg.dim()
            )));
        }
        let p = alg.p();
        Ok(CliffordElement {
            alg: alg.clone(),
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    pub fn scalar(alg: &Arc<CliffordAlgebra>, c: u64) -> Self {
        let mut v = vec![0; alg.dim()];
        v[0] = c % alg.p();
        CliffordElement {
            alg: alg.clone(),
            coeffs: v,
        }
    }

    pub fn one(alg: &Arc<CliffordAlgebra>) -> Self {
        Self::scalar(alg, 1)
    }

    pub fn basis(alg: &Arc<CliffordAlgebra>, s: usize) -> Self {
        CliffordElement {
            alg: alg.clone(),
            coeffs: alg.unit_vec(s),
        }
    }

    /// `Σ xᵢeᵢ`.
    pub fn vector(alg: &Arc<CliffordAlgebra>, x: &[u64]) -> Result<Self> {
        let n = alg.space.dim();
        if x.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} in dimension {n}",
                x.len()
            )));
        }
        let mut v = vec![0; alg.dim()];
        for (i, &xi) in x.iter().enumerate() {
            v[1 << i] = xi % alg.p();
        }
        Ok(CliffordElement {
            alg: alg.clone(),
            coeffs: v,
        })
    }

    pub fn algebra(&self) -> &Arc<CliffordAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn same_parent(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || self.alg.space == other.alg.space {
            Ok(())
        } else {
            Err(Error::ParentMismatch("Clifford elements over different spaces".into()))
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.alg.p();
        let d = self.alg.dim();
        let mut out = vec![0u64; d];
        for (s, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (t, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = a * b % p;
                for (x, &y) in out.iter_mut().zip(&self.alg.products[s * d + t]) {
                    if y != 0 {
                        *x = (*x + ab * y) % p;
                    }
                }
            }
        }
        CliffordElement {
            alg: self.alg.clone(),
            coeffs: out,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        let p = self.alg.p();
        Ok(CliffordElement {
            alg: self.alg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        })
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.alg.p();
        CliffordElement {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|a| a * (c % p) % p).collect(),
        }
    }

    /// The anti-automorphism reversing words.
    pub fn transpose(&self) -> Self {
        let p = self.alg.p();
        let mut out = vec![0u64; self.alg.dim()];
        for (s, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                for (x, &y) in out.iter_mut().zip(&self.alg.transposes[s]) {
                    *x = (*x + a * y) % p;
                }
            }
        }
        CliffordElement {
            alg: self.alg.clone(),
            coeffs: out,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `Some(0)` or `Some(1)` for nonzero homogeneous elements.
    pub fn parity(&self) -> Option<u8> {
        let mut par = None;
        for (s, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let ps = (s.count_ones() % 2) as u8;
                if par.is_some_and(|x| x != ps) {
                    return None;
                }
                par = Some(ps);
            }
        }
        par
    }

    /// `λ` when the element is `λ·1`.
    pub fn as_scalar(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    /// Coordinates when the element lies in `V`.
    pub fn as_vector(&self) -> Option<Vec<u64>> {
        let n = self.alg.space.dim();
        let in_v = self
            .coeffs
            .iter()
            .enumerate()
            .all(|(s, &c)| c == 0 || s.count_ones() == 1);
        in_v.then(|| (0..n).map(|i| self.coeffs[1 << i]).collect())
    }

    /// Matrix of `x ↦ self·x` on the basis `e_S`, column `T` = `self·e_T`.
    pub fn left_matrix(&self) -> Matrix {
        let d = self.alg.dim();
        let cols: Vec<Vec<u64>> = (0..d)
            .map(|t| self.mul_unchecked(&CliffordElement::basis(&self.alg, t)).coeffs)
            .collect();
        (0..d).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        let p = self.alg.p();
        let inv = inverse(&self.left_matrix(), p)?;
        let coeffs = mat_vec(&inv, &self.alg.unit_vec(0), p);
        Some(CliffordElement {
            alg: self.alg.clone(),
            coeffs,
        })
    }
}
