//! Inhomogeneous cochains with trivial coefficients `Z/N` and the bar
//! differential.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::group::FiniteGroup;
use crate::abelian::FiniteAbelianGroup;
use crate::config::Caps;
use crate::error::{Error, Result};

/// A map `Gⁿ → Z/N`, stored as a full table with the first argument most
/// significant. Values are exponents of `ζ_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    group: Arc<FiniteGroup>,
    degree: usize,
    modulus: u64,
    values: Vec<u64>,
    normalized: bool,
}

fn table_len(order: usize, degree: usize) -> Result<usize> {
    u32::try_from(degree)
        .ok()
        .and_then(|d| order.checked_pow(d))
        .ok_or(Error::Overflow("cochain table size"))
}

/// Decodes a table index into its argument tuple.
pub(crate) fn decode(order: usize, degree: usize, mut idx: usize, out: &mut [usize]) {
    for k in (0..degree).rev() {
        out[k] = idx % order;
        idx /= order;
    }
}

pub(crate) fn encode(order: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * order + a)
}

impl Cochain {
    pub fn new(group: Arc<FiniteGroup>, degree: usize, modulus: u64, mut values: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Parse("cochain modulus must be positive".into()));
        }
        let len = table_len(group.order(), degree)?;
        if values.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a degree {degree} cochain on a group of order {}",
                values.len(),
                group.order()
            )));
        }
        for v in values.iter_mut() {
            *v %= modulus;
        }
        let mut c = Cochain {
            group,
            degree,
            modulus,
            values,
            normalized: false,
        };
        c.normalized = c.check_normalized();
        Ok(c)
    }

    pub fn zero(group: Arc<FiniteGroup>, degree: usize, modulus: u64) -> Result<Self> {
        let len = table_len(group.order(), degree)?;
        Self::new(group, degree, modulus, vec![0; len])
    }

    pub fn from_fn(
        group: Arc<FiniteGroup>,
        degree: usize,
        modulus: u64,
        mut f: impl FnMut(&[usize]) -> u64,
    ) -> Result<Self> {
        let n = group.order();
        let len = table_len(n, degree)?;
        let mut args = vec![0; degree];
        let values = (0..len)
            .map(|i| {
                decode(n, degree, i, &mut args);
                f(&args)
            })
            .collect();
        Self::new(group, degree, modulus, values)
    }

    fn check_normalized(&self) -> bool {
        let n = self.group.order();
        let mut args = vec![0; self.degree];
        self.values.iter().enumerate().all(|(i, &v)| {
            decode(n, self.degree, i, &mut args);
            v == 0 || args.iter().all(|&a| a != 0)
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Vanishes whenever an argument is the identity.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn value(&self, args: &[usize]) -> u64 {
        debug_assert_eq!(args.len(), self.degree);
        self.values[encode(self.group.order(), args)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    fn same_shape(&self, other: &Cochain) -> Result<()> {
        if self.group != other.group || self.degree != other.degree || self.modulus != other.modulus {
            return Err(Error::ParentMismatch("cochains of different shape".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.same_shape(other)?;
        let m = self.modulus;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a + b) % m)
            .collect();
        Cochain::new(self.group.clone(), self.degree, m, values)
    }

    pub fn scale(&self, k: i64) -> Cochain {
        let m = self.modulus as i128;
        let values = self
            .values
            .iter()
            .map(|&v| (v as i128 * k as i128).rem_euclid(m) as u64)
            .collect();
        Cochain::new(self.group.clone(), self.degree, self.modulus, values).expect("same shape")
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.scale(-1))
    }

    /// The same values read in `μ_target` through `μ_N ⊂ μ_target`.
    pub fn embed(&self, target: u64) -> Result<Cochain> {
        if !target.is_multiple_of(self.modulus) {
            return Err(Error::NotDivisible {
                order: self.modulus,
                target,
            });
        }
        let f = target / self.modulus;
        let values = self.values.iter().map(|&v| v * f).collect();
        Cochain::new(self.group.clone(), self.degree, target, values)
    }

    /// Bar differential with trivial action:
    /// `(df)(g₁…gₙ₊₁) = f(g₂…) + Σᵢ (−1)ⁱ f(…gᵢgᵢ₊₁…) + (−1)ⁿ⁺¹ f(g₁…gₙ)`.
    pub fn differential(&self) -> Cochain {
        let g = &self.group;
        let n = self.degree;
        let m = self.modulus as i128;
        let order = g.order();
        let len = order.pow(n as u32 + 1);
        let mut args = vec![0; n + 1];
        let mut sub = vec![0; n];
        let values = (0..len)
            .map(|i| {
                decode(order, n + 1, i, &mut args);
                let mut s: i128 = self.values[encode(order, &args[1..])] as i128;
                for k in 0..n {
                    sub[..k].copy_from_slice(&args[..k]);
                    sub[k] = g.mul(args[k], args[k + 1]);
                    sub[k + 1..].copy_from_slice(&args[k + 2..]);
                    let v = self.values[encode(order, &sub)] as i128;
                    if k % 2 == 0 {
                        s -= v;
                    } else {
                        s += v;
                    }
                }
                let last = self.values[encode(order, &args[..n])] as i128;
                if n.is_multiple_of(2) {
                    s -= last;
                } else {
                    s += last;
                }
                s.rem_euclid(m) as u64
            })
            .collect();
        Cochain::new(self.group.clone(), n + 1, self.modulus, values).expect("shape")
    }

    pub fn is_cocycle(&self) -> bool {
        self.differential().is_zero()
    }

    /// Values on tuples of non-identity elements, in table order.
    pub fn normalized_coords(&self) -> Vec<u64> {
        let n = self.group.order();
        let mut args = vec![0; self.degree];
        (0..normalized_len(n, self.degree))
            .map(|i| {
                decode_normalized(n, self.degree, i, &mut args);
                self.value(&args)
            })
            .collect()
    }

    pub fn from_normalized_coords(
        group: Arc<FiniteGroup>,
        degree: usize,
        modulus: u64,
        coords: &[u64],
    ) -> Result<Self> {
        let n = group.order();
        if coords.len() != normalized_len(n, degree) {
            return Err(Error::ShapeMismatch("normalized coordinate count".into()));
        }
        let mut values = vec![0; table_len(n, degree)?];
        let mut args = vec![0; degree];
        for (i, &c) in coords.iter().enumerate() {
            decode_normalized(n, degree, i, &mut args);
            values[encode(n, &args)] = c;
        }
        Self::new(group, degree, modulus, values)
    }
}

pub(crate) fn normalized_len(order: usize, degree: usize) -> usize {
    (order - 1).pow(degree as u32)
}

/// Tuples of non-identity elements, lexicographic.
pub(crate) fn decode_normalized(order: usize, degree: usize, mut idx: usize, out: &mut [usize]) {
    let b = order - 1;
    for k in (0..degree).rev() {
        out[k] = idx % b + 1;
        idx /= b;
    }
}

pub(crate) fn encode_normalized(order: usize, args: &[usize]) -> Option<usize> {
    let b = order - 1;
    args.iter()
        .try_fold(0usize, |acc, &a| (a != 0).then(|| acc * b + a - 1))
}

/// Integer matrix of `δ: Cⁿ → Cⁿ⁺¹` on normalized cochains; rows are
/// normalized `(n+1)`-tuples, columns normalized `n`-tuples.
pub fn differential_matrix(g: &FiniteGroup, n: usize, caps: &Caps) -> Result<Vec<Vec<i64>>> {
    let order = g.order();
    let rows = normalized_len(order, n + 1);
    let cols = normalized_len(order, n);
    caps.check(
        "differential matrix entries",
        caps.table_entries,
        (rows as u64).saturating_mul(cols as u64),
    )?;
    let mut out = vec![vec![0i64; cols]; rows];
    let mut args = vec![0; n + 1];
    let mut sub = vec![0; n];
    for (r, row) in out.iter_mut().enumerate() {
        decode_normalized(order, n + 1, r, &mut args);
        if let Some(c) = encode_normalized(order, &args[1..]) {
            row[c] += 1;
        }
        for k in 0..n {
            sub[..k].copy_from_slice(&args[..k]);
            sub[k] = g.mul(args[k], args[k + 1]);
            sub[k + 1..].copy_from_slice(&args[k + 2..]);
            if let Some(c) = encode_normalized(order, &sub) {
                row[c] += if k % 2 == 0 { -1 } else { 1 };
            }
        }
        if let Some(c) = encode_normalized(order, &args[..n]) {
            row[c] += if n.is_multiple_of(2) { -1 } else { 1 };
        }
    }
    Ok(out)
}

/// On-disk form of a cochain on an abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainFile {
    pub group: FiniteAbelianGroup,
    pub degree: usize,
    pub modulus: u64,
    pub values: Vec<u64>,
}

impl CochainFile {
    pub fn from_cochain(group: &FiniteAbelianGroup, c: &Cochain) -> Self {
        CochainFile {
            group: group.clone(),
            degree: c.degree(),
            modulus: c.modulus(),
            values: c.values().to_vec(),
        }
    }

    pub fn into_cochain(self) -> Result<(FiniteAbelianGroup, Cochain)> {
        let g = Arc::new(FiniteGroup::from_abelian(&self.group));
        let c = Cochain::new(g, self.degree, self.modulus, self.values)?;
        Ok((self.group, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(s: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_abelian(&s.parse().unwrap()))
    }

    #[test]
    fn differential_of_one_cochain_on_z2() {
        let g = grp("2");
        for k in 0..8 {
            let t = Cochain::new(g.clone(), 1, 8, vec![0, k]).unwrap();
            let dt = t.differential();
            assert_eq!(dt.value(&[1, 1]), 2 * k % 8);
        }
        assert!(Cochain::zero(g, 2, 8).unwrap().differential().is_zero());
    }

    #[test]
    fn normalized_round_trip() {
        let g = grp("3");
        let c = Cochain::from_fn(g.clone(), 2, 9, |a| {
            if a.contains(&0) {
                0
            } else {
                (a[0] * 3 + a[1]) as u64
            }
        })
        .unwrap();
        assert!(c.is_normalized());
        let back = Cochain::from_normalized_coords(g, 2, 9, &c.normalized_coords()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn matrix_agrees_with_differential() {
        let g = grp("2,2");
        let caps = Caps::default();
        for n in 0..3 {
            let d = differential_matrix(&g, n, &caps).unwrap();
            let len = normalized_len(4, n);
            for j in 0..len {
                let mut coords = vec![0u64; len];
                coords[j] = 1;
                let c = Cochain::from_normalized_coords(g.clone(), n, 1000, &coords).unwrap();
                let dc = c.differential().normalized_coords();
                let col: Vec<u64> = d.iter().map(|r| r[j].rem_euclid(1000) as u64).collect();
                assert_eq!(dc, col);
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let a: FiniteAbelianGroup = "2".parse().unwrap();
        let g = Arc::new(FiniteGroup::from_abelian(&a));
        let c = Cochain::new(g, 2, 4, vec![0, 0, 0, 2]).unwrap();
        let js = serde_json::to_string(&CochainFile::from_cochain(&a, &c)).unwrap();
        let (a2, c2) = serde_json::from_str::<CochainFile>(&js)
            .unwrap()
            .into_cochain()
            .unwrap();
        assert_eq!((a2, c2), (a, c));
    }
}
