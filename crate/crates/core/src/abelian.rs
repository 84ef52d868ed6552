//! Finite abelian groups presented as `Z/n₁ ⊕ … ⊕ Z/n_k`.
//!
//! Elements are coordinate vectors. Every group also has a dense indexing
//! `0..order` that follows lexicographic coordinate order (last coordinate
//! fastest); index 0 is always the identity. Table-based structures in the
//! crate (forms, cochains) are laid out in this order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::arith::{gcd, lcm};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::scalars::RootOfUnity;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    orders: Vec<u64>,
}

impl TryFrom<RawGroup> for FiniteAbelianGroup {
    type Error = Error;
    fn try_from(raw: RawGroup) -> Result<Self> {
        FiniteAbelianGroup::new(raw.orders)
    }
}

impl From<FiniteAbelianGroup> for RawGroup {
    fn from(g: FiniteAbelianGroup) -> Self {
        RawGroup { orders: g.orders }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<u64>);

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::Parse("cyclic orders must be at least 1".into()));
        }
        let mut order: usize = 1;
        for &n in &orders {
            order = order.checked_mul(n as usize).ok_or(Error::Overflow("group order"))?;
        }
        let mut strides = vec![1usize; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        Ok(FiniteAbelianGroup { orders, strides, order })
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new()).expect("empty presentation")
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `(Z/p)^n`.
    pub fn elementary(p: u64, n: usize) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &n| lcm(acc, n))
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `self ⊕ other`, coordinates concatenated.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        Self::new(orders).expect("sum of valid groups")
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    /// The i-th standard generator.
    pub fn generator(&self, i: usize) -> Element {
        let mut c = vec![0; self.rank()];
        if self.orders[i] > 1 {
            c[i] = 1;
        }
        Element(c)
    }

    pub fn check(&self, a: &Element) -> Result<()> {
        if a.0.len() != self.rank() || a.0.iter().zip(&self.orders).any(|(&c, &n)| c >= n) {
            return Err(Error::ParentMismatch(format!("{a} is not a reduced element of {self}")));
        }
        Ok(())
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::ParentMismatch(format!(
                "{} coordinates for a group of rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(Element(
            coords.into_iter().zip(&self.orders).map(|(c, &n)| c % n).collect(),
        ))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        ))
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(Element(
            a.0.iter().zip(&self.orders).map(|(&x, &n)| (n - x) % n).collect(),
        ))
    }

    pub fn scale(&self, k: i64, a: &Element) -> Element {
        Element(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &n)| (x as i128 * k as i128).rem_euclid(n as i128) as u64)
                .collect(),
        )
    }

    pub fn element_order(&self, a: &Element) -> u64 {
        a.0.iter()
            .zip(&self.orders)
            .fold(1, |acc, (&x, &n)| lcm(acc, n / gcd(x, n)))
    }

    /// All elements, zero first, lexicographic in coordinates.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    pub fn index_of(&self, a: &Element) -> usize {
        a.0.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    pub fn element_at(&self, idx: usize) -> Element {
        Element(self.coords_at(idx))
    }

    pub fn coords_at(&self, idx: usize) -> Vec<u64> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| ((idx / s) as u64) % n)
            .collect()
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let n = n as usize;
            let x = (a / s) % n;
            let y = (b / s) % n;
            out += ((x + y) % n) * s;
        }
        out
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let n = n as usize;
            let x = (a / s) % n;
            out += ((n - x) % n) * s;
        }
        out
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// Cayley table of addition on indices.
    pub fn addition_table(&self) -> Vec<usize> {
        let n = self.order;
        let mut t = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = self.add_idx(a, b);
            }
        }
        t
    }

    /// Elements `x` with `k·x = 0`, as indices.
    pub fn torsion_indices(&self, k: u64) -> Vec<usize> {
        (0..self.order)
            .filter(|&i| {
                self.coords_at(i)
                    .iter()
                    .zip(&self.orders)
                    .all(|(&c, &n)| (c * k).is_multiple_of(n))
            })
            .collect()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        for (i, n) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, "⊕")?;
            }
            write!(f, "Z/{n}")?;
        }
        Ok(())
    }
}

/// Parses the `"n1,n2,..."` group spec. The empty string and `"1"` give the
/// trivial group.
impl FromStr for FiniteAbelianGroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" || s == "trivial" {
            return Ok(Self::trivial());
        }
        let orders = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad cyclic order {t:?} in group spec {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }
}

/// Character dual `Â = Hom(A, k^×)`, identified with `A` through
/// `χ_c(a) = ζ_e^{Σ cᵢ aᵢ (e/nᵢ)}` where `e` is the exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dual {
    group: FiniteAbelianGroup,
}

pub fn dual(a: &FiniteAbelianGroup) -> Dual {
    Dual { group: a.clone() }
}

impl Dual {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// `χ_c(a)` as a residue mod `exponent(A)`.
    pub fn pairing_residue(&self, chi: &Element, a: &Element) -> u64 {
        pairing_residue(&self.group, &chi.0, &a.0, self.group.exponent())
    }

    pub fn pairing(&self, chi: &Element, a: &Element) -> Result<RootOfUnity> {
        self.group.check(chi)?;
        self.group.check(a)?;
        Ok(RootOfUnity::from_residue(
            self.group.exponent(),
            self.pairing_residue(chi, a),
        ))
    }

    /// The map `Â → Hom(A, k^×)` as a homomorphism `Â → Â` is the identity;
    /// this returns the induced `A → (Â)^` double-duality map on indices.
    pub fn double_dual_indices(&self) -> Vec<usize> {
        // a ↦ (χ ↦ χ(a)); under the identification this is a ↦ a.
        (0..self.group.order()).collect()
    }
}

/// `Σ cᵢ aᵢ (modulus/nᵢ) mod modulus`, requiring `nᵢ | modulus`.
pub(crate) fn pairing_residue(g: &FiniteAbelianGroup, chi: &[u64], a: &[u64], modulus: u64) -> u64 {
    let mut s: u128 = 0;
    for ((&c, &x), &n) in chi.iter().zip(a).zip(g.orders()) {
        s += (c as u128 * x as u128 % n as u128) * (modulus / n) as u128;
    }
    (s % modulus as u128) as u64
}

/// A homomorphism given by its matrix: column `i` is the image of the i-th
/// source generator, entry `[j][i]` reduced mod the j-th target order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawHom", into = "RawHom")]
pub struct Homomorphism {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    matrix: Vec<Vec<u64>>,
}

impl PartialOrd for FiniteAbelianGroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteAbelianGroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.orders.cmp(&other.orders)
    }
}

#[derive(Serialize, Deserialize)]
struct RawHom {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    matrix: Vec<Vec<u64>>,
}

impl TryFrom<RawHom> for Homomorphism {
    type Error = Error;
    fn try_from(raw: RawHom) -> Result<Self> {
        Homomorphism::new(raw.source, raw.target, raw.matrix)
    }
}

impl From<Homomorphism> for RawHom {
    fn from(h: Homomorphism) -> Self {
        RawHom {
            source: h.source,
            target: h.target,
            matrix: h.matrix,
        }
    }
}

impl Homomorphism {
    pub fn new(source: FiniteAbelianGroup, target: FiniteAbelianGroup, matrix: Vec<Vec<u64>>) -> Result<Self> {
        if matrix.len() != target.rank() || matrix.iter().any(|row| row.len() != source.rank()) {
            return Err(Error::ShapeMismatch(format!(
                "matrix is not {}x{}",
                target.rank(),
                source.rank()
            )));
        }
        let mut matrix = matrix;
        for (j, row) in matrix.iter_mut().enumerate() {
            let m = target.orders()[j];
            for (i, entry) in row.iter_mut().enumerate() {
                *entry %= m;
                if !(*entry * source.orders()[i]).is_multiple_of(m) {
                    return Err(Error::ShapeMismatch(format!(
                        "entry [{j}][{i}] = {entry} is not well defined on Z/{} -> Z/{m}",
                        source.orders()[i]
                    )));
                }
            }
        }
        Ok(Homomorphism { source, target, matrix })
    }

    /// Builds the map sending the i-th generator to `images[i]`.
    pub fn from_images(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup, images: &[Element]) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::ShapeMismatch("one image per generator".into()));
        }
        let matrix = (0..target.rank())
            .map(|j| images.iter().map(|im| im.0[j]).collect())
            .collect();
        Self::new(source.clone(), target.clone(), matrix)
    }

    pub fn identity(a: &FiniteAbelianGroup) -> Self {
        let k = a.rank();
        let matrix = (0..k)
            .map(|j| (0..k).map(|i| u64::from(i == j && a.orders()[i] > 1)).collect())
            .collect();
        Homomorphism {
            source: a.clone(),
            target: a.clone(),
            matrix,
        }
    }

    /// Multiplication by `k`.
    pub fn scalar(a: &FiniteAbelianGroup, k: i64) -> Self {
        let n = a.rank();
        let matrix = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        if i == j {
                            (k as i128).rem_euclid(a.orders()[i] as i128) as u64
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        Homomorphism {
            source: a.clone(),
            target: a.clone(),
            matrix,
        }
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn image_of_generator(&self, i: usize) -> Element {
        Element(self.matrix.iter().map(|row| row[i]).collect())
    }

    pub fn apply(&self, a: &Element) -> Result<Element> {
        self.source.check(a)?;
        Ok(self.apply_unchecked(&a.0))
    }

    pub(crate) fn apply_unchecked(&self, a: &[u64]) -> Element {
        Element(
            self.matrix
                .iter()
                .zip(self.target.orders())
                .map(|(row, &m)| {
                    let s: u128 = row.iter().zip(a).map(|(&x, &y)| x as u128 * y as u128).sum();
                    (s % m as u128) as u64
                })
                .collect(),
        )
    }

    pub fn apply_idx(&self, a: usize) -> usize {
        let coords = self.source.coords_at(a);
        self.target.index_of(&self.apply_unchecked(&coords))
    }

    /// Table of `f` on all source indices.
    pub fn index_table(&self) -> Vec<usize> {
        (0..self.source.order()).map(|a| self.apply_idx(a)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if other.target != self.source {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        let images: Vec<Element> = (0..other.source.rank())
            .map(|i| self.apply_unchecked(&other.image_of_generator(i).0))
            .collect();
        Homomorphism::from_images(&other.source, &self.target, &images)
    }

    /// Brute-force bijectivity on elements.
    pub fn is_isomorphism(&self, caps: &Caps) -> Result<bool> {
        caps.check(
            "group order for isomorphism check",
            caps.group_order,
            self.source.order() as u64,
        )?;
        if self.source.order() != self.target.order() {
            return Ok(false);
        }
        let mut seen = vec![false; self.target.order()];
        for a in 0..self.source.order() {
            let b = self.apply_idx(a);
            if seen[b] {
                return Ok(false);
            }
            seen[b] = true;
        }
        Ok(true)
    }

    /// Inverse of a bijective endomorphism-like map, found by brute force.
    pub fn inverse(&self, caps: &Caps) -> Result<Homomorphism> {
        if !self.is_isomorphism(caps)? {
            return Err(Error::ShapeMismatch("map is not invertible".into()));
        }
        let table = self.index_table();
        let mut inv = vec![0usize; table.len()];
        for (a, &b) in table.iter().enumerate() {
            inv[b] = a;
        }
        let images: Vec<Element> = (0..self.target.rank())
            .map(|j| {
                let g = self.target.generator(j);
                self.source.element_at(inv[self.target.index_of(&g)])
            })
            .collect();
        Homomorphism::from_images(&self.target, &self.source, &images)
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.matrix)
    }
}

/// For each source generator, the indices of target elements it may map to.
pub(crate) fn generator_image_candidates(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup) -> Vec<Vec<usize>> {
    source.orders().iter().map(|&n| target.torsion_indices(n)).collect()
}

/// Calls `f` for every homomorphism `source → target`, given as the list of
/// generator image indices. Stops early when `f` returns `false`.
pub(crate) fn for_each_hom_images(candidates: &[Vec<usize>], mut f: impl FnMut(&[usize]) -> bool) {
    let k = candidates.len();
    if candidates.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut pos = vec![0usize; k];
    let mut current: Vec<usize> = candidates.iter().map(|c| c[0]).collect();
    loop {
        if !f(&current) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < candidates[i].len() {
                current[i] = candidates[i][pos[i]];
                break;
            }
            pos[i] = 0;
            current[i] = candidates[i][0];
        }
    }
}

pub(crate) fn hom_from_image_indices(
    source: &FiniteAbelianGroup,
    target: &FiniteAbelianGroup,
    images: &[usize],
) -> Homomorphism {
    let imgs: Vec<Element> = images.iter().map(|&i| target.element_at(i)).collect();
    Homomorphism::from_images(source, target, &imgs).expect("torsion images are well defined")
}

/// Table of the endomorphism with the given generator images, built
/// incrementally in index order. Returns `None` at the first collision when
/// `require_injective` is set.
pub(crate) fn endomorphism_table(
    a: &FiniteAbelianGroup,
    images: &[usize],
    require_injective: bool,
) -> Option<Vec<usize>> {
    let n = a.order();
    let mut table = vec![0usize; n];
    let mut seen = if require_injective { vec![false; n] } else { Vec::new() };
    if require_injective {
        seen[0] = true;
    }
    // idx = idx' + e_last ... decompose by the last nonzero coordinate.
    for idx in 1..n {
        let coords = a.coords_at(idx);
        let i = coords.iter().rposition(|&c| c != 0).expect("nonzero");
        let prev = idx - a.strides[i];
        let v = a.add_idx(table[prev], images[i]);
        table[idx] = v;
        if require_injective {
            if seen[v] {
                return None;
            }
            seen[v] = true;
        }
    }
    Some(table)
}

/// All automorphisms of `a`, lexicographic in generator images.
pub fn enumerate_automorphisms(a: &FiniteAbelianGroup, caps: &Caps) -> Result<Vec<Homomorphism>> {
    caps.check(
        "group order for automorphism enumeration",
        caps.group_order,
        a.order() as u64,
    )?;
    let cands = generator_image_candidates(a, a);
    let mut out = Vec::new();
    for_each_hom_images(&cands, |imgs| {
        if endomorphism_table(a, imgs, true).is_some() {
            out.push(hom_from_image_indices(a, a, imgs));
        }
        true
    });
    Ok(out)
}

/// All homomorphisms `source → target`.
pub fn enumerate_homomorphisms(
    source: &FiniteAbelianGroup,
    target: &FiniteAbelianGroup,
    caps: &Caps,
) -> Result<Vec<Homomorphism>> {
    let cands = generator_image_candidates(source, target);
    let total: u64 = cands.iter().map(|c| c.len() as u64).product();
    caps.check("number of candidate homomorphisms", caps.table_entries, total)?;
    let mut out = Vec::new();
    for_each_hom_images(&cands, |imgs| {
        out.push(hom_from_image_indices(source, target, imgs));
        true
    });
    Ok(out)
}
