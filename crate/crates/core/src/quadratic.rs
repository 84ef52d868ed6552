//! Quadratic forms and symmetric bicharacters on finite abelian groups.
//!
//! Forms are stored as full value tables in the group's index order, with
//! values written as residues modulo a common root-of-unity order. The
//! constructor shrinks that modulus to the least common order of the values
//! so that equal forms compare equal.

use serde::{Deserialize, Serialize};

use crate::abelian::{pairing_residue, Element, FiniteAbelianGroup};
use crate::config::arith::{gcd, is_prime, lcm};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::scalars::RootOfUnity;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    group: FiniteAbelianGroup,
    modulus: u64,
    values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bicharacter {
    group: FiniteAbelianGroup,
    modulus: u64,
    table: Vec<u64>,
}

/// A nondegenerate quadratic form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadraticForm", into = "QuadraticForm")]
pub struct MetricGroup {
    form: QuadraticForm,
}

fn shrink_modulus(modulus: u64, values: &mut [u64]) -> u64 {
    let m = values
        .iter()
        .fold(1u64, |acc, &v| lcm(acc, modulus / gcd(v % modulus, modulus)));
    let f = modulus / m;
    for v in values.iter_mut() {
        *v = (*v % modulus) / f;
    }
    m
}

impl QuadraticForm {
    /// Builds and validates a form from residues mod `modulus`.
    pub fn from_residues(group: FiniteAbelianGroup, modulus: u64, mut values: Vec<u64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        if modulus == 0 {
            return Err(Error::Parse("modulus must be positive".into()));
        }
        let modulus = shrink_modulus(modulus, &mut values);
        let q = QuadraticForm { group, modulus, values };
        q.validate()?;
        Ok(q)
    }

    pub fn from_fn(group: FiniteAbelianGroup, mut f: impl FnMut(&Element) -> RootOfUnity) -> Result<Self> {
        let vals: Vec<RootOfUnity> = group.elements().map(|a| f(&a)).collect();
        let modulus = vals.iter().fold(1, |acc, v| lcm(acc, v.order()));
        let residues = vals.iter().map(|v| v.embed(modulus)).collect::<Result<Vec<_>>>()?;
        Self::from_residues(group, modulus, residues)
    }

    pub fn trivial(group: FiniteAbelianGroup) -> Self {
        let n = group.order();
        QuadraticForm {
            group,
            modulus: 1,
            values: vec![0; n],
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Residues mod [`Self::modulus`], in index order.
    pub fn residues(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, a: &Element) -> Result<RootOfUnity> {
        self.group.check(a)?;
        Ok(self.value_idx(self.group.index_of(a)))
    }

    pub fn value_idx(&self, a: usize) -> RootOfUnity {
        RootOfUnity::from_residue(self.modulus, self.values[a])
    }

    /// `⟨a,b⟩_q` as a residue mod [`Self::modulus`].
    #[inline]
    pub fn bichar_residue(&self, a: usize, b: usize) -> u64 {
        let m = self.modulus;
        let s = self.group.add_idx(a, b);
        (self.values[s] + 2 * m - self.values[a] - self.values[b]) % m
    }

    /// Checks `q(0)=1`, `q(a)=q(-a)` and biadditivity of the polarization.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if self.values[0] != 0 {
            return Err(Error::InvalidForm {
                reason: "q(0) != 1",
                witness: vec![g.zero().0],
            });
        }
        for a in 0..g.order() {
            if self.values[a] != self.values[g.neg_idx(a)] {
                return Err(Error::InvalidForm {
                    reason: "q(a) != q(-a)",
                    witness: vec![g.coords_at(a)],
                });
            }
        }
        // additivity in the second slot along generators implies biadditivity
        let m = self.modulus;
        for i in 0..g.rank() {
            let e = g.index_of(&g.generator(i));
            for a in 0..g.order() {
                let ae = self.bichar_residue(a, e);
                for b in 0..g.order() {
                    let lhs = self.bichar_residue(a, g.add_idx(b, e));
                    let rhs = (self.bichar_residue(a, b) + ae) % m;
                    if lhs != rhs {
                        return Err(Error::InvalidForm {
                            reason: "polarization is not biadditive",
                            witness: vec![g.coords_at(a), g.coords_at(b), g.coords_at(e)],
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn polarize(&self) -> Bicharacter {
        let n = self.group.order();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.bichar_residue(a, b);
            }
        }
        Bicharacter::from_table_unchecked(self.group.clone(), self.modulus, table)
    }

    /// Indices of the radical `{a : ⟨a,·⟩_q ≡ 1}`.
    pub fn radical(&self) -> Vec<usize> {
        let g = &self.group;
        let gens: Vec<usize> = (0..g.rank()).map(|i| g.index_of(&g.generator(i))).collect();
        (0..g.order())
            .filter(|&a| gens.iter().all(|&e| self.bichar_residue(a, e) == 0))
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().len() == 1
    }

    /// `q ∘ f` for a map given on indices.
    pub fn pullback_table(&self, f: &[usize]) -> Vec<u64> {
        f.iter().map(|&b| self.values[b]).collect()
    }

    /// Pullback along an index map `source → self.group`.
    pub fn pullback(&self, source: &FiniteAbelianGroup, f: &[usize]) -> Result<QuadraticForm> {
        QuadraticForm::from_residues(source.clone(), self.modulus, self.pullback_table(f))
    }

    /// Number of `a` with `q(a) = 1`, zero included.
    pub fn isotropic_count(&self) -> usize {
        self.values.iter().filter(|&&v| v == 0).count()
    }
}

impl Bicharacter {
    pub(crate) fn from_table_unchecked(group: FiniteAbelianGroup, modulus: u64, mut table: Vec<u64>) -> Self {
        let modulus = shrink_modulus(modulus.max(1), &mut table);
        Bicharacter { group, modulus, table }
    }

    pub fn from_table(group: FiniteAbelianGroup, modulus: u64, table: Vec<u64>) -> Result<Self> {
        let n = group.order();
        if table.len() != n * n {
            return Err(Error::ShapeMismatch("bicharacter table must be |A|^2".into()));
        }
        let b = Self::from_table_unchecked(group, modulus, table);
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        let n = g.order();
        let m = self.modulus;
        for a in 0..n {
            for b in 0..n {
                if self.table[a * n + b] != self.table[b * n + a] {
                    return Err(Error::InvalidForm {
                        reason: "bicharacter is not symmetric",
                        witness: vec![g.coords_at(a), g.coords_at(b)],
                    });
                }
                for c in 0..n {
                    let lhs = self.table[g.add_idx(a, b) * n + c];
                    let rhs = (self.table[a * n + c] + self.table[b * n + c]) % m;
                    if lhs != rhs {
                        return Err(Error::InvalidForm {
                            reason: "bicharacter is not biadditive",
                            witness: vec![g.coords_at(a), g.coords_at(b), g.coords_at(c)],
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self, a: usize, b: usize) -> u64 {
        self.table[a * self.group.order() + b]
    }

    pub fn value(&self, a: &Element, b: &Element) -> Result<RootOfUnity> {
        self.group.check(a)?;
        self.group.check(b)?;
        let (i, j) = (self.group.index_of(a), self.group.index_of(b));
        Ok(RootOfUnity::from_residue(self.modulus, self.residue(i, j)))
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|&v| v == 0)
    }

    pub fn is_nondegenerate(&self) -> bool {
        let n = self.group.order();
        (1..n).all(|a| (0..n).any(|b| self.residue(a, b) != 0))
    }
}

impl MetricGroup {
    pub fn new(form: QuadraticForm) -> Result<Self> {
        let rad = form.radical();
        if rad.len() > 1 {
            return Err(Error::Degenerate(form.group.coords_at(rad[1])));
        }
        Ok(MetricGroup { form })
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.form.group
    }

    pub fn order(&self) -> usize {
        self.form.group.order()
    }

    pub fn into_form(self) -> QuadraticForm {
        self.form
    }
}

impl TryFrom<QuadraticForm> for MetricGroup {
    type Error = Error;
    fn try_from(q: QuadraticForm) -> Result<Self> {
        MetricGroup::new(q)
    }
}

impl From<MetricGroup> for QuadraticForm {
    fn from(m: MetricGroup) -> Self {
        m.form
    }
}

/// `(L ⊕ L̂, ev)` with `ev(ℓ, χ) = χ(ℓ)`.
pub fn evaluation_form(l: &FiniteAbelianGroup) -> MetricGroup {
    let a = l.direct_sum(l);
    let k = l.rank();
    let e = l.exponent();
    let values = (0..a.order())
        .map(|i| {
            let c = a.coords_at(i);
            pairing_residue(l, &c[k..], &c[..k], e)
        })
        .collect();
    let q = QuadraticForm::from_residues(a, e, values).expect("evaluation is a quadratic form");
    MetricGroup::new(q).expect("evaluation form is nondegenerate")
}

/// The hyperbolic form of signature `(n, n)` on `F_p^{2n}`.
pub fn split_form(n: usize, p: u64) -> Result<MetricGroup> {
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(evaluation_form(&FiniteAbelianGroup::elementary(p, n)?))
}

/// All quadratic forms on `a`, optionally only the nondegenerate ones.
///
/// Candidates are parametrized by `q(eᵢ) ∈ μ_{2nᵢ}` and
/// `⟨eᵢ,eⱼ⟩ ∈ μ_{gcd(nᵢ,nⱼ)}`, expanded to a table and then filtered by the
/// form axioms. Output order is lexicographic in those parameters.
pub fn enumerate_quadratic_forms(
    a: &FiniteAbelianGroup,
    nondegenerate_only: bool,
    caps: &Caps,
) -> Result<Vec<QuadraticForm>> {
    caps.check("group order for form enumeration", caps.group_order, a.order() as u64)?;
    let k = a.rank();
    let orders = a.orders();
    let modulus = 2 * a.exponent();
    let mut ranges: Vec<(u64, u64)> = Vec::new(); // (count, step)
    for &n in orders {
        // a Z/1 factor has e = 0, so q(e) = 1 is forced
        ranges.push(if n == 1 { (1, 0) } else { (2 * n, modulus / (2 * n)) });
    }
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let g = gcd(orders[i], orders[j]);
            ranges.push((g, modulus / g));
            pairs.push((i, j));
        }
    }
    let total: u64 = ranges.iter().map(|r| r.0).product();
    caps.check("number of candidate forms", caps.table_entries, total)?;

    let coords: Vec<Vec<u64>> = (0..a.order()).map(|i| a.coords_at(i)).collect();
    let mut out = Vec::new();
    let mut params = vec![0u64; ranges.len()];
    loop {
        let values: Vec<u64> = coords
            .iter()
            .map(|x| {
                let mut s: u128 = 0;
                for i in 0..k {
                    s += (x[i] * x[i]) as u128 * (params[i] * ranges[i].1) as u128;
                }
                for (p, &(i, j)) in pairs.iter().enumerate() {
                    s += (x[i] * x[j]) as u128 * (params[k + p] * ranges[k + p].1) as u128;
                }
                (s % modulus as u128) as u64
            })
            .collect();
        if let Ok(q) = QuadraticForm::from_residues(a.clone(), modulus, values) {
            if !nondegenerate_only || q.is_nondegenerate() {
                out.push(q);
            }
        }
        // odometer, last parameter fastest
        let mut i = ranges.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            params[i] += 1;
            if params[i] < ranges[i].0 {
                break;
            }
            params[i] = 0;
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawForm {
    group: FiniteAbelianGroup,
    values: Vec<RawValue>,
}

#[derive(Serialize, Deserialize)]
struct RawValue {
    elem: Vec<u64>,
    order: u64,
    exp: u64,
}

impl Serialize for QuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let values = (0..self.group.order())
            .map(|i| {
                let v = self.value_idx(i);
                RawValue {
                    elem: self.group.coords_at(i),
                    order: v.order(),
                    exp: v.exp(),
                }
            })
            .collect();
        RawForm {
            group: self.group.clone(),
            values,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawForm::deserialize(d)?;
        let g = raw.group;
        let mut vals = vec![None; g.order()];
        for v in raw.values {
            let e = g.element(v.elem.clone()).map_err(|e| D::Error::custom(e.to_string()))?;
            let r = RootOfUnity::new(v.order, v.exp).map_err(|e| D::Error::custom(e.to_string()))?;
            vals[g.index_of(&e)] = Some(r);
        }
        if vals.iter().any(|v| v.is_none()) {
            return Err(D::Error::custom("form table is missing elements"));
        }
        QuadraticForm::from_fn(g.clone(), |a| vals[g.index_of(a)].unwrap()).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    fn zeta(n: u64, e: u64) -> RootOfUnity {
        RootOfUnity::new(n, e).unwrap()
    }

    #[test]
    fn trivial_form_polarizes_trivially() {
        let q = QuadraticForm::trivial(g("2,3"));
        q.validate().unwrap();
        assert!(q.polarize().is_trivial());
    }

    #[test]
    fn ev_bicharacter_on_z2() {
        let m = evaluation_form(&g("2"));
        let b = m.form().polarize();
        let a = m.group();
        for x in a.elements() {
            for y in a.elements() {
                // ⟨(ℓ,χ),(ℓ',χ')⟩ = χ(ℓ')χ'(ℓ)
                let expect = (x.0[1] * y.0[0] + y.0[1] * x.0[0]) % 2;
                assert_eq!(b.value(&x, &y).unwrap(), zeta(2, expect));
            }
        }
    }

    #[test]
    fn z3_square_form_diagonal() {
        let a = g("3");
        let q = QuadraticForm::from_fn(a.clone(), |x| zeta(3, x.0[0] * x.0[0])).unwrap();
        let b = q.polarize();
        let one = a.element(vec![1]).unwrap();
        // q(2)/q(1)^2 = ζ₃⁴/ζ₃² = ζ₃²
        assert_eq!(b.value(&one, &one).unwrap(), zeta(3, 2));
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(QuadraticForm::trivial(FiniteAbelianGroup::trivial()).is_nondegenerate());
        assert!(!QuadraticForm::trivial(g("2")).is_nondegenerate());
        let q = QuadraticForm::from_fn(g("2"), |x| zeta(4, x.0[0])).unwrap();
        assert!(q.is_nondegenerate());
    }

    #[test]
    fn invalid_form_reports_witness() {
        // q(1) = ζ₃ on Z/3 but q(2) = 1 breaks q(a) = q(-a)
        let err = QuadraticForm::from_residues(g("3"), 3, vec![0, 1, 0]).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidForm {
                reason: "q(a) != q(-a)",
                ..
            }
        ));
        // q(x) = ζ₈^x on Z/8 is symmetric-free garbage
        let err = QuadraticForm::from_residues(g("4"), 8, vec![0, 1, 5, 1]).unwrap_err();
        assert!(matches!(err, Error::InvalidForm { .. }));
    }

    #[test]
    fn evaluation_form_values() {
        assert!(evaluation_form(&FiniteAbelianGroup::trivial()).group().is_trivial());
        let m = evaluation_form(&g("2"));
        let x = m.group().element(vec![1, 1]).unwrap();
        assert_eq!(m.form().value(&x).unwrap(), zeta(2, 1));
        // exhaustive on L = Z/3 against χ_c(ℓ) = ζ₃^{cℓ}
        let m = evaluation_form(&g("3"));
        for x in m.group().elements() {
            assert_eq!(m.form().value(&x).unwrap(), zeta(3, x.0[0] * x.0[1] % 3));
        }
    }

    #[test]
    fn split_form_examples() {
        let m = split_form(1, 3).unwrap();
        assert_eq!(m.group().orders(), &[3, 3]);
        assert_eq!(m.form().isotropic_count(), 5);
        assert!(split_form(2, 3).unwrap().form().is_nondegenerate());
        assert_eq!(split_form(1, 2), Err(Error::EvenPrime(2)));
        assert_eq!(split_form(1, 9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn enumerate_small() {
        let caps = Caps::default();
        assert_eq!(enumerate_quadratic_forms(&g("2"), false, &caps).unwrap().len(), 4);
        let nd = enumerate_quadratic_forms(&g("2"), true, &caps).unwrap();
        assert_eq!(nd.len(), 2);
        for q in &nd {
            let v = q.value_idx(1);
            assert_eq!(v.order(), 4);
        }
        assert_eq!(
            enumerate_quadratic_forms(&FiniteAbelianGroup::trivial(), false, &caps)
                .unwrap()
                .len(),
            1
        );
    }

    /// Oracle: every map A → μ_M satisfying the axioms, by exhaustive search.
    fn brute_force_form_count(a: &FiniteAbelianGroup, m: u64) -> usize {
        let n = a.order();
        let mut count = 0;
        let mut vals = vec![0u64; n];
        loop {
            if QuadraticForm::from_residues(a.clone(), m, vals.clone()).is_ok() {
                count += 1;
            }
            let mut i = n;
            loop {
                if i == 1 {
                    return count;
                }
                i -= 1;
                vals[i] += 1;
                if vals[i] < m {
                    break;
                }
                vals[i] = 0;
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let caps = Caps::default();
        // values of forms on these groups lie in μ_{2e}, so μ_{2e²} is a safe search space
        assert_eq!(brute_force_form_count(&g("2"), 8), 4);
        assert_eq!(brute_force_form_count(&g("3"), 9), 3);
        assert_eq!(brute_force_form_count(&g("4"), 16), 8);
        assert_eq!(enumerate_quadratic_forms(&g("3"), false, &caps).unwrap().len(), 3);
        assert_eq!(enumerate_quadratic_forms(&g("4"), false, &caps).unwrap().len(), 8);
        assert_eq!(enumerate_quadratic_forms(&g("2,2"), false, &caps).unwrap().len(), 32);
    }

    #[test]
    fn enumeration_invariant_under_permutation() {
        let caps = Caps::default();
        let a = enumerate_quadratic_forms(&g("2,4"), false, &caps).unwrap().len();
        let b = enumerate_quadratic_forms(&g("4,2"), false, &caps).unwrap().len();
        assert_eq!(a, b);
        let a = enumerate_quadratic_forms(&g("2,3"), true, &caps).unwrap().len();
        let b = enumerate_quadratic_forms(&g("3,2"), true, &caps).unwrap().len();
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip() {
        let m = evaluation_form(&g("2"));
        let s = serde_json::to_string(m.form()).unwrap();
        let back: QuadraticForm = serde_json::from_str(&s).unwrap();
        assert_eq!(&back, m.form());
        let mg: MetricGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(mg, m);
    }
}
