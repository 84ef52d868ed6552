//! `O(A,q)`, the determinant `g ↦ |(g−1)A|` modulo squares, and `SO(A,q)`.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{generator_image_candidates, hom_from_image_indices, FiniteAbelianGroup, Homomorphism};
use crate::config::arith::squarefree_part;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::quadratic::{split_form, MetricGroup, QuadraticForm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalGroup {
    metric: MetricGroup,
    elements: Vec<Homomorphism>,
    tables: Vec<Vec<usize>>,
}

/// All bijective homomorphisms `f: A → B` with `q_B ∘ f = q_A`, as generator
/// image index lists sorted lexicographically.
pub fn isometries(source: &QuadraticForm, target: &QuadraticForm, caps: &Caps) -> Result<Vec<Vec<usize>>> {
    let a = source.group();
    let b = target.group();
    caps.check("group order for isometry search", caps.group_order, a.order() as u64)?;
    if a.order() != b.order() {
        return Ok(Vec::new());
    }
    // compare values as roots of unity through a common modulus
    let m = crate::config::arith::lcm(source.modulus(), target.modulus());
    let qa: Vec<u64> = source.residues().iter().map(|&v| v * (m / source.modulus())).collect();
    let qb: Vec<u64> = target.residues().iter().map(|&v| v * (m / target.modulus())).collect();
    let cands = generator_image_candidates(a, b);
    if a.rank() == 0 {
        return Ok(vec![Vec::new()]);
    }
    let coords: Vec<Vec<u64>> = (0..a.order()).map(|i| a.coords_at(i)).collect();
    let last_nonzero: Vec<usize> = coords
        .iter()
        .map(|c| c.iter().rposition(|&x| x != 0).unwrap_or(0))
        .collect();
    let strides: Vec<usize> = (0..a.rank()).map(|i| a.index_of(&a.generator(i)).max(1)).collect();

    let check = |imgs: &[usize]| -> bool {
        let n = a.order();
        let mut table = vec![0usize; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        for idx in 1..n {
            let i = last_nonzero[idx];
            let v = b.add_idx(table[idx - strides[i]], imgs[i]);
            if qb[v] != qa[idx] || seen[v] {
                return false;
            }
            seen[v] = true;
            table[idx] = v;
        }
        true
    };

    let mut found: Vec<Vec<usize>> = cands[0]
        .par_iter()
        .flat_map_iter(|&first| {
            let mut local = Vec::new();
            let mut rest: Vec<Vec<usize>> = cands[1..].to_vec();
            rest.insert(0, vec![first]);
            crate::abelian::for_each_hom_images(&rest, |imgs| {
                if check(imgs) {
                    local.push(imgs.to_vec());
                }
                true
            });
            local
        })
        .collect();
    found.sort();
    Ok(found)
}

/// Brute-force `O(A,q)`: every well-defined endomorphism is tested against
/// `q∘f = q` on all of `A` and against bijectivity.
pub fn orthogonal_group(m: &MetricGroup, caps: &Caps) -> Result<OrthogonalGroup> {
    let a = m.group();
    let images = isometries(m.form(), m.form(), caps)?;
    let elements: Vec<Homomorphism> = images.iter().map(|imgs| hom_from_image_indices(a, a, imgs)).collect();
    let tables = elements.iter().map(|f| f.index_table()).collect();
    let o = OrthogonalGroup {
        metric: m.clone(),
        elements,
        tables,
    };
    o.verify()?;
    Ok(o)
}

impl OrthogonalGroup {
    pub fn metric(&self) -> &MetricGroup {
        &self.metric
    }

    pub fn elements(&self) -> &[Homomorphism] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    /// Re-checks `q∘f = q` for every stored element.
    pub fn verify(&self) -> Result<()> {
        let q = self.metric.form().residues();
        for (f, t) in self.elements.iter().zip(&self.tables) {
            if let Some(a) = (0..t.len()).find(|&a| q[t[a]] != q[a]) {
                return Err(Error::RelationViolation(format!(
                    "{f} does not preserve q at {:?}",
                    self.metric.group().coords_at(a)
                )));
            }
        }
        Ok(())
    }

    pub fn identity_position(&self) -> Option<usize> {
        let id: Vec<usize> = (0..self.metric.order()).collect();
        self.tables.iter().position(|t| *t == id)
    }

    pub fn contains_table(&self, t: &[usize]) -> bool {
        self.tables.iter().any(|s| s == t)
    }

    /// Closure, identity and inverses, on index tables.
    pub fn is_group(&self) -> bool {
        is_subgroup_of_tables(&self.tables, self.metric.order())
    }

    pub fn determinants(&self) -> Vec<u64> {
        self.tables
            .iter()
            .map(|t| determinant_of_table(self.metric.group(), t))
            .collect()
    }

    /// Multiplicities of determinant values.
    pub fn det_spectrum(&self) -> BTreeMap<u64, usize> {
        let mut s = BTreeMap::new();
        for d in self.determinants() {
            *s.entry(d).or_insert(0) += 1;
        }
        s
    }

    pub fn summary(&self) -> OrthogonalSummary {
        let so = special_orthogonal_group(self);
        OrthogonalSummary {
            group: self.metric.group().clone(),
            order: self.order(),
            so_order: so.order(),
            index: if so.order() == 0 { 0 } else { self.order() / so.order() },
            det_spectrum: self.det_spectrum(),
            so_is_subgroup: so.is_group(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalSummary {
    pub group: FiniteAbelianGroup,
    pub order: usize,
    pub so_order: usize,
    pub index: usize,
    pub det_spectrum: BTreeMap<u64, usize>,
    pub so_is_subgroup: bool,
}

pub(crate) fn is_subgroup_of_tables(tables: &[Vec<usize>], n: usize) -> bool {
    let set: HashSet<&Vec<usize>> = tables.iter().collect();
    let id: Vec<usize> = (0..n).collect();
    if !set.contains(&id) {
        return false;
    }
    for f in tables {
        let mut inv = vec![0; n];
        for (a, &b) in f.iter().enumerate() {
            inv[b] = a;
        }
        if !set.contains(&inv) {
            return false;
        }
        for g in tables {
            let fg: Vec<usize> = g.iter().map(|&x| f[x]).collect();
            if !set.contains(&fg) {
                return false;
            }
        }
    }
    true
}

fn determinant_of_table(a: &FiniteAbelianGroup, t: &[usize]) -> u64 {
    let mut seen = vec![false; a.order()];
    let mut count = 0u64;
    for (x, &gx) in t.iter().enumerate() {
        let y = a.sub_idx(gx, x);
        if !seen[y] {
            seen[y] = true;
            count += 1;
        }
    }
    squarefree_part(count)
}

/// Squarefree part of `|(g−1)A|`; 1 is the trivial square class.
pub fn determinant(g: &Homomorphism) -> u64 {
    determinant_of_table(g.source(), &g.index_table())
}

/// Product of two square classes given by squarefree representatives.
pub fn square_class_product(a: u64, b: u64) -> u64 {
    squarefree_part(a * b)
}

/// `ker(det)`.
pub fn special_orthogonal_group(o: &OrthogonalGroup) -> OrthogonalGroup {
    let dets = o.determinants();
    let mut elements = Vec::new();
    let mut tables = Vec::new();
    for ((f, t), d) in o.elements.iter().zip(&o.tables).zip(dets) {
        if d == 1 {
            elements.push(f.clone());
            tables.push(t.clone());
        }
    }
    OrthogonalGroup {
        metric: o.metric.clone(),
        elements,
        tables,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitOrthogonalReport {
    pub n: usize,
    pub p: u64,
    pub brute_force: u128,
    pub formula: u128,
    pub equal: bool,
}

/// `2·p^{n(n−1)}·(pⁿ−1)·∏_{i<n}(p^{2i}−1)`.
pub fn split_orthogonal_order_formula(n: usize, p: u64) -> u128 {
    if n == 0 {
        return 1;
    }
    let p = p as u128;
    let n32 = n as u32;
    let mut v = 2 * p.pow(n32 * (n32 - 1)) * (p.pow(n32) - 1);
    for i in 1..n32 {
        v *= p.pow(2 * i) - 1;
    }
    v
}

pub fn split_orthogonal_check(n: usize, p: u64, caps: &Caps) -> Result<SplitOrthogonalReport> {
    let m = split_form(n, p)?;
    let o = orthogonal_group(&m, caps)?;
    let brute_force = o.order() as u128;
    let formula = split_orthogonal_order_formula(n, p);
    Ok(SplitOrthogonalReport {
        n,
        p,
        brute_force,
        formula,
        equal: brute_force == formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::evaluation_form;

    fn g(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_group() {
        let m = evaluation_form(&FiniteAbelianGroup::trivial());
        let o = orthogonal_group(&m, &Caps::default()).unwrap();
        assert_eq!(o.order(), 1);
        assert_eq!(special_orthogonal_group(&o).order(), 1);
    }

    /// Classical count: O(xy) over F_p is {diag(a, a⁻¹)} ⋊ swap, 2(p−1) elements.
    #[test]
    fn ev_z3_matches_reflection_count() {
        let o = orthogonal_group(&evaluation_form(&g("3")), &Caps::default()).unwrap();
        assert_eq!(o.order(), 2 * (3 - 1));
        assert!(o.is_group());
    }

    #[test]
    fn minus_identity_is_orthogonal() {
        for l in ["2", "3", "4", "2,2", "6"] {
            let m = evaluation_form(&g(l));
            let o = orthogonal_group(&m, &Caps::default()).unwrap();
            let neg = Homomorphism::scalar(m.group(), -1);
            assert!(o.contains_table(&neg.index_table()), "L = {l}");
        }
    }

    #[test]
    fn determinant_examples() {
        let m = evaluation_form(&g("3"));
        let a = m.group();
        assert_eq!(determinant(&Homomorphism::identity(a)), 1);
        // (g−1)a = −2a = a on (Z/3)², image of size 9
        assert_eq!(determinant(&Homomorphism::scalar(a, -1)), 1);
        let swap = Homomorphism::new(a.clone(), a.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        // brute force image of (g−1): {(y−x, x−y)} has 3 elements
        let image: HashSet<_> = a
            .elements()
            .map(|x| {
                let gx = swap.apply(&x).unwrap();
                a.add(&gx, &a.neg(&x).unwrap()).unwrap()
            })
            .collect();
        assert_eq!(image.len(), 3);
        assert_eq!(determinant(&swap), 3);
    }

    #[test]
    fn so_is_index_two_subgroup_for_ev_z3() {
        let o = orthogonal_group(&evaluation_form(&g("3")), &Caps::default()).unwrap();
        let so = special_orthogonal_group(&o);
        assert!(so.is_group());
        assert!(so.identity_position().is_some());
        assert_eq!(o.order() / so.order(), 2);
    }

    #[test]
    fn determinant_is_multiplicative_on_small_groups() {
        for l in ["2", "3", "4", "5", "2,2"] {
            let o = orthogonal_group(&evaluation_form(&g(l)), &Caps::default()).unwrap();
            if o.order() > 16 {
                continue;
            }
            let dets = o.determinants();
            let n = o.metric().order();
            for (i, f) in o.index_tables().iter().enumerate() {
                for (j, h) in o.index_tables().iter().enumerate() {
                    let fh: Vec<usize> = h.iter().map(|&x| f[x]).collect();
                    let d = determinant_of_table(o.metric().group(), &fh);
                    assert_eq!(d, square_class_product(dets[i], dets[j]), "L = {l}");
                    assert_eq!(fh.len(), n);
                }
            }
        }
    }

    #[test]
    fn split_orders() {
        let caps = Caps::default();
        let r = split_orthogonal_check(1, 3, &caps).unwrap();
        assert_eq!((r.brute_force, r.formula), (4, 4));
        let r = split_orthogonal_check(1, 5, &caps).unwrap();
        assert_eq!((r.brute_force, r.formula), (8, 8));
        assert_eq!(split_orthogonal_order_formula(2, 3), 1152);
    }

    #[test]
    fn cap_is_enforced() {
        let caps = Caps::default().with_group_order(4);
        assert!(matches!(
            orthogonal_group(&evaluation_form(&g("3")), &caps),
            Err(Error::CapExceeded { .. })
        ));
    }
}
