//! Subgroups, isotropic and Lagrangian subgroups, polarizations.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::abelian::{Element, FiniteAbelianGroup, Homomorphism};
use crate::config::arith::is_prime;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::quadratic::{evaluation_form, MetricGroup, QuadraticForm};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    /// Sorted element indices in `parent`.
    members: Vec<usize>,
    generators: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawSubgroup {
    parent: FiniteAbelianGroup,
    elements: Vec<Element>,
    generators: Vec<Element>,
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSubgroup {
            parent: self.parent.clone(),
            elements: self.elements(),
            generators: self.generators(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subgroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSubgroup::deserialize(d)?;
        let gens = raw
            .generators
            .iter()
            .map(|g| raw.parent.check(g).map(|_| raw.parent.index_of(g)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        let s = Subgroup::generated_by(&raw.parent, &gens);
        let mut listed: Vec<usize> = raw.elements.iter().map(|e| raw.parent.index_of(e)).collect();
        listed.sort_unstable();
        if listed != s.members {
            return Err(serde::de::Error::custom(
                "element list is not the subgroup generated by the generators",
            ));
        }
        Ok(s)
    }
}

/// `S + ⟨g⟩` on sorted index sets.
fn extend(parent: &FiniteAbelianGroup, members: &[usize], g: usize) -> Vec<usize> {
    let mut seen = vec![false; parent.order()];
    for &m in members {
        seen[m] = true;
    }
    let mut out = members.to_vec();
    let mut mult = g;
    while !seen[mult] {
        for &m in members {
            let x = parent.add_idx(m, mult);
            if !seen[x] {
                seen[x] = true;
                out.push(x);
            }
        }
        mult = parent.add_idx(mult, g);
    }
    out.sort_unstable();
    out
}

impl Subgroup {
    /// Subgroup generated by the given element indices; the generator list is
    /// kept as given (minus redundant entries).
    pub fn generated_by(parent: &FiniteAbelianGroup, gens: &[usize]) -> Self {
        let mut members = vec![0];
        let mut generators = Vec::new();
        for &g in gens {
            if members.binary_search(&g).is_err() {
                members = extend(parent, &members, g);
                generators.push(g);
            }
        }
        Subgroup {
            parent: parent.clone(),
            members,
            generators,
        }
    }

    pub fn from_elements(parent: &FiniteAbelianGroup, elements: &[Element]) -> Result<Self> {
        let idx = elements
            .iter()
            .map(|e| parent.check(e).map(|_| parent.index_of(e)))
            .collect::<Result<Vec<_>>>()?;
        let s = Self::generated_by(parent, &idx);
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != s.members {
            return Err(Error::RelationViolation("element set is not closed".into()));
        }
        Ok(s)
    }

    pub fn zero(parent: &FiniteAbelianGroup) -> Self {
        Self::generated_by(parent, &[])
    }

    pub fn whole(parent: &FiniteAbelianGroup) -> Self {
        let gens: Vec<usize> = (0..parent.rank())
            .map(|i| parent.index_of(&parent.generator(i)))
            .collect();
        Self::generated_by(parent, &gens)
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn contains_idx(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn elements(&self) -> Vec<Element> {
        self.members.iter().map(|&i| self.parent.element_at(i)).collect()
    }

    pub fn generators(&self) -> Vec<Element> {
        self.generators.iter().map(|&i| self.parent.element_at(i)).collect()
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    /// Closure under addition and negation, and `0 ∈ S`.
    pub fn is_closed(&self) -> bool {
        let p = &self.parent;
        self.contains_idx(0)
            && self.members.iter().all(|&a| {
                self.contains_idx(p.neg_idx(a)) && self.members.iter().all(|&b| self.contains_idx(p.add_idx(a, b)))
            })
    }

    /// Invariant factors `n₁ | n₂ | …` (all > 1) of the subgroup.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let p = &self.parent;
        let order = self.order() as u64;
        let orders: Vec<u64> = self
            .members
            .iter()
            .map(|&i| p.element_order(&p.element_at(i)))
            .collect();
        let mut primes = Vec::new();
        let mut n = order;
        let mut d = 2;
        while n > 1 {
            if n.is_multiple_of(d) && is_prime(d) {
                primes.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        // for each prime, r_j = number of cyclic factors of order ≥ p^j
        let mut primary: Vec<Vec<u64>> = Vec::new(); // per prime: exponents, descending
        for &pr in &primes {
            let mut exps = Vec::new();
            let mut prev = 1u64;
            let mut pj = pr;
            let mut counts = Vec::new();
            loop {
                let c = orders.iter().filter(|&&o| pj % o == 0).count() as u64;
                if c == prev {
                    break;
                }
                let mut r = 0;
                let mut ratio = c / prev;
                while ratio > 1 {
                    ratio /= pr;
                    r += 1;
                }
                counts.push(r);
                prev = c;
                pj *= pr;
            }
            // counts[j-1] = r_j; the number of factors of order exactly p^j is r_j − r_{j+1}
            for j in 0..counts.len() {
                let next = counts.get(j + 1).copied().unwrap_or(0);
                for _ in 0..counts[j] - next {
                    exps.push(pr.pow(j as u32 + 1));
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            primary.push(exps);
        }
        let len = primary.iter().map(|v| v.len()).max().unwrap_or(0);
        let mut inv: Vec<u64> = (0..len)
            .map(|k| primary.iter().map(|v| v.get(k).copied().unwrap_or(1)).product())
            .collect();
        inv.reverse();
        inv
    }

    /// The subgroup as an abstract group `Z/n₁ ⊕ …` together with a basis
    /// `b₁, …` of elements of orders `n₁, …` realizing `S = ⊕⟨bᵢ⟩`.
    pub fn find_basis(&self) -> (FiniteAbelianGroup, Vec<usize>) {
        let orders = self.invariant_factors();
        let abs = FiniteAbelianGroup::new(orders.clone()).expect("positive orders");
        let p = &self.parent;
        let cands: Vec<Vec<usize>> = orders
            .iter()
            .map(|&n| {
                self.members
                    .iter()
                    .copied()
                    .filter(|&i| p.element_order(&p.element_at(i)) == n)
                    .collect()
            })
            .collect();
        let mut chosen = Vec::new();
        let found = search_basis(p, &cands, &mut chosen, &[0], 1);
        assert!(found, "a basis of matching type exists");
        (abs, chosen)
    }
}

fn search_basis(
    p: &FiniteAbelianGroup,
    cands: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    span: &[usize],
    size: usize,
) -> bool {
    let k = chosen.len();
    if k == cands.len() {
        return true;
    }
    for &c in &cands[k] {
        let next = extend(p, span, c);
        // independence: the new span has exactly size·ord(c) elements
        if next.len() == size * order_of(p, c) {
            chosen.push(c);
            if search_basis(p, cands, chosen, &next, next.len()) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn order_of(p: &FiniteAbelianGroup, i: usize) -> usize {
    p.element_order(&p.element_at(i)) as usize
}

/// Every subgroup of `a` exactly once, sorted by order and then by element set.
pub fn enumerate_subgroups(a: &FiniteAbelianGroup, caps: &Caps) -> Result<Vec<Subgroup>> {
    caps.check(
        "group order for subgroup enumeration",
        caps.subgroup_order,
        a.order() as u64,
    )?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let zero = Subgroup::zero(a);
    seen.insert(zero.members.clone());
    queue.push_back(zero);
    // breadth first, so each subgroup is first reached with a shortest generating list
    while let Some(s) = queue.pop_front() {
        for g in 0..a.order() {
            if s.contains_idx(g) {
                continue;
            }
            let members = extend(a, &s.members, g);
            if seen.insert(members.clone()) {
                let mut generators = s.generators.clone();
                generators.push(g);
                queue.push_back(Subgroup {
                    parent: a.clone(),
                    members,
                    generators,
                });
            }
        }
        out.push(s);
    }
    out.sort_by(|x, y| (x.order(), &x.members).cmp(&(y.order(), &y.members)));
    Ok(out)
}

fn same_parent(l: &Subgroup, g: &FiniteAbelianGroup) -> Result<()> {
    if l.parent != *g {
        return Err(Error::ParentMismatch(format!(
            "subgroup of {:?}, form on {:?}",
            l.parent.orders(),
            g.orders()
        )));
    }
    Ok(())
}

pub fn is_isotropic(l: &Subgroup, q: &QuadraticForm) -> Result<bool> {
    same_parent(l, q.group())?;
    Ok(l.members.iter().all(|&i| q.residues()[i] == 0))
}

pub fn is_lagrangian(l: &Subgroup, m: &MetricGroup) -> Result<bool> {
    Ok(is_isotropic(l, m.form())? && l.order() * l.order() == m.order())
}

pub fn lagrangians(m: &MetricGroup, caps: &Caps) -> Result<Vec<Subgroup>> {
    let mut out = Vec::new();
    for s in enumerate_subgroups(m.group(), caps)? {
        if is_lagrangian(&s, m)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// A Lagrangian `L` and an isomorphism `L ⊕ L̂ → A` carrying `q` to `ev`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polarization {
    pub metric: MetricGroup,
    pub lagrangian: Subgroup,
    /// `L` as an abstract group.
    pub l_group: FiniteAbelianGroup,
    pub iso: Homomorphism,
}

impl Polarization {
    /// `q ∘ iso = ev` pointwise and `iso` bijective.
    pub fn verify(&self) -> bool {
        let ev = evaluation_form(&self.l_group);
        let t = self.iso.index_table();
        let q = self.metric.form();
        let mut hit = vec![false; q.group().order()];
        for (x, &y) in t.iter().enumerate() {
            if hit[y] || q.value_idx(y) != ev.form().value_idx(x) {
                return false;
            }
            hit[y] = true;
        }
        *self.iso.source() == *ev.group() && *self.iso.target() == *q.group()
    }
}

/// For every Lagrangian, the lexicographically first isomorphism
/// `L ⊕ L̂ → A` extending a fixed basis of `L` and carrying `q` to `ev`.
pub fn find_polarizations(m: &MetricGroup, caps: &Caps) -> Result<Vec<Polarization>> {
    let a = m.group();
    caps.check(
        "group order for polarization search",
        caps.group_order,
        a.order() as u64,
    )?;
    let q = m.form();
    let mut out = Vec::new();
    for lag in lagrangians(m, caps)? {
        let (l_abs, basis) = lag.find_basis();
        let k = basis.len();
        let ns = l_abs.orders().to_vec();
        let modulus = q.modulus();
        // ⟨bᵢ, c_j⟩ must be δᵢⱼ/nᵢ and q(c_j) = 1
        let cands: Vec<Vec<usize>> = (0..k)
            .map(|j| {
                (0..a.order())
                    .filter(|&c| {
                        q.residues()[c] == 0
                            && ns[j] % order_of(a, c) as u64 == 0
                            && (0..k).all(|i| {
                                let want = if i == j { modulus / ns[i] } else { 0 };
                                q.bichar_residue(basis[i], c) == want
                            })
                    })
                    .collect()
            })
            .collect();
        let ev = evaluation_form(&l_abs);
        let mut found = None;
        crate::abelian::for_each_hom_images(&cands, |cs| {
            let ok = (0..k).all(|i| (i + 1..k).all(|j| q.bichar_residue(cs[i], cs[j]) == 0));
            if !ok {
                return true;
            }
            let mut images: Vec<Element> = basis.iter().map(|&b| a.element_at(b)).collect();
            images.extend(cs.iter().map(|&c| a.element_at(c)));
            let Ok(iso) = Homomorphism::from_images(ev.group(), a, &images) else {
                return true;
            };
            let p = Polarization {
                metric: m.clone(),
                lagrangian: lag.clone(),
                l_group: l_abs.clone(),
                iso,
            };
            if p.verify() {
                found = Some(p);
                return false;
            }
            true
        });
        if let Some(p) = found {
            out.push(p);
        }
    }
    Ok(out)
}
