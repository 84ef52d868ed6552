//! Finite groups given by Cayley tables, element 0 the identity.

use std::collections::{BTreeSet, HashMap};

use crate::abelian::FiniteAbelianGroup;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    label: String,
}

impl FiniteGroup {
    /// Validates identity at 0, inverses and associativity.
    pub fn from_cayley(order: usize, mul: Vec<usize>, label: impl Into<String>) -> Result<Self> {
        if order == 0 || mul.len() != order * order || mul.iter().any(|&x| x >= order) {
            return Err(Error::ShapeMismatch("Cayley table shape".into()));
        }
        let m = |a: usize, b: usize| mul[a * order + b];
        if (0..order).any(|a| m(0, a) != a || m(a, 0) != a) {
            return Err(Error::RelationViolation("element 0 is not the identity".into()));
        }
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| m(a, b) == 0) {
                Some(b) if m(b, a) == 0 => inv[a] = b,
                _ => return Err(Error::RelationViolation(format!("element {a} has no inverse"))),
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::RelationViolation(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            label: label.into(),
        })
    }

    pub fn from_abelian(a: &FiniteAbelianGroup) -> Self {
        let n = a.order();
        let inv = (0..n).map(|x| a.neg_idx(x)).collect();
        FiniteGroup {
            order: n,
            mul: a.addition_table(),
            inv,
            label: format!("{:?}", a.orders()),
        }
    }

    pub fn trivial() -> Self {
        Self::from_abelian(&FiniteAbelianGroup::trivial())
    }

    /// The group generated by permutations of `0..n` under composition,
    /// `(f·g)(x) = f(g(x))`. Elements are the identity followed by the rest in
    /// lexicographic order. Returns the group and its element list.
    pub fn generated_by_permutations(
        n: usize,
        gens: &[Vec<usize>],
        limit: usize,
        label: impl Into<String>,
    ) -> Result<(Self, Vec<Vec<usize>>)> {
        let id: Vec<usize> = (0..n).collect();
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        set.insert(id.clone());
        let mut frontier = vec![id.clone()];
        while let Some(f) = frontier.pop() {
            for g in gens {
                let fg: Vec<usize> = g.iter().map(|&x| f[x]).collect();
                if set.insert(fg.clone()) {
                    if set.len() > limit {
                        return Err(Error::CapExceeded {
                            what: "generated subgroup order",
                            limit: limit as u64,
                            actual: set.len() as u64,
                        });
                    }
                    frontier.push(fg);
                }
            }
        }
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        elems.extend(set.into_iter().filter(|p| *p != id));
        let pos: HashMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let k = elems.len();
        let mut mul = vec![0; k * k];
        for (i, f) in elems.iter().enumerate() {
            for (j, g) in elems.iter().enumerate() {
                let fg: Vec<usize> = g.iter().map(|&x| f[x]).collect();
                mul[i * k + j] = pos[&fg];
            }
        }
        let grp = Self::from_cayley(k, mul, label)?;
        Ok((grp, elems))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}
