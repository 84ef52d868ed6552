//! Where the degree-4 obstruction of an orthogonal-group action lives.
//!
//! For a metric group of order `l²` and `G ⊂ O(A,q)` this reports the
//! coefficient group `μ_{l⁴}`, `H⁴(G; μ_{l⁴})`, and the group
//! `H³(G; k^×)` acting simply transitively on trivializations.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::compute::{cohomology, Check, Coefficients, CohomologyGroup};
use super::group::FiniteGroup;
use crate::abelian::Homomorphism;
use crate::config::arith::isqrt_exact;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::orthogonal::orthogonal_group;
use crate::quadratic::MetricGroup;

/// Serializable view of a [`CohomologyGroup`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologySummary {
    pub degree: usize,
    pub coefficients: Coefficients,
    pub invariant_factors: Vec<u64>,
    pub cyclic_orders: Vec<u64>,
    pub representatives: Vec<RepresentativeTable>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentativeTable {
    pub modulus: u64,
    pub values: Vec<u64>,
}

impl From<&CohomologyGroup> for CohomologySummary {
    fn from(h: &CohomologyGroup) -> Self {
        CohomologySummary {
            degree: h.degree,
            coefficients: h.coefficients,
            invariant_factors: h.invariant_factors.clone(),
            cyclic_orders: h.cyclic_orders.clone(),
            representatives: h
                .representatives
                .iter()
                .map(|c| RepresentativeTable {
                    modulus: c.modulus(),
                    values: c.values().to_vec(),
                })
                .collect(),
            checks: h.checks.clone(),
        }
    }
}

/// A subgroup of `O(A,q)` with its Cayley table.
#[derive(Debug, Clone)]
pub struct OrthogonalSubgroup {
    pub group: Arc<FiniteGroup>,
    /// Index tables of the elements, identity first.
    pub elements: Vec<Vec<usize>>,
}

/// Which subgroup of `O(A,q)` to use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgroupSpec {
    Trivial,
    /// `⟨−id⟩`.
    MinusIdentity,
    /// `⟨g⟩` for the first non-identity involution of `O(A,q)` in its
    /// sorted element order.
    FirstInvolution,
    Generators(Vec<Homomorphism>),
}

impl FromStr for SubgroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trivial" => Ok(SubgroupSpec::Trivial),
            "neg" => Ok(SubgroupSpec::MinusIdentity),
            "involution" => Ok(SubgroupSpec::FirstInvolution),
            t => Err(Error::Parse(format!(
                "bad subgroup spec {t:?} (expected trivial, neg or involution)"
            ))),
        }
    }
}

pub fn orthogonal_subgroup(m: &MetricGroup, spec: &SubgroupSpec, caps: &Caps) -> Result<OrthogonalSubgroup> {
    let a = m.group();
    let gens: Vec<Vec<usize>> = match spec {
        SubgroupSpec::Trivial => Vec::new(),
        SubgroupSpec::MinusIdentity => vec![Homomorphism::scalar(a, -1).index_table()],
        SubgroupSpec::FirstInvolution => {
            let o = orthogonal_group(m, caps)?;
            let id: Vec<usize> = (0..a.order()).collect();
            let inv = o
                .index_tables()
                .iter()
                .find(|t| **t != id && (0..t.len()).all(|x| t[t[x]] == x))
                .cloned();
            inv.into_iter().collect()
        }
        SubgroupSpec::Generators(hs) => {
            let q = m.form().residues();
            let mut out = Vec::new();
            for h in hs {
                if h.source() != a || h.target() != a || !h.is_isomorphism(caps)? {
                    return Err(Error::ParentMismatch("generator is not an automorphism of A".into()));
                }
                let t = h.index_table();
                if (0..t.len()).any(|x| q[t[x]] != q[x]) {
                    return Err(Error::RelationViolation(format!("{h} does not preserve q")));
                }
                out.push(t);
            }
            out
        }
    };
    let (group, elements) =
        FiniteGroup::generated_by_permutations(a.order(), &gens, caps.group_order as usize, "subgroup of O(A,q)")?;
    Ok(OrthogonalSubgroup {
        group: Arc::new(group),
        elements,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsorReport {
    pub l: u64,
    pub coefficient_order: u64,
    pub subgroup_order: usize,
    pub h4_coefficient: CohomologySummary,
    pub h3_scalars: CohomologySummary,
    pub torsor_size: u128,
}

pub fn torsor_and_coefficient_report(m: &MetricGroup, g_sub: &OrthogonalSubgroup, caps: &Caps) -> Result<TorsorReport> {
    let order = m.order() as u64;
    let l = isqrt_exact(order).ok_or(Error::NotSquareOrder(order))?;
    let coefficient_order = l.checked_pow(4).ok_or(Error::Overflow("l⁴"))?;
    let h4 = cohomology(&g_sub.group, 4, Coefficients::MuN(coefficient_order), caps)?;
    let h3 = cohomology(&g_sub.group, 3, Coefficients::FullScalars, caps)?;
    Ok(TorsorReport {
        l,
        coefficient_order,
        subgroup_order: g_sub.group.order(),
        torsor_size: h3.order(),
        h4_coefficient: (&h4).into(),
        h3_scalars: (&h3).into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::{evaluation_form, split_form, QuadraticForm};

    #[test]
    fn ev_z2_with_an_involution() {
        let caps = Caps::default();
        let m = evaluation_form(&"2".parse().unwrap());
        let g = orthogonal_subgroup(&m, &SubgroupSpec::FirstInvolution, &caps).unwrap();
        assert_eq!(g.group.order(), 2);
        let r = torsor_and_coefficient_report(&m, &g, &caps).unwrap();
        assert_eq!((r.l, r.coefficient_order), (2, 16));
        assert_eq!(r.h3_scalars.invariant_factors, vec![2]);
        assert_eq!(r.torsor_size, 2);
        assert_eq!(r.h4_coefficient.invariant_factors, vec![2]);
    }

    #[test]
    fn trivial_subgroup() {
        let caps = Caps::default();
        let m = split_form(1, 3).unwrap();
        let g = orthogonal_subgroup(&m, &SubgroupSpec::Trivial, &caps).unwrap();
        let r = torsor_and_coefficient_report(&m, &g, &caps).unwrap();
        assert!(r.h3_scalars.invariant_factors.is_empty());
        assert!(r.h4_coefficient.invariant_factors.is_empty());
        assert_eq!(r.torsor_size, 1);
    }

    #[test]
    fn non_square_order() {
        let caps = Caps::default();
        let q = QuadraticForm::from_residues("3".parse().unwrap(), 3, vec![0, 1, 1]).unwrap();
        let m = MetricGroup::new(q).unwrap();
        let g = orthogonal_subgroup(&m, &SubgroupSpec::Trivial, &caps).unwrap();
        assert_eq!(
            torsor_and_coefficient_report(&m, &g, &caps),
            Err(Error::NotSquareOrder(3))
        );
    }
}
