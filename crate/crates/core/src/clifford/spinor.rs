//! The spinor module `∧•L*` of the split space `L ⊕ L*` and the algebra
//! map `Cl(L ⊕ L*) → End(∧•L*)`.
//!
//! `∧•L*` has basis `φ_S`, `S ⊆ {1..m}`. A covector `φⱼ` acts by
//! `φⱼ ∧ (−)` and a vector `ℓᵢ` by the contraction `ι_{ℓᵢ}`, so that
//! `(ι_ℓ + φ∧)² = φ(ℓ)` matches `q(ℓ, φ) = φ(ℓ)`. Exchanging the roles of
//! `L` and `L*` gives the same module for `∧•L` with `ℓ ∧ (−)` and `ι_φ`.

use serde::{Deserialize, Serialize};

use super::algebra::{CliffordAlgebra, CliffordElement};
use super::field::{identity, mat_mul, rank, Matrix};
use super::space::QuadraticSpace;
use crate::cohomology::Check;
use crate::config::Caps;
use crate::error::{Error, Result};

/// Number of elements of `S` below `i`.
fn below(s: usize, i: usize) -> u32 {
    (s & ((1 << i) - 1)).count_ones()
}

/// `φⱼ ∧ (−)` on `∧•L*`.
pub fn wedge_matrix(m: usize, j: usize, p: u64) -> Matrix {
    let d = 1 << m;
    let mut a = vec![vec![0u64; d]; d];
    for s in 0..d {
        if s >> j & 1 == 0 {
            a[s | 1 << j][s] = if below(s, j).is_multiple_of(2) { 1 } else { p - 1 };
        }
    }
    a
}

/// `ι_{ℓᵢ}` on `∧•L*`.
pub fn contraction_matrix(m: usize, i: usize, p: u64) -> Matrix {
    let d = 1 << m;
    let mut a = vec![vec![0u64; d]; d];
    for s in 0..d {
        if s >> i & 1 == 1 {
            a[s & !(1 << i)][s] = if below(s, i).is_multiple_of(2) { 1 } else { p - 1 };
        }
    }
    a
}

/// Images of the basis `e_S` of `Cl(L ⊕ L*)`; generators are `ℓ₁…ℓ_m`
/// followed by `φ₁…φ_m`, as in [`QuadraticSpace::split`].
pub fn basis_images(m: usize, p: u64) -> Vec<Matrix> {
    let gens: Vec<Matrix> = (0..m)
        .map(|i| contraction_matrix(m, i, p))
        .chain((0..m).map(|j| wedge_matrix(m, j, p)))
        .collect();
    (0..1usize << (2 * m))
        .map(|s| {
            let mut acc = identity(1 << m);
            for (k, g) in gens.iter().enumerate() {
                if s >> k & 1 == 1 {
                    acc = mat_mul(&acc, g, p);
                }
            }
            acc
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinorReport {
    pub p: u64,
    pub m: usize,
    pub clifford_dim: usize,
    pub end_dim: usize,
    pub rank: usize,
    pub bijective: bool,
    pub checks: Vec<Check>,
}

/// Builds `ρ: Cl(L ⊕ L*) → End(∧•L*)` and checks that it is an algebra
/// isomorphism. The relations `ρ(v)² = q(v)` are checked on every `v` when
/// `V` has at most `caps.group_order` vectors and on the basis otherwise.
pub fn spinor_module(m: usize, p: u64, caps: &Caps) -> Result<SpinorReport> {
    let space = QuadraticSpace::split(p, m)?;
    let d = 1usize << m;
    let cd = d * d;
    caps.check(
        "spinor module map entries",
        caps.table_entries,
        (cd as u64).saturating_pow(2),
    )?;
    let alg = CliffordAlgebra::new(space.clone(), caps)?;
    let images = basis_images(m, p);
    let rho = |x: &CliffordElement| -> Matrix {
        let mut acc = vec![vec![0u64; d]; d];
        for (s, &c) in x.coeffs().iter().enumerate() {
            if c != 0 {
                for r in 0..d {
                    for k in 0..d {
                        acc[r][k] = (acc[r][k] + c * images[s][r][k]) % p;
                    }
                }
            }
        }
        acc
    };
    let mut checks = Vec::new();

    let exhaustive = (p as u128).pow(2 * m as u32) <= caps.group_order as u128;
    let vectors: Vec<Vec<u64>> = if exhaustive {
        space.vectors().collect()
    } else {
        (0..2 * m)
            .flat_map(|i| (0..2 * m).map(move |j| (i, j)))
            .map(|(i, j)| (0..2 * m).map(|k| u64::from(k == i || k == j)).collect())
            .collect()
    };
    let mut relations = true;
    for x in &vectors {
        let v = CliffordElement::vector(&alg, x)?;
        let a = rho(&v);
        let sq = mat_mul(&a, &a, p);
        let q = space.q(x);
        let expect: Matrix = identity(d)
            .into_iter()
            .map(|r| r.into_iter().map(|e| e * q % p).collect())
            .collect();
        relations &= sq == expect;
    }
    if !relations {
        return Err(Error::RelationViolation("ρ(v)² ≠ q(v)·id".into()));
    }
    checks.push(Check::new(
        if exhaustive {
            "ρ(v)² = q(v)·id for every v"
        } else {
            "ρ(v)² = q(v)·id on basis vectors and their sums"
        },
        relations,
    ));

    let mut hom = true;
    for s in 0..cd {
        for t in 0..cd {
            let es = CliffordElement::basis(&alg, s);
            let et = CliffordElement::basis(&alg, t);
            hom &= rho(&es.mul_unchecked(&et)) == mat_mul(&images[s], &images[t], p);
        }
    }
    checks.push(Check::new("ρ(e_S e_T) = ρ(e_S)ρ(e_T)", hom));

    let flat: Matrix = images.iter().map(|a| a.iter().flatten().copied().collect()).collect();
    let r = rank(&flat, p);
    checks.push(Check::new("rank of ρ is dim Cl = dim End", r == cd));
    Ok(SpinorReport {
        p,
        m,
        clifford_dim: cd,
        end_dim: cd,
        rank: r,
        bijective: r == cd && hom && relations,
        checks,
    })
}
