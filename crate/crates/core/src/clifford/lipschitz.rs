//! The Lipschitz group `Γ`, its twisted action on `V`, the spinor norm and
//! `Pin`/`Spin`, all by enumeration.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algebra::{CliffordAlgebra, CliffordElement};
use super::field::{det, identity, inv, is_square, mat_mul, neg, Matrix};
use super::space::QuadraticSpace;
use crate::cohomology::Check;
use crate::config::Caps;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LipschitzElement {
    pub element: CliffordElement,
    pub parity: u8,
    /// Column `i` is the image of `eᵢ` under `v ↦ (−1)^{p(g)} g v g⁻¹`.
    pub image: Matrix,
}

/// `v ↦ (−1)^{p(g)} g v g⁻¹` as a matrix, or `None` if some `eᵢ` leaves `V`.
pub fn twisted_action(g: &CliffordElement, g_inv: &CliffordElement, parity: u8) -> Option<Matrix> {
    let alg = g.algebra();
    let n = alg.space().dim();
    let p = alg.space().prime();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let e = CliffordElement::basis(alg, 1 << i);
        let mut w = g.mul_unchecked(&e).mul_unchecked(g_inv).as_vector()?;
        if parity == 1 {
            w.iter_mut().for_each(|x| *x = neg(*x, p));
        }
        cols.push(w);
    }
    Some((0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect())
}

/// `x ↦ x − b(x, v) q(v)⁻¹ v`.
pub fn reflection_matrix(space: &QuadraticSpace, v: &[u64]) -> Result<Matrix> {
    let p = space.prime();
    let qv = space.q(v);
    if qv == 0 {
        return Err(Error::RelationViolation(format!("{v:?} is isotropic")));
    }
    let qi = inv(qv, p);
    let n = space.dim();
    let cols: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            let c = space.b(&e, v) * qi % p;
            (0..n).map(|k| (e[k] + p - c * v[k] % p) % p).collect()
        })
        .collect();
    Ok((0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect())
}

fn preserves_q(space: &QuadraticSpace, m: &Matrix) -> bool {
    let n = space.dim();
    let p = space.prime();
    let col = |i: usize| -> Vec<u64> { (0..n).map(|r| m[r][i]).collect() };
    (0..n).all(|i| {
        let ci = col(i);
        space.q(&ci) == space.q_basis()[i] && (i + 1..n).all(|j| space.b(&ci, &col(j)) == space.b_basis(i, j))
    }) && det(m, p) != 0
}

/// `O(V, q)` by enumerating all `n×n` matrices over `F_p`.
pub fn orthogonal_matrices(space: &QuadraticSpace, caps: &Caps) -> Result<Vec<Matrix>> {
    let n = space.dim();
    let p = space.prime();
    let total = (p as u128)
        .checked_pow((n * n) as u32)
        .ok_or(Error::Overflow("matrix count"))?;
    caps.check(
        "matrices enumerated for O(V,q)",
        caps.table_entries,
        total.min(u64::MAX as u128) as u64,
    )?;
    let mut out: Vec<Matrix> = (0..total as u64)
        .into_par_iter()
        .filter_map(|mut k| {
            let mut m = vec![vec![0u64; n]; n];
            for r in (0..n).rev() {
                for c in (0..n).rev() {
                    m[r][c] = k % p;
                    k /= p;
                }
            }
            preserves_q(space, &m).then_some(m)
        })
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct LipschitzGroup {
    pub algebra: Arc<CliffordAlgebra>,
    pub elements: Vec<LipschitzElement>,
}

/// Every homogeneous invertible `g` whose twisted conjugation maps `V` into
/// `V`, sorted by coefficient vector.
pub fn lipschitz_group(alg: &Arc<CliffordAlgebra>, caps: &Caps) -> Result<LipschitzGroup> {
    let p = alg.space().prime();
    let d = alg.dim();
    let mut out = Vec::new();
    for parity in 0..2u8 {
        let words: Vec<usize> = (0..d).filter(|s| (s.count_ones() % 2) as u8 == parity).collect();
        let total = (p as u128)
            .checked_pow(words.len() as u32)
            .ok_or(Error::Overflow("candidate count"))?;
        caps.check(
            "Lipschitz candidates",
            caps.table_entries,
            total.min(u64::MAX as u128) as u64,
        )?;
        let found: Vec<LipschitzElement> = (1..total as u64)
            .into_par_iter()
            .filter_map(|mut k| {
                let mut c = vec![0u64; d];
                for &w in words.iter().rev() {
                    c[w] = k % p;
                    k /= p;
                }
                let g = CliffordElement::new(alg, c).expect("shape");
                let gi = g.inverse()?;
                let image = twisted_action(&g, &gi, parity)?;
                Some(LipschitzElement {
                    element: g,
                    parity,
                    image,
                })
            })
            .collect();
        out.extend(found);
    }
    out.sort_by(|a, b| a.element.coeffs().cmp(b.element.coeffs()));
    Ok(LipschitzGroup {
        algebra: alg.clone(),
        elements: out,
    })
}

/// `N(g) = g gᵀ`, which must be a scalar.
pub fn spinor_norm(g: &CliffordElement) -> Result<u64> {
    g.mul_unchecked(&g.transpose()).as_scalar().ok_or(Error::NonScalarNorm)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinReport {
    pub p: u64,
    pub dim: usize,
    pub gamma_order: usize,
    pub orthogonal_order: usize,
    pub pin_order: usize,
    pub spin_order: usize,
    pub so_order: usize,
    /// `|ker N_O|`.
    pub kernel_norm_order: usize,
    /// Order of the image of `Pin` in `O(V, q)`.
    pub pin_image_order: usize,
    pub checks: Vec<Check>,
}

impl PinReport {
    pub fn verified(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `Γ`, `Pin = ker N`, `Spin = Pin ∩ preimage(SO)` together with every
/// exactness and commutativity check of the norm diagram.
pub fn pin_spin_report(space: &QuadraticSpace, caps: &Caps) -> Result<PinReport> {
    let p = space.prime();
    let n = space.dim();
    if !space.is_nondegenerate() {
        return Err(Error::Degenerate(Vec::new()));
    }
    let alg = CliffordAlgebra::new(space.clone(), caps)?;
    let gamma = lipschitz_group(&alg, caps)?;
    let o = orthogonal_matrices(space, caps)?;
    let o_set: HashSet<&Matrix> = o.iter().collect();
    let els = &gamma.elements;
    let index: HashMap<&[u64], usize> = els.iter().enumerate().map(|(i, e)| (e.element.coeffs(), i)).collect();
    let id = identity(n);
    let mut checks = Vec::new();

    let images: HashSet<&Matrix> = els.iter().map(|e| &e.image).collect();
    checks.push(Check::new(
        "twisted action lands in O(V,q)",
        els.iter().all(|e| o_set.contains(&e.image)),
    ));
    checks.push(Check::new("Γ → O(V,q) is onto", images.len() == o.len()));
    let kernel: Vec<&LipschitzElement> = els.iter().filter(|e| e.image == id).collect();
    checks.push(Check::new(
        "kernel of Γ → O(V,q) is the nonzero scalars",
        kernel.len() as u64 == p - 1 && kernel.iter().all(|e| e.element.as_scalar().is_some()),
    ));
    checks.push(Check::new(
        "|Γ| = (p−1)·|O(V,q)|",
        els.len() as u64 == (p - 1) * o.len() as u64,
    ));

    // reflections
    let mut refl_ok = true;
    let mut generators = Vec::new();
    for x in space.vectors() {
        if space.q(&x) == 0 {
            continue;
        }
        let v = CliffordElement::vector(&alg, &x)?;
        match index.get(v.coeffs()) {
            Some(&i) => refl_ok &= els[i].image == reflection_matrix(space, &x)?,
            None => refl_ok = false,
        }
        generators.push(v);
    }
    checks.push(Check::new(
        "anisotropic v lies in Γ and acts as x ↦ x − b(x,v)q(v)⁻¹v",
        refl_ok,
    ));
    for c in 1..p {
        generators.push(CliffordElement::scalar(&alg, c));
    }
    let generated = closure(&generators);
    checks.push(Check::new(
        "Γ is generated by anisotropic vectors and scalars",
        generated.len() == els.len() && generated.iter().all(|c| index.contains_key(c.as_slice())),
    ));

    // grading and homomorphism properties on all pairs
    let norms: Vec<u64> = els.iter().map(|e| spinor_norm(&e.element)).collect::<Result<_>>()?;
    let pairs_ok = (0..els.len()).into_par_iter().all(|i| {
        (0..els.len()).all(|j| {
            let gh = els[i].element.mul_unchecked(&els[j].element);
            let Some(&k) = index.get(gh.coeffs()) else {
                return false;
            };
            els[k].parity == (els[i].parity + els[j].parity) % 2
                && norms[k] == norms[i] * norms[j] % p
                && els[k].image == mat_mul(&els[i].image, &els[j].image, p)
        })
    });
    checks.push(Check::new(
        "Γ is closed, parity is additive, N and the action are homomorphisms",
        pairs_ok,
    ));
    checks.push(Check::new(
        "det of the action is (−1)^parity",
        els.iter()
            .all(|e| det(&e.image, p) == if e.parity == 0 { 1 } else { p - 1 }),
    ));

    // N_O through square classes
    let mut n_o: HashMap<&Matrix, bool> = HashMap::new();
    let mut well_defined = true;
    for (e, &nv) in els.iter().zip(&norms) {
        let sq = is_square(nv, p);
        if let Some(prev) = n_o.insert(&e.image, sq) {
            well_defined &= prev == sq;
        }
    }
    checks.push(Check::new("N_O is well defined on O(V,q)", well_defined));
    let mut reflection_norm = true;
    for x in space.vectors() {
        let qv = space.q(&x);
        if qv != 0 {
            reflection_norm &= n_o.get(&reflection_matrix(space, &x)?) == Some(&is_square(qv, p));
        }
    }
    checks.push(Check::new("N_O(r_v) is the square class of q(v)", reflection_norm));

    let pin: Vec<usize> = (0..els.len()).filter(|&i| norms[i] == 1).collect();
    let ker_no: HashSet<&Matrix> = n_o.iter().filter(|(_, &sq)| sq).map(|(m, _)| *m).collect();
    let pin_image: HashSet<&Matrix> = pin.iter().map(|&i| &els[i].image).collect();
    let pin_kernel: Vec<u64> = pin
        .iter()
        .filter(|&&i| els[i].image == id)
        .filter_map(|&i| els[i].element.as_scalar())
        .collect();
    checks.push(Check::new(
        "Pin → ker N_O is onto",
        pin_image.len() == ker_no.len() && pin_image.iter().all(|m| ker_no.contains(m)),
    ));
    let mut pk = pin_kernel.clone();
    pk.sort();
    checks.push(Check::new("kernel of Pin → O(V,q) is {±1}", pk == vec![1, p - 1]));

    let so: Vec<&Matrix> = o.iter().filter(|m| det(m, p) == 1).collect();
    let spin = pin.iter().filter(|&&i| det(&els[i].image, p) == 1).count();
    checks.push(Check::new("Spin is the even part of Pin", {
        let even = pin.iter().filter(|&&i| els[i].parity == 0).count();
        even == spin
    }));

    Ok(PinReport {
        p,
        dim: n,
        gamma_order: els.len(),
        orthogonal_order: o.len(),
        pin_order: pin.len(),
        spin_order: spin,
        so_order: so.len(),
        kernel_norm_order: ker_no.len(),
        pin_image_order: pin_image.len(),
        checks,
    })
}

/// Multiplicative closure of a generating set, as coefficient vectors.
fn closure(gens: &[CliffordElement]) -> HashSet<Vec<u64>> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut frontier: Vec<CliffordElement> = Vec::new();
    for g in gens {
        if seen.insert(g.coeffs().to_vec()) {
            frontier.push(g.clone());
        }
    }
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul_unchecked(g);
            if seen.insert(y.coeffs().to_vec()) {
                frontier.push(y);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(space: QuadraticSpace) -> PinReport {
        let r = pin_spin_report(&space, &Caps::default()).unwrap();
        assert!(r.verified(), "{:?}", r.checks);
        r
    }

    #[test]
    fn zero_dimensional() {
        let r = report(QuadraticSpace::diagonal(5, &[]).unwrap());
        assert_eq!((r.gamma_order, r.orthogonal_order, r.pin_order), (4, 1, 2));
    }

    #[test]
    fn hyperbolic_plane_over_f3() {
        let space = QuadraticSpace::hyperbolic_plane(3).unwrap();
        let r = report(space.clone());
        // O(1,1;F₃) is the Klein four-group: ±1 and the two reflections
        assert_eq!(r.orthogonal_order, 4);
        assert_eq!(r.gamma_order, 8);
        // N_O(r_{e₂}) = [−1] is not a square mod 3, so ker N_O = {1, r_{e₁}}
        assert_eq!(r.kernel_norm_order, 2);
        let alg = CliffordAlgebra::new(space.clone(), &Caps::default()).unwrap();
        let g = lipschitz_group(&alg, &Caps::default()).unwrap();
        let r1 = reflection_matrix(&space, &[1, 0]).unwrap();
        let in_kernel: HashSet<Matrix> = g
            .elements
            .iter()
            .filter(|e| is_square(spinor_norm(&e.element).unwrap(), 3))
            .map(|e| e.image.clone())
            .collect();
        assert_eq!(in_kernel, HashSet::from([identity(2), r1]));
    }

    #[test]
    fn small_cases_are_consistent() {
        for (p, q) in [(3u64, vec![1u64]), (5, vec![1]), (5, vec![1, 2]), (3, vec![1, 1, 1])] {
            report(QuadraticSpace::diagonal(p, &q).unwrap());
        }
        report(QuadraticSpace::split(3, 1).unwrap());
    }

    #[test]
    fn norms_of_scalars() {
        let alg = CliffordAlgebra::new(QuadraticSpace::hyperbolic_plane(5).unwrap(), &Caps::default()).unwrap();
        assert_eq!(spinor_norm(&CliffordElement::one(&alg)).unwrap(), 1);
        assert_eq!(spinor_norm(&CliffordElement::scalar(&alg, 2)).unwrap(), 4);
    }

    #[test]
    fn degenerate_space_rejected() {
        assert!(pin_spin_report(&QuadraticSpace::diagonal(3, &[0]).unwrap(), &Caps::default()).is_err());
    }
}
