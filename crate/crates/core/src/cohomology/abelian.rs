//! Abelian 3-cocycles `(τ, b)` and their quadratic forms.
//!
//! Additive notation throughout, values are exponents of `ζ_N`. With
//! `T_ℓ(x, y) = τ(ℓ,x,y) + τ(x,y,ℓ) − τ(x,ℓ,y)` the conditions are
//!
//! ```text
//! dτ = 0
//! b(x, y+z) − b(x, y) − b(x, z) = −T_x(y, z)
//! b(x+y, z) − b(x, z) − b(y, z) = +T_z(x, y)
//! ```
//!
//! These are the Joyal–Street hexagons in additive form. Coboundaries are
//! `(dσ, σ(y,x) − σ(x,y))` for 2-cochains `σ`: for `τ = dσ` one gets
//! `T_ℓ(x, y) = c(ℓ, x+y) − c(ℓ, x) − c(ℓ, y)` with `c = σ − σᵀ`, and both
//! hexagons follow.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cochain::{decode, differential_matrix, encode_normalized, normalized_len, Cochain};
use super::compute::Check;
use super::group::FiniteGroup;
use crate::abelian::FiniteAbelianGroup;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linalg::{howell, HowellBasis};
use crate::quadratic::{enumerate_quadratic_forms, QuadraticForm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPair", into = "RawPair")]
pub struct AbelianThreeCocycle {
    group: FiniteAbelianGroup,
    modulus: u64,
    tau: Vec<u64>,
    b: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawPair {
    group: FiniteAbelianGroup,
    modulus: u64,
    tau: Vec<u64>,
    b: Vec<u64>,
}

impl TryFrom<RawPair> for AbelianThreeCocycle {
    type Error = Error;
    fn try_from(r: RawPair) -> Result<Self> {
        AbelianThreeCocycle::new(r.group, r.modulus, r.tau, r.b)
    }
}

impl From<AbelianThreeCocycle> for RawPair {
    fn from(x: AbelianThreeCocycle) -> Self {
        RawPair {
            group: x.group,
            modulus: x.modulus,
            tau: x.tau,
            b: x.b,
        }
    }
}

impl AbelianThreeCocycle {
    /// Shape-checked pair; validity is a separate question.
    pub fn new(group: FiniteAbelianGroup, modulus: u64, mut tau: Vec<u64>, mut b: Vec<u64>) -> Result<Self> {
        let n = group.order();
        if modulus == 0 {
            return Err(Error::Parse("modulus must be positive".into()));
        }
        if tau.len() != n * n * n || b.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "tau needs {} and b needs {} entries",
                n * n * n,
                n * n
            )));
        }
        tau.iter_mut().chain(b.iter_mut()).for_each(|v| *v %= modulus);
        Ok(AbelianThreeCocycle { group, modulus, tau, b })
    }

    pub fn trivial(group: FiniteAbelianGroup, modulus: u64) -> Self {
        let n = group.order();
        AbelianThreeCocycle {
            group,
            modulus,
            tau: vec![0; n * n * n],
            b: vec![0; n * n],
        }
    }

    /// `(dσ, σᵀ − σ)`.
    pub fn coboundary(group: FiniteAbelianGroup, sigma: &Cochain) -> Result<Self> {
        let n = group.order();
        if sigma.degree() != 2 || sigma.group().order() != n {
            return Err(Error::ShapeMismatch("σ must be a 2-cochain on the group".into()));
        }
        let m = sigma.modulus();
        let tau = sigma.differential().values().to_vec();
        let b = (0..n * n)
            .map(|i| {
                let (x, y) = (i / n, i % n);
                (sigma.value(&[y, x]) + m - sigma.value(&[x, y])) % m
            })
            .collect();
        Self::new(group, m, tau, b)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn tau(&self) -> &[u64] {
        &self.tau
    }

    pub fn b_table(&self) -> &[u64] {
        &self.b
    }

    pub fn tau_cochain(&self) -> Cochain {
        let g = Arc::new(FiniteGroup::from_abelian(&self.group));
        Cochain::new(g, 3, self.modulus, self.tau.clone()).expect("shape")
    }

    pub fn tau_at(&self, x: usize, y: usize, z: usize) -> u64 {
        let n = self.group.order();
        self.tau[(x * n + y) * n + z]
    }

    pub fn b_at(&self, x: usize, y: usize) -> u64 {
        self.b[x * self.group.order() + y]
    }

    /// `T_ℓ(x, y)`.
    pub fn t_at(&self, l: usize, x: usize, y: usize) -> u64 {
        let m = self.modulus;
        (self.tau_at(l, x, y) + self.tau_at(x, y, l) + m - self.tau_at(x, l, y)) % m
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.group != other.group || self.modulus != other.modulus {
            return Err(Error::ParentMismatch("abelian cocycles of different shape".into()));
        }
        let m = self.modulus;
        let tau = self.tau.iter().zip(&other.tau).map(|(a, b)| (a + b) % m).collect();
        let b = self.b.iter().zip(&other.b).map(|(a, b)| (a + b) % m).collect();
        Self::new(self.group.clone(), m, tau, b)
    }

    /// The same pair read in `μ_target`.
    pub fn embed(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.modulus) {
            return Err(Error::NotDivisible {
                order: self.modulus,
                target,
            });
        }
        let f = target / self.modulus;
        let tau = self.tau.iter().map(|v| v * f).collect();
        let b = self.b.iter().map(|v| v * f).collect();
        Self::new(self.group.clone(), target, tau, b)
    }
}

/// Pentagon and both hexagons, exhaustively. The error carries the first
/// violating tuple.
pub fn check_abelian_3cocycle(x: &AbelianThreeCocycle) -> Result<()> {
    let a = &x.group;
    let n = a.order();
    let m = x.modulus;
    let dtau = x.tau_cochain().differential();
    if let Some(i) = dtau.values().iter().position(|&v| v != 0) {
        let mut w = vec![0; 4];
        decode(n, 4, i, &mut w);
        return Err(Error::InvalidCocycle {
            reason: "dτ ≠ 0",
            witness: w,
        });
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                let h1 = (x.b_at(p, a.add_idx(q, r)) + 2 * m - x.b_at(p, q) - x.b_at(p, r) + x.t_at(p, q, r)) % m;
                if h1 != 0 {
                    return Err(Error::HexagonViolation {
                        relation: "b(x,y+z) − b(x,y) − b(x,z) = −T_x(y,z)",
                        witness: vec![a.coords_at(p), a.coords_at(q), a.coords_at(r)],
                    });
                }
                let h2 = (x.b_at(a.add_idx(p, q), r) + 3 * m - x.b_at(p, r) - x.b_at(q, r) - x.t_at(r, p, q)) % m;
                if h2 != 0 {
                    return Err(Error::HexagonViolation {
                        relation: "b(x+y,z) − b(x,z) − b(y,z) = T_z(x,y)",
                        witness: vec![a.coords_at(p), a.coords_at(q), a.coords_at(r)],
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn is_abelian_3cocycle(x: &AbelianThreeCocycle) -> bool {
    check_abelian_3cocycle(x).is_ok()
}

/// `q(a) = b(a, a)`.
pub fn quadratic_form_of(x: &AbelianThreeCocycle) -> Result<QuadraticForm> {
    check_abelian_3cocycle(x)?;
    let n = x.group.order();
    let values = (0..n).map(|i| x.b_at(i, i)).collect();
    QuadraticForm::from_residues(x.group.clone(), x.modulus, values).map_err(|_| Error::InvalidCocycle {
        reason: "diagonal of b is not a quadratic form",
        witness: Vec::new(),
    })
}

/// Unknowns are the normalized coordinates of τ followed by the full table
/// of b.
struct System {
    tau_len: usize,
    cols: usize,
    rows: Vec<Vec<u64>>,
}

fn abelian_system(a: &FiniteAbelianGroup, m: u64, caps: &Caps) -> Result<System> {
    let n = a.order();
    let g = FiniteGroup::from_abelian(a);
    let tau_len = normalized_len(n, 3);
    let cols = tau_len + n * n;
    let nrows = normalized_len(n, 4) + 2 * n * n * n;
    caps.check(
        "abelian cocycle system entries",
        caps.table_entries,
        (nrows * cols) as u64,
    )?;
    let mut rows = Vec::with_capacity(nrows);
    for r in differential_matrix(&g, 3, caps)? {
        let mut row = vec![0u64; cols];
        for (j, &v) in r.iter().enumerate() {
            row[j] = v.rem_euclid(m as i64) as u64;
        }
        rows.push(row);
    }
    let add = |row: &mut Vec<u64>, j: usize, c: i64| {
        row[j] = (row[j] as i64 + c).rem_euclid(m as i64) as u64;
    };
    let tau_col = |x: usize, y: usize, z: usize| encode_normalized(n, &[x, y, z]);
    let bcol = |x: usize, y: usize| tau_len + x * n + y;
    // s·T_l(x,y) contributes s·(τ(l,x,y) + τ(x,y,l) − τ(x,l,y))
    let add_t = |row: &mut Vec<u64>, s: i64, l: usize, x: usize, y: usize| {
        for (t, c) in [(tau_col(l, x, y), s), (tau_col(x, y, l), s), (tau_col(x, l, y), -s)] {
            if let Some(j) = t {
                add(row, j, c);
            }
        }
    };
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                let mut row = vec![0u64; cols];
                add(&mut row, bcol(p, a.add_idx(q, r)), 1);
                add(&mut row, bcol(p, q), -1);
                add(&mut row, bcol(p, r), -1);
                add_t(&mut row, 1, p, q, r);
                rows.push(row);
                let mut row = vec![0u64; cols];
                add(&mut row, bcol(a.add_idx(p, q), r), 1);
                add(&mut row, bcol(p, r), -1);
                add(&mut row, bcol(q, r), -1);
                add_t(&mut row, -1, r, p, q);
                rows.push(row);
            }
        }
    }
    Ok(System { tau_len, cols, rows })
}

fn pair_from_coords(a: &FiniteAbelianGroup, m: u64, tau_len: usize, v: &[u64]) -> AbelianThreeCocycle {
    let g = Arc::new(FiniteGroup::from_abelian(a));
    let tau = Cochain::from_normalized_coords(g, 3, m, &v[..tau_len]).expect("shape");
    AbelianThreeCocycle::new(a.clone(), m, tau.values().to_vec(), v[tau_len..].to_vec()).expect("shape")
}

/// Generators of the abelian coboundaries, in system coordinates.
fn coboundary_generators(a: &FiniteAbelianGroup, m: u64, tau_len: usize, caps: &Caps) -> Result<Vec<Vec<u64>>> {
    let n = a.order();
    let g = FiniteGroup::from_abelian(a);
    let d2 = differential_matrix(&g, 2, caps)?;
    let mut args = [0usize; 2];
    let out = (0..normalized_len(n, 2))
        .map(|j| {
            let mut v = vec![0u64; tau_len + n * n];
            for (i, r) in d2.iter().enumerate() {
                v[i] = r[j].rem_euclid(m as i64) as u64;
            }
            super::cochain::decode_normalized(n, 2, j, &mut args);
            let (x, y) = (args[0], args[1]);
            v[tau_len + x * n + y] = (v[tau_len + x * n + y] + m - 1) % m;
            v[tau_len + y * n + x] = (v[tau_len + y * n + x] + 1) % m;
            v
        })
        .collect();
    Ok(out)
}

/// `H³_ab(A; μ_m)`: cocycle and coboundary spaces as Howell bases.
pub struct AbelianCohomology {
    pub group: FiniteAbelianGroup,
    pub modulus: u64,
    tau_len: usize,
    system: Vec<Vec<u64>>,
    pub cocycles: HowellBasis,
    pub coboundaries: HowellBasis,
}

impl AbelianCohomology {
    pub fn new(a: &FiniteAbelianGroup, m: u64, caps: &Caps) -> Result<Self> {
        let sys = abelian_system(a, m, caps)?;
        let cocycles = howell::kernel(&sys.rows, sys.cols, m);
        let gens = coboundary_generators(a, m, sys.tau_len, caps)?;
        let coboundaries = HowellBasis::new(gens, sys.cols, m);
        Ok(AbelianCohomology {
            group: a.clone(),
            modulus: m,
            tau_len: sys.tau_len,
            system: sys.rows,
            cocycles,
            coboundaries,
        })
    }

    pub fn class_count(&self) -> Option<u128> {
        Some(self.cocycles.span_size()? / self.coboundaries.span_size()?)
    }

    pub fn pair(&self, coords: &[u64]) -> AbelianThreeCocycle {
        pair_from_coords(&self.group, self.modulus, self.tau_len, coords)
    }

    /// Coordinates of a pair whose τ is normalized.
    pub fn coords(&self, x: &AbelianThreeCocycle) -> Result<Vec<u64>> {
        let c = x.embed(self.modulus)?;
        if !c.tau_cochain().is_normalized() {
            return Err(Error::InvalidCocycle {
                reason: "τ is not normalized",
                witness: Vec::new(),
            });
        }
        let mut v = c.tau_cochain().normalized_coords();
        v.extend_from_slice(&c.b);
        Ok(v)
    }

    pub fn is_coboundary(&self, x: &AbelianThreeCocycle) -> Result<bool> {
        Ok(self.coboundaries.contains(&self.coords(x)?))
    }

    /// The lexicographically least cocycle with the given diagonal.
    pub fn preimage_of_form(&self, q: &QuadraticForm) -> Result<Option<AbelianThreeCocycle>> {
        let n = self.group.order();
        let m = self.modulus;
        if !m.is_multiple_of(q.modulus()) {
            return Err(Error::NotDivisible {
                order: q.modulus(),
                target: m,
            });
        }
        let cols = self.tau_len + n * n;
        let mut rows = self.system.clone();
        let mut rhs = vec![0u64; rows.len()];
        for i in 0..n {
            let mut row = vec![0u64; cols];
            row[self.tau_len + i * n + i] = 1;
            rows.push(row);
            rhs.push(q.residues()[i] * (m / q.modulus()));
        }
        Ok(howell::solve(&rows, &rhs, cols, m).map(|s| self.pair(&s.particular)))
    }

    /// Size of `{x ∈ Z : b(a,a) = 0 ∀a}`.
    fn diagonal_kernel_size(&self) -> Option<u128> {
        let n = self.group.order();
        let cols = self.tau_len + n * n;
        let mut rows = self.system.clone();
        for i in 0..n {
            let mut row = vec![0u64; cols];
            row[self.tau_len + i * n + i] = 1;
            rows.push(row);
        }
        howell::kernel(&rows, cols, self.modulus).span_size()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmReport {
    pub group: FiniteAbelianGroup,
    pub modulus: u64,
    pub cocycles: u128,
    pub coboundaries: u128,
    pub classes: u128,
    pub classes_at_double_modulus: u128,
    pub forms: usize,
    pub checks: Vec<Check>,
}

impl EmReport {
    pub fn bijective(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Coefficient order used for `H³_ab(A)`: `2·exp(A)²`.
pub fn em_modulus(a: &FiniteAbelianGroup) -> u64 {
    let e = a.exponent();
    2 * e * e
}

/// Counts `H³_ab(A; μ_N)` and checks that `(τ, b) ↦ b(a, a)` is a bijection
/// of classes onto the quadratic forms on `A`.
pub fn em_correspondence(a: &FiniteAbelianGroup, caps: &Caps) -> Result<EmReport> {
    caps.check("group order for abelian cohomology", caps.group_order, a.order() as u64)?;
    let m = em_modulus(a);
    let h = AbelianCohomology::new(a, m, caps)?;
    let h2 = AbelianCohomology::new(a, 2 * m, caps)?;
    let forms = enumerate_quadratic_forms(a, false, caps)?;
    let ov = || Error::Overflow("abelian cohomology count");
    let cocycles = h.cocycles.span_size().ok_or_else(ov)?;
    let coboundaries = h.coboundaries.span_size().ok_or_else(ov)?;
    let classes = cocycles / coboundaries;
    let classes2 = h2.class_count().ok_or_else(ov)?;
    let n = a.order();

    let gens = coboundary_generators(a, m, h.tau_len, caps)?;
    let boundaries_are_cocycles = gens.iter().all(|v| h.cocycles.contains(v));
    let boundaries_have_trivial_form = gens.iter().all(|v| (0..n).all(|i| v[h.tau_len + i * n + i] == 0));
    let injective = h.diagonal_kernel_size() == Some(coboundaries);
    let mut every_form_hit = true;
    let mut preimages_valid = true;
    for q in &forms {
        match h.preimage_of_form(q)? {
            None => every_form_hit = false,
            Some(x) => {
                let back = quadratic_form_of(&x);
                preimages_valid &= back.as_ref() == Ok(q);
            }
        }
    }
    let checks = vec![
        Check::new(
            "coboundaries satisfy the pentagon and hexagons",
            boundaries_are_cocycles,
        ),
        Check::new("coboundaries have trivial quadratic form", boundaries_have_trivial_form),
        Check::new("form map is injective on classes", injective),
        Check::new("every quadratic form has a preimage", every_form_hit),
        Check::new("preimages pass the pointwise check", preimages_valid),
        Check::new("class count equals form count", classes == forms.len() as u128),
        Check::new("class count stable under doubling the modulus", classes == classes2),
    ];
    Ok(EmReport {
        group: a.clone(),
        modulus: m,
        cocycles,
        coboundaries,
        classes,
        classes_at_double_modulus: classes2,
        forms: forms.len(),
        checks,
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
    fn trivial_pair_is_valid() {
        let x = AbelianThreeCocycle::trivial(g("3"), 9);
        assert!(is_abelian_3cocycle(&x));
        assert!(quadratic_form_of(&x).unwrap().residues().iter().all(|&v| v == 0));
    }

    #[test]
    fn bicharacter_with_trivial_tau() {
        // b(x, y) = x·y on Z/3 is biadditive, so the hexagons hold with τ = 0
        let a = g("3");
        let b = (0..9).map(|i| ((i / 3) * (i % 3) * 3) as u64 % 9).collect();
        let x = AbelianThreeCocycle::new(a.clone(), 9, vec![0; 27], b).unwrap();
        assert!(is_abelian_3cocycle(&x));
        // break additivity in one slot
        let mut b2 = x.b_table().to_vec();
        b2[4] = (b2[4] + 1) % 9;
        let y = AbelianThreeCocycle::new(a, 9, vec![0; 27], b2).unwrap();
        assert!(matches!(
            check_abelian_3cocycle(&y),
            Err(Error::HexagonViolation { .. })
        ));
    }

    #[test]
    fn joyal_street_cocycles() {
        // τ(x,y,z) = p·n·x·carry(y,z), b(x,y) = p·x·y in μ_{2n}
        for n in 2..6u64 {
            let a = g(&n.to_string());
            let m = 2 * n;
            // x·carry(y,z) read mod 2 is only a cocycle for even n
            let step = if n % 2 == 0 { 1 } else { 2 };
            for p in (0..2 * n).step_by(step) {
                let tau = (0..n * n * n)
                    .map(|i| {
                        let (x, y, z) = (i / (n * n), i / n % n, i % n);
                        p * n * x * ((y + z) / n) % m
                    })
                    .collect();
                let b = (0..n * n).map(|i| p * (i / n) * (i % n) % m).collect();
                let x = AbelianThreeCocycle::new(a.clone(), m, tau, b).unwrap();
                assert!(is_abelian_3cocycle(&x), "n = {n}, p = {p}");
            }
        }
    }

    #[test]
    fn q_in_mu_n_squared_is_not_braided() {
        // b(x,y) = xy in μ_9 on Z/3 is biadditive only up to the carry, and no
        // associator of the form x·carry(y,z) repairs both hexagons
        let a = g("3");
        let tau = (0..27u64)
            .map(|i| 3 * (i / 9) * ((i / 3 % 3 + i % 3) / 3) % 9)
            .collect();
        let b = (0..9u64).map(|i| (i / 3) * (i % 3)).collect();
        let x = AbelianThreeCocycle::new(a, 9, tau, b).unwrap();
        assert!(matches!(
            check_abelian_3cocycle(&x),
            Err(Error::HexagonViolation { .. })
        ));
    }

    #[test]
    fn evaluation_pair_gives_evaluation_form() {
        // τ = 0, b₀((l₁,χ₁),(l₂,χ₂)) = χ₁(l₂)
        let l = g("3");
        let ev = evaluation_form(&l);
        let a = ev.group().clone();
        let n = a.order();
        let b = (0..n * n)
            .map(|i| {
                let (x, y) = (a.coords_at(i / n), a.coords_at(i % n));
                x[1] * y[0] % 3
            })
            .collect();
        let x = AbelianThreeCocycle::new(a.clone(), 3, vec![0; n * n * n], b).unwrap();
        assert_eq!(quadratic_form_of(&x).unwrap(), *ev.form());
    }

    #[test]
    fn coboundaries_are_abelian_cocycles() {
        let a = g("2,2");
        let grp = Arc::new(FiniteGroup::from_abelian(&a));
        let sigma = Cochain::from_fn(grp, 2, 8, |x| (3 * x[0] + 5 * x[1] + x[0] * x[1]) as u64).unwrap();
        let x = AbelianThreeCocycle::coboundary(a, &sigma).unwrap();
        assert!(is_abelian_3cocycle(&x));
    }

    #[test]
    fn em_small_groups() {
        let caps = Caps::default();
        for (s, count) in [("0", 1u128), ("2", 4), ("3", 3), ("4", 8)] {
            let r = em_correspondence(&g(s), &caps).unwrap();
            assert_eq!(r.classes, count, "{s}");
            assert!(r.bijective(), "{s}: {:?}", r.checks);
        }
    }

    #[test]
    fn json_round_trip() {
        let x = AbelianThreeCocycle::trivial(g("2"), 4);
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<AbelianThreeCocycle>(&js).unwrap(), x);
        let bad = r#"{"group":{"orders":[2]},"modulus":4,"tau":[0],"b":[0,0,0,0]}"#;
        assert!(serde_json::from_str::<AbelianThreeCocycle>(bad).is_err());
    }
}
