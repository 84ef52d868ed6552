//! Pointed Drinfeld centers of `Vect[L]^τ` for finite abelian `L`.
//!
//! Additive notation, values are exponents of roots of unity. For a
//! normalized 3-cocycle `τ` put
//!
//! ```text
//! T_ℓ(x, y) = τ(ℓ,x,y) + τ(x,y,ℓ) − τ(x,ℓ,y)
//! ```
//!
//! The center is pointed iff every `T_ℓ` is a coboundary in `k^×`. A
//! trivialization `t` with `d(t_ℓ) = T_ℓ` that is additive in `ℓ` gives the
//! braiding phase
//!
//! ```text
//! b_τ((ℓ₁,χ₁), (ℓ₂,χ₂)) = χ₁(ℓ₂) + t_{ℓ₁}(ℓ₂) + t_{ℓ₂}(ℓ₁)
//! ```
//!
//! on `A = L ⊕ L̂` with associator `a = τ ∘ proj_L`.
//!
//! Solving happens over `μ_M` with `M = N·lcm(|L|, exp(L)²)`. A `μ_N`-valued
//! 2-cocycle on `L` that dies in `k^×` already has a primitive in
//! `μ_{N·|L|}`, so nothing is lost by truncating `k^×` there.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abelian::{pairing_residue, FiniteAbelianGroup};
use crate::cohomology::cochain::{decode, normalized_len};
use crate::cohomology::compute::coboundary_basis;
use crate::cohomology::{check_abelian_3cocycle, quadratic_form_of, AbelianThreeCocycle, Check, Cochain, FiniteGroup};
use crate::config::arith::lcm;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linalg::{howell, HowellBasis};
use crate::orthogonal::isometries;
use crate::quadratic::MetricGroup;

/// `(L, τ)` with `τ` a normalized 3-cocycle in `μ_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedFusionData {
    l: FiniteAbelianGroup,
    tau: Cochain,
    /// `σ` with `τ_input − dσ = τ`, when the input was not normalized.
    shift: Option<Cochain>,
}

impl PointedFusionData {
    pub fn new(l: FiniteAbelianGroup, tau: Cochain) -> Result<Self> {
        let g = FiniteGroup::from_abelian(&l);
        if tau.degree() != 3 || **tau.group() != g {
            return Err(Error::ShapeMismatch("τ must be a 3-cochain on L".into()));
        }
        let dtau = tau.differential();
        if let Some(i) = dtau.values().iter().position(|&v| v != 0) {
            let mut w = vec![0; 4];
            decode(l.order(), 4, i, &mut w);
            return Err(Error::InvalidCocycle {
                reason: "dτ ≠ 0",
                witness: w,
            });
        }
        if tau.is_normalized() {
            return Ok(PointedFusionData { l, tau, shift: None });
        }
        let (tau, sigma) = normalize(&tau)?;
        Ok(PointedFusionData {
            l,
            tau,
            shift: Some(sigma),
        })
    }

    /// Reads a full `|L|³` table of exponents of `ζ_N`.
    pub fn from_table(l: FiniteAbelianGroup, modulus: u64, values: Vec<u64>) -> Result<Self> {
        let g = Arc::new(FiniteGroup::from_abelian(&l));
        let tau = Cochain::new(g, 3, modulus, values)?;
        Self::new(l, tau)
    }

    pub fn trivial(l: FiniteAbelianGroup, modulus: u64) -> Self {
        let g = Arc::new(FiniteGroup::from_abelian(&l));
        let tau = Cochain::zero(g, 3, modulus).expect("shape");
        PointedFusionData { l, tau, shift: None }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.l
    }

    pub fn tau(&self) -> &Cochain {
        &self.tau
    }

    pub fn modulus(&self) -> u64 {
        self.tau.modulus()
    }

    pub fn normalization_shift(&self) -> Option<&Cochain> {
        self.shift.as_ref()
    }

    /// `M = N·lcm(|L|, exp(L)²)`.
    pub fn work_modulus(&self) -> u64 {
        let e = self.l.exponent();
        self.modulus() * lcm(self.l.order() as u64, e * e)
    }

    fn t_value(&self, l: usize, x: usize, y: usize) -> u64 {
        let m = self.modulus();
        let t = &self.tau;
        (t.value(&[l, x, y]) + t.value(&[x, y, l]) + m - t.value(&[x, l, y])) % m
    }
}

/// Moves a 3-cocycle to a normalized one in its class: returns `(τ − dσ, σ)`.
fn normalize(tau: &Cochain) -> Result<(Cochain, Cochain)> {
    let g = tau.group().clone();
    let n = g.order();
    let m = tau.modulus();
    let cols = n * n;
    let columns: Vec<Vec<u64>> = (0..cols)
        .map(|j| {
            let mut v = vec![0u64; cols];
            v[j] = 1;
            Cochain::new(g.clone(), 2, m, v)
                .expect("shape")
                .differential()
                .values()
                .to_vec()
        })
        .collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut args = [0usize; 3];
    for i in 0..n * n * n {
        decode(n, 3, i, &mut args);
        if args.contains(&0) {
            rows.push(columns.iter().map(|c| c[i]).collect::<Vec<u64>>());
            rhs.push(tau.values()[i]);
        }
    }
    let s = howell::solve(&rows, &rhs, cols, m)
        .ok_or_else(|| Error::NoSolution("no normalizing coboundary for τ".into()))?;
    let sigma = Cochain::new(g, 2, m, s.particular)?;
    let normalized = tau.sub(&sigma.differential())?;
    debug_assert!(normalized.is_normalized());
    Ok((normalized, sigma))
}

/// `T_ℓ` as a 2-cochain in `μ_N`.
pub fn t_two_cocycle(d: &PointedFusionData, l: usize) -> Cochain {
    let n = d.l.order();
    Cochain::from_fn(d.tau.group().clone(), 2, d.modulus(), |a| d.t_value(l % n, a[0], a[1])).expect("shape")
}

/// `T_ℓ` in `μ_M`, normalized coordinates.
fn t_coords(d: &PointedFusionData, l: usize, m: u64) -> Vec<u64> {
    let f = m / d.modulus();
    t_two_cocycle(d, l).normalized_coords().iter().map(|v| v * f).collect()
}

fn generator_indices(l: &FiniteAbelianGroup) -> Vec<usize> {
    (0..l.rank()).map(|i| l.index_of(&l.generator(i))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointednessReport {
    pub modulus: u64,
    pub pointed: bool,
    /// Generators whose `T_ℓ` is not a coboundary.
    pub obstructed: Vec<Vec<u64>>,
    /// For each generator, a 1-cochain table `t` in `μ_modulus` with
    /// `d(t) = T_ℓ`, if there is one. Not additive in `ℓ` in general.
    pub witnesses: Vec<Option<Vec<u64>>>,
}

/// Solves `d(t) = T_ℓ` over `μ_M` for each generator `ℓ`.
pub fn pointedness(d: &PointedFusionData, caps: &Caps) -> Result<PointednessReport> {
    let l = &d.l;
    let n = l.order();
    let m = d.work_modulus();
    let g = FiniteGroup::from_abelian(l);
    let d1 = crate::cohomology::differential_matrix(&g, 1, caps)?;
    let d1: Vec<Vec<u64>> = d1
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(m as i64) as u64).collect())
        .collect();
    let mut obstructed = Vec::new();
    let mut witnesses = Vec::new();
    for gen in generator_indices(l) {
        let rhs = t_coords(d, gen, m);
        match howell::solve(&d1, &rhs, normalized_len(n, 1), m) {
            Some(s) => {
                let mut t = vec![0u64];
                t.extend(s.particular);
                witnesses.push(Some(t));
            }
            None => {
                obstructed.push(l.coords_at(gen));
                witnesses.push(None);
            }
        }
    }
    Ok(PointednessReport {
        modulus: m,
        pointed: obstructed.is_empty(),
        obstructed,
        witnesses,
    })
}

pub fn is_center_pointed(d: &PointedFusionData, caps: &Caps) -> Result<bool> {
    Ok(pointedness(d, caps)?.pointed)
}

/// Whether `ℓ ↦ [T_ℓ]` is additive: `T_{ℓ+g} − T_ℓ − T_g` is a coboundary
/// over `μ_M` for every `ℓ` and every generator `g`.
pub fn t_is_additive(d: &PointedFusionData, caps: &Caps) -> Result<bool> {
    let l = &d.l;
    let m = d.work_modulus();
    let b = coboundary_basis(&FiniteGroup::from_abelian(l), 2, m, caps)?;
    for gen in generator_indices(l) {
        let tg = t_coords(d, gen, m);
        for x in 0..l.order() {
            let tx = t_coords(d, x, m);
            let ts = t_coords(d, l.add_idx(x, gen), m);
            let diff: Vec<u64> = (0..ts.len()).map(|i| (ts[i] + 2 * m - tx[i] - tg[i]) % m).collect();
            if !b.contains(&diff) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `ℓ ↦ t_ℓ`, stored through its values on the generators of `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterTrivialization {
    pub group: FiniteAbelianGroup,
    pub modulus: u64,
    /// `t_{eᵢ}` as full tables of length `|L|`.
    pub generators: Vec<Vec<u64>>,
    /// Number of trivializations over `μ_modulus`.
    pub solution_count: u128,
}

impl CenterTrivialization {
    /// `t_ℓ(x) = Σ ℓᵢ·t_{eᵢ}(x)`.
    pub fn t_at(&self, l: usize, x: usize) -> u64 {
        let m = self.modulus as u128;
        let c = self.group.coords_at(l);
        let s: u128 = c
            .iter()
            .zip(&self.generators)
            .map(|(&k, t)| k as u128 * t[x] as u128)
            .sum();
        (s % m) as u64
    }

    pub fn table(&self, l: usize) -> Vec<u64> {
        (0..self.group.order()).map(|x| self.t_at(l, x)).collect()
    }

    /// Checks additivity in `ℓ` and `d(t_ℓ) = T_ℓ` for every `ℓ`, exhaustively.
    pub fn verify(&self, d: &PointedFusionData) -> Result<()> {
        let l = &self.group;
        let n = l.order();
        if *l != d.l || !self.modulus.is_multiple_of(d.modulus()) {
            return Err(Error::ParentMismatch("trivialization belongs to another (L, τ)".into()));
        }
        let m = self.modulus;
        let f = m / d.modulus();
        let tables: Vec<Vec<u64>> = (0..n).map(|a| self.table(a)).collect();
        for a in 0..n {
            for b in 0..n {
                let s = l.add_idx(a, b);
                if (0..n).any(|x| tables[s][x] != (tables[a][x] + tables[b][x]) % m) {
                    return Err(Error::RelationViolation(format!(
                        "t is not additive at ({:?}, {:?})",
                        l.coords_at(a),
                        l.coords_at(b)
                    )));
                }
            }
        }
        for (a, t) in tables.iter().enumerate() {
            for x in 0..n {
                for y in 0..n {
                    let dt = (t[y] + t[x] + m - t[l.add_idx(x, y)]) % m;
                    if dt != d.t_value(a, x, y) * f % m {
                        return Err(Error::RelationViolation(format!(
                            "d(t_ℓ) ≠ T_ℓ at ℓ = {:?}, ({:?}, {:?})",
                            l.coords_at(a),
                            l.coords_at(x),
                            l.coords_at(y)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Column layout: `t_{eᵢ}(x)` for `x ≠ 0` generator by generator, then
/// optionally a normalized 2-cochain `σ(x, y)`, `x, y ≠ 0`.
struct TrivSystem {
    rows: Vec<Vec<u64>>,
    rhs: Vec<u64>,
    t_cols: usize,
    cols: usize,
}

fn trivialization_system(d: &PointedFusionData, m: u64, with_sigma: bool, caps: &Caps) -> Result<TrivSystem> {
    let l = &d.l;
    let n = l.order();
    let r = l.rank();
    let t_cols = r * (n - 1);
    let s_cols = if with_sigma { (n - 1) * (n - 1) } else { 0 };
    let cols = t_cols + s_cols;
    let nrows = t_cols + n * (n - 1) * (n - 1);
    caps.check(
        "trivialization system entries",
        caps.table_entries,
        (nrows as u64).saturating_mul(cols as u64),
    )?;
    let tcol = |i: usize, x: usize| (x != 0).then(|| i * (n - 1) + x - 1);
    let scol = |x: usize, y: usize| (x != 0 && y != 0).then(|| t_cols + (x - 1) * (n - 1) + y - 1);
    let add = |row: &mut Vec<u64>, j: Option<usize>, c: i64| {
        if let Some(j) = j {
            row[j] = (row[j] as i64 + c).rem_euclid(m as i64) as u64;
        }
    };
    let mut rows = Vec::with_capacity(nrows);
    let mut rhs = Vec::with_capacity(nrows);
    // nᵢ·t_{eᵢ} = 0 makes ℓ ↦ Σ ℓᵢ t_{eᵢ} well defined
    for (i, &ni) in l.orders().iter().enumerate() {
        for x in 1..n {
            let mut row = vec![0u64; cols];
            add(&mut row, tcol(i, x), ni as i64);
            rows.push(row);
            rhs.push(0);
        }
    }
    let f = m / d.modulus();
    for a in 0..n {
        let c = l.coords_at(a);
        for x in 1..n {
            for y in 1..n {
                let xy = l.add_idx(x, y);
                let mut row = vec![0u64; cols];
                // Σ ℓᵢ (tᵢ(y) − tᵢ(x+y) + tᵢ(x))
                for (i, &k) in c.iter().enumerate() {
                    let k = k as i64;
                    add(&mut row, tcol(i, y), k);
                    add(&mut row, tcol(i, xy), -k);
                    add(&mut row, tcol(i, x), k);
                }
                if with_sigma {
                    // − T[dσ]_ℓ(x,y) = −(c(ℓ,x+y) − c(ℓ,x) − c(ℓ,y)), c = σ − σᵀ
                    for (u, v, s) in [(a, xy, -1), (a, x, 1), (a, y, 1)] {
                        add(&mut row, scol(u, v), s);
                        add(&mut row, scol(v, u), -s);
                    }
                }
                rows.push(row);
                rhs.push(d.t_value(a, x, y) * f % m);
            }
        }
    }
    Ok(TrivSystem {
        rows,
        rhs,
        t_cols,
        cols,
    })
}

fn trivialization_from(d: &PointedFusionData, m: u64, v: &[u64], count: u128) -> CenterTrivialization {
    let n = d.l.order();
    let generators = (0..d.l.rank())
        .map(|i| {
            let mut t = vec![0u64];
            t.extend_from_slice(&v[i * (n - 1)..(i + 1) * (n - 1)]);
            t
        })
        .collect();
    CenterTrivialization {
        group: d.l.clone(),
        modulus: m,
        generators,
        solution_count: count,
    }
}

fn no_solution(d: &PointedFusionData, caps: &Caps) -> Result<Error> {
    let p = pointedness(d, caps)?;
    Ok(if p.pointed {
        Error::NoHomomorphicTrivialization(format!(
            "every T_ℓ is a coboundary over μ_{}, but no choice of primitives is additive in ℓ",
            p.modulus
        ))
    } else {
        Error::NoSolution(format!("T_ℓ is not a coboundary for ℓ = {:?}", p.obstructed))
    })
}

/// The lexicographically least additive trivialization over `μ_M`.
pub fn solve_trivialization(d: &PointedFusionData, caps: &Caps) -> Result<CenterTrivialization> {
    let m = d.work_modulus();
    let sys = trivialization_system(d, m, false, caps)?;
    match howell::solve(&sys.rows, &sys.rhs, sys.cols, m) {
        Some(s) => {
            let count = s.count().ok_or(Error::Overflow("trivialization count"))?;
            Ok(trivialization_from(d, m, &s.particular, count))
        }
        None => Err(no_solution(d, caps)?),
    }
}

/// Every additive trivialization over `μ_M`, in lexicographic order of the
/// particular-plus-kernel enumeration, up to `limit` of them.
pub fn all_trivializations(d: &PointedFusionData, caps: &Caps, limit: usize) -> Result<Vec<CenterTrivialization>> {
    let m = d.work_modulus();
    let sys = trivialization_system(d, m, false, caps)?;
    let s = howell::solve(&sys.rows, &sys.rhs, sys.cols, m).ok_or(no_solution(d, caps)?)?;
    let count = s.count().ok_or(Error::Overflow("trivialization count"))?;
    caps.check("trivialization count", limit as u64, count.min(u64::MAX as u128) as u64)?;
    let mut out: Vec<Vec<u64>> = span_elements(&s.homogeneous)
        .into_iter()
        .map(|h| s.particular.iter().zip(&h).map(|(a, b)| (a + b) % m).collect())
        .collect();
    out.sort();
    Ok(out.iter().map(|v| trivialization_from(d, m, v, count)).collect())
}

/// All elements of a Howell span. Each element is `Σ cᵢ·rowᵢ` with
/// `0 ≤ cᵢ < N/dᵢ` in exactly one way.
fn span_elements(b: &HowellBasis) -> Vec<Vec<u64>> {
    let m = b.modulus();
    let mut out = vec![vec![0u64; b.width()]];
    for (row, &(_, d)) in b.rows().iter().zip(b.pivots()) {
        let mut next = Vec::with_capacity(out.len() * (m / d) as usize);
        for v in &out {
            for c in 0..m / d {
                next.push(
                    v.iter()
                        .zip(row)
                        .map(|(&x, &r)| ((x as u128 + c as u128 * r as u128) % m as u128) as u64)
                        .collect(),
                );
            }
        }
        out = next;
    }
    out
}

/// Searches the whole class of `τ` over `μ_M`: finds a normalized `σ` and an
/// additive `t` with `d(t_ℓ) = T_ℓ` for `τ + dσ`. Returns the shifted data
/// (modulus `M`) and its trivialization; `solution_count` counts `(σ, t)`
/// pairs.
pub fn solve_trivialization_in_class(
    d: &PointedFusionData,
    caps: &Caps,
) -> Result<(PointedFusionData, CenterTrivialization)> {
    let m = d.work_modulus();
    let sys = trivialization_system(d, m, true, caps)?;
    let s = howell::solve(&sys.rows, &sys.rhs, sys.cols, m).ok_or(no_solution(d, caps)?)?;
    let count = s.count().ok_or(Error::Overflow("trivialization count"))?;
    let g = d.tau.group().clone();
    let sigma = Cochain::from_normalized_coords(g, 2, m, &s.particular[sys.t_cols..])?;
    let tau = d.tau.embed(m)?.add(&sigma.differential())?;
    let shifted = PointedFusionData::new(d.l.clone(), tau)?;
    let t = trivialization_from(&shifted, m, &s.particular[..sys.t_cols], count);
    Ok((shifted, t))
}

/// Which factor accompanies `t_{ℓ₁}(ℓ₂)` in `b_τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    /// `+ t_{ℓ₂}(ℓ₁)`, the displayed formula.
    #[default]
    Printed,
    /// `− t_{ℓ₂}(ℓ₁)`.
    Inverted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterClassification {
    pub metric: MetricGroup,
    pub cocycle_pair: AbelianThreeCocycle,
    pub twist: Twist,
    /// Normalizing shift applied to the input τ, as a full 2-cochain table.
    pub normalization_shift: Option<Vec<u64>>,
    pub checks: Vec<Check>,
}

pub fn classify_center(d: &PointedFusionData, t: &CenterTrivialization) -> Result<CenterClassification> {
    classify_center_with(d, t, Twist::Printed)
}

/// Builds `(a, b_τ)` on `L ⊕ L̂`, checks both hexagons exhaustively and
/// returns the metric group `q(a) = b_τ(a, a)`.
pub fn classify_center_with(
    d: &PointedFusionData,
    t: &CenterTrivialization,
    twist: Twist,
) -> Result<CenterClassification> {
    t.verify(d)?;
    let l = &d.l;
    let k = l.rank();
    let n = l.order();
    let e = l.exponent();
    let a = l.direct_sum(l);
    let na = a.order();
    let big = lcm(t.modulus, e);
    let (ft, fe, fn_) = (big / t.modulus, big / e, big / d.modulus());
    let coords: Vec<Vec<u64>> = (0..na).map(|i| a.coords_at(i)).collect();
    let proj: Vec<usize> = coords
        .iter()
        .map(|c| l.index_of(&l.element(c[..k].to_vec()).expect("coords")))
        .collect();
    let tables: Vec<Vec<u64>> = (0..n).map(|x| t.table(x)).collect();
    let tau = d.tau();
    let mut av = Vec::with_capacity(na * na * na);
    for x in 0..na {
        for y in 0..na {
            for z in 0..na {
                av.push(tau.value(&[proj[x], proj[y], proj[z]]) * fn_ % big);
            }
        }
    }
    let mut bv = Vec::with_capacity(na * na);
    for x in 0..na {
        for y in 0..na {
            let (l1, l2) = (proj[x], proj[y]);
            let chi = pairing_residue(l, &coords[x][k..], &coords[y][..k], e) * fe;
            let t12 = tables[l1][l2] * ft;
            let t21 = tables[l2][l1] * ft;
            let v = match twist {
                Twist::Printed => chi + t12 + t21,
                Twist::Inverted => chi + t12 + big - t21 % big,
            };
            bv.push(v % big);
        }
    }
    let pair = AbelianThreeCocycle::new(a, big, av, bv)?;
    check_abelian_3cocycle(&pair)?;
    let q = quadratic_form_of(&pair)?;
    let diagonal_ok =
        (0..na).all(|i| q.value_idx(i) == crate::scalars::RootOfUnity::from_residue(big, pair.b_at(i, i)));
    let metric = MetricGroup::new(q)?;
    Ok(CenterClassification {
        metric,
        cocycle_pair: pair,
        twist,
        normalization_shift: d.shift.as_ref().map(|s| s.values().to_vec()),
        checks: vec![
            Check::new("pentagon and both hexagons hold on all triples", true),
            Check::new("q equals the diagonal of b_τ", diagonal_ok),
            Check::new("q is nondegenerate", true),
        ],
    })
}

/// Whether two trivializations of the same data give isometric metric groups.
pub fn trivializations_agree(
    d: &PointedFusionData,
    t1: &CenterTrivialization,
    t2: &CenterTrivialization,
    twist: Twist,
    caps: &Caps,
) -> Result<bool> {
    let c1 = classify_center_with(d, t1, twist)?;
    let c2 = classify_center_with(d, t2, twist)?;
    Ok(!isometries(c1.metric.form(), c2.metric.form(), caps)?.is_empty())
}
