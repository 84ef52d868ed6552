//! `Hⁿ(G; μ_N)` and `Hⁿ(G; k^×)` from Smith forms of the normalized bar
//! complex.
//!
//! With `δ_{n−1}` having elementary divisors `eᵢ` and `δₙ` having `dⱼ`, the
//! universal coefficient theorem gives
//! `Hⁿ(G; Z/N) = ⊕ Z/gcd(eᵢ, N) ⊕ ⊕ Z/gcd(dⱼ, N) (⊕ Z/N in degree 0)`,
//! and divisibility of `k^×` gives `Hⁿ(G; k^×) = Hⁿ⁺¹(G; Z) = ⊕ Z/dⱼ` for
//! `n ≥ 1`. Representatives come from the Smith transforms and are then
//! reduced to the lexicographically least cochain in their class.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cochain::{differential_matrix, normalized_len, Cochain};
use super::group::FiniteGroup;
use crate::config::arith::{gcd, lcm};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linalg::{howell, smith, HowellBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficients {
    MuN(u64),
    FullScalars,
}

impl FromStr for Coefficients {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "scalars" => Ok(Coefficients::FullScalars),
            t => {
                let n = t
                    .strip_prefix("muN:")
                    .and_then(|x| x.parse::<u64>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient spec {t:?}")))?;
                Ok(Coefficients::MuN(n))
            }
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::MuN(n) => write!(f, "muN:{n}"),
            Coefficients::FullScalars => write!(f, "scalars"),
        }
    }
}

impl Serialize for Coefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coefficients {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub coefficients: Coefficients,
    /// Orders of the cyclic summands, one per representative.
    pub cyclic_orders: Vec<u64>,
    /// Invariant factors `n₁ | n₂ | …` of the same group.
    pub invariant_factors: Vec<u64>,
    pub representatives: Vec<Cochain>,
    pub checks: Vec<Check>,
}

impl CohomologyGroup {
    pub fn order(&self) -> u128 {
        self.cyclic_orders.iter().map(|&x| x as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn verified(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Canonical invariant factors of `⊕ Z/cᵢ`.
pub fn invariant_factors_of(cyclic: &[u64]) -> Vec<u64> {
    // split into prime powers, then recombine largest with largest
    let mut primes: Vec<(u64, Vec<u64>)> = Vec::new();
    for &c in cyclic {
        let mut n = c;
        let mut p = 2;
        while n > 1 {
            if p * p > n {
                p = n;
            }
            if n % p == 0 {
                let mut q = 1;
                while n % p == 0 {
                    n /= p;
                    q *= p;
                }
                match primes.iter_mut().find(|(x, _)| *x == p) {
                    Some((_, v)) => v.push(q),
                    None => primes.push((p, vec![q])),
                }
            }
            p += 1;
        }
    }
    let len = primes.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    for (_, v) in primes.iter_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut out: Vec<u64> = (0..len)
        .map(|k| primes.iter().map(|(_, v)| v.get(k).copied().unwrap_or(1)).product())
        .collect();
    out.reverse();
    out
}

fn to_mod(v: &[i128], m: u64) -> Vec<u64> {
    v.iter().map(|&x| x.rem_euclid(m as i128) as u64).collect()
}

fn mat_mod(a: &[Vec<i64>], m: u64) -> Vec<Vec<u64>> {
    a.iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(m as i64) as u64).collect())
        .collect()
}

/// Howell basis of `im δ_{n−1} mod m` in normalized degree-`n` coordinates.
pub fn coboundary_basis(g: &FiniteGroup, n: usize, m: u64, caps: &Caps) -> Result<HowellBasis> {
    let width = normalized_len(g.order(), n);
    if n == 0 {
        return Ok(HowellBasis::new(Vec::new(), width, m));
    }
    let d = differential_matrix(g, n - 1, caps)?;
    let cols = normalized_len(g.order(), n - 1);
    Ok(howell::image(&mat_mod(&d, m), cols, m))
}

/// Howell basis of `ker δₙ mod m` in normalized coordinates.
pub fn cocycle_basis(g: &FiniteGroup, n: usize, m: u64, caps: &Caps) -> Result<HowellBasis> {
    let d = differential_matrix(g, n, caps)?;
    Ok(howell::kernel(&mat_mod(&d, m), normalized_len(g.order(), n), m))
}

/// Whether a cocycle mod `m` is a coboundary mod `m`.
pub fn is_coboundary(c: &Cochain, caps: &Caps) -> Result<bool> {
    if c.is_normalized() {
        let b = coboundary_basis(c.group(), c.degree(), c.modulus(), caps)?;
        Ok(b.contains(&c.normalized_coords()))
    } else {
        Ok(full_coboundary_solve(c)?.is_some())
    }
}

/// Solves `dσ = c` over full (not necessarily normalized) cochains.
pub fn full_coboundary_solve(c: &Cochain) -> Result<Option<Cochain>> {
    let g = c.group().clone();
    let n = c.degree();
    if n == 0 {
        return Ok(c.is_zero().then(|| c.clone()));
    }
    let m = c.modulus();
    let cols = g.order().pow(n as u32 - 1);
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = vec![0u64; cols];
        v[j] = 1;
        let e = Cochain::new(g.clone(), n - 1, m, v)?;
        columns.push(e.differential().values().to_vec());
    }
    let rows = c.values().len();
    let a: Vec<Vec<u64>> = (0..rows).map(|i| columns.iter().map(|col| col[i]).collect()).collect();
    Ok(howell::solve(&a, c.values(), cols, m).map(|s| Cochain::new(g, n - 1, m, s.particular).expect("shape")))
}

fn cochain_from(g: &Arc<FiniteGroup>, n: usize, m: u64, coords: &[u64]) -> Cochain {
    Cochain::from_normalized_coords(g.clone(), n, m, coords).expect("coordinate count")
}

/// Order of the class of `v` modulo `b`, given that `order · v ∈ b`.
fn class_order_is(b: &HowellBasis, v: &[u64], order: u64) -> bool {
    let m = b.modulus();
    let mul = |k: u64| -> Vec<u64> { v.iter().map(|&x| (x as u128 * k as u128 % m as u128) as u64).collect() };
    if !b.contains(&mul(order)) {
        return false;
    }
    let mut p = 2;
    let mut n = order;
    while n > 1 {
        if n.is_multiple_of(p) {
            if b.contains(&mul(order / p)) {
                return false;
            }
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    true
}

fn pairwise_distinct(b: &HowellBasis, reps: &[Vec<u64>]) -> bool {
    let m = b.modulus();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let diff: Vec<u64> = reps[i].iter().zip(&reps[j]).map(|(x, y)| (x + m - y) % m).collect();
            if b.contains(&diff) {
                return false;
            }
        }
    }
    true
}

pub fn cohomology(g: &Arc<FiniteGroup>, n: usize, coefficients: Coefficients, caps: &Caps) -> Result<CohomologyGroup> {
    match coefficients {
        Coefficients::MuN(m) => cohomology_mu(g, n, m, caps),
        Coefficients::FullScalars => cohomology_scalars(g, n, caps),
    }
}

fn cohomology_mu(g: &Arc<FiniteGroup>, n: usize, m: u64, caps: &Caps) -> Result<CohomologyGroup> {
    let order = g.order();
    let dim = normalized_len(order, n);
    let dn = differential_matrix(g, n, caps)?;
    let sn = smith(&dn, dim, true, false)?;
    let (prev_divisors, u_inv) = if n == 0 {
        (Vec::new(), None)
    } else {
        let dp = differential_matrix(g, n - 1, caps)?;
        let sp = smith(&dp, normalized_len(order, n - 1), false, true)?;
        (sp.divisors.clone(), Some(sp))
    };
    let free = dim - prev_divisors.len() - sn.rank();
    if free > 0 && !(n == 0 && dim == 1) {
        return Err(Error::RelationViolation(format!(
            "free summand of rank {free} in degree {n} of a finite group"
        )));
    }
    let mut orders = Vec::new();
    let mut reps: Vec<Vec<u64>> = Vec::new();
    if let Some(sp) = &u_inv {
        for (i, &e) in sp.divisors.iter().enumerate() {
            let k = gcd(e as u64, m);
            if k > 1 {
                orders.push(k);
                reps.push(to_mod(&sp.u_inv_column(i).expect("tracked"), m));
            }
        }
    }
    if free > 0 {
        orders.push(m);
        reps.push(vec![1 % m]);
    }
    for (j, &d) in sn.divisors.iter().enumerate() {
        let k = gcd(d as u64, m);
        if k > 1 {
            let v = sn.v_column(j).expect("tracked");
            let scaled: Vec<i128> = v.iter().map(|&x| x * (m / k) as i128).collect();
            orders.push(k);
            reps.push(to_mod(&scaled, m));
        }
    }
    let b = coboundary_basis(g, n, m, caps)?;
    let reps: Vec<Vec<u64>> = reps.iter().map(|r| b.reduce(r)).collect();
    let cochains: Vec<Cochain> = reps.iter().map(|r| cochain_from(g, n, m, r)).collect();

    let mut checks = vec![
        Check::new("representatives are cocycles", cochains.iter().all(|c| c.is_cocycle())),
        Check::new(
            "representative orders",
            reps.iter().zip(&orders).all(|(r, &k)| class_order_is(&b, r, k)),
        ),
        Check::new(
            "representatives pairwise non-cohomologous",
            pairwise_distinct(&b, &reps),
        ),
    ];
    // independent count |ker δₙ| / |im δₙ₋₁| over Z/N
    let z = cocycle_basis(g, n, m, caps)?;
    let count = match (z.span_size(), b.span_size()) {
        (Some(zs), Some(bs)) if bs != 0 => Some(zs / bs),
        _ => None,
    };
    let product: u128 = orders.iter().map(|&x| x as u128).product();
    checks.push(Check::new(
        "|ker| / |im| equals the Smith count",
        count == Some(product),
    ));
    Ok(CohomologyGroup {
        degree: n,
        coefficients: Coefficients::MuN(m),
        invariant_factors: invariant_factors_of(&orders),
        cyclic_orders: orders,
        representatives: cochains,
        checks,
    })
}

fn cohomology_scalars(g: &Arc<FiniteGroup>, n: usize, caps: &Caps) -> Result<CohomologyGroup> {
    if n == 0 {
        return Err(Error::ShapeMismatch("H⁰(G, k^×) = k^× is not finite".into()));
    }
    let order = g.order();
    let dim = normalized_len(order, n);
    let dn = differential_matrix(g, n, caps)?;
    let sn = smith(&dn, dim, true, false)?;
    let mut orders = Vec::new();
    let mut cols = Vec::new();
    for (j, &d) in sn.divisors.iter().enumerate() {
        if d > 1 {
            orders.push(d as u64);
            cols.push(sn.v_column(j).expect("tracked"));
        }
    }
    let m = orders.iter().fold(1u64, |acc, &d| lcm(acc, d));
    // v/d has integral coboundary, so it is a Q/Z-valued cocycle of order d
    let reps: Vec<Vec<u64>> = cols
        .iter()
        .zip(&orders)
        .map(|(v, &d)| {
            let scaled: Vec<i128> = v.iter().map(|&x| x * (m / d) as i128).collect();
            to_mod(&scaled, m)
        })
        .collect();
    let b = coboundary_basis(g, n, m, caps)?;
    let reps: Vec<Vec<u64>> = reps.iter().map(|r| b.reduce(r)).collect();
    let cochains: Vec<Cochain> = reps.iter().map(|r| cochain_from(g, n, m, r)).collect();

    // k^×-coboundaries of μ_m-valued cocycles have primitives in μ_{m·|G|}
    let big = m * order as u64;
    let bb = coboundary_basis(g, n, big, caps)?;
    let lifted: Vec<Vec<u64>> = reps
        .iter()
        .map(|r| r.iter().map(|&x| x * order as u64).collect())
        .collect();
    let checks = vec![
        Check::new("representatives are cocycles", cochains.iter().all(|c| c.is_cocycle())),
        Check::new(
            "representative orders over k^×",
            lifted.iter().zip(&orders).all(|(r, &k)| class_order_is(&bb, r, k)),
        ),
        Check::new(
            "representatives pairwise non-cohomologous over k^×",
            pairwise_distinct(&bb, &lifted),
        ),
    ];
    Ok(CohomologyGroup {
        degree: n,
        coefficients: Coefficients::FullScalars,
        invariant_factors: invariant_factors_of(&orders),
        cyclic_orders: orders,
        representatives: cochains,
        checks,
    })
}

/// Order of the image of `Hⁿ(G; μ_small) → Hⁿ(G; μ_big)` induced by
/// `μ_small ⊂ μ_big`. As `small` grows through multiples this stabilizes at
/// `|Hⁿ(G; k^×)|` for `n ≥ 1`.
pub fn mu_image_order(g: &Arc<FiniteGroup>, n: usize, small: u64, big: u64, caps: &Caps) -> Result<u128> {
    if !big.is_multiple_of(small) {
        return Err(Error::NotDivisible {
            order: small,
            target: big,
        });
    }
    let z = cocycle_basis(g, n, small, caps)?;
    let f = big / small;
    let dim = normalized_len(g.order(), n);
    let bbig = coboundary_basis(g, n, big, caps)?;
    let mut rows: Vec<Vec<u64>> = z.rows().iter().map(|r| r.iter().map(|&x| x * f).collect()).collect();
    rows.extend(bbig.rows().iter().cloned());
    let span = HowellBasis::new(rows, dim, big);
    match (span.span_size(), bbig.span_size()) {
        (Some(s), Some(b)) => Ok(s / b),
        _ => Err(Error::Overflow("cohomology image order")),
    }
}

/// A uniformly random element of `ker δₙ mod m`, normalized.
pub fn random_cocycle<R: rand::Rng>(
    g: &Arc<FiniteGroup>,
    n: usize,
    m: u64,
    rng: &mut R,
    caps: &Caps,
) -> Result<Cochain> {
    let z = cocycle_basis(g, n, m, caps)?;
    let dim = normalized_len(g.order(), n);
    let mut v = vec![0u64; dim];
    for (row, &(_, d)) in z.rows().iter().zip(z.pivots()) {
        // the pivot row generates a cyclic group of order m/d
        let k = rng.gen_range(0..m / d);
        for (x, &r) in v.iter_mut().zip(row) {
            *x = ((*x as u128 + k as u128 * r as u128) % m as u128) as u64;
        }
    }
    Cochain::from_normalized_coords(g.clone(), n, m, &v)
}
