//! Howell normal form of row spans over `Z/N`.
//!
//! A Howell basis has, besides row echelon shape, the property that every
//! element of the span whose first `k` coordinates vanish is a combination of
//! the basis rows that start after column `k`. That makes kernels, subgroup
//! orders and lexicographically least coset representatives readable straight
//! off the basis.

use crate::config::arith::gcd;

/// Rows in Howell form with their pivot columns and pivot values. Each pivot
/// value divides `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HowellBasis {
    modulus: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<(usize, u64)>,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// `(g, s, t)` with `g = gcd(a, b) = s·a + t·b` over the integers.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// A unit `u` mod `n` with `u·a ≡ gcd(a, n)`.
fn normalizing_unit(a: u64, n: u64) -> u64 {
    let d = gcd(a, n);
    let m = n / d;
    if m == 1 {
        return 1;
    }
    let (_, s, _) = xgcd((a / d) as i128, m as i128);
    let u0 = s.rem_euclid(m as i128) as u64;
    let mut u = u0;
    while gcd(u, n) != 1 {
        u += m;
    }
    u
}

fn reduce(v: &mut [u64], m: u64) {
    for x in v.iter_mut() {
        *x %= m;
    }
}

/// `dst ← a·dst + b·src` mod `m`.
fn combine(dst: &mut [u64], a: u64, src: &[u64], b: u64, m: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((a as u128 * *d as u128 + b as u128 * s as u128) % m as u128) as u64;
    }
}

impl HowellBasis {
    /// Howell basis of the row span of `rows` in `(Z/modulus)^width`.
    pub fn new(rows: Vec<Vec<u64>>, width: usize, modulus: u64) -> Self {
        assert!(modulus > 0);
        let mut work: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|mut r| {
                assert_eq!(r.len(), width, "row width");
                reduce(&mut r, modulus);
                r
            })
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect();
        let mut out: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..width {
            // fold every remaining row into the pivot row at this column
            let Some(first) = work.iter().position(|r| r[col] != 0) else {
                continue;
            };
            let mut pivot = work.swap_remove(first);
            let mut rest = Vec::with_capacity(work.len());
            for mut r in work.drain(..) {
                if r[col] != 0 {
                    let (g, s, t) = xgcd(pivot[col] as i128, r[col] as i128);
                    let m = modulus as i128;
                    let a = (pivot[col] as i128 / g).rem_euclid(m) as u64;
                    let b = (r[col] as i128 / g).rem_euclid(m) as u64;
                    let s = s.rem_euclid(m) as u64;
                    let t = t.rem_euclid(m) as u64;
                    let old = pivot.clone();
                    // [s t; −b a] has determinant 1
                    combine(&mut pivot, s, &r, t, modulus);
                    combine(&mut r, a, &old, modulus - b % modulus, modulus);
                    debug_assert_eq!(r[col], 0);
                }
                if r.iter().any(|&x| x != 0) {
                    rest.push(r);
                }
            }
            work = rest;
            if pivot[col] == 0 {
                if pivot.iter().any(|&x| x != 0) {
                    work.push(pivot);
                }
                continue;
            }
            let u = normalizing_unit(pivot[col], modulus);
            for x in pivot.iter_mut() {
                *x = mulmod(*x, u, modulus);
            }
            let d = pivot[col];
            debug_assert_eq!(modulus % d, 0);
            for r in out.iter_mut() {
                let q = r[col] / d;
                if q != 0 {
                    combine(r, 1, &pivot, modulus - q % modulus, modulus);
                }
            }
            // the annihilator multiple keeps the span's elements with a zero here
            let ann: Vec<u64> = pivot.iter().map(|&x| mulmod(x, modulus / d, modulus)).collect();
            if ann.iter().any(|&x| x != 0) {
                work.push(ann);
            }
            out.push(pivot);
            pivots.push((col, d));
        }
        HowellBasis {
            modulus,
            width,
            rows: out,
            pivots,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u64)] {
        &self.pivots
    }

    /// Number of elements of the span, or `None` if it overflows `u128`.
    pub fn span_size(&self) -> Option<u128> {
        self.pivots
            .iter()
            .try_fold(1u128, |acc, &(_, d)| acc.checked_mul((self.modulus / d) as u128))
    }

    /// The least element of `v + span` in lexicographic order.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
        for (row, &(col, d)) in self.rows.iter().zip(&self.pivots) {
            let q = v[col] / d;
            if q != 0 {
                combine(&mut v, 1, row, m - q % m, m);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

/// Howell basis of `{x : A·x ≡ 0}`, `A` given by rows of length `cols`.
pub fn kernel(a: &[Vec<u64>], cols: usize, modulus: u64) -> HowellBasis {
    let m = a.len();
    // rows (A eᵢ | eᵢ) span the graph of x ↦ A·x
    let rows: Vec<Vec<u64>> = (0..cols)
        .map(|i| {
            let mut r = vec![0u64; m + cols];
            for (j, arow) in a.iter().enumerate() {
                r[j] = arow[i] % modulus;
            }
            r[m + i] = 1 % modulus;
            r
        })
        .collect();
    let h = HowellBasis::new(rows, m + cols, modulus);
    let mut krows = Vec::new();
    for (row, &(col, _)) in h.rows.iter().zip(&h.pivots) {
        if col >= m {
            krows.push(row[m..].to_vec());
        }
    }
    HowellBasis::new(krows, cols, modulus)
}

/// Howell basis of the column span of `A` (rows of length `cols`).
pub fn image(a: &[Vec<u64>], cols: usize, modulus: u64) -> HowellBasis {
    let rows: Vec<Vec<u64>> = (0..cols).map(|i| a.iter().map(|r| r[i] % modulus).collect()).collect();
    HowellBasis::new(rows, a.len(), modulus)
}

/// Solutions of `A·x ≡ b (mod N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Lexicographically least solution.
    pub particular: Vec<u64>,
    /// Howell basis of the homogeneous solutions.
    pub homogeneous: HowellBasis,
}

impl Solution {
    pub fn count(&self) -> Option<u128> {
        self.homogeneous.span_size()
    }
}

/// Solves `A·x ≡ b (mod N)`; `None` if there is no solution.
pub fn solve(a: &[Vec<u64>], b: &[u64], cols: usize, modulus: u64) -> Option<Solution> {
    assert_eq!(a.len(), b.len());
    if modulus == 1 {
        return Some(Solution {
            particular: vec![0; cols],
            homogeneous: HowellBasis::new(Vec::new(), cols, 1),
        });
    }
    // kernel of [−b | A] with the scaling unknown first
    let aug: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = Vec::with_capacity(cols + 1);
            r.push((modulus - bi % modulus) % modulus);
            r.extend(row.iter().map(|&x| x % modulus));
            r
        })
        .collect();
    let k = kernel(&aug, cols + 1, modulus);
    let first = k.pivots.first()?;
    if first.0 != 0 || first.1 != 1 {
        return None;
    }
    let lead = k.rows[0].clone();
    let rest_rows: Vec<Vec<u64>> = k.rows[1..].iter().map(|r| r[1..].to_vec()).collect();
    let homogeneous = HowellBasis::new(rest_rows, cols, modulus);
    let particular = homogeneous.reduce(&lead[1..]);
    Some(Solution {
        particular,
        homogeneous,
    })
}

/// `A·x mod N`.
pub fn mat_vec(a: &[Vec<u64>], x: &[u64], modulus: u64) -> Vec<u64> {
    a.iter()
        .map(|row| (row.iter().zip(x).map(|(&r, &v)| r as u128 * v as u128).sum::<u128>() % modulus as u128) as u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_vectors(width: usize, m: u64) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..width {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u64>| {
                    (0..m).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn brute_span(rows: &[Vec<u64>], width: usize, m: u64) -> Vec<Vec<u64>> {
        let mut span = vec![vec![0u64; width]];
        let mut i = 0;
        while i < span.len() {
            for r in rows {
                let s: Vec<u64> = span[i].iter().zip(r).map(|(a, b)| (a + b) % m).collect();
                if !span.contains(&s) {
                    span.push(s);
                }
            }
            i += 1;
        }
        span.sort();
        span
    }

    fn samples() -> Vec<(Vec<Vec<u64>>, usize, u64)> {
        vec![
            (vec![vec![2, 4], vec![4, 2]], 2, 8),
            (vec![vec![4, 1]], 2, 8),
            (vec![vec![3, 0, 6], vec![0, 6, 3], vec![6, 3, 0]], 3, 9),
            (vec![vec![2, 3, 1], vec![0, 4, 2]], 3, 6),
            (vec![vec![1, 1], vec![1, 1]], 2, 4),
            (vec![vec![0, 0]], 2, 5),
        ]
    }

    #[test]
    fn span_size_matches_closure() {
        for (rows, w, m) in samples() {
            let h = HowellBasis::new(rows.clone(), w, m);
            let span = brute_span(&rows, w, m);
            assert_eq!(h.span_size(), Some(span.len() as u128), "{rows:?} mod {m}");
            for v in &span {
                assert!(h.contains(v));
            }
        }
    }

    #[test]
    fn reduce_gives_lex_least_coset_element() {
        for (rows, w, m) in samples() {
            let h = HowellBasis::new(rows.clone(), w, m);
            let span = brute_span(&rows, w, m);
            for v in all_vectors(w, m) {
                let best = span
                    .iter()
                    .map(|s| v.iter().zip(s).map(|(a, b)| (a + b) % m).collect::<Vec<_>>())
                    .min()
                    .unwrap();
                assert_eq!(h.reduce(&v), best);
            }
        }
    }

    #[test]
    fn kernel_matches_brute_force() {
        for (rows, w, m) in samples() {
            let k = kernel(&rows, w, m);
            let brute: Vec<_> = all_vectors(w, m)
                .into_iter()
                .filter(|x| mat_vec(&rows, x, m).iter().all(|&y| y == 0))
                .collect();
            assert_eq!(k.span_size(), Some(brute.len() as u128));
            for x in &brute {
                assert!(k.contains(x));
            }
        }
    }

    #[test]
    fn solve_matches_brute_force() {
        for (rows, w, m) in samples() {
            for b in all_vectors(rows.len(), m) {
                let brute: Vec<_> = all_vectors(w, m)
                    .into_iter()
                    .filter(|x| mat_vec(&rows, x, m) == b)
                    .collect();
                match solve(&rows, &b, w, m) {
                    None => assert!(brute.is_empty(), "{rows:?} b={b:?}"),
                    Some(s) => {
                        assert_eq!(Some(&s.particular), brute.iter().min());
                        assert_eq!(s.count(), Some(brute.len() as u128));
                    }
                }
            }
        }
    }

    #[test]
    fn modulus_one() {
        let h = HowellBasis::new(vec![vec![0, 0]], 2, 1);
        assert_eq!(h.span_size(), Some(1));
        let s = solve(&[vec![0, 0]], &[0], 2, 1).unwrap();
        assert_eq!(s.particular, vec![0, 0]);
    }
}
