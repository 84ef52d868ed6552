//! Arithmetic and dense linear algebra over `F_p`.

use crate::config::arith::modpow;

pub type Matrix = Vec<Vec<u64>>;

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    modpow(a, p - 2, p)
}

/// Euler's criterion.
pub fn is_square(a: u64, p: u64) -> bool {
    !a.is_multiple_of(p) && modpow(a, (p - 1) / 2, p) == 1
}

pub fn neg(a: u64, p: u64) -> u64 {
    (p - a % p) % p
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, p: u64) -> Matrix {
    let k = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..k).map(|t| row[t] * b[t][j] % p).sum::<u64>() % p)
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, x: &[u64], p: u64) -> Vec<u64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, v)| r * v % p).sum::<u64>() % p)
        .collect()
}

/// Row echelon form in place; returns the rank and the determinant of the
/// leading square block when `m` is square.
fn eliminate(m: &mut Matrix, p: u64) -> (usize, u64) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut det = 1u64;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            det = 0;
            continue;
        };
        if piv != rank {
            m.swap(piv, rank);
            det = neg(det, p);
        }
        let lead = m[rank][c];
        det = det * lead % p;
        let li = inv(lead, p);
        for x in m[rank].iter_mut() {
            *x = *x * li % p;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for j in 0..cols {
                    m[r][j] = (m[r][j] + p * p - f * m[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    (rank, det)
}

pub fn rank(m: &Matrix, p: u64) -> usize {
    let mut m = m.clone();
    eliminate(&mut m, p).0
}

pub fn det(m: &Matrix, p: u64) -> u64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut m = m.clone();
    let (r, d) = eliminate(&mut m, p);
    if r < n {
        0
    } else {
        d
    }
}

pub fn inverse(m: &Matrix, p: u64) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let (r, _) = eliminate(&mut aug, p);
    // a full-rank left block puts the identity there after elimination
    if r < n || (0..n).any(|i| aug[i][i] != 1) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
