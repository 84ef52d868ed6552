//! Smith normal form of integer matrices with transform tracking.
//!
//! For `A` (m×n) this finds unimodular `U`, `V` with `U·A·V = D` diagonal,
//! `d₁ | d₂ | …`. It returns `V` and `U⁻¹` since those are what cocycle
//! representatives are read from: columns of `U⁻¹` give a basis adapted to
//! the image, columns of `V` a basis adapted to the kernel.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    /// Nonzero diagonal entries, positive and each dividing the next.
    pub divisors: Vec<i128>,
    /// `V` (n×n), present when requested.
    pub v: Option<Vec<Vec<i128>>>,
    /// `U⁻¹` (m×m), present when requested.
    pub u_inv: Option<Vec<Vec<i128>>>,
    pub rows: usize,
    pub cols: usize,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Column `j` of `V`.
    pub fn v_column(&self, j: usize) -> Option<Vec<i128>> {
        self.v.as_ref().map(|v| v.iter().map(|r| r[j]).collect())
    }

    /// Column `j` of `U⁻¹`.
    pub fn u_inv_column(&self, j: usize) -> Option<Vec<i128>> {
        self.u_inv.as_ref().map(|u| u.iter().map(|r| r[j]).collect())
    }
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("smith normal form"))
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

struct State {
    a: Vec<Vec<i128>>,
    v: Option<Vec<Vec<i128>>>,
    ui: Option<Vec<Vec<i128>>>,
}

impl State {
    /// `row_i ← row_i − q·row_t` on `A`; on `U⁻¹` this is `col_t ← col_t + q·col_i`.
    fn row_sub(&mut self, i: usize, t: usize, q: i128) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        let (ri, rt) = pair_mut(&mut self.a, i, t);
        for (x, &y) in ri.iter_mut().zip(rt.iter()) {
            *x = ck(x.checked_sub(ck(q.checked_mul(y))?))?;
        }
        if let Some(u) = self.ui.as_mut() {
            for r in u.iter_mut() {
                r[t] = ck(r[t].checked_add(ck(q.checked_mul(r[i]))?))?;
            }
        }
        Ok(())
    }

    /// `col_j ← col_j − q·col_t` on `A` and `V`.
    fn col_sub(&mut self, j: usize, t: usize, q: i128) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for r in self.a.iter_mut() {
            r[j] = ck(r[j].checked_sub(ck(q.checked_mul(r[t]))?))?;
        }
        if let Some(v) = self.v.as_mut() {
            for r in v.iter_mut() {
                r[j] = ck(r[j].checked_sub(ck(q.checked_mul(r[t]))?))?;
            }
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, t: usize) {
        if i == t {
            return;
        }
        self.a.swap(i, t);
        if let Some(u) = self.ui.as_mut() {
            for r in u.iter_mut() {
                r.swap(i, t);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, t: usize) {
        if j == t {
            return;
        }
        for r in self.a.iter_mut() {
            r.swap(j, t);
        }
        if let Some(v) = self.v.as_mut() {
            for r in v.iter_mut() {
                r.swap(j, t);
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in self.a[t].iter_mut() {
            *x = -*x;
        }
        if let Some(u) = self.ui.as_mut() {
            for r in u.iter_mut() {
                r[t] = -r[t];
            }
        }
    }
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &mut a[j])
    }
}

/// Smith normal form of `a` (m rows of length `n`).
pub fn smith(a: &[Vec<i64>], n: usize, want_v: bool, want_u_inv: bool) -> Result<Smith> {
    let m = a.len();
    let mut s = State {
        a: a.iter()
            .map(|r| {
                assert_eq!(r.len(), n, "row width");
                r.iter().map(|&x| x as i128).collect()
            })
            .collect(),
        v: want_v.then(|| identity(n)),
        ui: want_u_inv.then(|| identity(m)),
    };
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the remaining block as pivot
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = s.a[i][j].abs();
                if x != 0 && best.is_none_or(|b| x < b.0) {
                    best = Some((x, i, j));
                    if x == 1 {
                        break;
                    }
                }
            }
            if best.is_some_and(|b| b.0 == 1) {
                break;
            }
        }
        let Some((_, pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            let p = s.a[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                let q = s.a[i][t].div_euclid(p);
                s.row_sub(i, t, q)?;
                if s.a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let q = s.a[t][j].div_euclid(p);
                s.col_sub(j, t, q)?;
                if s.a[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest leftover remainder into the pivot slot
                let mut best = (p.abs(), t, t);
                for i in t + 1..m {
                    let x = s.a[i][t].abs();
                    if x != 0 && x < best.0 {
                        best = (x, i, t);
                    }
                }
                for j in t + 1..n {
                    let x = s.a[t][j].abs();
                    if x != 0 && x < best.0 {
                        best = (x, t, j);
                    }
                }
                s.swap_rows(t, best.1);
                s.swap_cols(t, best.2);
                continue;
            }
            // divisibility of the rest of the block
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| s.a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    // row_t ← row_t + row_i
                    s.row_sub(t, i, -1)?;
                }
                None => break,
            }
        }
        if s.a[t][t] < 0 {
            s.negate_row(t);
        }
        divisors.push(s.a[t][t]);
        t += 1;
    }
    Ok(Smith {
        divisors,
        v: s.v,
        u_inv: s.ui,
        rows: m,
        cols: n,
    })
}
