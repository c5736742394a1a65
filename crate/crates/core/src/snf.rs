//! Smith normal form over the integers.
//!
//! Sparse matrices are first reduced by eliminating unit (`±1`) pivots, which
//! removes a pivot row and column at the cost of a rank-one update of the
//! remaining rows. Entries start as checked `i64` and are promoted to `BigInt`
//! if an update overflows. Whatever is left once no unit entry remains is
//! diagonalised densely with arbitrary-precision Euclidean reduction.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chain::SparseMatrix;

/// Matrices with both sides below this size skip the sparse phase.
pub const DENSE_THRESHOLD: usize = 200;

/// Invariant factors `d_1 | d_2 | ... | d_r` of `m` (all positive), where `r`
/// is the rank.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    if m.nrows() < DENSE_THRESHOLD && m.ncols() < DENSE_THRESHOLD {
        return dense_invariant_factors(m.to_dense_big());
    }
    let (units, residual) = eliminate_units(m);
    let mut factors = vec![BigInt::one(); units];
    factors.extend(dense_invariant_factors(residual));
    factors
}

/// Invariant factors of a dense integer matrix.
pub fn invariant_factors_dense(rows: &[Vec<i64>]) -> Vec<BigInt> {
    dense_invariant_factors(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )
}

trait Entry: Clone {
    fn nil() -> Self;
    fn is_unit(&self) -> bool;
    fn vanishes(&self) -> bool;
    /// `self - f * other`, or `None` on overflow.
    fn sub_mul(&self, f: &Self, other: &Self) -> Option<Self>;
    /// `self * u` for a unit `u`.
    fn times_unit(&self, u: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Entry for i64 {
    fn nil() -> Self {
        0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn sub_mul(&self, f: &Self, other: &Self) -> Option<Self> {
        f.checked_mul(*other).and_then(|x| self.checked_sub(x))
    }
    fn times_unit(&self, u: &Self) -> Self {
        if *u == 1 {
            *self
        } else {
            -*self
        }
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, f: &Self, other: &Self) -> Option<Self> {
        Some(self - f * other)
    }
    fn times_unit(&self, u: &Self) -> Self {
        if u.is_positive() {
            self.clone()
        } else {
            -self
        }
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Eliminator<T> {
    rows: Vec<Vec<(u32, T)>>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    alive: Vec<bool>,
    heap: BinaryHeap<Reverse<(usize, u32)>>,
    units: usize,
}

impl<T: Entry> Eliminator<T> {
    fn new(rows: Vec<Vec<(u32, T)>>, ncols: usize) -> Self {
        let mut col_rows = vec![Vec::new(); ncols];
        let mut col_count = vec![0u32; ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c as usize].push(r as u32);
                col_count[*c as usize] += 1;
            }
        }
        let alive = vec![true; rows.len()];
        let mut e = Eliminator {
            rows,
            col_rows,
            col_count,
            alive,
            heap: BinaryHeap::new(),
            units: 0,
        };
        for r in 0..e.rows.len() {
            e.schedule(r);
        }
        e
    }

    fn convert<U: Entry>(self, f: impl Fn(&T) -> U) -> Eliminator<U> {
        Eliminator {
            rows: self
                .rows
                .into_iter()
                .map(|row| row.into_iter().map(|(c, v)| (c, f(&v))).collect())
                .collect(),
            col_rows: self.col_rows,
            col_count: self.col_count,
            alive: self.alive,
            heap: self.heap,
            units: self.units,
        }
    }

    /// Cheapest unit pivot of row `r` by Markowitz cost `(|row| - 1)(|col| - 1)`.
    fn best_unit(&self, r: usize) -> Option<(usize, u32, T)> {
        let len = self.rows[r].len();
        self.rows[r]
            .iter()
            .filter(|(_, v)| v.is_unit())
            .map(|(c, v)| ((len - 1) * (self.col_count[*c as usize] as usize - 1), *c, v))
            .min_by_key(|e| e.0)
            .map(|(cost, c, v)| (cost, c, v.clone()))
    }

    fn schedule(&mut self, r: usize) {
        if !self.rows[r].is_empty() {
            self.heap.push(Reverse((self.rows[r].len(), r as u32)));
        }
    }

    /// Runs until no unit pivot is left. Returns `false` if an update would
    /// overflow; the matrix is left consistent (the pending pivot untouched).
    fn run(&mut self) -> bool {
        while let Some(Reverse((cost, r))) = self.heap.pop() {
            let r = r as usize;
            if !self.alive[r] {
                continue;
            }
            // rows without a unit stay parked until another pivot modifies them
            if self.rows[r].len() != cost {
                continue;
            }
            let Some((_, c, u)) = self.best_unit(r) else {
                continue;
            };
            if !self.pivot(r, c, &u) {
                self.heap.push(Reverse((cost, r as u32)));
                return false;
            }
        }
        true
    }

    fn pivot(&mut self, r: usize, c: u32, u: &T) -> bool {
        let mut others = std::mem::take(&mut self.col_rows[c as usize]);
        others.sort_unstable();
        others.dedup();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (k, &r2) in others.iter().enumerate() {
            let r2 = r2 as usize;
            if r2 == r || !self.alive[r2] {
                continue;
            }
            let row = &self.rows[r2];
            let Ok(at) = row.binary_search_by_key(&c, |(col, _)| *col) else {
                continue;
            };
            let factor = row[at].1.times_unit(u);
            let Some(merged) = self.merge(r2, &factor, &pivot_row) else {
                // undo: restore the pivot row and the untouched column list
                self.rows[r] = pivot_row;
                let mut rest: Vec<u32> = others[k..].to_vec();
                rest.push(r as u32);
                self.col_rows[c as usize] = rest;
                return false;
            };
            self.rows[r2] = merged;
            self.schedule(r2);
        }
        for (c2, _) in &pivot_row {
            self.col_count[*c2 as usize] -= 1;
        }
        self.alive[r] = false;
        self.units += 1;
        true
    }

    /// `rows[r2] - factor * pivot_row`, updating column bookkeeping.
    fn merge(&mut self, r2: usize, factor: &T, pivot_row: &[(u32, T)]) -> Option<Vec<(u32, T)>> {
        let row = &self.rows[r2];
        let mut out = Vec::with_capacity(row.len() + pivot_row.len());
        let mut added = Vec::new();
        let mut removed = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < pivot_row.len() {
            let ci = row.get(i).map(|e| e.0).unwrap_or(u32::MAX);
            let cj = pivot_row.get(j).map(|e| e.0).unwrap_or(u32::MAX);
            if ci < cj {
                out.push(row[i].clone());
                i += 1;
            } else if cj < ci {
                let v = T::nil().sub_mul(factor, &pivot_row[j].1)?;
                out.push((cj, v));
                added.push(cj);
                j += 1;
            } else {
                let v = row[i].1.sub_mul(factor, &pivot_row[j].1)?;
                if v.vanishes() {
                    removed.push(ci);
                } else {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        for c in added {
            self.col_rows[c as usize].push(r2 as u32);
            self.col_count[c as usize] += 1;
        }
        for c in removed {
            self.col_count[c as usize] -= 1;
        }
        Some(out)
    }

    fn residual(&self) -> Vec<Vec<BigInt>> {
        let live: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.alive[r] && !self.rows[r].is_empty())
            .collect();
        let mut col_map = vec![usize::MAX; self.col_rows.len()];
        let mut ncols = 0;
        for &r in &live {
            for (c, _) in &self.rows[r] {
                if col_map[*c as usize] == usize::MAX {
                    col_map[*c as usize] = ncols;
                    ncols += 1;
                }
            }
        }
        live.iter()
            .map(|&r| {
                let mut dense = vec![BigInt::zero(); ncols];
                for (c, v) in &self.rows[r] {
                    dense[col_map[*c as usize]] = v.to_big();
                }
                dense
            })
            .collect()
    }
}

/// Unit-pivot elimination. Returns the number of unit pivots and the residual
/// block (no unit entries) as a dense matrix.
fn eliminate_units(m: &SparseMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let mut small = Eliminator::<i64>::new(m.rows(), m.ncols());
    if small.run() {
        return (small.units, small.residual());
    }
    let mut big = small.convert(|v| BigInt::from(*v));
    let finished = big.run();
    debug_assert!(finished);
    (big.units, big.residual())
}

/// Dense Smith normal form; returns the nonzero diagonal as a divisibility chain.
fn dense_invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&a, t..m, t..n) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            // move the smallest entry of row t / column t onto the diagonal
            let mut best = (t, t);
            for i in t..m {
                if !a[i][t].is_zero() && a[i][t].magnitude() < a[best.0][best.1].magnitude() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !a[t][j].is_zero() && a[t][j].magnitude() < a[best.0][best.1].magnitude() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            }
            if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in (t + 1)..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                let (head, tail) = a.split_at_mut(i);
                let pivot_row = &head[t];
                for (x, y) in tail[0][t..].iter_mut().zip(&pivot_row[t..]) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for row in a[t..].iter_mut() {
                    if !row[t].is_zero() {
                        let delta = &q * &row[t];
                        row[j] -= delta;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offending = ((t + 1)..m).find(|&i| a[i][(t + 1)..n].iter().any(|x| !x.is_multiple_of(&p)));
            match offending {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t][t..].iter_mut().zip(&tail[0][t..]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_abs_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude()) {
                best = Some((i, j));
                if a[i][j].magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}
