//! Ranks over the prime fields `F_p`.
//!
//! This is a separate elimination from the integral one so that mod-p and
//! integral homology can be checked against each other.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::chain::SparseMatrix;
use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) && p < (1 << 31) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Rank of `m` reduced modulo the prime `p`.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Result<usize> {
    check_prime(p)?;
    let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); m.nrows()];
    for j in 0..m.ncols() {
        for &(i, v) in m.column(j) {
            let r = v.rem_euclid(p as i64) as u64;
            if r != 0 {
                rows[i].push((j as u32, r));
            }
        }
    }
    // columns are visited in increasing order, so rows come out sorted
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); m.ncols()];
    let mut heap = BinaryHeap::new();
    for (i, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            cols[c as usize].push(i as u32);
        }
        if !row.is_empty() {
            heap.push(Reverse((row.len(), i)));
        }
    }
    let mut done = vec![false; rows.len()];
    let mut rank = 0;
    while let Some(Reverse((len, r))) = heap.pop() {
        if done[r] || rows[r].len() != len || len == 0 {
            continue;
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        done[r] = true;
        rank += 1;
        let (c, v) = *pivot_row
            .iter()
            .min_by_key(|(c, _)| cols[*c as usize].len())
            .expect("nonempty row");
        let inv = inverse(v, p);
        let mut touching = std::mem::take(&mut cols[c as usize]);
        touching.sort_unstable();
        touching.dedup();
        for r2 in touching {
            let r2 = r2 as usize;
            if done[r2] {
                continue;
            }
            let Ok(at) = rows[r2].binary_search_by_key(&c, |e| e.0) else {
                continue;
            };
            let factor = rows[r2][at].1 * inv % p;
            let old = std::mem::take(&mut rows[r2]);
            let mut out = Vec::with_capacity(old.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < pivot_row.len() {
                let ci = old.get(i).map_or(u32::MAX, |e| e.0);
                let cj = pivot_row.get(j).map_or(u32::MAX, |e| e.0);
                if ci < cj {
                    out.push(old[i]);
                    i += 1;
                } else if cj < ci {
                    out.push((cj, (p - factor * pivot_row[j].1 % p) % p));
                    cols[cj as usize].push(r2 as u32);
                    j += 1;
                } else {
                    let x = (old[i].1 + p - factor * pivot_row[j].1 % p) % p;
                    if x != 0 {
                        out.push((ci, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            rows[r2] = out;
            heap.push(Reverse((rows[r2].len(), r2)));
        }
    }
    Ok(rank)
}
