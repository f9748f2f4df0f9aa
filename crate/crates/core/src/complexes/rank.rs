//! Ranks of sparse integer matrices.
//!
//! Reduction modulo a large prime gives a lower bound for the rational rank;
//! exact rational column reduction is used when a certificate needs it.

use std::collections::HashMap;

use num_traits::Zero;

use crate::rational::Q;

/// Mersenne prime 2⁶¹ − 1.
pub const PRIME: u64 = (1 << 61) - 1;

/// Sparse column: `(row, entry)` pairs with distinct rows.
pub type Column = Vec<(u32, i64)>;

fn reduce(x: i64) -> u64 {
    x.rem_euclid(PRIME as i64) as u64
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

/// Rank over 𝔽_p, a lower bound for the rank over ℚ.
pub fn rank_mod_p(cols: &[Column]) -> usize {
    // Columns stored sorted by row; pivot = largest row.
    let mut pivots: HashMap<u32, Vec<(u32, u64)>> = HashMap::new();
    for col in cols {
        let mut c: Vec<(u32, u64)> = col
            .iter()
            .map(|&(r, v)| (r, reduce(v)))
            .filter(|&(_, v)| v != 0)
            .collect();
        c.sort_unstable_by_key(|e| e.0);
        while let Some(&(low, lv)) = c.last() {
            match pivots.get(&low) {
                None => {
                    // Normalise so the pivot entry is 1.
                    let s = inv(lv);
                    for e in &mut c {
                        e.1 = mulmod(e.1, s);
                    }
                    pivots.insert(low, c);
                    break;
                }
                Some(p) => {
                    // c ← c − lv·p
                    c = axpy(&c, p, PRIME - lv);
                }
            }
        }
    }
    pivots.len()
}

fn axpy(c: &[(u32, u64)], p: &[(u32, u64)], f: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(c.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < c.len() || j < p.len() {
        let take_c = j >= p.len() || (i < c.len() && c[i].0 < p[j].0);
        let take_p = i >= c.len() || (j < p.len() && p[j].0 < c[i].0);
        if take_c {
            out.push(c[i]);
            i += 1;
        } else if take_p {
            out.push((p[j].0, mulmod(p[j].1, f)));
            j += 1;
        } else {
            let v = (c[i].1 + mulmod(p[j].1, f)) % PRIME;
            if v != 0 {
                out.push((c[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank over ℚ by column reduction.
pub fn rank_exact(cols: &[Vec<(u32, Q)>]) -> usize {
    let mut pivots: HashMap<u32, Vec<(u32, Q)>> = HashMap::new();
    for col in cols {
        let mut c: Vec<(u32, Q)> = col.iter().filter(|e| !e.1.is_zero()).cloned().collect();
        c.sort_by_key(|e| e.0);
        while let Some((low, lv)) = c.last().cloned() {
            match pivots.get(&low) {
                None => {
                    for e in &mut c {
                        e.1 = &e.1 / &lv;
                    }
                    pivots.insert(low, c);
                    break;
                }
                Some(p) => {
                    let mut out = Vec::with_capacity(c.len() + p.len());
                    let (mut i, mut j) = (0, 0);
                    while i < c.len() || j < p.len() {
                        if j >= p.len() || (i < c.len() && c[i].0 < p[j].0) {
                            out.push(c[i].clone());
                            i += 1;
                        } else if i >= c.len() || p[j].0 < c[i].0 {
                            out.push((p[j].0, -(&p[j].1 * &lv)));
                            j += 1;
                        } else {
                            let v = &c[i].1 - &p[j].1 * &lv;
                            if !v.is_zero() {
                                out.push((c[i].0, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    c = out;
                }
            }
        }
    }
    pivots.len()
}

pub fn to_rational(cols: &[Column]) -> Vec<Vec<(u32, Q)>> {
    cols.iter()
        .map(|c| c.iter().map(|&(r, v)| (r, Q::from_integer(v.into()))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dense Gaussian elimination over ℚ, independent of the sparse code.
    fn dense_rank(rows: usize, cols: &[Column]) -> usize {
        let mut m: Vec<Vec<Q>> = vec![vec![Q::zero(); cols.len()]; rows];
        for (j, c) in cols.iter().enumerate() {
            for &(r, v) in c {
                m[r as usize][j] = Q::from_integer(v.into());
            }
        }
        let mut rank = 0;
        for j in 0..cols.len() {
            let Some(p) = (rank..rows).find(|&r| !m[r][j].is_zero()) else { continue };
            m.swap(rank, p);
            for r in 0..rows {
                if r != rank && !m[r][j].is_zero() {
                    let f = &m[r][j] / &m[rank][j];
                    for k in 0..cols.len() {
                        let t = &f * &m[rank][k];
                        m[r][k] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn columns(rows: usize, ncols: usize, entries: Vec<i64>) -> Vec<Column> {
        (0..ncols)
            .map(|j| {
                (0..rows)
                    .filter_map(|r| {
                        let v = entries[(j * rows + r) % entries.len()];
                        (v != 0).then_some((r as u32, v))
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn small_cases() {
        let cols = vec![vec![(0, 1), (1, -1)], vec![(1, 1), (2, -1)], vec![(0, 1), (2, -1)]];
        assert_eq!(rank_mod_p(&cols), 2);
        assert_eq!(rank_exact(&to_rational(&cols)), 2);
        assert_eq!(rank_mod_p(&[]), 0);
    }

    proptest! {
        #[test]
        fn agrees_with_dense_elimination(
            rows in 1usize..7, ncols in 1usize..7,
            entries in proptest::collection::vec(-3i64..4, 1..50)
        ) {
            let cols = columns(rows, ncols, entries);
            let r = dense_rank(rows, &cols);
            prop_assert_eq!(rank_exact(&to_rational(&cols)), r);
            prop_assert_eq!(rank_mod_p(&cols), r);
        }
    }
}
