//! Two-phase tableau simplex with Bland's rule, exact over ℚ or in f64.

use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Arithmetic needed by the simplex method.
pub trait LpNum: Clone + Debug + PartialOrd {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl LpNum for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

const EPS: f64 = 1e-9;

impl LpNum for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() <= EPS
    }
    fn is_negative(&self) -> bool {
        *self < -EPS
    }
    fn is_positive(&self) -> bool {
        *self > EPS
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub value: T,
    pub x: Vec<T>,
    /// Dual prices `y` with `Aᵀy ≤ c` and `bᵀy = value` at optimality.
    pub y: Vec<T>,
    pub pivots: usize,
}

/// Minimise `cᵀx` subject to `Ax = b`, `x ≥ 0`. `cols[j]` lists the
/// non-zero entries `(row, a_ij)` of column `j`.
pub fn solve<T: LpNum>(m: usize, cols: &[Vec<(usize, T)>], b: &[T], c: &[T]) -> LpSolution<T> {
    Tableau::new(m, cols, b).run(c)
}

struct Tableau<T> {
    m: usize,
    n: usize,
    /// Rows of `[A | I | b]`; artificial columns track `B⁻¹`.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    /// Row sign flips applied to make `b ≥ 0`.
    flipped: Vec<bool>,
    /// Original row index of each remaining row.
    origin: Vec<usize>,
    pivots: usize,
}

impl<T: LpNum> Tableau<T> {
    fn new(m: usize, cols: &[Vec<(usize, T)>], b: &[T]) -> Self {
        let n = cols.len();
        let width = n + m + 1;
        let mut rows = vec![vec![T::zero(); width]; m];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col {
                rows[*i][j] = rows[*i][j].add(v);
            }
        }
        let mut flipped = vec![false; m];
        for i in 0..m {
            rows[i][width - 1] = b[i].clone();
            if b[i].is_negative() {
                flipped[i] = true;
                for j in 0..width {
                    if !rows[i][j].is_zero() {
                        rows[i][j] = rows[i][j].neg();
                    }
                }
            }
            rows[i][n + i] = T::one();
        }
        Self {
            m,
            n,
            rows,
            basis: (n..n + m).collect(),
            flipped,
            origin: (0..m).collect(),
            pivots: 0,
        }
    }

    fn rhs(&self) -> usize {
        self.n + self.m
    }

    fn pivot(&mut self, r: usize, col: usize) {
        self.pivots += 1;
        let p = self.rows[r][col].clone();
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        for &j in &nz {
            self.rows[r][j] = self.rows[r][j].div(&p);
        }
        self.rows[r][col] = T::one();
        let prow = self.rows[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for &j in &nz {
                let v = self.rows[i][j].sub(&f.mul(&prow[j]));
                self.rows[i][j] = if v.is_zero() { T::zero() } else { v };
            }
            self.rows[i][col] = T::zero();
        }
        self.basis[r] = col;
    }

    /// Reduced cost of column `j` for objective `cost`.
    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        let mut z = cost[j].clone();
        for (i, &bv) in self.basis.iter().enumerate() {
            if !self.rows[i][j].is_zero() && !cost[bv].is_zero() {
                z = z.sub(&cost[bv].mul(&self.rows[i][j]));
            }
        }
        z
    }

    /// Bland's-rule simplex over columns `< allowed`. Returns false if
    /// unbounded.
    fn optimise(&mut self, cost: &[T], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative()
            });
            let Some(col) = entering else { return true };
            let rhs = self.rhs();
            let mut best: Option<(T, usize, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if a.is_positive() {
                    let ratio = self.rows[i][rhs].div(a);
                    let better = match &best {
                        None => true,
                        Some((r, _, bv)) => ratio < *r || (ratio == *r && self.basis[i] < *bv),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                None => return false,
                Some((_, r, _)) => self.pivot(r, col),
            }
        }
    }

    fn objective(&self, cost: &[T]) -> T {
        let rhs = self.rhs();
        let mut v = T::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            if !cost[bv].is_zero() {
                v = v.add(&cost[bv].mul(&self.rows[i][rhs]));
            }
        }
        v
    }

    fn run(mut self, c: &[T]) -> LpSolution<T> {
        let (n, m) = (self.n, self.m);
        let total = n + m;
        let mut phase1 = vec![T::zero(); total];
        for v in phase1.iter_mut().skip(n) {
            *v = T::one();
        }
        self.optimise(&phase1, total);
        if self.objective(&phase1).is_positive() {
            return self.finish(LpStatus::Infeasible, c);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= n {
                match (0..n).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        self.origin.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        let mut cost = c.to_vec();
        cost.extend(std::iter::repeat(T::zero()).take(m));
        if !self.optimise(&cost, n) {
            return self.finish(LpStatus::Unbounded, c);
        }
        self.finish(LpStatus::Optimal, c)
    }

    fn finish(self, status: LpStatus, c: &[T]) -> LpSolution<T> {
        let (n, m) = (self.n, self.m);
        let rhs = self.rhs();
        let mut x = vec![T::zero(); n];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < n {
                x[bv] = self.rows[i][rhs].clone();
            }
        }
        let mut y = vec![T::zero(); m];
        if status == LpStatus::Optimal {
            // yᵀ = c_Bᵀ B⁻¹; column k of B⁻¹ is artificial column k, with the
            // row flips folded back in.
            for k in 0..m {
                let mut s = T::zero();
                for (i, &bv) in self.basis.iter().enumerate() {
                    if bv < n && !c[bv].is_zero() && !self.rows[i][n + k].is_zero() {
                        s = s.add(&c[bv].mul(&self.rows[i][n + k]));
                    }
                }
                y[k] = if self.flipped[k] { s.neg() } else { s };
            }
        }
        let value = if status == LpStatus::Optimal {
            x.iter().zip(c).fold(T::zero(), |acc, (xi, ci)| acc.add(&xi.mul(ci)))
        } else {
            T::zero()
        };
        LpSolution {
            status,
            value,
            x,
            y,
            pivots: self.pivots,
        }
    }
}

/// Solves `Ax = b` exactly. Returns a solution (free variables at zero)
/// and the rank of `A`, or `None` if the system is inconsistent.
pub fn linear_solve(m: usize, cols: &[Vec<(usize, Q)>], b: &[Q]) -> (Option<Vec<Q>>, usize) {
    let n = cols.len();
    let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); m];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col {
            rows[*i].push((j, v.clone()));
        }
    }
    let mut rhs = b.to_vec();
    // Row echelon form by sparse elimination, pivoting on the first
    // non-zero column of each row.
    let mut pivot_rows: Vec<(usize, Vec<(usize, Q)>, Q)> = Vec::new();
    let mut pivot_of_col: std::collections::HashMap<usize, usize> = Default::default();
    for (i, mut row) in rows.into_iter().enumerate() {
        row.sort_by_key(|e| e.0);
        let mut r = std::mem::take(&mut rhs[i]);
        loop {
            row.retain(|e| !Zero::is_zero(&e.1));
            let Some((lead, lv)) = row.first().cloned() else {
                if !Zero::is_zero(&r) {
                    return (None, pivot_rows.len());
                }
                break;
            };
            match pivot_of_col.get(&lead) {
                None => {
                    for e in &mut row {
                        e.1 = &e.1 / &lv;
                    }
                    r = &r / &lv;
                    pivot_of_col.insert(lead, pivot_rows.len());
                    pivot_rows.push((lead, row, r));
                    break;
                }
                Some(&p) => {
                    let (_, prow, pr) = &pivot_rows[p];
                    row = sparse_axpy(&row, prow, &lv);
                    r = &r - &(pr * &lv);
                }
            }
        }
    }
    // Back substitution with free variables at zero.
    let mut x = vec![<Q as Zero>::zero(); n];
    let mut order: Vec<usize> = (0..pivot_rows.len()).collect();
    order.sort_by_key(|&p| std::cmp::Reverse(pivot_rows[p].0));
    for p in order {
        let (lead, row, r) = &pivot_rows[p];
        let mut v = r.clone();
        for (j, a) in row.iter().skip(1) {
            v -= a * &x[*j];
        }
        x[*lead] = v;
    }
    let rank = pivot_rows.len();
    (Some(x), rank)
}

/// `row − f·prow` for rows sorted by column.
fn sparse_axpy(row: &[(usize, Q)], prow: &[(usize, Q)], f: &Q) -> Vec<(usize, Q)> {
    let mut out = Vec::with_capacity(row.len() + prow.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < prow.len() {
        if j >= prow.len() || (i < row.len() && row[i].0 < prow[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i >= row.len() || prow[j].0 < row[i].0 {
            out.push((prow[j].0, -(&prow[j].1 * f)));
            j += 1;
        } else {
            let v = &row[i].1 - &prow[j].1 * f;
            if !Zero::is_zero(&v) {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn cols_q(a: &[&[i64]]) -> Vec<Vec<(usize, Q)>> {
        let m = a.len();
        let n = a[0].len();
        (0..n)
            .map(|j| (0..m).filter(|&i| a[i][j] != 0).map(|i| (i, q(a[i][j]))).collect())
            .collect()
    }

    #[test]
    fn small_lp() {
        // min x + y s.t. x + 2y = 4, 3x + y = 6 → x = 8/5, y = 6/5.
        let cols = cols_q(&[&[1, 2], &[3, 1]]);
        let s = solve(2, &cols, &[q(4), q(6)], &[q(1), q(1)]);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![qf(8, 5), qf(6, 5)]);
        assert_eq!(s.value, qf(14, 5));
        let by: Q = s.y.iter().zip([q(4), q(6)]).map(|(y, b)| y * b).sum();
        assert_eq!(by, s.value);
    }

    #[test]
    fn infeasible_and_redundant() {
        let cols = cols_q(&[&[1, 1], &[1, 1]]);
        let s = solve(2, &cols, &[q(1), q(2)], &[q(1), q(1)]);
        assert_eq!(s.status, LpStatus::Infeasible);
        let s = solve(2, &cols, &[q(2), q(2)], &[q(1), q(3)]);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, q(2));
        // Negative right-hand side with a free-variable split.
        let cols = cols_q(&[&[1, -1]]);
        let s = solve(1, &cols, &[q(-3)], &[q(1), q(1)]);
        assert_eq!(s.value, q(3));
        assert_eq!(s.y, vec![q(-1)]);
    }

    #[test]
    fn unbounded() {
        let cols = cols_q(&[&[1, -1]]);
        let s = solve(1, &cols, &[q(0)], &[q(-1), q(0)]);
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn float_agrees() {
        let cols = cols_q(&[&[1, 2, 0], &[3, 1, 1]]);
        let fcols: Vec<Vec<(usize, f64)>> = cols
            .iter()
            .map(|c| c.iter().map(|(i, v)| (*i, crate::rational::to_f64(v))).collect())
            .collect();
        let e = solve(2, &cols, &[q(4), q(6)], &[q(1), q(1), q(2)]);
        let f = solve(2, &fcols, &[4.0, 6.0], &[1.0, 1.0, 2.0]);
        assert!((crate::rational::to_f64(&e.value) - f.value).abs() < 1e-9);
    }

    #[test]
    fn linear_systems() {
        let cols = cols_q(&[&[1, 1], &[1, -1], &[2, 0]]);
        let (x, r) = linear_solve(3, &cols, &[q(3), q(1), q(4)]);
        assert_eq!(r, 2);
        assert_eq!(x.unwrap(), vec![q(2), q(1)]);
        let (x, _) = linear_solve(3, &cols, &[q(3), q(1), q(5)]);
        assert!(x.is_none());
    }
}
