//! Subgroups of ℤⁿ as lattices in Hermite normal form.

use num_integer::Integer;

/// Row-style Hermite normal form: pivots strictly move right, pivot
/// entries are positive and entries above a pivot are reduced modulo it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Self {
        let mut rows: Vec<Vec<i128>> = generators
            .iter()
            .map(|g| g.iter().map(|&x| x as i128).collect())
            .filter(|r: &Vec<i128>| r.iter().any(|&x| x != 0))
            .collect();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..dim {
            loop {
                // Row with the smallest non-zero entry in this column.
                let best = (top..rows.len())
                    .filter(|&r| rows[r][col] != 0)
                    .min_by_key(|&r| rows[r][col].abs());
                let Some(best) = best else { break };
                rows.swap(top, best);
                let mut done = true;
                for r in top + 1..rows.len() {
                    if rows[r][col] != 0 {
                        let f = Integer::div_floor(&rows[r][col], &rows[top][col]);
                        for c in 0..dim {
                            rows[r][c] -= f * rows[top][c];
                        }
                        if rows[r][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if top < rows.len() && rows[top][col] != 0 {
                if rows[top][col] < 0 {
                    rows[top].iter_mut().for_each(|x| *x = -*x);
                }
                let p = rows[top][col];
                for r in 0..top {
                    let f = Integer::div_floor(&rows[r][col], &p);
                    if f != 0 {
                        for c in 0..dim {
                            rows[r][c] -= f * rows[top][c];
                        }
                    }
                }
                pivots.push(col);
                top += 1;
            }
        }
        rows.truncate(top);
        Self { dim, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut t: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            if t[..col].iter().any(|&x| x != 0) {
                return false;
            }
            let p = row[col];
            if t[col] % p != 0 {
                return false;
            }
            let f = t[col] / p;
            for c in 0..self.dim {
                t[c] -= f * row[c];
            }
        }
        t.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity() {
        let l = Lattice::new(1, &[vec![2]]);
        assert!(!l.contains(&[3]));
        assert!(l.contains(&[-4]));
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = Lattice::new(2, &[vec![2, 1], vec![0, 3]]);
        let b = Lattice::new(2, &[vec![2, 4], vec![2, 1], vec![4, 5]]);
        assert_eq!(a, b);
        assert!(a.contains(&[2, -2]));
        assert!(!a.contains(&[1, 0]));
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn degenerate_generators() {
        let l = Lattice::new(2, &[vec![0, 0], vec![3, 6], vec![1, 2]]);
        assert_eq!(l.basis(), vec![vec![1, 2]]);
        assert!(l.contains(&[-5, -10]));
        assert!(!l.contains(&[1, 3]));
    }
}
