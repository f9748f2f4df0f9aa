//! Four-point hyperbolicity constant and a thin-triangle probe.

use rayon::prelude::*;
use serde::Serialize;

use crate::cusped::TruncationCheck;
use crate::error::{Error, Result};
use crate::graphs::{SimpGraph, UNREACHED};
use crate::rational::{self, Q};

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    #[serde(with = "rational::text")]
    pub delta_four_point: Q,
    pub witness: Option<[usize; 4]>,
    pub scanned: usize,
    pub truncation_safe: bool,
}

/// Exact four-point δ of the metric induced on `vertices`: the largest
/// value of `(largest − middle)/2` over the three pair sums of a quadruple.
pub fn four_point_delta(g: &SimpGraph, vertices: &[usize]) -> Result<DeltaReport> {
    let d = g.distance_matrix(vertices);
    for (a, row) in d.iter().enumerate() {
        if let Some(b) = row.iter().position(|&x| x == UNREACHED) {
            return Err(Error::Unreachable(vertices[a], vertices[b]));
        }
    }
    let (twice, witness) = delta_from_matrix(&d);
    Ok(DeltaReport {
        delta_four_point: rational::qf(twice as i64, 2),
        witness: witness.map(|w| w.map(|k| vertices[k])),
        scanned: vertices.len(),
        truncation_safe: true,
    })
}

/// Same as [`four_point_delta`] on a cusped truncation, rejecting sets
/// whose distances change in the enlarged truncation.
pub fn four_point_delta_checked(check: &TruncationCheck, vertices: &[usize]) -> Result<DeltaReport> {
    if !check.distances_stable(vertices) {
        return Err(Error::TruncationUnsafe(format!(
            "distances among {} scanned vertices change under enlargement",
            vertices.len()
        )));
    }
    four_point_delta(&check.small.graph, vertices)
}

/// Returns `2δ` and a witness quadruple (matrix indices).
pub fn delta_from_matrix(d: &[Vec<u32>]) -> (u32, Option<[usize; 4]>) {
    let n = d.len();
    (0..n)
        .into_par_iter()
        .map(|a| {
            let mut best = (0u32, None);
            for b in a + 1..n {
                for c in b + 1..n {
                    let (dab, dac, dbc) = (d[a][b], d[a][c], d[b][c]);
                    for e in c + 1..n {
                        let s1 = dab + d[c][e];
                        let s2 = dac + d[b][e];
                        let s3 = d[a][e] + dbc;
                        let (hi, mid) = top_two(s1, s2, s3);
                        if hi - mid > best.0 {
                            best = (hi - mid, Some([a, b, c, e]));
                        }
                    }
                }
            }
            best
        })
        .reduce(|| (0, None), |x, y| if y.0 > x.0 || (y.0 == x.0 && x.1.is_none()) { y } else { x })
}

fn top_two(a: u32, b: u32, c: u32) -> (u32, u32) {
    let hi = a.max(b).max(c);
    let lo = a.min(b).min(c);
    (hi, a + b + c - hi - lo)
}

#[derive(Clone, Debug, Serialize)]
pub struct ThinTriangleReport {
    pub max_insize: u32,
    pub witness: Option<(usize, usize, usize)>,
    pub triangles: usize,
}

/// Largest distance from a vertex of one canonical side to the union of
/// the other two, over the given triangles. A lower bound for the
/// thin-triangle constant.
pub fn thin_triangle_probe(g: &SimpGraph, triples: &[(usize, usize, usize)]) -> Result<ThinTriangleReport> {
    let results: Vec<Result<(u32, (usize, usize, usize))>> = triples
        .par_iter()
        .map(|&(a, b, c)| {
            let sides = [
                g.canonical_geodesic(a, b)?.vertices,
                g.canonical_geodesic(b, c)?.vertices,
                g.canonical_geodesic(c, a)?.vertices,
            ];
            let mut worst = 0;
            for k in 0..3 {
                let others = sides[(k + 1) % 3].iter().chain(&sides[(k + 2) % 3]).copied();
                let dist = g.multi_bfs(others);
                for &v in &sides[k] {
                    worst = worst.max(dist[v]);
                }
            }
            Ok((worst, (a, b, c)))
        })
        .collect();
    let mut report = ThinTriangleReport {
        max_insize: 0,
        witness: None,
        triangles: triples.len(),
    };
    for r in results {
        let (w, t) = r?;
        if report.witness.is_none() || w > report.max_insize {
            report.max_insize = w;
            report.witness = Some(t);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    /// Literal Gromov-product definition over ordered quadruples.
    fn oracle(d: &[Vec<u32>]) -> Q {
        let n = d.len();
        let gp = |x: usize, y: usize, w: usize| {
            rational::qf(d[x][w] as i64 + d[y][w] as i64 - d[x][y] as i64, 2)
        };
        let mut best = q(0);
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let v = gp(x, y, w).min(gp(y, z, w)) - gp(x, z, w);
                        if v > best {
                            best = v;
                        }
                    }
                }
            }
        }
        best
    }

    fn all(g: &SimpGraph) -> Vec<usize> {
        (0..g.vertex_count()).collect()
    }

    #[test]
    fn examples() {
        let t = SimpGraph::regular_tree(4, 2);
        assert_eq!(four_point_delta(&t, &all(&t)).unwrap().delta_four_point, q(0));
        let c4 = SimpGraph::cycle(4);
        assert_eq!(four_point_delta(&c4, &all(&c4)).unwrap().delta_four_point, q(1));
        let mut prev = q(0);
        for w in [3, 5, 7] {
            let g = SimpGraph::grid(w, w);
            let d = four_point_delta(&g, &all(&g)).unwrap().delta_four_point;
            assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn matches_gromov_product_oracle() {
        for g in [SimpGraph::cycle(5), SimpGraph::cycle(6), SimpGraph::grid(3, 3), SimpGraph::grid(4, 2)] {
            let d = g.distance_matrix(&all(&g));
            assert_eq!(four_point_delta(&g, &all(&g)).unwrap().delta_four_point, oracle(&d));
        }
    }

    #[test]
    fn thin_triangles() {
        let t = SimpGraph::regular_tree(3, 2);
        assert_eq!(thin_triangle_probe(&t, &[(4, 6, 8)]).unwrap().max_insize, 0);
        let c6 = SimpGraph::cycle(6);
        assert_eq!(thin_triangle_probe(&c6, &[(0, 2, 4)]).unwrap().max_insize, 1);
        let mut g = SimpGraph::with_vertices(2);
        g.add_vertex("z".into(), 0);
        assert!(thin_triangle_probe(&g, &[(0, 1, 2)]).is_err());
    }
}
