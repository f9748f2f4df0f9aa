//! Rips complexes, simplicial chains and homology ranks.

pub mod clique;
pub mod rank;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{SimpGraph, UNREACHED};
use crate::lincomb::LinComb;
use crate::rational::{self, Q};
use clique::{adjacency_bits, Bits};
use rank::Column;

/// Sorted vertex tuple; the sorted order is the positive orientation.
pub type Simplex = Vec<u32>;

/// Sparse rational simplicial chain.
pub type Chain = LinComb<Simplex>;

/// Sorts `vertices`, returning the simplex and whether the sorting
/// permutation is odd. `None` if a vertex repeats.
pub fn orient(vertices: &[u32]) -> Option<(Simplex, bool)> {
    let mut v = vertices.to_vec();
    let mut odd = false;
    // Insertion sort, counting transpositions.
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

/// The oriented simplex `[v₀, …, v_k]` as a chain.
pub fn simplex_chain(vertices: &[u32]) -> Chain {
    match orient(vertices) {
        Some((s, odd)) => Chain::single(s, if odd { -Q::one() } else { Q::one() }),
        None => Chain::new(),
    }
}

/// Dimension of the chain's simplices, if non-zero.
pub fn degree(c: &Chain) -> Option<usize> {
    c.keys().next().map(|s| s.len() - 1)
}

pub fn boundary_of_simplex(s: &[u32]) -> Chain {
    let mut out = Chain::new();
    if s.len() < 2 {
        return out;
    }
    for j in 0..s.len() {
        let mut face = s.to_vec();
        face.remove(j);
        let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
        out.add_term(face, sign);
    }
    out
}

/// Alternating face sum; the boundary of a 0-chain is zero.
pub fn boundary(c: &Chain) -> Chain {
    c.map_linear(|s| boundary_of_simplex(s))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStats {
    #[serde(with = "rational::text")]
    pub norm: Q,
    pub support: Vec<Simplex>,
    pub supp0: BTreeSet<u32>,
    pub minh: Option<u32>,
    pub maxh: Option<u32>,
}

pub fn support0(c: &Chain) -> BTreeSet<u32> {
    c.keys().flatten().copied().collect()
}

pub fn chain_stats(c: &Chain, heights: &[u32]) -> ChainStats {
    let supp0 = support0(c);
    let hs = supp0.iter().map(|&v| heights[v as usize]);
    ChainStats {
        norm: c.norm(),
        support: c.keys().cloned().collect(),
        minh: hs.clone().min(),
        maxh: hs.max(),
        supp0,
    }
}

/// `c|_A`: simplices with all vertices in `A`.
pub fn restrict(c: &Chain, a: &BTreeSet<u32>) -> Chain {
    c.filter(|s| s.iter().all(|v| a.contains(v)))
}

pub fn restrict_by(c: &Chain, mut keep: impl FnMut(u32) -> bool) -> Chain {
    c.filter(|s| s.iter().all(|&v| keep(v)))
}

/// Simplicial complex over a graph, with simplices up to `d_max`.
#[derive(Clone, Debug)]
pub struct SComplex {
    pub graph: SimpGraph,
    pub kappa: u32,
    pub d_max: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMethod {
    /// The complex is a cone; reduced homology vanishes below `d_max`.
    Cone,
    /// Modular ranks already certify the value.
    Modular,
    /// Exact rational elimination.
    Exact,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyRank {
    pub degree: usize,
    pub reduced: bool,
    pub rank: usize,
    pub method: RankMethod,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum ComplexRecord {
    Header { kappa: u32, d_max: usize },
    Vertex { id: usize, label: String, #[serde(default)] height: u32 },
    Edge { u: usize, v: usize },
    Simplex { vertices: Vec<u32> },
}

impl SComplex {
    /// Rips complex: a simplex for every vertex set of graph diameter ≤ κ,
    /// up to dimension `d_max`.
    pub fn build_rips(g: &SimpGraph, kappa: u32, d_max: usize) -> Result<Self> {
        if kappa < 1 {
            return Err(Error::invalid("κ must be at least 1"));
        }
        let n = g.vertex_count();
        let near: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|v| {
                let d = g.bfs_bounded(v, kappa);
                (0..n).filter(|&w| w != v && d[w] != UNREACHED).collect()
            })
            .collect();
        let adj = adjacency_bits(n, near.iter().enumerate().flat_map(|(v, ws)| ws.iter().map(move |&w| (v, w))));
        let mut simplices: Vec<Vec<Simplex>> = vec![(0..n as u32).map(|v| vec![v]).collect()];
        let mut frontier: Vec<(Simplex, Bits)> = (0..n)
            .map(|v| {
                let mut up = adj[v].clone();
                (0..=v).for_each(|w| up.remove(w));
                (vec![v as u32], up)
            })
            .collect();
        for _ in 1..=d_max {
            let next: Vec<(Simplex, Bits)> = frontier
                .par_iter()
                .flat_map_iter(|(s, cand)| {
                    let mut out = Vec::new();
                    for w in (0..n).filter(|&w| cand.contains(w)) {
                        let mut t = s.clone();
                        t.push(w as u32);
                        let mut c2 = cand.and(&adj[w]);
                        (0..=w).for_each(|x| if x < n { c2.remove(x) });
                        out.push((t, c2));
                    }
                    out
                })
                .collect();
            simplices.push(next.iter().map(|(s, _)| s.clone()).collect());
            frontier = next;
        }
        for layer in &mut simplices {
            layer.sort();
        }
        Ok(Self::from_layers(g.clone(), kappa, d_max, simplices))
    }

    /// Face closure of the given simplices.
    pub fn from_facets(g: SimpGraph, facets: &[Vec<u32>], d_max: usize) -> Result<Self> {
        let mut layers: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); d_max + 1];
        for v in 0..g.vertex_count() as u32 {
            layers[0].insert(vec![v]);
        }
        for f in facets {
            let (s, _) = orient(f).ok_or_else(|| Error::invalid("repeated vertex in simplex"))?;
            if s.iter().any(|&v| v as usize >= g.vertex_count()) {
                return Err(Error::invalid("simplex vertex out of range"));
            }
            if s.len() > d_max + 1 {
                return Err(Error::DimensionCap {
                    needed: s.len() - 1,
                    cap: d_max,
                });
            }
            let k = s.len();
            for mask in 1u32..(1 << k) {
                let face: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                layers[face.len() - 1].insert(face);
            }
        }
        Ok(Self::from_layers(
            g,
            0,
            d_max,
            layers.into_iter().map(|l| l.into_iter().collect()).collect(),
        ))
    }

    fn from_layers(graph: SimpGraph, kappa: u32, d_max: usize, simplices: Vec<Vec<Simplex>>) -> Self {
        let index = simplices
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Self {
            graph,
            kappa,
            d_max,
            simplices,
            index,
        }
    }

    /// Full subcomplex on a vertex set, vertices renumbered in order.
    /// Returns the complex and the original id of each new vertex.
    pub fn full_subcomplex(&self, vertices: &BTreeSet<u32>) -> (SComplex, Vec<u32>) {
        let sub = self.graph.induced(&vertices.iter().map(|&v| v as usize).collect());
        let new_id: HashMap<u32, u32> = vertices.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let layers = self
            .simplices
            .iter()
            .map(|l| {
                let mut out: Vec<Simplex> = l
                    .iter()
                    .filter(|s| s.iter().all(|v| new_id.contains_key(v)))
                    .map(|s| s.iter().map(|v| new_id[v]).collect())
                    .collect();
                out.sort();
                out
            })
            .collect();
        (
            Self::from_layers(sub.graph, self.kappa, self.d_max, layers),
            vertices.iter().copied().collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.simplices[0].len()
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map_or(&[], |l| l.as_slice())
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.iter().rposition(|l| !l.is_empty())
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        s.len() >= 1 && self.index.get(s.len() - 1).is_some_and(|m| m.contains_key(s))
    }

    pub fn simplex_index(&self, s: &[u32]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn heights(&self) -> &[u32] {
        self.graph.heights()
    }

    /// Columns of `∂_k : C_k → C_{k−1}` in the simplex orders.
    pub fn boundary_columns(&self, k: usize) -> Vec<Column> {
        assert!(k >= 1);
        self.simplices(k)
            .par_iter()
            .map(|s| {
                (0..s.len())
                    .map(|j| {
                        let mut face = s.clone();
                        face.remove(j);
                        let row = self.index[k - 1][&face] as u32;
                        (row, if j % 2 == 0 { 1 } else { -1 })
                    })
                    .collect()
            })
            .collect()
    }

    /// A vertex joined to every other vertex by an edge of the complex.
    /// The complex is then a cone when it is a flag complex.
    pub fn apex(&self) -> Option<u32> {
        let n = self.vertex_count();
        if n == 0 || self.count(1) == 0 && n > 1 {
            return None;
        }
        let mut deg = vec![0usize; n];
        for e in self.simplices(1) {
            deg[e[0] as usize] += 1;
            deg[e[1] as usize] += 1;
        }
        (0..n).find(|&v| deg[v] + 1 == n).map(|v| v as u32)
    }

    fn components(&self) -> usize {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = n;
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, e[0] as usize), find(&mut parent, e[1] as usize));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps
    }

    fn boundary_rank(&self, k: usize, exact: bool) -> (usize, bool) {
        if k == 0 || k > self.d_max || self.count(k) == 0 {
            return (0, true);
        }
        if k == 1 {
            return (self.vertex_count() - self.components(), true);
        }
        let cols = self.boundary_columns(k);
        if exact {
            (rank::rank_exact(&rank::to_rational(&cols)), true)
        } else {
            let r = rank::rank_mod_p(&cols);
            (r, r == self.count(k).min(self.count(k - 1)))
        }
    }

    /// Rank of (reduced) rational homology in degree `k`.
    pub fn homology(&self, k: usize, reduced: bool, allow_cone: bool) -> Result<HomologyRank> {
        if k + 1 > self.d_max {
            return Err(Error::DimensionCap {
                needed: k + 1,
                cap: self.d_max,
            });
        }
        let result = |rank, method| HomologyRank {
            degree: k,
            reduced,
            rank,
            method,
        };
        if self.vertex_count() == 0 {
            return Ok(result(0, RankMethod::Exact));
        }
        let shift = usize::from(reduced && k == 0);
        if allow_cone && self.kappa > 0 && self.apex().is_some() {
            return Ok(result(usize::from(k == 0 && !reduced), RankMethod::Cone));
        }
        let (rk, exact_k) = self.boundary_rank(k, false);
        let (rk1, exact_k1) = self.boundary_rank(k + 1, false);
        let beta = self.count(k) - rk - rk1 - shift;
        if beta == 0 || (exact_k && exact_k1) {
            return Ok(result(beta, RankMethod::Modular));
        }
        let (rk, _) = if exact_k { (rk, true) } else { self.boundary_rank(k, true) };
        let (rk1, _) = if exact_k1 { (rk1, true) } else { self.boundary_rank(k + 1, true) };
        Ok(result(self.count(k) - rk - rk1 - shift, RankMethod::Exact))
    }

    pub fn homology_rank(&self, k: usize, reduced: bool) -> Result<usize> {
        Ok(self.homology(k, reduced, true)?.rank)
    }

    /// Per dimension, the least `minh` over simplices of that dimension.
    pub fn min_height_dimension_profile(&self) -> BTreeMap<usize, u32> {
        let h = self.graph.heights();
        self.simplices
            .iter()
            .enumerate()
            .filter_map(|(m, l)| {
                l.iter()
                    .map(|s| s.iter().map(|&v| h[v as usize]).min().unwrap())
                    .min()
                    .map(|x| (m, x))
            })
            .collect()
    }

    pub fn is_face_closed(&self) -> bool {
        (1..self.simplices.len()).all(|k| {
            self.simplices[k].iter().all(|s| {
                (0..s.len()).all(|j| {
                    let mut f = s.clone();
                    f.remove(j);
                    self.index[k - 1].contains_key(&f)
                })
            })
        })
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        let line = |r: &ComplexRecord| serde_json::to_string(r);
        writeln!(out, "{}", line(&ComplexRecord::Header { kappa: self.kappa, d_max: self.d_max })?)?;
        for v in 0..self.graph.vertex_count() {
            writeln!(
                out,
                "{}",
                line(&ComplexRecord::Vertex {
                    id: v,
                    label: self.graph.label(v).to_string(),
                    height: self.graph.height(v),
                })?
            )?;
        }
        for (u, v) in self.graph.edges() {
            writeln!(out, "{}", line(&ComplexRecord::Edge { u, v })?)?;
        }
        for layer in &self.simplices[1..] {
            for s in layer {
                writeln!(out, "{}", line(&ComplexRecord::Simplex { vertices: s.clone() })?)?;
            }
        }
        Ok(())
    }

    pub fn read_jsonl(input: impl BufRead) -> Result<Self> {
        let mut header = None;
        let mut g = SimpGraph::new();
        let mut edges = Vec::new();
        let mut facets = Vec::new();
        let mut offset = 0;
        for line in input.lines() {
            let line = line?;
            let start = offset;
            offset += line.len() + 1;
            if line.trim().is_empty() {
                continue;
            }
            let rec: ComplexRecord = serde_json::from_str(&line)
                .map_err(|e| Error::parse(start + e.column().saturating_sub(1), e.to_string()))?;
            match rec {
                ComplexRecord::Header { kappa, d_max } => header = Some((kappa, d_max)),
                ComplexRecord::Vertex { id, label, height } => {
                    if id != g.vertex_count() {
                        return Err(Error::invalid("vertex ids must be 0..n-1 in order"));
                    }
                    g.add_vertex(label, height);
                }
                ComplexRecord::Edge { u, v } => edges.push((u, v)),
                ComplexRecord::Simplex { vertices } => facets.push(vertices),
            }
        }
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        let (kappa, d_max) = header.unwrap_or((0, facets.iter().map(|f| f.len().saturating_sub(1)).max().unwrap_or(1)));
        let mut k = Self::from_facets(g, &facets, d_max)?;
        k.kappa = kappa;
        Ok(k)
    }
}

/// Whether every coefficient of `c` is an integer.
pub fn is_integral(c: &Chain) -> bool {
    c.iter().all(|(_, v)| rational::is_integer(v))
}

/// Largest absolute coefficient.
pub fn sup_coefficient(c: &Chain) -> Q {
    c.iter().map(|(_, v)| v.abs()).max().unwrap_or_default()
}

/// Result of [`rips_ball_identity`].
#[derive(Clone, Debug, Serialize)]
pub struct BallIdentityReport {
    pub centers: usize,
    pub max_l: usize,
    pub mismatches: Vec<(usize, usize)>,
}

/// Checks that the full subcomplex on `{x : d_G(x, v) ≤ lκ}` equals the
/// ball of radius `l` in the 1-skeleton of the Rips complex, for every
/// vertex `v` and `l ≤ max_l`.
pub fn rips_ball_identity(k: &SComplex, max_l: usize) -> BallIdentityReport {
    let n = k.vertex_count();
    let skeleton = SimpGraph::from_edges(
        n,
        &k.simplices(1).iter().map(|e| (e[0] as usize, e[1] as usize)).collect::<Vec<_>>(),
    )
    .expect("edges are valid");
    let mismatches = (0..n)
        .into_par_iter()
        .flat_map_iter(|v| {
            let dg = k.graph.bfs(v);
            let dr = skeleton.bfs(v);
            (0..=max_l)
                .filter(|&l| {
                    (0..n).any(|x| {
                        let in_g = dg[x] != UNREACHED && dg[x] as usize <= l * k.kappa as usize;
                        let in_r = dr[x] != UNREACHED && dr[x] as usize <= l;
                        in_g != in_r
                    })
                })
                .map(move |l| (v, l))
                .collect::<Vec<_>>()
        })
        .collect();
    BallIdentityReport {
        centers: n,
        max_l,
        mismatches,
    }
}

/// Largest set of diameter ≤ κ containing a vertex of height ≤ `c`: every
/// simplex of dimension at least its size has `minh > c`.
pub fn low_clique_bound(g: &SimpGraph, kappa: u32, c: u32) -> (usize, Vec<usize>) {
    let n = g.vertex_count();
    let near: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let d = g.bfs_bounded(v, kappa);
            (0..n).filter(|&w| w != v && d[w] != UNREACHED).collect()
        })
        .collect();
    let adj = adjacency_bits(n, near.iter().enumerate().flat_map(|(v, ws)| ws.iter().map(move |&w| (v, w))));
    let low: Vec<usize> = (0..n).filter(|&v| g.height(v) <= c).collect();
    let best = clique::max_clique_meeting(&adj, &low);
    (best.len(), best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn full(n: usize) -> BTreeSet<u32> {
        (0..n as u32).collect()
    }

    #[test]
    fn orientation() {
        assert_eq!(orient(&[2, 0, 1]), Some((vec![0, 1, 2], false)));
        assert_eq!(orient(&[1, 0, 2]), Some((vec![0, 1, 2], true)));
        assert_eq!(orient(&[1, 1]), None);
        assert!(simplex_chain(&[3, 3]).is_zero());
    }

    #[test]
    fn boundary_examples() {
        let e = simplex_chain(&[0, 1]);
        let expect: Chain = [(vec![1], q(1)), (vec![0], q(-1))].into_iter().collect();
        assert_eq!(boundary(&e), expect);
        assert!(boundary(&boundary(&simplex_chain(&[0, 1, 2]))).is_zero());
        // Square 0-1-3-2 triangulated by [0,1,3] and [0,2,3].
        let sq = &simplex_chain(&[0, 1, 3]) - &simplex_chain(&[0, 2, 3]);
        let loop_: Chain = [
            (vec![0, 1], q(1)),
            (vec![1, 3], q(1)),
            (vec![2, 3], q(-1)),
            (vec![0, 2], q(-1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(boundary(&sq), loop_);
    }

    #[test]
    fn stats_and_restriction() {
        let heights = vec![2, 3, 2, 0];
        let z = Chain::new();
        let s = chain_stats(&z, &heights);
        assert_eq!((s.norm.clone(), s.minh, s.maxh), (q(0), None, None));
        let c = &simplex_chain(&[0, 1]).scaled(&q(3)) - &simplex_chain(&[1, 2]).scaled(&q(2));
        let s = chain_stats(&c, &heights);
        assert_eq!((s.norm, s.minh, s.maxh), (q(5), Some(2), Some(3)));
        assert_eq!(restrict(&c, &full(4)), c);
        assert!(restrict(&c, &BTreeSet::new()).is_zero());
        assert_eq!(restrict(&c, &[0, 1].into_iter().collect()).len(), 1);
        assert_eq!(restrict(&c, &support0(&c)), c);
    }

    #[test]
    fn rips_examples() {
        let c6 = SimpGraph::cycle(6);
        let k = SComplex::build_rips(&c6, 1, 2).unwrap();
        assert_eq!((k.count(1), k.count(2)), (6, 0));
        assert_eq!(k.homology_rank(1, true).unwrap(), 1);
        assert_eq!(k.homology_rank(0, true).unwrap(), 0);
        assert_eq!(k.homology_rank(0, false).unwrap(), 1);

        let p3 = SimpGraph::path(3);
        let k = SComplex::build_rips(&p3, 2, 2).unwrap();
        assert_eq!(k.simplices(2), &[vec![0, 1, 2]]);
        assert!(k.is_face_closed());

        let t = SimpGraph::regular_tree(4, 2);
        let k = SComplex::build_rips(&t, 6, 2).unwrap();
        let n = t.vertex_count();
        assert_eq!(k.count(1), n * (n - 1) / 2);
        assert_eq!(k.count(2), n * (n - 1) * (n - 2) / 6);
        for deg in 0..2 {
            assert_eq!(k.homology(deg, true, false).unwrap().rank, 0);
        }
        assert!(matches!(k.homology(2, true, false), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn point_and_exact_path() {
        let k = SComplex::build_rips(&SimpGraph::with_vertices(1), 1, 3).unwrap();
        for deg in 0..3 {
            assert_eq!(k.homology_rank(deg, true).unwrap(), 0);
        }
        // Two disjoint circles: H₁ = 2 needs the exact fallback.
        let mut g = SimpGraph::cycle(5);
        let off = g.vertex_count();
        for i in 0..5 {
            g.add_vertex(format!("b{i}"), 0);
        }
        for i in 0..5 {
            g.add_edge(off + i, off + (i + 1) % 5).unwrap();
        }
        let k = SComplex::build_rips(&g, 1, 2).unwrap();
        let h = k.homology(1, true, false).unwrap();
        assert_eq!(h.rank, 2);
        assert_eq!(k.homology_rank(0, true).unwrap(), 1);
    }

    #[test]
    fn height_profile_table() {
        let mut g = SimpGraph::new();
        for h in [0, 3, 3, 4] {
            g.add_vertex(String::new(), h);
        }
        g.add_edge(1, 2).unwrap();
        g.add_edge(2, 3).unwrap();
        g.add_edge(1, 3).unwrap();
        g.add_edge(0, 1).unwrap();
        let k = SComplex::build_rips(&g, 1, 3).unwrap();
        let p = k.min_height_dimension_profile();
        assert_eq!(p.get(&2), Some(&3));
        assert_eq!(p.get(&1), Some(&0));
        assert_eq!(p.get(&3), None);
        let (sz, _) = low_clique_bound(&g, 1, 0);
        assert_eq!(sz, 2);
        let (sz, _) = low_clique_bound(&g, 1, 3);
        assert_eq!(sz, 3);
    }

    #[test]
    fn ball_identity_and_subcomplex() {
        let g = SimpGraph::grid(4, 3);
        let k = SComplex::build_rips(&g, 2, 2).unwrap();
        assert!(rips_ball_identity(&k, 2).mismatches.is_empty());
        let (sub, orig) = k.full_subcomplex(&[0, 1, 4, 5].into_iter().collect());
        assert_eq!(orig, vec![0, 1, 4, 5]);
        assert_eq!(sub.count(3 - 1), 4);
        assert!(sub.is_face_closed());
    }

    #[test]
    fn jsonl_round_trip() {
        let k = SComplex::build_rips(&SimpGraph::cycle(5), 2, 2).unwrap();
        let mut buf = Vec::new();
        k.write_jsonl(&mut buf).unwrap();
        let r = SComplex::read_jsonl(&buf[..]).unwrap();
        for d in 0..=2 {
            assert_eq!(r.simplices(d), k.simplices(d));
        }
        assert_eq!(r.kappa, 2);
    }
}
