//! Combinatorial horoballs and truncated cusped graphs.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{simplicial_cayley_graph, SimpGraph, Subgraph, UNREACHED};
use crate::groups::{CayleyBall, Element, GroupPair};
use crate::rational::Q;

/// Horoball over a finite graph `G`: vertex `(v, n)` has id `n·|G| + v`.
/// Level-`n` vertices are joined when `0 < d_G ≤ 2ⁿ`, consecutive levels
/// vertically.
pub fn build_horoball(g: &SimpGraph, h_max: u32) -> SimpGraph {
    let n = g.vertex_count();
    let mut out = SimpGraph::new();
    for level in 0..=h_max {
        for v in 0..n {
            out.add_vertex(format!("({},{level})", g.label(v)), level);
        }
    }
    let dist: Vec<Vec<u32>> = (0..n).map(|v| g.bfs(v)).collect();
    for level in 0..=h_max {
        let span = 1u64 << level.min(63);
        for u in 0..n {
            for w in u + 1..n {
                let d = dist[u][w];
                if d != UNREACHED && d as u64 <= span {
                    out.add_edge(level as usize * n + u, level as usize * n + w).unwrap();
                }
            }
            if level < h_max {
                out.add_edge(level as usize * n + u, (level as usize + 1) * n + u).unwrap();
            }
        }
    }
    out
}

/// Default height truncation `⌈log₂(2R)⌉ + 2`.
pub fn default_h_max(r_base: usize) -> u32 {
    let m = (2 * r_base.max(1)) as u64;
    (64 - (m - 1).leading_zeros()) + 2
}

/// One horoball of a cusped graph: the coset `rep·Γ_i` traced on the ball.
#[derive(Clone, Debug, Serialize)]
pub struct Horoball {
    pub index: usize,
    pub representative: Element,
    /// Ball indices (= base vertex ids) of the coset members.
    pub members: Vec<usize>,
    /// `levels[n][k]` is the vertex `(members[k], i, n)`.
    pub levels: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CuspedVertex {
    /// Ball index of the base element `g`.
    pub base: usize,
    /// Horoball id; `None` for base vertices.
    pub horoball: Option<usize>,
    pub height: u32,
}

#[derive(Clone, Debug)]
pub struct CuspedGraph {
    pub pair: GroupPair,
    pub ball: CayleyBall,
    pub r_base: usize,
    pub h_max: u32,
    pub graph: SimpGraph,
    pub horoballs: Vec<Horoball>,
    pub vertices: Vec<CuspedVertex>,
    /// `(peripheral index, coset class)` of each base vertex, per index.
    pub coset_of: Vec<Vec<usize>>,
    pub delta_estimate: Option<Q>,
    pub c: Option<u32>,
}

impl CuspedGraph {
    pub fn build(pair: &GroupPair, r_base: usize, h_max: u32) -> Result<Self> {
        if r_base < 1 || h_max < 1 {
            return Err(Error::invalid("R_base and H_max must be at least 1"));
        }
        pair.require_compatible()?;
        let ball = pair.ball(r_base);
        let base = simplicial_cayley_graph(pair, &ball);
        let mut graph = base.clone();
        let mut vertices: Vec<CuspedVertex> = (0..ball.len())
            .map(|b| CuspedVertex {
                base: b,
                horoball: None,
                height: 0,
            })
            .collect();
        let mut horoballs = Vec::new();
        let mut coset_of = Vec::new();
        for i in 0..pair.index_count() {
            let part = pair.coset_partition(&ball, i);
            let t = pair.peripheral_gens(i);
            let mut class_to_horoball = Vec::new();
            for (c, members) in part.members.iter().enumerate() {
                let hid = horoballs.len();
                class_to_horoball.push(hid);
                let trace = coset_trace(pair, &ball, members, &t);
                let dist: Vec<Vec<u32>> = (0..members.len()).map(|k| trace.bfs(k)).collect();
                let mut levels = vec![members.clone()];
                for n in 1..=h_max {
                    let layer: Vec<usize> = members
                        .iter()
                        .map(|&m| {
                            vertices.push(CuspedVertex {
                                base: m,
                                horoball: Some(hid),
                                height: n,
                            });
                            graph.add_vertex(
                                format!("({},{},{n})", pair.group.format(&ball.elements[m]), pair.labels[i]),
                                n,
                            )
                        })
                        .collect();
                    let span = 1u64 << n.min(63);
                    for a in 0..members.len() {
                        graph.add_edge(levels[n as usize - 1][a], layer[a]).unwrap();
                        for b in a + 1..members.len() {
                            let d = dist[a][b];
                            if d != UNREACHED && d as u64 <= span {
                                graph.add_edge(layer[a], layer[b]).unwrap();
                            }
                        }
                    }
                    levels.push(layer);
                }
                horoballs.push(Horoball {
                    index: i,
                    representative: ball.elements[part.reps[c]].clone(),
                    members: members.clone(),
                    levels,
                });
            }
            coset_of.push(part.class_of.iter().map(|&c| class_to_horoball[c]).collect());
        }
        Ok(Self {
            pair: pair.clone(),
            ball,
            r_base,
            h_max,
            graph,
            horoballs,
            vertices,
            coset_of,
            delta_estimate: None,
            c: None,
        })
    }

    pub fn build_default(pair: &GroupPair, r_base: usize) -> Result<Self> {
        Self::build(pair, r_base, default_h_max(r_base))
    }

    pub fn base_count(&self) -> usize {
        self.ball.len()
    }

    /// Records the hyperbolicity estimate and a constant `C > δ`.
    pub fn set_delta(&mut self, delta: Q, c: u32) -> Result<()> {
        if Q::from_integer(c.into()) <= delta {
            return Err(Error::invalid("C must exceed the hyperbolicity estimate"));
        }
        self.delta_estimate = Some(delta);
        self.c = Some(c);
        Ok(())
    }

    /// Vertex `(g, i, n)`; for `n = 0` the base vertex regardless of `i`.
    pub fn vertex(&self, g: &Element, i: usize, n: u32) -> Option<usize> {
        let b = self.ball.index_of(g)?;
        if n == 0 {
            return Some(b);
        }
        if n > self.h_max || i >= self.coset_of.len() {
            return None;
        }
        let h = &self.horoballs[self.coset_of[i][b]];
        let k = h.members.iter().position(|&m| m == b)?;
        Some(h.levels[n as usize][k])
    }

    /// Key identifying a vertex across truncations: `(g, i, n)` with `i`
    /// dropped at height 0.
    pub fn key(&self, v: usize) -> (Element, Option<usize>, u32) {
        let cv = self.vertices[v];
        (
            self.ball.elements[cv.base].clone(),
            cv.horoball.map(|h| self.horoballs[h].index),
            cv.height,
        )
    }

    /// Horoballs containing `v` (all horoballs over its base at height 0).
    pub fn horoballs_of(&self, v: usize) -> Vec<usize> {
        let cv = self.vertices[v];
        match cv.horoball {
            Some(h) => vec![h],
            None => self.coset_of.iter().map(|c| c[cv.base]).collect(),
        }
    }

    pub fn horoball_vertices(&self, h: usize, min_height: u32) -> Result<Vec<usize>> {
        let hb = self
            .horoballs
            .get(h)
            .ok_or_else(|| Error::invalid(format!("unknown horoball {h}")))?;
        if min_height > self.h_max {
            return Ok(Vec::new());
        }
        Ok(hb.levels[min_height as usize..].iter().flatten().copied().collect())
    }

    /// Full subgraph on the vertices of horoball `h` with height ≥ n.
    pub fn n_horoball(&self, h: usize, n: u32) -> Result<Subgraph> {
        if n > self.h_max {
            return Err(Error::invalid(format!("height {n} exceeds H_max {}", self.h_max)));
        }
        let vs: BTreeSet<usize> = self.horoball_vertices(h, n)?.into_iter().collect();
        Ok(self.graph.induced(&vs))
    }

    pub fn write_jsonl(&self, out: impl std::io::Write) -> Result<()> {
        self.graph.write_jsonl(out)
    }
}

/// Induced Cayley graph of a coset trace w.r.t. `T = S ∩ Γ_i`; vertex `k`
/// is `members[k]`.
fn coset_trace(pair: &GroupPair, ball: &CayleyBall, members: &[usize], t: &[Element]) -> SimpGraph {
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let mut g = SimpGraph::with_vertices(members.len());
    for (k, &m) in members.iter().enumerate() {
        for s in t {
            if let Some(b) = ball.index_of(&pair.group.mul(&ball.elements[m], s)) {
                if let Some(&k2) = pos.get(&b) {
                    g.add_edge(k, k2).unwrap();
                }
            }
        }
    }
    g
}

/// Compares a truncation with an enlarged one to certify distances and
/// geodesics.
pub struct TruncationCheck<'a> {
    pub small: &'a CuspedGraph,
    pub large: CuspedGraph,
    /// Id in `large` of each vertex of `small`.
    pub image: Vec<usize>,
    in_small: Vec<bool>,
}

impl<'a> TruncationCheck<'a> {
    pub fn new(x: &'a CuspedGraph, extra_radius: usize, extra_height: u32) -> Result<Self> {
        let large = CuspedGraph::build(&x.pair, x.r_base + extra_radius, x.h_max + extra_height)?;
        let mut image = Vec::with_capacity(x.graph.vertex_count());
        for v in 0..x.graph.vertex_count() {
            let (g, i, n) = x.key(v);
            image.push(
                large
                    .vertex(&g, i.unwrap_or(0), n)
                    .expect("enlarged truncation contains the original"),
            );
        }
        let mut in_small = vec![false; large.graph.vertex_count()];
        for &w in &image {
            in_small[w] = true;
        }
        Ok(Self {
            small: x,
            large,
            image,
            in_small,
        })
    }

    /// Distances from `u` in both truncations (small ids, large ids).
    pub fn distances(&self, u: usize) -> (Vec<u32>, Vec<u32>) {
        (self.small.graph.bfs(u), self.large.graph.bfs(self.image[u]))
    }

    /// For each `v` in `targets`: distance agrees in both truncations and
    /// every geodesic of the enlarged graph stays inside the original.
    pub fn safe_pairs(&self, u: usize, targets: &[usize]) -> Vec<bool> {
        let (ds, dl) = self.distances(u);
        targets
            .iter()
            .map(|&v| {
                if ds[v] == UNREACHED || ds[v] != dl[self.image[v]] {
                    return false;
                }
                let dv = self.large.graph.bfs(self.image[v]);
                let d = dl[self.image[v]];
                (0..dl.len()).all(|x| {
                    dl[x] == UNREACHED || dv[x] == UNREACHED || dl[x] + dv[x] != d || self.in_small[x]
                })
            })
            .collect()
    }

    /// Whether all pairwise distances within `set` agree in both
    /// truncations.
    pub fn distances_stable(&self, set: &[usize]) -> bool {
        set.par_iter().all(|&u| {
            let (ds, dl) = self.distances(u);
            set.iter()
                .all(|&v| ds[v] != UNREACHED && ds[v] == dl[self.image[v]])
        })
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConvexityReport {
    pub c: u32,
    pub horoballs_checked: usize,
    pub pairs_checked: usize,
    pub pairs_skipped_unsafe: usize,
    pub geodesics_checked: u128,
    /// `(u, v, offending vertex)`.
    pub violations: Vec<(usize, usize, usize)>,
}

/// For every truncation-safe pair of vertices of height ≥ C in one horoball,
/// checks that every geodesic stays in that horoball at height ≥ C.
pub fn check_horoball_convexity(x: &CuspedGraph, c: u32, check: &TruncationCheck) -> ConvexityReport {
    let mut report = ConvexityReport {
        c,
        ..Default::default()
    };
    for (h, hb) in x.horoballs.iter().enumerate() {
        if c as usize >= hb.levels.len() {
            continue;
        }
        let vs = x.horoball_vertices(h, c).unwrap();
        if vs.len() < 2 {
            continue;
        }
        report.horoballs_checked += 1;
        let inside: BTreeSet<usize> = vs.iter().copied().collect();
        let results: Vec<_> = vs
            .par_iter()
            .enumerate()
            .map(|(a, &u)| {
                let targets = &vs[a + 1..];
                let safe = check.safe_pairs(u, targets);
                let du = x.graph.bfs(u);
                let mut out = (0usize, 0usize, 0u128, Vec::new());
                for (&v, ok) in targets.iter().zip(safe) {
                    if !ok {
                        out.1 += 1;
                        continue;
                    }
                    out.0 += 1;
                    let dv = x.graph.bfs(v);
                    let dag = x.graph.geodesic_dag_with(u, v, &du, &dv).unwrap();
                    out.2 = out.2.saturating_add(dag.count_paths());
                    for w in dag.vertices() {
                        if !inside.contains(&w) {
                            out.3.push((u, v, w));
                        }
                    }
                }
                out
            })
            .collect();
        for (ok, skipped, geos, viol) in results {
            report.pairs_checked += ok;
            report.pairs_skipped_unsafe += skipped;
            report.geodesics_checked = report.geodesics_checked.saturating_add(geos);
            report.violations.extend(viol);
        }
    }
    report
}

/// `(minh, maxh)` over a vertex set.
pub fn height_profile(g: &SimpGraph, vertices: impl IntoIterator<Item = usize>) -> Result<(u32, u32)> {
    let mut it = vertices.into_iter().map(|v| g.height(v));
    let first = it.next().ok_or_else(|| Error::invalid("height profile of an empty set"))?;
    Ok(it.fold((first, first), |(lo, hi), h| (lo.min(h), hi.max(h))))
}
