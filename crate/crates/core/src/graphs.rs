//! Simplicial graphs, BFS metrics, geodesics and Cayley graphs.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{CayleyBall, Element, Group, GroupPair};

/// Marker for "not reached" in distance vectors.
pub const UNREACHED: u32 = u32::MAX;

/// Finite simple graph. Vertices carry a text label and a height (zero
/// outside horoballs).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpGraph {
    labels: Vec<String>,
    heights: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

/// Induced subgraph together with the original id of each vertex.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: SimpGraph,
    pub original: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeodesicPath {
    pub vertices: Vec<usize>,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }
}

/// Every geodesic between two vertices, as a layered DAG.
#[derive(Clone, Debug)]
pub struct GeodesicDag {
    pub source: usize,
    pub target: usize,
    pub length: usize,
    /// Vertices lying on some geodesic, by distance from the source.
    pub layers: Vec<Vec<usize>>,
    /// Edges `x → y` with `d(u,y) = d(u,x) + 1`, both on geodesics.
    pub edges: Vec<(usize, usize)>,
}

impl GeodesicDag {
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.layers.iter().flatten().copied()
    }

    /// Number of distinct geodesics (saturating).
    pub fn count_paths(&self) -> u128 {
        let mut ways: HashMap<usize, u128> = HashMap::from([(self.source, 1)]);
        for layer in &self.layers[1..] {
            for &y in layer {
                let w = self
                    .edges
                    .iter()
                    .filter(|e| e.1 == y)
                    .map(|e| ways.get(&e.0).copied().unwrap_or(0))
                    .fold(0u128, |a, b| a.saturating_add(b));
                ways.insert(y, w);
            }
        }
        ways.get(&self.target).copied().unwrap_or(0)
    }

    /// All geodesics, up to `limit` of them.
    pub fn paths(&self, limit: usize) -> Vec<Vec<usize>> {
        let mut succ: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(x, y) in &self.edges {
            succ.entry(x).or_default().push(y);
        }
        let mut out = Vec::new();
        let mut stack = vec![vec![self.source]];
        while let Some(p) = stack.pop() {
            if out.len() >= limit {
                break;
            }
            let last = *p.last().unwrap();
            if last == self.target {
                out.push(p);
                continue;
            }
            for &y in succ.get(&last).into_iter().flatten().rev() {
                let mut q = p.clone();
                q.push(y);
                stack.push(q);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Record {
    Vertex {
        id: usize,
        label: String,
        #[serde(default, skip_serializing_if = "is_zero")]
        height: u32,
    },
    Edge {
        u: usize,
        v: usize,
    },
}

fn is_zero(h: &u32) -> bool {
    *h == 0
}

impl SimpGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with `n` unlabeled vertices (labels are the ids).
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.add_vertex(i.to_string(), 0);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Self::from_edges(n, &edges).unwrap()
    }

    /// `w × h` grid of vertices `(x, y) ↦ y·w + x`.
    pub fn grid(w: usize, h: usize) -> Self {
        let mut edges = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let v = y * w + x;
                if x + 1 < w {
                    edges.push((v, v + 1));
                }
                if y + 1 < h {
                    edges.push((v, v + w));
                }
            }
        }
        Self::from_edges(w * h, &edges).unwrap()
    }

    /// Ball of radius `depth` in the `degree`-regular tree.
    pub fn regular_tree(degree: usize, depth: usize) -> Self {
        let mut g = Self::with_vertices(1);
        let mut frontier = vec![(0usize, degree)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (v, children) in frontier {
                for _ in 0..children {
                    let c = g.add_vertex(g.vertex_count().to_string(), 0);
                    g.add_edge(v, c).unwrap();
                    next.push((c, degree - 1));
                }
            }
            frontier = next;
        }
        g
    }

    pub fn add_vertex(&mut self, label: String, height: u32) -> usize {
        self.labels.push(label);
        self.heights.push(height);
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Adds `{u, v}`; repeated edges are ignored and loops rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::invalid(format!("edge ({u}, {v}) out of range")));
        }
        if u == v {
            return Err(Error::invalid(format!("loop at vertex {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn height(&self, v: usize) -> u32 {
        self.heights[v]
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn bfs(&self, src: usize) -> Vec<u32> {
        self.multi_bfs(std::iter::once(src))
    }

    /// Distances to the nearest source.
    pub fn multi_bfs(&self, sources: impl IntoIterator<Item = usize>) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[x] + 1;
            for &y in &self.adj[x] {
                if dist[y] == UNREACHED {
                    dist[y] = d;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// BFS that stops expanding beyond `radius`.
    pub fn bfs_bounded(&self, src: usize, radius: u32) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if dist[x] == radius {
                continue;
            }
            let d = dist[x] + 1;
            for &y in &self.adj[x] {
                if dist[y] == UNREACHED {
                    dist[y] = d;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        match self.bfs(u)[v] {
            UNREACHED => Err(Error::Unreachable(u, v)),
            d => Ok(d as usize),
        }
    }

    /// Rows of pairwise distances among `vertices` (full BFS per row).
    pub fn distance_matrix(&self, vertices: &[usize]) -> Vec<Vec<u32>> {
        vertices
            .par_iter()
            .map(|&v| {
                let d = self.bfs(v);
                vertices.iter().map(|&w| d[w]).collect()
            })
            .collect()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::invalid(format!("vertex {v} out of range")))
        }
    }

    pub fn induced(&self, vertices: &BTreeSet<usize>) -> Subgraph {
        let original: Vec<usize> = vertices.iter().copied().collect();
        let new_id: HashMap<usize, usize> =
            original.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut graph = SimpGraph::new();
        for &v in &original {
            graph.add_vertex(self.labels[v].clone(), self.heights[v]);
        }
        for (i, &v) in original.iter().enumerate() {
            graph.adj[i] = self.adj[v]
                .iter()
                .filter_map(|w| new_id.get(w).copied())
                .collect();
            graph.adj[i].sort_unstable();
        }
        Subgraph { graph, original }
    }

    pub fn ball(&self, v0: usize, radius: usize) -> Subgraph {
        let d = self.bfs_bounded(v0, radius as u32);
        self.induced(&(0..self.vertex_count()).filter(|&v| d[v] != UNREACHED).collect())
    }

    pub fn neighborhood(&self, set: &BTreeSet<usize>, radius: usize) -> Result<Subgraph> {
        if set.is_empty() {
            return Err(Error::invalid("neighborhood of an empty set"));
        }
        let d = self.multi_bfs(set.iter().copied());
        Ok(self.induced(
            &(0..self.vertex_count())
                .filter(|&v| d[v] as usize <= radius && d[v] != UNREACHED)
                .collect(),
        ))
    }

    /// Lexicographically least vertex sequence among all geodesics `u → v`.
    pub fn canonical_geodesic(&self, u: usize, v: usize) -> Result<GeodesicPath> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let dv = self.bfs(v);
        self.geodesic_with(u, v, &dv)
    }

    /// Canonical geodesic using precomputed distances to `v`.
    pub fn geodesic_with(&self, u: usize, v: usize, dv: &[u32]) -> Result<GeodesicPath> {
        if dv[u] == UNREACHED {
            return Err(Error::Unreachable(u, v));
        }
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            cur = *self.adj[cur]
                .iter()
                .find(|&&w| dv[w] + 1 == dv[cur])
                .expect("BFS predecessor exists");
            path.push(cur);
        }
        Ok(GeodesicPath { vertices: path })
    }

    pub fn geodesic_dag(&self, u: usize, v: usize) -> Result<GeodesicDag> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let du = self.bfs(u);
        let dv = self.bfs(v);
        Ok(self.geodesic_dag_with(u, v, &du, &dv)?)
    }

    pub fn geodesic_dag_with(&self, u: usize, v: usize, du: &[u32], dv: &[u32]) -> Result<GeodesicDag> {
        let d = du[v];
        if d == UNREACHED {
            return Err(Error::Unreachable(u, v));
        }
        let mut layers = vec![Vec::new(); d as usize + 1];
        let mut edges = Vec::new();
        for x in 0..self.vertex_count() {
            if du[x] == UNREACHED || dv[x] == UNREACHED || du[x] + dv[x] != d {
                continue;
            }
            layers[du[x] as usize].push(x);
            for &y in &self.adj[x] {
                if du[y] == du[x] + 1 && dv[y] != UNREACHED && du[y] + dv[y] == d {
                    edges.push((x, y));
                }
            }
        }
        Ok(GeodesicDag {
            source: u,
            target: v,
            length: d as usize,
            layers,
            edges,
        })
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs(0).iter().all(|&d| d != UNREACHED)
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        for v in 0..self.vertex_count() {
            let r = Record::Vertex {
                id: v,
                label: self.labels[v].clone(),
                height: self.heights[v],
            };
            writeln!(out, "{}", serde_json::to_string(&r)?)?;
        }
        for (u, v) in self.edges() {
            writeln!(out, "{}", serde_json::to_string(&Record::Edge { u, v })?)?;
        }
        Ok(())
    }

    pub fn read_jsonl(input: impl BufRead) -> Result<Self> {
        let mut vertices: Vec<(usize, String, u32)> = Vec::new();
        let mut edges = Vec::new();
        let mut offset = 0;
        for line in input.lines() {
            let line = line?;
            let start = offset;
            offset += line.len() + 1;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line)
                .map_err(|e| Error::parse(start + e.column().saturating_sub(1), e.to_string()))?;
            match rec {
                Record::Vertex { id, label, height } => vertices.push((id, label, height)),
                Record::Edge { u, v } => edges.push((u, v)),
            }
        }
        vertices.sort_by_key(|v| v.0);
        let mut g = SimpGraph::new();
        for (i, (id, label, h)) in vertices.into_iter().enumerate() {
            if id != i {
                return Err(Error::invalid("vertex ids must be 0..n-1"));
            }
            g.add_vertex(label, h);
        }
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

/// Induced subgraph of the simplicial Cayley graph on a ball about 1.
/// Vertex `k` is `ball.elements[k]`, labelled by its normal form.
pub fn simplicial_cayley_graph(pair: &GroupPair, ball: &CayleyBall) -> SimpGraph {
    let mut g = SimpGraph::new();
    for e in &ball.elements {
        g.add_vertex(pair.group.format(e), 0);
    }
    for (u, e) in ball.elements.iter().enumerate() {
        for s in &pair.gens {
            if let Some(v) = ball.index_of(&pair.group.mul(e, s)) {
                g.add_edge(u, v).expect("S excludes the identity");
            }
        }
    }
    g
}

pub fn simplicial_cayley_ball(pair: &GroupPair, radius: usize) -> (CayleyBall, SimpGraph) {
    let ball = pair.ball(radius);
    let g = simplicial_cayley_graph(pair, &ball);
    (ball, g)
}

/// Cayley graph with one edge `x → xs` labelled `(x, s)` per generator.
#[derive(Clone, Debug, Serialize)]
pub struct LabeledGraph {
    pub labels: Vec<String>,
    pub elements: Vec<Element>,
    /// `(x, xs, index of s)`.
    pub edges: Vec<(usize, usize, usize)>,
    pub generators: Vec<String>,
}

impl LabeledGraph {
    pub fn vertex_count(&self) -> usize {
        self.elements.len()
    }
}

/// Labelled Cayley graph on the ball of radius `radius` in the undirected
/// word metric of `S ∪ S⁻¹`. `S` need not be symmetric.
pub fn labeled_cayley_graph(group: &Group, gens: &[Element], radius: usize) -> Result<LabeledGraph> {
    for s in gens {
        group.check(s)?;
    }
    let mut steps: Vec<Element> = gens.to_vec();
    steps.extend(gens.iter().map(|s| group.inv(s)));
    let id = group.identity();
    let mut dist = HashMap::from([(id.clone(), 0usize)]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        if d == radius {
            continue;
        }
        for s in &steps {
            let h = group.mul(&g, s);
            if !dist.contains_key(&h) {
                dist.insert(h.clone(), d + 1);
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    order.sort_by_key(|g| (dist[g], group.shortlex_key(g)));
    let index: HashMap<&Element, usize> = order.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut edges = Vec::new();
    for (x, g) in order.iter().enumerate() {
        for (k, s) in gens.iter().enumerate() {
            if let Some(&y) = index.get(&group.mul(g, s)) {
                edges.push((x, y, k));
            }
        }
    }
    Ok(LabeledGraph {
        labels: order.iter().map(|g| group.format(g)).collect(),
        edges,
        generators: gens.iter().map(|s| group.format(s)).collect(),
        elements: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn distances() {
        let p = SimpGraph::path(5);
        assert_eq!(p.distance(2, 2).unwrap(), 0);
        assert_eq!(p.distance(0, 4).unwrap(), 4);
        let t = SimpGraph::regular_tree(4, 3);
        // First leaves of two different top-level branches.
        let leaves: Vec<usize> = (0..t.vertex_count()).filter(|&v| t.neighbors(v).len() == 1).collect();
        let a = leaves[0];
        let b = *leaves.last().unwrap();
        assert_eq!(t.distance(a, b).unwrap(), 6);
        let mut two = SimpGraph::with_vertices(2);
        two.add_vertex("x".into(), 0);
        assert!(matches!(two.distance(0, 1), Err(Error::Unreachable(0, 1))));
    }

    #[test]
    fn balls_and_neighborhoods() {
        let c6 = SimpGraph::cycle(6);
        let b0 = c6.ball(0, 0);
        assert_eq!((b0.graph.vertex_count(), b0.graph.edge_count()), (1, 0));
        let b1 = c6.ball(0, 1);
        assert_eq!((b1.graph.vertex_count(), b1.graph.edge_count()), (3, 2));
        let n = c6.neighborhood(&set(&[0, 1]), 1).unwrap();
        assert_eq!(n.graph.vertex_count(), 4);
        let n0 = c6.neighborhood(&set(&[0, 2]), 0).unwrap();
        assert_eq!(n0.original, vec![0, 2]);
        assert!(c6.neighborhood(&BTreeSet::new(), 1).is_err());
    }

    #[test]
    fn geodesics() {
        let c6 = SimpGraph::cycle(6);
        assert_eq!(c6.canonical_geodesic(0, 3).unwrap().vertices, vec![0, 1, 2, 3]);
        assert_eq!(c6.canonical_geodesic(3, 0).unwrap().vertices, vec![3, 2, 1, 0]);
        assert_eq!(c6.canonical_geodesic(4, 4).unwrap().len(), 0);
        let c4 = SimpGraph::cycle(4);
        assert_eq!(c4.geodesic_dag(0, 2).unwrap().count_paths(), 2);
        let g = SimpGraph::grid(3, 3);
        let dag = g.geodesic_dag(0, 8).unwrap();
        assert_eq!(dag.count_paths(), 6);
        assert_eq!(dag.paths(100).len(), 6);
        assert!(dag.paths(100).iter().all(|p| p.len() == 5));
        let t = SimpGraph::regular_tree(3, 2);
        assert_eq!(t.geodesic_dag(4, 7).unwrap().count_paths(), 1);
    }

    #[test]
    fn cayley_examples() {
        let f2 = GroupPair::parse("group free 2\nperipheral 1: a\n", None).unwrap();
        let (_, g) = simplicial_cayley_ball(&f2, 1);
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 4));
        let z = GroupPair::parse("group abelian 1\nperipheral 1: x\n", None).unwrap();
        let (_, g) = simplicial_cayley_ball(&z, 3);
        assert_eq!((g.vertex_count(), g.edge_count()), (7, 6));
        let z2 = GroupPair::parse("group abelian 2\nperipheral 1: x\n", None).unwrap();
        let (_, g) = simplicial_cayley_ball(&z2, 2);
        assert_eq!((g.vertex_count(), g.edge_count()), (13, 16));
    }

    #[test]
    fn labeled_examples() {
        let z = Group::free_abelian(1);
        let l = labeled_cayley_graph(&z, &[z.normal_form("x").unwrap()], 2).unwrap();
        assert_eq!((l.vertex_count(), l.edges.len()), (5, 4));
        let s3 = Group::symmetric(3);
        let gens = [s3.normal_form("(12)").unwrap(), s3.normal_form("(123)").unwrap()];
        let l = labeled_cayley_graph(&s3, &gens, 6).unwrap();
        assert_eq!((l.vertex_count(), l.edges.len()), (6, 12));
        let both = [z.normal_form("x").unwrap(), z.normal_form("x^-1").unwrap()];
        let l = labeled_cayley_graph(&z, &both, 1).unwrap();
        assert_eq!(l.edges.iter().filter(|e| (e.0, e.1) == (0, 1) || (e.0, e.1) == (1, 0)).count(), 2);
    }

    #[test]
    fn jsonl_round_trip() {
        let mut g = SimpGraph::cycle(5);
        g.add_vertex("top".into(), 3);
        g.add_edge(5, 0).unwrap();
        let mut buf = Vec::new();
        g.write_jsonl(&mut buf).unwrap();
        let h = SimpGraph::read_jsonl(&buf[..]).unwrap();
        assert_eq!(g, h);
        assert!(SimpGraph::read_jsonl(&b"{\"type\":\"edge\",\"u\":0}\n"[..]).is_err());
    }
}
