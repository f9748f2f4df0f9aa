//! Stallings folding for finitely generated subgroups of free groups.

use std::collections::BTreeMap;

/// Folded core graph of a subgroup; vertex 0 is the basepoint.
#[derive(Clone, Debug)]
pub struct FoldedGraph {
    /// `edges[v][l]` is the target of the edge labelled by signed letter `l`.
    edges: Vec<BTreeMap<i32, usize>>,
}

struct Folder {
    parent: Vec<usize>,
    edges: Vec<BTreeMap<i32, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn new_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.edges.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn half_edge(&mut self, u: usize, l: i32, v: usize) {
        match self.edges[u].get(&l).copied() {
            Some(w) => self.pending.push((w, v)),
            None => {
                self.edges[u].insert(l, v);
            }
        }
    }

    fn add_edge(&mut self, u: usize, l: i32, v: usize) {
        let (u, v) = (self.find(u), self.find(v));
        self.half_edge(u, l, v);
        self.half_edge(v, -l, u);
        self.drain();
    }

    fn drain(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.edges[gone]);
            for (l, t) in moved {
                let t = self.find(t);
                self.half_edge(keep, l, t);
            }
        }
    }
}

impl FoldedGraph {
    /// Fold the bouquet of the given freely reduced words.
    pub fn new(words: &[Vec<i32>]) -> Self {
        let mut f = Folder {
            parent: vec![0],
            edges: vec![BTreeMap::new()],
            pending: Vec::new(),
        };
        for w in words {
            if w.is_empty() {
                continue;
            }
            let mut cur = 0;
            for (k, &l) in w.iter().enumerate() {
                let next = if k + 1 == w.len() { 0 } else { f.new_vertex() };
                f.add_edge(cur, l, next);
                cur = next;
            }
        }
        // Relabel surviving vertices densely, keeping the basepoint at 0.
        let n = f.parent.len();
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            let r = f.find(v);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
        }
        let mut edges = vec![BTreeMap::new(); next];
        for v in 0..n {
            if f.find(v) != v {
                continue;
            }
            let targets: Vec<(i32, usize)> = f.edges[v].iter().map(|(&l, &t)| (l, t)).collect();
            for (l, t) in targets {
                let t = f.find(t);
                edges[ids[v]].insert(l, ids[t]);
            }
        }
        Self { edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of (undirected) edges.
    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|m| m.len()).sum::<usize>() / 2
    }

    /// A reduced word lies in the subgroup iff it reads a closed path at
    /// the basepoint.
    pub fn accepts(&self, word: &[i32]) -> bool {
        let mut cur = 0;
        for l in word {
            match self.edges[cur].get(l) {
                Some(&t) => cur = t,
                None => return false,
            }
        }
        cur == 0
    }

    /// Folded graphs are deterministic: no vertex has two edges with the
    /// same signed label.
    pub fn is_folded(&self) -> bool {
        self.edges.iter().enumerate().all(|(v, m)| {
            m.iter()
                .all(|(l, &t)| self.edges[t].get(&-l) == Some(&v))
        })
    }
}
