//! Exact maximum cliques by branch and bound with greedy colouring bounds.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a &= !b;
        }
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

pub struct MaxClique<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    nodes: u64,
}

impl<'a> MaxClique<'a> {
    pub fn new(adj: &'a [Bits]) -> Self {
        Self {
            adj,
            best: Vec::new(),
            nodes: 0,
        }
    }

    /// Seeds the incumbent so that only strictly larger cliques are sought.
    pub fn with_incumbent(mut self, clique: Vec<usize>) -> Self {
        self.best = clique;
        self
    }

    pub fn best(&self) -> &[usize] {
        &self.best
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Largest clique containing all of `base` (assumed a clique) and
    /// otherwise drawn from `candidates` (assumed adjacent to all of base).
    pub fn search(&mut self, base: Vec<usize>, candidates: &Bits) {
        let mut clique = base;
        if clique.len() > self.best.len() {
            self.best = clique.clone();
        }
        self.expand(&mut clique, candidates);
    }

    fn color_sort(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = p.clone();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.remove(v);
                q.remove(v);
                q.and_not_assign(&self.adj[v]);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    fn expand(&mut self, clique: &mut Vec<usize>, p: &Bits) {
        self.nodes += 1;
        let (order, colors) = self.color_sort(p);
        let mut p = p.clone();
        for k in (0..order.len()).rev() {
            if clique.len() + colors[k] <= self.best.len() {
                return;
            }
            let v = order[k];
            clique.push(v);
            let np = p.and(&self.adj[v]);
            if np.is_empty() {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.expand(clique, &np);
            }
            clique.pop();
            p.remove(v);
        }
    }
}

/// Maximum clique meeting `required` (a vertex set), or the empty clique.
pub fn max_clique_meeting(adj: &[Bits], required: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut allowed = Bits::new(n);
    (0..n).for_each(|v| allowed.insert(v));
    let mut mc = MaxClique::new(adj);
    for &v in required {
        let cand = allowed.and(&adj[v]);
        if cand.count() + 1 > mc.best().len() {
            mc.search(vec![v], &cand);
        }
        // Cliques through v are done; later searches may skip it.
        allowed.remove(v);
    }
    mc.best
}

pub fn adjacency_bits(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Bits> {
    let mut adj = vec![Bits::new(n); n];
    for (u, v) in edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, adj: &[Bits], required: &[usize]) -> usize {
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if !vs.iter().any(|v| required.contains(v)) {
                continue;
            }
            let ok = vs.iter().all(|&a| vs.iter().all(|&b| a == b || adj[a].contains(b)));
            if ok {
                best = best.max(vs.len());
            }
        }
        best
    }

    #[test]
    fn matches_brute_force() {
        let mut seed = 12345u64;
        for _ in 0..40 {
            let n = 11;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if seed >> 33 & 3 != 0 {
                        edges.push((u, v));
                    }
                }
            }
            let adj = adjacency_bits(n, edges);
            for req in [vec![0], vec![3, 7], (0..n).collect::<Vec<_>>()] {
                let c = max_clique_meeting(&adj, &req);
                assert_eq!(c.len(), brute(n, &adj, &req));
                assert!(c.iter().any(|v| req.contains(v)));
            }
        }
    }
}
