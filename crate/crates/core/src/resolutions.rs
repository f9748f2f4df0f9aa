//! Standard resolutions of group pairs: the complex `St_*` on tuples of
//! `IΓ = Γ × I`, its relative quotient by `St′`, the map `Φ`, absolute and
//! relative cones, the symmetrized chain map out of a cusped Rips complex,
//! the naive bicombing, and the bar-resolution comparison for finite pairs.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complexes::{self, rank, Chain};
use crate::cusped::CuspedGraph;
use crate::error::{Error, Result};
use crate::geomfill::high_components;
use crate::graphs::SimpGraph;
use crate::groups::{Element, GroupPair};
use crate::lincomb::LinComb;
use crate::rational::{self, q, qf, Q};

/// A point `(g, i)` of `IΓ`, with `g` given by its index in the window.
pub type Point = (usize, usize);
pub type Tuple = Vec<Point>;
/// Chain of `St_k`: tuples of length `k + 1`.
pub type StChain = LinComb<Tuple>;
/// Coset `gΓ_i` as `(i, window index of its first member)`.
pub type CosetKey = (usize, usize);
/// Element of `ℝ(Γ/Γ′)`.
pub type DeltaElement = LinComb<CosetKey>;
/// Cusped vertex key `(g, i, height)`, `i` absent at height 0.
pub type CuspedKey = (Element, Option<usize>, u32);

/// `∂(x_0, …, x_k) = Σ_j (-1)^j (x_0, …, x̂_j, …, x_k)`.
pub fn st_boundary(c: &StChain) -> StChain {
    c.map_linear(|t| {
        let mut out = StChain::new();
        if t.len() < 2 {
            return out;
        }
        for j in 0..t.len() {
            let mut face = t.clone();
            face.remove(j);
            out.add_term(face, if j % 2 == 0 { Q::one() } else { -Q::one() });
        }
        out
    })
}

/// Degree of a homogeneous chain; `None` for the zero chain.
pub fn st_degree(c: &StChain) -> Result<Option<usize>> {
    let mut deg = None;
    for t in c.keys() {
        if t.is_empty() {
            return Err(Error::invalid("empty tuple"));
        }
        match deg {
            None => deg = Some(t.len() - 1),
            Some(d) if d != t.len() - 1 => return Err(Error::invalid("chain is not homogeneous")),
            _ => {}
        }
    }
    Ok(deg)
}

/// Finite subset of `Γ` on which chains of `St_*` live, with the traces of
/// the cosets `gΓ_i`.
#[derive(Clone, Debug)]
pub struct StWindow {
    pub pair: GroupPair,
    pub elements: Vec<Element>,
    index: HashMap<Element, usize>,
    /// `class_of[i][g]`: window index of the first member of `gΓ_i`.
    class_of: Vec<Vec<usize>>,
}

impl StWindow {
    pub fn new(pair: &GroupPair, elements: Vec<Element>) -> Result<Self> {
        let mut uniq = Vec::new();
        let mut index = HashMap::new();
        for g in elements {
            pair.group.check(&g)?;
            if !index.contains_key(&g) {
                index.insert(g.clone(), uniq.len());
                uniq.push(g);
            }
        }
        if uniq.is_empty() {
            return Err(Error::invalid("empty window"));
        }
        let class_of = (0..pair.index_count())
            .map(|i| {
                let mut firsts: Vec<usize> = Vec::new();
                uniq.iter()
                    .enumerate()
                    .map(|(a, g)| match firsts.iter().find(|&&f| pair.same_coset(i, &uniq[f], g)) {
                        Some(&f) => f,
                        None => {
                            firsts.push(a);
                            a
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            pair: pair.clone(),
            elements: uniq,
            index,
            class_of,
        })
    }

    /// Cayley ball of the given radius about the identity.
    pub fn ball(pair: &GroupPair, radius: usize) -> Result<Self> {
        Self::new(pair, pair.ball(radius).elements)
    }

    /// The whole group (finite groups only).
    pub fn whole(pair: &GroupPair) -> Result<Self> {
        let els = pair
            .group
            .elements()
            .ok_or_else(|| Error::Unsupported("whole-group window needs a finite group".into()))?;
        Self::new(pair, els)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_count(&self) -> usize {
        self.pair.index_count()
    }

    pub fn point(&self, g: &Element, i: usize) -> Result<Point> {
        let a = self
            .index
            .get(g)
            .ok_or_else(|| Error::OutsideRegion(self.pair.group.format(g)))?;
        if i >= self.index_count() {
            return Err(Error::invalid(format!("no peripheral with index {i}")));
        }
        Ok((*a, i))
    }

    pub fn format_point(&self, p: &Point) -> String {
        format!("{}^{}", self.pair.group.format(&self.elements[p.0]), p.1)
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if p.0 >= self.len() {
            return Err(Error::OutsideRegion(format!("window index {}", p.0)));
        }
        if p.1 >= self.index_count() {
            return Err(Error::invalid(format!("no peripheral with index {}", p.1)));
        }
        Ok(())
    }

    /// Checks that every tuple lies in the window; returns the degree.
    pub fn check(&self, c: &StChain) -> Result<Option<usize>> {
        for t in c.keys() {
            t.iter().try_for_each(|p| self.check_point(p))?;
        }
        st_degree(c)
    }

    fn check_degree(&self, c: &StChain, k: usize) -> Result<()> {
        match self.check(c)? {
            Some(d) if d != k => Err(Error::invalid(format!("expected a degree-{k} chain, got degree {d}"))),
            _ => Ok(()),
        }
    }

    pub fn coset(&self, p: &Point) -> CosetKey {
        (p.1, self.class_of[p.1][p.0])
    }

    /// Basis tuples of `St′`: one index `i` throughout and every entry in
    /// `x_0Γ_i`.
    pub fn in_st_prime(&self, t: &[Point]) -> bool {
        let Some(&(g0, i)) = t.first() else {
            return false;
        };
        let c0 = self.class_of[i][g0];
        t.iter().all(|&(g, j)| j == i && self.class_of[i][g] == c0)
    }

    /// `pr`: drop the `St′` tuples.
    pub fn project(&self, c: &StChain) -> StChain {
        c.filter(|t| !self.in_st_prime(t))
    }

    /// `j`: the right inverse of `pr`, identity on reduced representatives.
    pub fn lift(&self, b: &StChain) -> Result<StChain> {
        self.check(b)?;
        if b.keys().any(|t| self.in_st_prime(t)) {
            return Err(Error::invalid("relative chain has a term in St′"));
        }
        Ok(b.clone())
    }

    /// `∂^rel = pr ∘ ∂ ∘ j`.
    pub fn rel_boundary(&self, b: &StChain) -> Result<StChain> {
        Ok(self.project(&st_boundary(&self.lift(b)?)))
    }

    /// Augmentation `St_1^rel → Δ`, `(x, y) ↦ [y] − [x]`.
    pub fn rel_augmentation(&self, b: &StChain) -> Result<DeltaElement> {
        self.check_degree(b, 1)?;
        let mut out = DeltaElement::new();
        for (t, v) in b.iter() {
            if self.in_st_prime(t) {
                continue;
            }
            out.add_term(self.coset(&t[1]), v.clone());
            out.add_term(self.coset(&t[0]), -v.clone());
        }
        Ok(out)
    }

    /// `Φ(c) = (1/Σα⁺) Σ α_x⁻ α_y⁺ [x, y]` on degree-0 chains.
    pub fn phi(&self, c: &StChain) -> Result<StChain> {
        self.check_degree(c, 0)?;
        let pos: Vec<(Point, Q)> = c.iter().filter(|(_, v)| v.is_positive()).map(|(t, v)| (t[0], v.clone())).collect();
        let neg: Vec<(Point, Q)> = c.iter().filter(|(_, v)| v.is_negative()).map(|(t, v)| (t[0], -v.clone())).collect();
        if c.is_zero() {
            return Ok(StChain::new());
        }
        let total: Q = pos.iter().map(|(_, v)| v).sum();
        if total.is_zero() {
            return Err(Error::invalid("Φ is undefined on a chain with no positive part"));
        }
        let mut out = StChain::new();
        for (x, a) in &neg {
            for (y, b) in &pos {
                out.add_term(vec![*x, *y], a * b / &total);
            }
        }
        Ok(out)
    }

    /// Absolute cone `[y, (x_0, …, x_k)] = (y, x_0, …, x_k)`.
    pub fn cone(&self, y: Point, c: &StChain) -> Result<StChain> {
        self.check_point(&y)?;
        self.check(c)?;
        Ok(c.map_linear(|t| {
            let mut u = Vec::with_capacity(t.len() + 1);
            u.push(y);
            u.extend_from_slice(t);
            StChain::single(u, Q::one())
        }))
    }

    /// `[y, b]_rel = pr[y, j(b) − Σ_s Φ(∂^s j(b))]`, where `∂^s` keeps the
    /// part of `∂` supported on the coset `s`. A piece with no positive
    /// part contributes nothing.
    pub fn relative_cone(&self, y: Point, b: &StChain) -> Result<StChain> {
        self.check_degree(b, 1)?;
        let jb = self.lift(b)?;
        let mut parts: BTreeMap<CosetKey, StChain> = BTreeMap::new();
        for (t, v) in st_boundary(&jb).iter() {
            parts.entry(self.coset(&t[0])).or_default().add_term(t.clone(), v.clone());
        }
        let mut a = jb;
        for part in parts.values() {
            if part.iter().any(|(_, v)| v.is_positive()) {
                a = &a - &self.phi(part)?;
            }
        }
        Ok(self.project(&self.cone(y, &a)?))
    }

    /// `φ_0(g, i, n) = (g, i)` for `n ≥ 1`, `φ_0(g, 0) = (1/|I|) Σ_i (g, i)`.
    pub fn phi0(&self, key: &CuspedKey) -> Result<StChain> {
        let (g, i, n) = key;
        match (i, n) {
            (Some(i), n) if *n >= 1 => Ok(StChain::single(vec![self.point(g, *i)?], Q::one())),
            (_, 0) => {
                let w = qf(1, self.index_count() as i64);
                (0..self.index_count())
                    .map(|i| Ok((vec![self.point(g, i)?], w.clone())))
                    .collect()
            }
            _ => Err(Error::invalid("horoball vertex without an index")),
        }
    }

    /// `φ_k([x_0, …, x_k]) = (1/(k+1)!) Σ_π ε(π) φ_0(x_π(0)) ⊗ … ⊗ φ_0(x_π(k))`.
    pub fn symmetrized(&self, simplex: &[CuspedKey]) -> Result<StChain> {
        let images = simplex.iter().map(|k| self.phi0(k)).collect::<Result<Vec<_>>>()?;
        let n = images.len();
        let weight = Q::one() / Q::from_integer((1..=n as i64).product::<i64>().into());
        let mut out = StChain::new();
        for (perm, odd) in permutations(n) {
            let mut prod = StChain::single(Vec::new(), Q::one());
            for &j in &perm {
                prod = prod.map_linear(|t| {
                    images[j].map_linear(|p| {
                        let mut u = t.clone();
                        u.push(p[0]);
                        StChain::single(u, Q::one())
                    })
                });
            }
            out.add_scaled(&prod, &if odd { -weight.clone() } else { weight.clone() });
        }
        Ok(out)
    }

    /// `φ` applied to a simplicial chain of a cusped Rips complex.
    pub fn symmetrized_chain(&self, x: &CuspedGraph, c: &Chain) -> Result<StChain> {
        let mut out = StChain::new();
        for (s, v) in c.iter() {
            let keys: Vec<CuspedKey> = s.iter().map(|&u| x.key(u as usize)).collect();
            out.add_scaled(&self.symmetrized(&keys)?, v);
        }
        Ok(out)
    }
}

/// All permutations of `0..n` with their parity (`true` for odd).
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(p: &mut Vec<usize>, k: usize, odd: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        if k == p.len() {
            out.push((p.clone(), odd));
            return;
        }
        for j in k..p.len() {
            p.swap(k, j);
            rec(p, k + 1, odd ^ (j != k), out);
            p.swap(k, j);
        }
    }
    rec(&mut p, 0, false, &mut out);
    out
}

/// Random windowed chains for the identity suites.
pub struct ChainSampler<'w> {
    pub window: &'w StWindow,
    pub max_terms: usize,
}

impl<'w> ChainSampler<'w> {
    pub fn new(window: &'w StWindow) -> Self {
        Self { window, max_terms: 6 }
    }

    pub fn point(&self, rng: &mut impl Rng) -> Point {
        (rng.gen_range(0..self.window.len()), rng.gen_range(0..self.window.index_count()))
    }

    pub fn coeff(&self, rng: &mut impl Rng) -> Q {
        let mut n = rng.gen_range(1..=4i64);
        if rng.gen_bool(0.5) {
            n = -n;
        }
        qf(n, rng.gen_range(1..=3))
    }

    pub fn chain(&self, rng: &mut impl Rng, k: usize) -> StChain {
        let terms = rng.gen_range(1..=self.max_terms);
        (0..terms)
            .map(|_| ((0..=k).map(|_| self.point(rng)).collect(), self.coeff(rng)))
            .collect()
    }

    /// Degree-0 chain with augmentation zero.
    pub fn augmentation_cycle0(&self, rng: &mut impl Rng) -> StChain {
        let mut c = self.chain(rng, 0);
        let aug = c.augmentation();
        c.add_term(vec![self.point(rng)], -aug);
        c
    }

    /// Reduced degree-1 relative chain with zero augmentation in `Δ`: a
    /// projected sum of closed loops.
    pub fn relative_augmentation_cycle(&self, rng: &mut impl Rng) -> StChain {
        let mut c = StChain::new();
        for _ in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(2..=4);
            let pts: Vec<Point> = (0..len).map(|_| self.point(rng)).collect();
            let lambda = self.coeff(rng);
            for j in 0..len {
                c.add_term(vec![pts[j], pts[(j + 1) % len]], lambda.clone());
            }
        }
        self.window.project(&c)
    }
}

/// The randomized identities checked on windowed chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    BoundarySquared,
    ProjectLift,
    PhiNorm,
    PhiBoundary,
    ConeCycle,
    RelConeNorm,
    RelConeBoundary,
    ConeCorollary,
}

impl Identity {
    pub const PHI: [Identity; 2] = [Identity::PhiNorm, Identity::PhiBoundary];
    pub const CONE: [Identity; 6] = [
        Identity::BoundarySquared,
        Identity::ProjectLift,
        Identity::ConeCycle,
        Identity::RelConeNorm,
        Identity::RelConeBoundary,
        Identity::ConeCorollary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::BoundarySquared => "boundary_squared",
            Identity::ProjectLift => "project_lift",
            Identity::PhiNorm => "phi_norm",
            Identity::PhiBoundary => "phi_boundary",
            Identity::ConeCycle => "cone_cycle",
            Identity::RelConeNorm => "rel_cone_norm",
            Identity::RelConeBoundary => "rel_cone_boundary",
            Identity::ConeCorollary => "cone_corollary",
        }
    }

    /// One random instance; `Ok(false)` is a violated identity.
    pub fn sample(self, s: &ChainSampler, rng: &mut impl Rng) -> Result<bool> {
        let w = s.window;
        let y = s.point(rng);
        Ok(match self {
            Identity::BoundarySquared => {
                let k = rng.gen_range(1..=3);
                let c = s.chain(rng, k);
                st_boundary(&st_boundary(&c)).is_zero()
            }
            Identity::ProjectLift => {
                let k = rng.gen_range(1..=3);
                let b = w.project(&s.chain(rng, k));
                w.project(&w.lift(&b)?) == b && w.lift(&b)?.norm() == b.norm()
            }
            Identity::PhiNorm => {
                let mut c = s.chain(rng, 0);
                if !c.iter().any(|(_, v)| v.is_positive()) {
                    c = -&c;
                }
                w.phi(&c)?.norm() <= c.norm()
            }
            Identity::PhiBoundary => {
                let c = s.augmentation_cycle0(rng);
                let f = w.phi(&c)?;
                f.norm() <= c.norm() && st_boundary(&f) == c
            }
            Identity::ConeCycle => {
                let k = rng.gen_range(1..=3);
                let z = st_boundary(&s.chain(rng, k));
                st_boundary(&w.cone(y, &z)?) == z
            }
            Identity::RelConeNorm => {
                let b = w.project(&s.chain(rng, 1));
                w.relative_cone(y, &b)?.norm() <= &b.norm() * q(3)
            }
            Identity::RelConeBoundary => {
                let b = s.relative_augmentation_cycle(rng);
                if !w.rel_augmentation(&b)?.is_zero() {
                    return Ok(false);
                }
                let cone = w.relative_cone(y, &b)?;
                cone.norm() <= &b.norm() * q(3) && w.rel_boundary(&cone)? == b
            }
            Identity::ConeCorollary => {
                let beta = w.project(&s.chain(rng, 2));
                let db = w.rel_boundary(&beta)?;
                let diff = &beta - &w.relative_cone(y, &db)?;
                w.rel_boundary(&diff)?.is_zero()
            }
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub samples: usize,
    pub failures: usize,
    /// Index of the first failing sample.
    pub first_failure: Option<usize>,
}

/// Runs each identity on `samples` seeded instances. Sample `n` of
/// identity `k` draws from its own stream, so results do not depend on
/// scheduling.
pub fn identity_suite(w: &StWindow, identities: &[Identity], samples: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let sampler = ChainSampler::new(w);
    identities
        .iter()
        .enumerate()
        .map(|(k, &id)| {
            let outcomes = (0..samples)
                .into_par_iter()
                .map(|n| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(((k as u64) << 32) | n as u64);
                    id.sample(&sampler, &mut rng)
                })
                .collect::<Result<Vec<bool>>>()?;
            Ok(IdentityCheck {
                identity: id,
                samples,
                failures: outcomes.iter().filter(|ok| !**ok).count(),
                first_failure: outcomes.iter().position(|ok| !ok),
            })
        })
        .collect()
}

/// `q(a, b)`: the canonical geodesic from the smaller to the larger vertex,
/// as an oriented edge chain from `a` to `b`.
pub fn naive_bicombing(g: &SimpGraph, a: usize, b: usize) -> Result<Chain> {
    let (lo, hi) = (a.min(b), a.max(b));
    let path = g.canonical_geodesic(lo, hi)?;
    let mut c = Chain::new();
    for e in path.vertices.windows(2) {
        c.add_scaled(&complexes::simplex_chain(&[e[0] as u32, e[1] as u32]), &Q::one());
    }
    Ok(if a > b { -&c } else { c })
}

#[derive(Clone, Debug)]
pub struct TriangleDefect {
    /// `q(a,b) + q(b,c) + q(c,a)`.
    pub w: Chain,
    pub z_low: Chain,
    pub w_high: Chain,
    pub norm_low: Q,
    pub maxh_low: Option<u32>,
    pub minh_high: Option<u32>,
    /// Number of `C`-horoballs the triangle enters.
    pub horoball_pieces: usize,
}

/// Splits the bicombing triangle into a part near the base and cycles deep
/// in `C`-horoballs. For each horoball `H` the restriction `w|_H` is closed
/// up by paths inside `H` at the lowest height that connects its boundary.
pub fn triangle_defect(g: &SimpGraph, [a, b, c]: [usize; 3], cc: u32) -> Result<TriangleDefect> {
    let w = &(&naive_bicombing(g, a, b)? + &naive_bicombing(g, b, c)?) + &naive_bicombing(g, c, a)?;
    let comp = high_components(g, cc);
    let mut hs: Vec<usize> = w.keys().flat_map(|s| s.iter().filter_map(|&v| comp[v as usize])).collect();
    hs.sort_unstable();
    hs.dedup();
    let mut w_high = Chain::new();
    for &h in &hs {
        let wh = complexes::restrict_by(&w, |v| comp[v as usize] == Some(h));
        let bh = complexes::boundary(&wh);
        let mut piece = wh;
        if let Some(root) = bh.keys().next().map(|s| s[0] as usize) {
            let targets: Vec<(usize, Q)> = bh.iter().map(|(s, v)| (s[0] as usize, v.clone())).collect();
            let parent = low_tree(g, &comp, h, root, targets.iter().map(|t| t.0))
                .ok_or_else(|| Error::TruncationUnsafe(format!("horoball piece {h} is disconnected in the truncation")))?;
            for (mut v, lam) in targets {
                while v != root {
                    let p = parent[&v];
                    piece.add_scaled(&complexes::simplex_chain(&[p as u32, v as u32]), &-lam.clone());
                    v = p;
                }
            }
        }
        w_high = &w_high + &piece;
    }
    let z_low = &w - &w_high;
    if !complexes::boundary(&z_low).is_zero() || !complexes::boundary(&w_high).is_zero() {
        return Err(Error::NotACycle);
    }
    let heights = g.heights();
    let low = complexes::chain_stats(&z_low, heights);
    let high = complexes::chain_stats(&w_high, heights);
    Ok(TriangleDefect {
        norm_low: z_low.norm(),
        maxh_low: low.maxh,
        minh_high: high.minh,
        horoball_pieces: hs.len(),
        w,
        z_low,
        w_high,
    })
}

/// BFS tree inside component `h` of the `C`-horoballs, restricted to the
/// lowest height cap under which every target is reachable from `root`.
fn low_tree(
    g: &SimpGraph,
    comp: &[Option<usize>],
    h: usize,
    root: usize,
    targets: impl Iterator<Item = usize> + Clone,
) -> Option<HashMap<usize, usize>> {
    let top = (0..g.vertex_count()).filter(|&v| comp[v] == Some(h)).map(|v| g.height(v)).max()?;
    for cap in g.height(root)..=top {
        let mut parent = HashMap::from([(root, root)]);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if comp[y] == Some(h) && g.height(y) <= cap && !parent.contains_key(&y) {
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        if targets.clone().all(|t| parent.contains_key(&t)) {
            return Some(parent);
        }
    }
    None
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DefectStats {
    pub samples: usize,
    pub failures: usize,
    /// Empirical `K`: the largest `‖z_low‖`.
    #[serde(with = "rational::text")]
    pub max_norm_low: Q,
    pub max_maxh_low: Option<u32>,
    /// Smallest height reached by any `w_high`.
    pub min_minh_high: Option<u32>,
}

pub fn defect_sweep(g: &SimpGraph, triples: &[[usize; 3]], cc: u32) -> DefectStats {
    let results: Vec<Result<TriangleDefect>> = triples.par_iter().map(|&t| triangle_defect(g, t, cc)).collect();
    let mut st = DefectStats {
        samples: triples.len(),
        ..Default::default()
    };
    for r in results {
        match r {
            Ok(d) => {
                if d.norm_low > st.max_norm_low {
                    st.max_norm_low = d.norm_low;
                }
                st.max_maxh_low = st.max_maxh_low.max(d.maxh_low);
                st.min_minh_high = match (st.min_minh_high, d.minh_high) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
            }
            Err(_) => st.failures += 1,
        }
    }
    st
}

/// Cochain key `(i_0; (g_1, i_1), …, (g_k, i_k))`, group elements by index.
/// On the `St` side it names the orbit of `((1, i_0), (g_1, i_1), …)`; on
/// the bar side the composable string `(·, g_1^{i_1→i_0}, …, g_k^{i_k→i_{k-1}})`
/// whose first morphism drops out by invariance.
pub type BarKey = (usize, Vec<(usize, usize)>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CochainSide {
    St,
    Bar,
}

/// Equivariant cochain with trivial real coefficients, stored by key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarCochain {
    pub side: CochainSide,
    pub degree: usize,
    values: BTreeMap<BarKey, Q>,
}

impl BarCochain {
    pub fn get(&self, key: &BarKey) -> Q {
        self.values.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn sup_norm(&self) -> Q {
        self.values.values().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn values(&self) -> impl Iterator<Item = (&BarKey, &Q)> {
        self.values.iter()
    }
}

/// Cochain complexes of a finite pair on both sides of the comparison.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub pair: GroupPair,
    /// Fixed index; it drops out for trivial coefficients.
    pub ibar: usize,
    order: usize,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    member: Vec<Vec<bool>>,
}

impl BarComplex {
    pub fn new(pair: &GroupPair) -> Result<Self> {
        let els = pair
            .group
            .elements()
            .ok_or_else(|| Error::Unsupported("cochain comparison needs a finite group".into()))?;
        if pair.index_count() == 0 {
            return Err(Error::invalid("pair has no peripheral subgroups"));
        }
        let idx: HashMap<&Element, usize> = els.iter().enumerate().map(|(a, g)| (g, a)).collect();
        let mul = els.iter().map(|g| els.iter().map(|h| idx[&pair.group.mul(g, h)]).collect()).collect();
        let inv = els.iter().map(|g| idx[&pair.group.inv(g)]).collect();
        let member = pair.peripherals.iter().map(|p| els.iter().map(|g| p.contains(g)).collect()).collect();
        Ok(Self {
            pair: pair.clone(),
            ibar: 0,
            order: els.len(),
            mul,
            inv,
            member,
        })
    }

    fn indices(&self) -> usize {
        self.member.len()
    }

    pub fn keys(&self, k: usize) -> Vec<BarKey> {
        let letters: Vec<(usize, usize)> =
            (0..self.order).flat_map(|g| (0..self.indices()).map(move |i| (g, i))).collect();
        let mut tails: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for _ in 0..k {
            tails = tails
                .into_iter()
                .flat_map(|t| {
                    letters.iter().map(move |&l| {
                        let mut u = t.clone();
                        u.push(l);
                        u
                    })
                })
                .collect();
        }
        (0..self.indices()).flat_map(|i0| tails.iter().map(move |t| (i0, t.clone()))).collect()
    }

    /// Keys on which relative cochains must vanish. The test reads the
    /// same on both sides: one index throughout and every element in `Γ_i`.
    pub fn is_null(&self, key: &BarKey) -> bool {
        let (i, tail) = key;
        tail.iter().all(|&(g, j)| j == *i && self.member[*i][g])
    }

    pub fn basis(&self, k: usize) -> Vec<BarKey> {
        self.keys(k).into_iter().filter(|key| !self.is_null(key)).collect()
    }

    pub fn cochain(&self, side: CochainSide, degree: usize, values: impl IntoIterator<Item = (BarKey, Q)>) -> Result<BarCochain> {
        let mut map = BTreeMap::new();
        for (key, v) in values {
            if key.1.len() != degree || key.0 >= self.indices() || key.1.iter().any(|&(g, i)| g >= self.order || i >= self.indices()) {
                return Err(Error::invalid("cochain key out of range"));
            }
            if v.is_zero() {
                continue;
            }
            if self.is_null(&key) {
                return Err(Error::invalid("relative cochain is nonzero on a peripheral key"));
            }
            map.insert(key, v);
        }
        Ok(BarCochain { side, degree, values: map })
    }

    fn evaluate(&self, side: CochainSide, degree: usize, f: impl Fn(&BarKey) -> Q) -> Result<BarCochain> {
        self.cochain(side, degree, self.keys(degree).into_iter().map(|k| {
            let v = f(&k);
            (k, v)
        }))
    }

    /// Bar side to `St` side: successive quotients `g_{j-1}^{-1} g_j`.
    pub fn phi(&self, f: &BarCochain) -> Result<BarCochain> {
        if f.side != CochainSide::Bar {
            return Err(Error::invalid("φ expects a bar-side cochain"));
        }
        self.evaluate(CochainSide::St, f.degree, |(i0, tail)| {
            let mut prev = 0;
            let key = tail
                .iter()
                .map(|&(g, i)| {
                    let h = self.mul[self.inv[prev]][g];
                    prev = g;
                    (h, i)
                })
                .collect();
            f.get(&(*i0, key))
        })
    }

    /// `St` side to bar side: partial products `h_1 ⋯ h_j`.
    pub fn psi(&self, h: &BarCochain) -> Result<BarCochain> {
        if h.side != CochainSide::St {
            return Err(Error::invalid("ψ expects an St-side cochain"));
        }
        self.evaluate(CochainSide::Bar, h.degree, |(i0, tail)| {
            let mut acc = 0;
            let key = tail
                .iter()
                .map(|&(g, i)| {
                    acc = self.mul[acc][g];
                    (acc, i)
                })
                .collect();
            h.get(&(*i0, key))
        })
    }

    pub fn coboundary(&self, c: &BarCochain) -> Result<BarCochain> {
        let n = c.degree;
        self.evaluate(c.side, n + 1, |(i0, tail)| {
            let mut total = Q::zero();
            let mut add = |j: usize, key: BarKey| {
                let v = c.get(&key);
                if j % 2 == 0 {
                    total += v;
                } else {
                    total -= v;
                }
            };
            match c.side {
                CochainSide::St => {
                    // Points x_0 = (1, i_0), x_j = (g_j, i_j); faces are
                    // translated so that their first point sits at 1.
                    let pts: Vec<(usize, usize)> = std::iter::once((0, *i0)).chain(tail.iter().copied()).collect();
                    for j in 0..pts.len() {
                        let face: Vec<(usize, usize)> =
                            pts.iter().enumerate().filter(|&(a, _)| a != j).map(|(_, &p)| p).collect();
                        let (g0, f0) = face[0];
                        let t = face[1..].iter().map(|&(g, i)| (self.mul[self.inv[g0]][g], i)).collect();
                        add(j, (f0, t));
                    }
                }
                CochainSide::Bar => {
                    // Composing the leading morphism with h_1 makes i_1 the
                    // new source index.
                    add(0, (tail[0].1, tail[1..].to_vec()));
                    for j in 1..=n {
                        let mut t = tail.clone();
                        let (a, _) = t[j - 1];
                        let (b, ib) = t.remove(j);
                        t[j - 1] = (self.mul[a][b], ib);
                        add(j, (*i0, t));
                    }
                    add(n + 1, (*i0, tail[..n].to_vec()));
                }
            }
            total
        })
    }

    fn indicator(&self, side: CochainSide, key: &BarKey) -> BarCochain {
        let mut values = BTreeMap::new();
        values.insert(key.clone(), Q::one());
        BarCochain {
            side,
            degree: key.1.len(),
            values,
        }
    }

    pub fn random_cochain(&self, side: CochainSide, k: usize, rng: &mut impl Rng) -> BarCochain {
        let values = self
            .basis(k)
            .into_iter()
            .map(|key| (key, qf(rng.gen_range(-6..=6), rng.gen_range(1..=4))))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        BarCochain { side, degree: k, values }
    }

    /// Exhaustive check over both bases in degree `k`, plus `samples` random
    /// cochains for the norm comparison.
    pub fn check_iso(&self, k: usize, samples: usize, seed: u64) -> Result<BarIsoReport> {
        let basis = self.basis(k);
        let mut rep = BarIsoReport {
            degree: k,
            basis_size: basis.len(),
            round_trip: true,
            commutes: true,
            isometric: true,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inputs: Vec<BarCochain> = Vec::new();
        for side in [CochainSide::Bar, CochainSide::St] {
            inputs.extend(basis.iter().map(|key| self.indicator(side, key)));
            inputs.extend((0..samples).map(|_| self.random_cochain(side, k, &mut rng)));
        }
        for c in &inputs {
            let (to, back) = match c.side {
                CochainSide::Bar => {
                    let to = self.phi(c)?;
                    let back = self.psi(&to)?;
                    (to, back)
                }
                CochainSide::St => {
                    let to = self.psi(c)?;
                    let back = self.phi(&to)?;
                    (to, back)
                }
            };
            rep.round_trip &= back == *c;
            rep.isometric &= to.sup_norm() == c.sup_norm();
            let across = match c.side {
                CochainSide::Bar => self.phi(&self.coboundary(c)?)?,
                CochainSide::St => self.psi(&self.coboundary(c)?)?,
            };
            rep.commutes &= self.coboundary(&to)? == across;
        }
        Ok(rep)
    }

    /// `δ_k` on the relative `St` cochains as sparse columns over `basis(k+1)`.
    fn coboundary_columns(&self, k: usize) -> Result<Vec<Vec<(u32, Q)>>> {
        let rows: HashMap<BarKey, u32> = self.basis(k + 1).into_iter().enumerate().map(|(r, key)| (key, r as u32)).collect();
        self.basis(k)
            .iter()
            .map(|key| {
                let d = self.coboundary(&self.indicator(CochainSide::St, key))?;
                Ok(d.values.iter().map(|(key, v)| (rows[key], v.clone())).collect())
            })
            .collect()
    }

    /// `dim H^k(Γ, Γ′; ℝ)` from the relative `St` cochains.
    pub fn relative_cohomology_rank(&self, k: usize) -> Result<usize> {
        let dim = self.basis(k).len();
        let out = rank::rank_exact(&self.coboundary_columns(k)?);
        let inc = if k == 0 { 0 } else { rank::rank_exact(&self.coboundary_columns(k - 1)?) };
        Ok(dim - out - inc)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BarIsoReport {
    pub degree: usize,
    pub basis_size: usize,
    pub round_trip: bool,
    pub commutes: bool,
    pub isometric: bool,
}

impl BarIsoReport {
    pub fn passed(&self) -> bool {
        self.round_trip && self.commutes && self.isometric
    }
}
