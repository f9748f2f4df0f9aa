//! Constructive fillings in simplicial complexes over hyperbolic graphs:
//! local fills in balls, slicing of thin cycles along a geodesic, covers of
//! geodesic families by balls and separated segments, and fillings of
//! cycles lying near such families.
//!
//! Balls, neighbourhoods and geodesics are taken in the 1-skeleton of the
//! complex, where every simplex has diameter at most one.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::complexes::{self, Chain, SComplex};
use crate::error::{Error, Result};
use crate::filling::{self, ChainJson};
use crate::graphs::{GeodesicPath, SimpGraph, UNREACHED};
use crate::rational::{self, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FillMode {
    Plain,
    /// Only simplices inside the C-horoball containing the cycle.
    Horoball,
}

/// A filling `a` of `z` with the constants observed while building it.
#[derive(Clone, Debug, Serialize)]
pub struct FillingCertificate {
    #[serde(serialize_with = "chain_json")]
    pub input: Chain,
    #[serde(serialize_with = "chain_json")]
    pub output: Chain,
    /// `‖a‖/‖z‖`, zero for `z = 0`.
    #[serde(with = "rational::text")]
    pub ratio: Q,
    /// Radius of the region the support of `a` was found in: around the
    /// centre for local fills, around the geodesics for pipelines.
    pub support_radius: u32,
    pub maxh: Option<u32>,
    /// `None` when `z` lies in no C-horoball; otherwise whether `a` stays in
    /// the same one.
    pub horoball: Option<bool>,
    pub sub_fills: usize,
}

fn chain_json<S: Serializer>(c: &Chain, s: S) -> std::result::Result<S::Ok, S::Error> {
    ChainJson::from_simplicial(c).serialize(s)
}

/// Filling machinery over one complex, with an optional horoball constant.
pub struct GeomFiller<'a> {
    pub complex: &'a SComplex,
    pub skeleton: SimpGraph,
    c: Option<u32>,
    /// C-horoball id of each vertex of height ≥ C.
    horoball_of: Vec<Option<usize>>,
}

impl<'a> GeomFiller<'a> {
    /// C-horoballs are the components of the vertices of height ≥ C in the
    /// underlying graph of the complex.
    pub fn new(complex: &'a SComplex, c: Option<u32>) -> Self {
        let mut skeleton = SimpGraph::new();
        for v in 0..complex.vertex_count() {
            skeleton.add_vertex(complex.graph.label(v).to_string(), complex.graph.height(v));
        }
        for e in complex.simplices(1) {
            skeleton.add_edge(e[0] as usize, e[1] as usize).unwrap();
        }
        let horoball_of = match c {
            Some(c) => high_components(&complex.graph, c),
            None => vec![None; complex.vertex_count()],
        };
        Self {
            complex,
            skeleton,
            c,
            horoball_of,
        }
    }

    pub fn c(&self) -> Option<u32> {
        self.c
    }

    /// C-horoball containing the whole support of `z`, if any.
    pub fn horoball_of_chain(&self, z: &Chain) -> Option<usize> {
        let mut ids = complexes::support0(z).into_iter().map(|v| self.horoball_of[v as usize]);
        let first = ids.next()??;
        ids.all(|h| h == Some(first)).then_some(first)
    }

    fn mode_for(&self, z: &Chain) -> FillMode {
        if self.horoball_of_chain(z).is_some() {
            FillMode::Horoball
        } else {
            FillMode::Plain
        }
    }

    fn dist(&self, sources: impl IntoIterator<Item = usize>) -> Vec<u32> {
        self.skeleton.multi_bfs(sources)
    }

    fn radius_of(&self, d: &[u32], c: &Chain) -> Result<u32> {
        let mut r = 0;
        for v in complexes::support0(c) {
            match d[v as usize] {
                UNREACHED => return Err(Error::Unreachable(v as usize, 0)),
                x => r = r.max(x),
            }
        }
        Ok(r)
    }

    fn certificate(&self, z: &Chain, a: Chain, support_radius: u32, sub_fills: usize) -> Result<FillingCertificate> {
        if &complexes::boundary(&a) != z {
            return Err(Error::Numerical("assembled filling does not bound the cycle".into()));
        }
        let ratio = if z.is_zero() { Q::zero() } else { a.norm() / z.norm() };
        let horoball = self.horoball_of_chain(z).map(|h| {
            complexes::support0(&a)
                .iter()
                .all(|&v| self.horoball_of[v as usize] == Some(h))
        });
        Ok(FillingCertificate {
            maxh: complexes::chain_stats(z, self.complex.heights()).maxh,
            input: z.clone(),
            output: a,
            ratio,
            support_radius,
            horoball,
            sub_fills,
        })
    }

    fn check_cycle(&self, z: &Chain) -> Result<usize> {
        let d = complexes::degree(z).unwrap_or(0);
        if z.keys().any(|s| s.len() != d + 1) {
            return Err(Error::invalid("chain mixes degrees"));
        }
        if d >= 1 && !complexes::boundary(z).is_zero() {
            return Err(Error::NotACycle);
        }
        Ok(d)
    }

    /// Optimal filling of `z` inside `B_R(v₀)`, with `R` grown from the
    /// radius of `z` around `v₀` until a filling exists. In horoball mode
    /// only simplices of the C-horoball containing `z` are used.
    pub fn local_fill(&self, z: &Chain, v0: usize, mode: FillMode) -> Result<FillingCertificate> {
        if v0 >= self.complex.vertex_count() {
            return Err(Error::invalid(format!("vertex {v0} out of range")));
        }
        self.check_cycle(z)?;
        if z.is_zero() {
            return self.certificate(z, Chain::new(), 0, 0);
        }
        let allowed: Box<dyn Fn(usize) -> bool + Sync> = match mode {
            FillMode::Plain => Box::new(|_| true),
            FillMode::Horoball => {
                if self.c.is_none() {
                    return Err(Error::invalid("horoball mode needs the constant C"));
                }
                let h = self
                    .horoball_of_chain(z)
                    .ok_or_else(|| Error::invalid("cycle is not contained in one C-horoball"))?;
                Box::new(move |v| self.horoball_of[v] == Some(h))
            }
        };
        let d = self.skeleton.bfs(v0);
        let start = self.radius_of(&d, z).map_err(|_| Error::Infeasible)?;
        let mut order: Vec<usize> = (0..d.len()).filter(|&v| d[v] != UNREACHED && allowed(v)).collect();
        order.sort_by_key(|&v| d[v]);
        let mut prev = usize::MAX;
        for r in start.. {
            let region: BTreeSet<u32> = order.iter().take_while(|&&v| d[v] <= r).map(|&v| v as u32).collect();
            if region.len() == prev {
                if region.len() == order.len() {
                    return Err(Error::Infeasible);
                }
                continue;
            }
            prev = region.len();
            match filling::filling_norm_lp(self.complex, z, Some(&region)) {
                Ok(res) => return self.certificate(z, res.witness, r, 1),
                Err(Error::Infeasible) => continue,
                Err(e) => return Err(e),
            }
        }
        unreachable!()
    }

    /// Splits a cycle supported near `γ` into cycles supported in balls
    /// centred at regularly spaced points of `γ`.
    pub fn slice_cycle(&self, z: &Chain, gamma: &GeodesicPath, s: u32) -> Result<SliceResult> {
        let degree = self.check_cycle(z)?;
        if degree == 0 && !z.is_zero() {
            return Err(Error::invalid("slicing needs a cycle of degree at least 1"));
        }
        if gamma.vertices.is_empty() {
            return Err(Error::invalid("empty geodesic"));
        }
        let dg = self.dist(gamma.vertices.iter().copied());
        let spread = self.radius_of(&dg, z)?;
        if spread > s {
            return Err(Error::invalid(format!(
                "support reaches distance {spread} from the geodesic, beyond S = {s}"
            )));
        }
        let d = 2 * s + 3;
        let r = d.div_ceil(2) + 2 * s;
        let mut result = SliceResult {
            pieces: Vec::new(),
            d,
            s,
            r,
            max_radius: 0,
            norm_sum: Q::zero(),
            ratio: Q::zero(),
            fills: 0,
        };
        if z.is_zero() {
            return Ok(result);
        }
        let at = |t: u32| gamma.vertices[(t as usize).min(gamma.vertices.len() - 1)];
        let d0 = self.skeleton.bfs(gamma.start());
        let far = self.radius_of(&d0, z)?;
        let slices = far.div_ceil(d).max(1);
        let ball = |rad: u32| complexes::restrict_by(z, |v| d0[v as usize] <= rad);
        let zbar: Vec<Chain> = (0..slices).map(|k| &ball((k + 1) * d) - &ball(k * d)).collect();
        // Boundary of each annulus piece: near y_k (b′) and near y_{k+1} (b).
        let split: Vec<(Chain, Chain)> = zbar
            .iter()
            .enumerate()
            .map(|(k, zb)| {
                let bd = complexes::boundary(zb);
                let near = bd.filter(|s| d0[s[0] as usize] <= k as u32 * d + 1);
                let rest = &bd - &near;
                (near, rest)
            })
            .collect();
        for k in 0..split.len() {
            let next = split.get(k + 1).map_or_else(Chain::new, |p| p.0.clone());
            if &split[k].1 + &next != Chain::new() {
                return Err(Error::TruncationUnsafe("annulus boundaries do not match up".into()));
            }
        }
        let mode = self.mode_for(z);
        let fills: Vec<FillingCertificate> = split
            .par_iter()
            .enumerate()
            .map(|(k, (_, b))| self.local_fill(b, at((k as u32 + 1) * d), mode))
            .collect::<Result<_>>()?;
        let mut total = Chain::new();
        for k in 0..zbar.len() {
            let mut zk = zbar[k].clone();
            if k > 0 {
                zk = &zk + &fills[k - 1].output;
            }
            zk = &zk - &fills[k].output;
            if !complexes::boundary(&zk).is_zero() {
                return Err(Error::Numerical("slice is not a cycle".into()));
            }
            total = &total + &zk;
            if zk.is_zero() {
                continue;
            }
            let center = at(k as u32 * d + d / 2);
            let radius = self.radius_of(&self.skeleton.bfs(center), &zk)?;
            result.max_radius = result.max_radius.max(radius);
            result.norm_sum += zk.norm();
            result.pieces.push(SlicePiece {
                index: k,
                center,
                radius,
                cycle: zk,
            });
        }
        if &total != z {
            return Err(Error::Numerical("slices do not sum to the cycle".into()));
        }
        result.fills = fills.iter().filter(|f| !f.output.is_zero()).count();
        result.ratio = &result.norm_sum / z.norm();
        Ok(result)
    }

    /// Filling of a cycle supported near one geodesic: slice it, then fill
    /// every slice locally.
    pub fn fill_thin(&self, z: &Chain, gamma: &GeodesicPath) -> Result<FillingCertificate> {
        self.check_cycle(z)?;
        if z.is_zero() {
            return self.certificate(z, Chain::new(), 0, 0);
        }
        let dg = self.dist(gamma.vertices.iter().copied());
        let s = self.radius_of(&dg, z)?;
        let sliced = self.slice_cycle(z, gamma, s)?;
        let mode = self.mode_for(z);
        let fills: Vec<FillingCertificate> = sliced
            .pieces
            .par_iter()
            .map(|p| self.local_fill(&p.cycle, p.center, mode))
            .collect::<Result<_>>()?;
        let mut a = Chain::new();
        for f in &fills {
            a = &a + &f.output;
        }
        let radius = self.radius_of(&dg, &a)?.max(s);
        self.certificate(z, a, radius, sliced.fills + fills.len())
    }

    /// Filling of a cycle of degree ≥ 2 supported in the `L`-neighbourhood
    /// of a family of geodesics, assembled from local fills around the
    /// balls of a geodesic cover and thin fills along its segments.
    pub fn fill_graphlike(&self, z: &Chain, geodesics: &[GeodesicPath], l: u32, delta: &Q) -> Result<GraphlikeFilling> {
        let degree = self.check_cycle(z)?;
        if !z.is_zero() && degree < 2 {
            return Err(Error::invalid("graph-like filling needs a cycle of degree at least 2"));
        }
        if geodesics.is_empty() {
            return Err(Error::invalid("no geodesics given"));
        }
        let da = self.dist(geodesics.iter().flat_map(|g| g.vertices.iter().copied()));
        let spread = self.radius_of(&da, z)?;
        if spread > l {
            return Err(Error::invalid(format!("support reaches distance {spread} from the geodesics, beyond L = {l}")));
        }
        let dc = delta_ceil(delta)?;
        let s = (4 * dc + 2 * l + 2).max(10 * dc);
        let cover = spider_cover(&self.skeleton, geodesics, s, delta)?;
        if !cover.check.valid {
            return Err(Error::TruncationUnsafe("geodesic cover check failed".into()));
        }
        let balls = disjoint_balls(&self.skeleton, &cover.balls, l + 1);
        if z.is_zero() {
            return Ok(GraphlikeFilling {
                certificate: self.certificate(z, Chain::new(), 0, 0)?,
                s,
                balls,
                cover,
            });
        }
        let n = self.complex.vertex_count();
        let mut ball_of = vec![None; n];
        for (i, &(c, r)) in balls.iter().enumerate() {
            for (v, &dv) in self.skeleton.bfs_bounded(c, r).iter().enumerate() {
                if dv != UNREACHED {
                    ball_of[v] = Some(i);
                }
            }
        }
        let segs = &cover.segments;
        let mut seg_of = vec![None; n];
        for (j, seg) in segs.iter().enumerate() {
            let d = self.dist(seg.iter().copied());
            for v in 0..n {
                if d[v] <= 2 * dc + l {
                    if seg_of[v].is_some() {
                        return Err(Error::TruncationUnsafe("segment neighbourhoods overlap".into()));
                    }
                    seg_of[v] = Some(j);
                }
            }
        }
        let in_one = |c: &Chain, owner: &[Option<usize>], count: usize| -> Result<Vec<Chain>> {
            let mut parts = vec![Chain::new(); count];
            for (sx, v) in c.iter() {
                let o = owner[sx[0] as usize];
                if o.is_none() || sx.iter().any(|&w| owner[w as usize] != o) {
                    return Err(Error::TruncationUnsafe("chain leaves the cover".into()));
                }
                parts[o.unwrap()].add_term(sx.clone(), v.clone());
            }
            Ok(parts)
        };
        let z_near = complexes::restrict_by(z, |v| seg_of[v as usize].is_some());
        let z_seg = in_one(&z_near, &seg_of, segs.len())?;
        let z_ball = in_one(&(z - &z_near), &ball_of, balls.len())?;
        let mode = self.mode_for(z);
        // Boundary pieces of each segment part, one per ball.
        let pieces: Vec<(usize, usize, Chain)> = z_seg
            .iter()
            .enumerate()
            .map(|(j, zj)| {
                let parts = in_one(&complexes::boundary(zj), &ball_of, balls.len())?;
                Ok(parts.into_iter().enumerate().filter(|(_, b)| !b.is_zero()).map(move |(i, b)| (j, i, b)))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let patch: Vec<FillingCertificate> = pieces
            .par_iter()
            .map(|(_, i, b)| self.local_fill(b, balls[*i].0, mode))
            .collect::<Result<_>>()?;
        let mut zbar_seg = z_seg;
        let mut zbar_ball = z_ball;
        for ((j, i, _), f) in pieces.iter().zip(&patch) {
            zbar_seg[*j] = &zbar_seg[*j] - &f.output;
            zbar_ball[*i] = &zbar_ball[*i] + &f.output;
        }
        let ball_fills: Vec<FillingCertificate> = zbar_ball
            .par_iter()
            .enumerate()
            .map(|(i, zb)| self.local_fill(zb, balls[i].0, mode))
            .collect::<Result<_>>()?;
        let seg_fills: Vec<FillingCertificate> = zbar_seg
            .par_iter()
            .enumerate()
            .map(|(j, zs)| self.fill_thin(zs, &GeodesicPath { vertices: segs[j].clone() }))
            .collect::<Result<_>>()?;
        let mut a = Chain::new();
        let mut sub = patch.len();
        for f in ball_fills.iter().chain(&seg_fills) {
            a = &a + &f.output;
            sub += f.sub_fills;
        }
        let radius = self.radius_of(&da, &a)?.max(spread);
        Ok(GraphlikeFilling {
            certificate: self.certificate(z, a, radius, sub)?,
            s,
            balls,
            cover,
        })
    }

    /// Filling of a 1-cycle supported in the `L`-neighbourhood of the
    /// geodesic triangle on `v₁, v₂, v₃`: the parts along the three prongs
    /// are corrected and filled as thin cycles, the rest locally at the
    /// centre of the triangle.
    pub fn fill_triangle(&self, z: &Chain, tri: [usize; 3], l: u32, delta: &Q) -> Result<TriangleFilling> {
        let degree = self.check_cycle(z)?;
        if !z.is_zero() && degree != 1 {
            return Err(Error::invalid("triangle filling needs a 1-cycle"));
        }
        let g = &self.skeleton;
        let [v1, v2, v3] = tri;
        let g12 = g.canonical_geodesic(v1, v2)?;
        let g23 = g.canonical_geodesic(v2, v3)?;
        let g13 = g.canonical_geodesic(v1, v3)?;
        let sides = [&g12, &g23, &g13];
        let dt = self.dist(sides.iter().flat_map(|p| p.vertices.iter().copied()));
        let spread = self.radius_of(&dt, z)?;
        if spread > l {
            return Err(Error::invalid(format!("support reaches distance {spread} from the triangle, beyond L = {l}")));
        }
        let d13 = self.dist(g13.vertices.iter().copied());
        let d23 = self.dist(g23.vertices.iter().copied());
        let (t, thin) = g12
            .vertices
            .iter()
            .enumerate()
            .map(|(t, &v)| (t, d13[v].max(d23[v])))
            .min_by_key(|&(t, w)| (w, t))
            .unwrap();
        let x = g12.vertices[t];
        let dc = delta_ceil(delta)?.max(thin);
        let r = (10 * (dc + l)).max(1);
        let to_v1: Vec<usize> = g12.vertices[..=t].iter().rev().copied().collect();
        let to_v2: Vec<usize> = g12.vertices[t..].to_vec();
        let to_v3 = g.canonical_geodesic(x, v3)?.vertices;
        let prongs: Vec<Vec<usize>> = [to_v1, to_v2, to_v3]
            .into_iter()
            .map(|p| if p.len() > r as usize { p[r as usize..].to_vec() } else { Vec::new() })
            .collect();
        let mode = self.mode_for(z);
        let mut rest = z.clone();
        let mut a = Chain::new();
        let mut sub = 0;
        for prong in prongs.iter().filter(|p| !p.is_empty()) {
            let d = self.dist(prong.iter().copied());
            let zbar = complexes::restrict_by(&rest, |v| d[v as usize] <= l + dc);
            rest = &rest - &zbar;
            let patch = self.local_fill(&complexes::boundary(&zbar), prong[0], mode)?;
            let zv = &zbar - &patch.output;
            let thin = self.fill_thin(&zv, &GeodesicPath { vertices: prong.clone() })?;
            rest = &rest + &patch.output;
            a = &a + &thin.output;
            sub += 1 + thin.sub_fills;
        }
        let core = self.local_fill(&rest, x, mode)?;
        a = &a + &core.output;
        sub += core.sub_fills;
        let radius = self.radius_of(&dt, &a)?.max(spread);
        Ok(TriangleFilling {
            certificate: self.certificate(z, a, radius, sub)?,
            center: x,
            r,
            prongs,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SlicePiece {
    pub index: usize,
    /// `γ(kD + D/2)`.
    pub center: usize,
    /// Largest distance from the centre to the support of the piece.
    pub radius: u32,
    #[serde(serialize_with = "chain_json")]
    pub cycle: Chain,
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceResult {
    pub pieces: Vec<SlicePiece>,
    pub d: u32,
    pub s: u32,
    /// `⌈D/2⌉ + 2S`, the radius bounding the annulus parts.
    pub r: u32,
    pub max_radius: u32,
    #[serde(with = "rational::text")]
    pub norm_sum: Q,
    /// `Σ‖z_k‖/‖z‖`.
    #[serde(with = "rational::text")]
    pub ratio: Q,
    pub fills: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphlikeFilling {
    pub certificate: FillingCertificate,
    pub s: u32,
    /// Pairwise disjoint balls `(centre, radius)` absorbing the cover balls.
    pub balls: Vec<(usize, u32)>,
    pub cover: SpiderCover,
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleFilling {
    pub certificate: FillingCertificate,
    pub center: usize,
    pub r: u32,
    pub prongs: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverCheck {
    /// Geodesic vertices in no ball and not `2δ`-close to any segment.
    pub uncovered: Vec<usize>,
    pub min_separation: Option<u32>,
    pub valid: bool,
}

/// Balls and pairwise far segments whose union covers a family of
/// geodesics.
#[derive(Clone, Debug, Serialize)]
pub struct SpiderCover {
    pub balls: Vec<(usize, u32)>,
    pub segments: Vec<Vec<usize>>,
    pub s: u32,
    /// `⌈δ⌉`, used for trimming.
    pub delta: u32,
    pub check: CoverCheck,
}

fn delta_ceil(delta: &Q) -> Result<u32> {
    if delta < &Q::zero() {
        return Err(Error::invalid("δ must be non-negative"));
    }
    u32::try_from(rational::ceil_to_i64(delta)).map_err(|_| Error::invalid("δ too large"))
}

/// Inductive cover of `α₁, …, α_n`: the first `n − 1` geodesics are covered
/// with a larger separation, then `α_n` is cut at the first and last points
/// `S`-close to each segment, the cut points become balls of radius `S + δ`
/// and the trimmed remainders become new segments. The extremes of `α_n`
/// are kept. The result is checked against every geodesic vertex.
pub fn spider_cover(g: &SimpGraph, geodesics: &[GeodesicPath], s: u32, delta: &Q) -> Result<SpiderCover> {
    if Q::from_integer(s.into()) < delta * Q::from_integer(10.into()) {
        return Err(Error::invalid("S must be at least 10δ"));
    }
    let dc = delta_ceil(delta)?;
    for p in geodesics {
        if p.vertices.is_empty() || p.vertices.iter().any(|&v| v >= g.vertex_count()) {
            return Err(Error::invalid("geodesic with no or unknown vertices"));
        }
    }
    let (balls, segments) = cover_rec(g, geodesics, s, dc);
    let two_delta = (delta * Q::from_integer(2.into())).floor().to_integer();
    let two_delta = u32::try_from(two_delta).unwrap_or(u32::MAX);
    let check = check_cover(g, geodesics, &balls, &segments, two_delta, s);
    Ok(SpiderCover {
        balls,
        segments,
        s,
        delta: dc,
        check,
    })
}

type Cover = (Vec<(usize, u32)>, Vec<Vec<usize>>);

fn cover_rec(g: &SimpGraph, alphas: &[GeodesicPath], s: u32, dc: u32) -> Cover {
    let Some((last, init)) = alphas.split_last() else { return (Vec::new(), Vec::new()) };
    if init.is_empty() {
        return (Vec::new(), vec![last.vertices.clone()]);
    }
    let (mut balls, mut segs) = cover_rec(g, init, 2 * s + 6 * dc + 1, dc);
    let alpha = &last.vertices;
    let mut cuts: Vec<(usize, usize)> = segs
        .iter()
        .filter_map(|seg| {
            let d = g.multi_bfs(seg.iter().copied());
            let first = alpha.iter().position(|&v| d[v] <= s)?;
            let last = alpha.iter().rposition(|&v| d[v] <= s)?;
            Some((first, last))
        })
        .collect();
    cuts.sort_unstable();
    let trim = (s + dc) as usize;
    let mut lo = 0usize;
    let mut pieces = Vec::new();
    for &(x, y) in &cuts {
        balls.push((alpha[x], s + dc));
        balls.push((alpha[y], s + dc));
        if let Some(hi) = x.checked_sub(trim) {
            if lo <= hi {
                pieces.push(alpha[lo..=hi].to_vec());
            }
        }
        lo = lo.max(y + trim);
    }
    if lo < alpha.len() {
        pieces.push(alpha[lo..].to_vec());
    }
    segs.extend(pieces);
    (balls, segs)
}

fn check_cover(
    g: &SimpGraph,
    geodesics: &[GeodesicPath],
    balls: &[(usize, u32)],
    segments: &[Vec<usize>],
    two_delta: u32,
    s: u32,
) -> CoverCheck {
    let n = g.vertex_count();
    let mut covered = vec![false; n];
    for &(c, r) in balls {
        for (v, &d) in g.bfs_bounded(c, r).iter().enumerate() {
            covered[v] |= d != UNREACHED;
        }
    }
    let seg_dist: Vec<Vec<u32>> = segments.par_iter().map(|seg| g.multi_bfs(seg.iter().copied())).collect();
    for d in &seg_dist {
        for v in 0..n {
            covered[v] |= d[v] <= two_delta;
        }
    }
    let uncovered: BTreeSet<usize> = geodesics
        .iter()
        .flat_map(|p| p.vertices.iter().copied())
        .filter(|&v| !covered[v])
        .collect();
    let mut min_separation = None;
    for (a, da) in seg_dist.iter().enumerate() {
        for seg in &segments[a + 1..] {
            let d = seg.iter().map(|&v| da[v]).min().unwrap_or(UNREACHED);
            min_separation = Some(min_separation.map_or(d, |m: u32| m.min(d)));
        }
    }
    CoverCheck {
        valid: uncovered.is_empty() && min_separation.is_none_or(|m| m > s),
        uncovered: uncovered.into_iter().collect(),
        min_separation,
    }
}

/// Enlarges the balls by `extra` and merges intersecting ones until they
/// are pairwise disjoint; a merged ball is centred at one of the two old
/// centres and contains both.
fn disjoint_balls(g: &SimpGraph, balls: &[(usize, u32)], extra: u32) -> Vec<(usize, u32)> {
    let mut by_center: BTreeMap<usize, u32> = BTreeMap::new();
    for &(c, r) in balls {
        let e = by_center.entry(c).or_insert(0);
        *e = (*e).max(r + extra);
    }
    let mut out: Vec<(usize, u32)> = by_center.into_iter().collect();
    'merge: loop {
        for a in 0..out.len() {
            let d = g.bfs(out[a].0);
            for b in 0..out.len() {
                if a == b {
                    continue;
                }
                let (ra, rb, dab) = (out[a].1, out[b].1, d[out[b].0]);
                if dab != UNREACHED && dab <= ra + rb {
                    out[a].1 = ra.max(dab + rb);
                    out.remove(b);
                    continue 'merge;
                }
            }
        }
        break;
    }
    out
}

/// Components of the vertices of height ≥ `c` (for `c ≥ 1`).
pub(crate) fn high_components(g: &SimpGraph, c: u32) -> Vec<Option<usize>> {
    let n = g.vertex_count();
    let mut comp = vec![None; n];
    if c == 0 {
        return comp;
    }
    let mut next = 0;
    for s in 0..n {
        if comp[s].is_some() || g.height(s) < c {
            continue;
        }
        comp[s] = Some(next);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if comp[y].is_none() && g.height(y) >= c {
                    comp[y] = Some(next);
                    queue.push_back(y);
                }
            }
        }
        next += 1;
    }
    comp
}
