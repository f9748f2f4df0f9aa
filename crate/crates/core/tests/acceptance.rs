//! Acceptance suite. Each criterion runs in sequence against its time
//! budget and prints one PASS/FAIL line; the test fails if any line fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relhyp::complexes::{self, low_clique_bound, rips_ball_identity, simplex_chain, Chain, SComplex};
use relhyp::cusped::{check_horoball_convexity, CuspedGraph, TruncationCheck};
use relhyp::filling::{
    circuit_decomposition_comb, circuit_decomposition_simplicial, dehn_sample, fill_comb, filling_norm_lp,
    rational_vs_float_comb, rational_vs_float_fv, CircuitDecomposition, DehnOptions,
};
use relhyp::geomfill::{spider_cover, GeomFiller};
use relhyp::graphs::{GeodesicPath, SimpGraph, UNREACHED};
use relhyp::groups::{Element, Group, GroupPair, Subgroup};
use relhyp::hyperbolicity::{four_point_delta, four_point_delta_checked};
use relhyp::paircomplex::{QuotientComplex, RelativeCayleyComplex, RelativePresentation};
use relhyp::rational::{self, q, Q};
use relhyp::resolutions::{BarComplex, Identity, StWindow};
use relhyp::LinComb;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn pair(text: &str) -> GroupPair {
    GroupPair::parse(text, None).unwrap()
}

fn z_pair() -> GroupPair {
    pair("group abelian 1\nperipheral 1: x\n")
}

fn f2_pair() -> GroupPair {
    pair("group free 2\nperipheral 1: a\n")
}

fn s3_pair() -> GroupPair {
    let s3 = Group::symmetric(3);
    let t = s3.normal_form("(12)").unwrap();
    GroupPair::with_standard_gens(s3.clone(), vec![Subgroup::new(&s3, vec![t]).unwrap()]).unwrap()
}

fn ceil(x: &Q) -> u32 {
    rational::ceil_to_i64(x) as u32
}

// ---------------------------------------------------------------- 1

fn identities() -> Outcome {
    let all = [Identity::PHI.as_slice(), Identity::CONE.as_slice()].concat();
    let windows = [
        ("F2/<a>, ball 2", StWindow::ball(&f2_pair(), 2)),
        ("Z2/<x>, ball 2", StWindow::ball(&pair("group abelian 2\nperipheral 1: x\n"), 2)),
        ("S3/<(12)>", StWindow::whole(&s3_pair())),
        ("C2/{1,1}", StWindow::whole(&pair("group cyclic 2\nperipheral A:\nperipheral B:\n"))),
    ];
    let mut total = 0;
    for (seed, (name, w)) in windows.into_iter().enumerate() {
        let w = ok(w)?;
        for check in ok(relhyp::resolutions::identity_suite(&w, &all, 1000, seed as u64))? {
            ensure(check.samples == 1000 && check.failures == 0, || {
                format!("{name}: {} failed {} times, first at sample {:?}", check.identity.name(), check.failures, check.first_failure)
            })?;
            total += check.samples;
        }
    }
    Ok(format!("{total} samples over {} identities and 4 windows, no failures", all.len()))
}

// ---------------------------------------------------------------- 2

fn bar_isometry() -> Outcome {
    let mut detail = Vec::new();
    for (name, p) in [("S3/<(12)>", s3_pair()), ("C2/{1}", pair("group cyclic 2\nperipheral 1:\n"))] {
        let bar = ok(BarComplex::new(&p))?;
        for k in 0..=2 {
            let rep = ok(bar.check_iso(k, 20, k as u64))?;
            ensure(rep.passed(), || format!("{name}, degree {k}: {rep:?}"))?;
            detail.push(format!("{name} k={k} basis {}", rep.basis_size));
        }
    }
    Ok(detail.join(", "))
}

// ---------------------------------------------------------------- 3

/// Vertices within `rho` of the base identity vertex.
fn scan_ball(x: &CuspedGraph, rho: u32) -> Vec<usize> {
    let d = x.graph.bfs(0);
    (0..d.len()).filter(|&v| d[v] != UNREACHED && d[v] <= rho).collect()
}

struct Scan {
    r_base: usize,
    rho: u32,
}

/// δ over three growing truncation-safe scans; returns the last value.
fn stabilized_delta(name: &str, p: &GroupPair, scans: &[Scan], detail: &mut Vec<String>) -> Result<Q, String> {
    let mut deltas = Vec::new();
    for s in scans {
        let x = ok(CuspedGraph::build_default(p, s.r_base))?;
        let check = ok(TruncationCheck::new(&x, 2, 1))?;
        let set = scan_ball(&x, s.rho);
        let rep = ok(four_point_delta_checked(&check, &set))?;
        deltas.push(rep.delta_four_point);
    }
    let inc: Vec<Q> = deltas.windows(2).map(|w| &w[1] - &w[0]).collect();
    ensure(inc.windows(2).all(|w| w[1] <= w[0]), || format!("{name}: increments {inc:?} increase"))?;
    let last = inc.last().unwrap();
    ensure(!last.is_negative() && *last < rational::qf(1, 2), || format!("{name}: last increment {last}"))?;
    let text: Vec<String> = deltas.iter().map(|d| d.to_string()).collect();
    detail.push(format!("{name} δ {}", text.join(" → ")));
    Ok(deltas.pop().unwrap())
}

fn hyperbolicity() -> Result<(String, Q, Q), String> {
    let mut detail = Vec::new();
    for r in 1..=4 {
        let t = SimpGraph::regular_tree(4, r);
        let all: Vec<usize> = (0..t.vertex_count()).collect();
        let d = ok(four_point_delta(&t, &all))?.delta_four_point;
        ensure(d.is_zero(), || format!("tree of radius {r} has δ = {d}"))?;
    }
    detail.push("trees r≤4 δ=0".into());
    let all = |n| (0..n).collect::<Vec<_>>();
    // Control: a square in a grid is not thin.
    let grid = ok(four_point_delta(&SimpGraph::grid(3, 3), &all(9)))?.delta_four_point;
    ensure(grid.is_positive(), || "grid control has δ = 0".into())?;
    let z = stabilized_delta(
        "(Z,{Z})",
        &z_pair(),
        &[Scan { r_base: 2, rho: u32::MAX }, Scan { r_base: 4, rho: u32::MAX }, Scan { r_base: 8, rho: u32::MAX }],
        &mut detail,
    )?;
    let f = stabilized_delta(
        "(F2,{<a>})",
        &f2_pair(),
        &[Scan { r_base: 4, rho: 3 }, Scan { r_base: 4, rho: 4 }, Scan { r_base: 4, rho: 5 }],
        &mut detail,
    )?;
    Ok((detail.join("; "), z, f))
}

// ---------------------------------------------------------------- 4

fn convexity(delta_z: &Q, delta_f: &Q) -> Outcome {
    let mut detail = Vec::new();
    for (name, p, r, delta) in [("(Z,{Z})", z_pair(), 8, delta_z), ("(F2,{<a>})", f2_pair(), 3, delta_f)] {
        let c = ceil(delta) + 1;
        let x = ok(CuspedGraph::build_default(&p, r))?;
        let check = ok(TruncationCheck::new(&x, 2, 1))?;
        let rep = check_horoball_convexity(&x, c, &check);
        ensure(rep.violations.is_empty(), || format!("{name}: violations {:?}", &rep.violations[..rep.violations.len().min(5)]))?;
        ensure(rep.pairs_checked > 0, || format!("{name}: no safe pairs at C = {c}"))?;
        detail.push(format!(
            "{name} C={c}: {} pairs, {} geodesics, {} skipped",
            rep.pairs_checked, rep.geodesics_checked, rep.pairs_skipped_unsafe
        ));
    }
    Ok(detail.join("; "))
}

// ---------------------------------------------------------------- 5

/// Reduced H₀ and H₁ of the full subcomplex on every graph ball of radius
/// ≤ `max_r` accepted by `safe`.
fn balls_acyclic(k: &SComplex, max_r: u32, safe: impl Fn(&[usize]) -> bool) -> Result<usize, String> {
    let mut count = 0;
    for v in 0..k.vertex_count() {
        let d = k.graph.bfs(v);
        for r in 1..=max_r {
            let ball: Vec<usize> = (0..d.len()).filter(|&w| d[w] <= r).collect();
            if !safe(&ball) {
                continue;
            }
            let set: BTreeSet<u32> = ball.iter().map(|&w| w as u32).collect();
            let (sub, _) = k.full_subcomplex(&set);
            for deg in 0..=1 {
                let h = ok(sub.homology(deg, true, true))?;
                ensure(h.rank == 0, || format!("ball B_{r}({v}): reduced H_{deg} has rank {}", h.rank))?;
            }
            count += 1;
        }
    }
    Ok(count)
}

fn rips(delta_z: &Q) -> Outcome {
    let mut detail = Vec::new();
    let tree = SimpGraph::regular_tree(4, 4);
    let kt = ok(SComplex::build_rips(&tree, 6, 2))?;
    let n = balls_acyclic(&kt, 3, |_| true)?;
    detail.push(format!("tree κ=6: {n} balls"));

    let x = ok(CuspedGraph::build_default(&z_pair(), 8))?;
    let check = ok(TruncationCheck::new(&x, 2, 1))?;
    let kappa = 4 * ceil(delta_z) + 6;
    let kz = ok(SComplex::build_rips(&x.graph, kappa, 2))?;
    let n = balls_acyclic(&kz, 3, |b| check.distances_stable(b))?;
    ensure(n > 0, || "no truncation-safe balls".into())?;
    detail.push(format!("(Z,{{Z}}) κ={kappa}: {n} safe balls"));

    // The ball identity, also at small κ where it is not vacuous.
    let small = ok(CuspedGraph::build_default(&z_pair(), 4))?;
    for (name, k) in [
        ("tree κ=6", kt),
        ("(Z,{Z}) large κ", kz),
        ("tree κ=2", ok(SComplex::build_rips(&tree, 2, 2))?),
        ("(Z,{Z}) κ=2", ok(SComplex::build_rips(&small.graph, 2, 2))?),
        ("(Z,{Z}) κ=3", ok(SComplex::build_rips(&small.graph, 3, 2))?),
    ] {
        let rep = rips_ball_identity(&k, 2);
        ensure(rep.mismatches.is_empty(), || format!("{name}: ball identity fails at {:?}", rep.mismatches))?;
    }
    detail.push("ball identity l≤2 on 5 complexes".into());
    Ok(detail.join("; "))
}

// ---------------------------------------------------------------- 6

fn z2_complex(r: usize) -> RelativeCayleyComplex {
    let g = Group::free_abelian(2);
    let p = GroupPair::with_standard_gens(g.clone(), vec![Subgroup::trivial(&g)]).unwrap();
    let pres = RelativePresentation::parse("rel-pres { gens: x, y; relators: [x,y]; }").unwrap();
    RelativeCayleyComplex::build(&pres, &p, r).unwrap()
}

/// Lower bound for the filling norm of a grid loop: every filling covers
/// each unit square at least |winding number| times.
fn winding_bound(rcc: &RelativeCayleyComplex, z: &LinComb<usize>) -> Q {
    let xy = |v: usize| match rcc.key(v).0 {
        Element::Abelian(c) => (c[0], c[1]),
        _ => unreachable!(),
    };
    let mut total = Q::zero();
    for a in -12..12 {
        for b in -12..12 {
            // Signed crossings of the vertical ray down from (a+½, b+½).
            let mut w = Q::zero();
            for (&e, c) in z.iter() {
                let edge = &rcc.complex.edges[e];
                let ((x0, y0), (x1, y1)) = (xy(edge.tail), xy(edge.head));
                if y0 == y1 && y0 <= b && x0.min(x1) == a {
                    w += c * q(if x1 > x0 { 1 } else { -1 });
                }
            }
            total += w.abs();
        }
    }
    total
}

/// Triangulated `w × h` grid: one diagonal per square.
fn tri_grid(w: usize, h: usize) -> SComplex {
    let mut g = SimpGraph::grid(w, h);
    for j in 0..h - 1 {
        for i in 0..w - 1 {
            g.add_edge(j * w + i, (j + 1) * w + i + 1).unwrap();
        }
    }
    SComplex::build_rips(&g, 1, 2).unwrap()
}

fn coeff(rng: &mut ChaCha8Rng) -> Q {
    let a = rng.gen_range(1..=3);
    q(if rng.gen_bool(0.5) { a } else { -a })
}

fn filling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_gap = 0f64;
    let rcc = z2_complex(4);
    let k = &rcc.complex;
    let disc = tri_grid(6, 6);
    let tris = disc.simplices(2).to_vec();
    for n in 0..500 {
        let terms = rng.gen_range(1..=6);
        if n % 2 == 0 {
            let mut mu = LinComb::new();
            for _ in 0..terms {
                mu.add_term(rng.gen_range(0..k.cell_count()), coeff(&mut rng));
            }
            let z = k.boundary2(&mu);
            let f = ok(fill_comb(k, &z, None))?;
            ensure(f.value <= mu.norm(), || format!("sample {n}: filling {} exceeds ‖μ‖ = {}", f.value, mu.norm()))?;
            ensure(k.boundary2(&f.witness) == z, || format!("sample {n}: witness does not bound"))?;
            let cmp = ok(rational_vs_float_comb(k, &z))?;
            worst_gap = worst_gap.max(cmp.gap.abs());
        } else {
            let mut mu = Chain::new();
            for _ in 0..terms {
                mu.add_scaled(&simplex_chain(&tris[rng.gen_range(0..tris.len())]), &coeff(&mut rng));
            }
            let z = complexes::boundary(&mu);
            let f = ok(filling_norm_lp(&disc, &z, None))?;
            ensure(f.value <= mu.norm(), || format!("sample {n}: filling {} exceeds ‖μ‖ = {}", f.value, mu.norm()))?;
            ensure(complexes::boundary(&f.witness) == z, || format!("sample {n}: witness does not bound"))?;
            let cmp = ok(rational_vs_float_fv(&disc, &z))?;
            worst_gap = worst_gap.max(cmp.gap.abs());
        }
    }
    let rcc = z2_complex(8);
    let id = rcc.pair.group.identity();
    for s in 1..=4i64 {
        let z = ok(rcc.word_chain(&id, 0, &format!("x^{s} y^{s} x^-{s} y^-{s}")))?;
        let f = ok(fill_comb(&rcc.complex, &z, None))?;
        ensure(f.value == q(s * s), || format!("square {s}: filling norm {}", f.value))?;
        let lower = winding_bound(&rcc, &z);
        ensure(lower == f.value, || format!("square {s}: winding bound {lower} ≠ {}", f.value))?;
        worst_gap = worst_gap.max(ok(rational_vs_float_comb(&rcc.complex, &z))?.gap.abs());
    }
    ensure(worst_gap < 1e-6, || format!("float gap {worst_gap:e}"))?;
    Ok(format!("500 random μ, squares 1,4,9,16, worst float gap {worst_gap:.1e}"))
}

// ---------------------------------------------------------------- 7

fn check_circuits<E: Ord + Clone + std::fmt::Debug>(d: &CircuitDecomposition<E>, z: &LinComb<E>) -> Result<(), String> {
    ensure(d.reconstruct() == *z, || "circuits do not sum to the cycle".into())?;
    ensure(d.weighted_norm() == z.norm(), || format!("Σ a_c‖c‖ = {} ≠ ‖z‖ = {}", d.weighted_norm(), z.norm()))?;
    for c in &d.circuits {
        let distinct: BTreeSet<usize> = c.vertices.iter().copied().collect();
        ensure(c.coefficient.is_positive() && distinct.len() == c.len() && c.vertices.len() == c.len(), || {
            format!("circuit is not simple: {c:?}")
        })?;
    }
    Ok(())
}

/// Closed walk: a random walk followed by the canonical geodesic home.
fn closed_walk(g: &SimpGraph, rng: &mut ChaCha8Rng, len: usize) -> Chain {
    let start = rng.gen_range(0..g.vertex_count());
    let mut path = vec![start];
    for _ in 0..len {
        let nb = g.neighbors(*path.last().unwrap());
        path.push(nb[rng.gen_range(0..nb.len())]);
    }
    let back = g.canonical_geodesic(*path.last().unwrap(), start).unwrap().vertices;
    path.extend_from_slice(&back[1..]);
    let mut z = Chain::new();
    for e in path.windows(2) {
        z = &z + &simplex_chain(&[e[0] as u32, e[1] as u32]);
    }
    z
}

fn circuits() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rcc = z2_complex(5);
    let k = &rcc.complex;
    let x = ok(CuspedGraph::build(&z_pair(), 4, 3))?;
    let rips = ok(SComplex::build_rips(&x.graph, 2, 2))?;
    let tris = rips.simplices(2).to_vec();
    let mut pieces = 0;
    for n in 0..500 {
        if n % 2 == 0 {
            let mut mu = LinComb::new();
            for _ in 0..rng.gen_range(1..=8) {
                mu.add_term(rng.gen_range(0..k.cell_count()), coeff(&mut rng));
            }
            let z = k.boundary2(&mu);
            let d = ok(circuit_decomposition_comb(k, &z))?;
            check_circuits(&d, &z).map_err(|e| format!("grid sample {n}: {e}"))?;
            pieces += d.circuits.len();
        } else {
            let mut z = Chain::new();
            for _ in 0..rng.gen_range(0..=3) {
                z.add_scaled(&complexes::boundary(&simplex_chain(&tris[rng.gen_range(0..tris.len())])), &coeff(&mut rng));
            }
            for _ in 0..rng.gen_range(1..=3) {
                let len = rng.gen_range(2..=10);
                z.add_scaled(&closed_walk(&x.graph, &mut rng, len), &coeff(&mut rng));
            }
            let d = ok(circuit_decomposition_simplicial(&z))?;
            check_circuits(&d, &z).map_err(|e| format!("cusped sample {n}: {e}"))?;
            pieces += d.circuits.len();
        }
    }
    Ok(format!("500 cycles, {pieces} circuits, exact sums and norms"))
}

// ---------------------------------------------------------------- 8

/// Boundary of the rectangle `[x0, x1] × [y0, y1]` of a triangulated grid,
/// as the boundary of its coherently oriented triangles.
fn rect_cycle(k: &SComplex, w: usize, (x0, x1): (usize, usize), (y0, y1): (usize, usize)) -> Chain {
    let inside = |v: u32| {
        let (i, j) = (v as usize % w, v as usize / w);
        (x0..=x1).contains(&i) && (y0..=y1).contains(&j)
    };
    let mut mu = Chain::new();
    for t in k.simplices(2).iter().filter(|t| t.iter().all(|&v| inside(v))) {
        // Lower triangles (v, v+1, v+w+1) keep their order, upper ones
        // (v, v+w, v+w+1) are reversed.
        let sign = if t[1] == t[0] + 1 { 1 } else { -1 };
        mu.add_scaled(&simplex_chain(t), &q(sign));
    }
    complexes::boundary(&mu)
}

fn row(w: usize, j: usize, from: usize, to: usize) -> GeodesicPath {
    GeodesicPath {
        vertices: (from..=to).map(|i| j * w + i).collect(),
    }
}

/// Three arms of `m` tetrahedra glued at cut vertices around a centre.
fn tripod(m: usize) -> (SComplex, Vec<GeodesicPath>, Vec<Vec<u32>>) {
    let mut g = SimpGraph::with_vertices(1);
    let mut arms = Vec::new();
    let mut tets = Vec::new();
    for _ in 0..3 {
        let mut spine = vec![0usize];
        for _ in 0..m {
            let a = *spine.last().unwrap();
            let vs: Vec<usize> = (0..3).map(|_| g.add_vertex(String::new(), 0)).collect();
            let block = [a, vs[0], vs[1], vs[2]];
            for x in 0..4 {
                for y in x + 1..4 {
                    g.add_edge(block[x], block[y]).unwrap();
                }
            }
            tets.push(block.iter().map(|&v| v as u32).collect());
            spine.push(vs[2]);
        }
        arms.push(GeodesicPath { vertices: spine });
    }
    (SComplex::build_rips(&g, 1, 3).unwrap(), arms, tets)
}

/// Largest distance from the geodesics to the support of `a`.
fn spread(g: &SimpGraph, geodesics: &[&[usize]], a: &Chain) -> u32 {
    let d = g.multi_bfs(geodesics.iter().flat_map(|p| p.iter().copied()));
    complexes::support0(a).iter().map(|&v| d[v as usize]).max().unwrap_or(0)
}

/// Per-size maximum ratios and their relative spread.
fn ratio_variation(family: &[(usize, Q)]) -> (f64, Vec<f64>) {
    let sizes: BTreeSet<usize> = family.iter().map(|f| f.0).collect();
    let maxima: Vec<f64> = sizes
        .iter()
        .map(|&s| family.iter().filter(|f| f.0 == s).map(|f| rational::to_f64(&f.1)).fold(0.0, f64::max))
        .collect();
    let hi = maxima.iter().copied().fold(f64::MIN, f64::max);
    let lo = maxima.iter().copied().fold(f64::MAX, f64::min);
    ((hi - lo) / hi, maxima)
}

fn pipelines() -> Outcome {
    let mut detail = Vec::new();

    // Slicing.
    let w = 48;
    let k = tri_grid(w, 4);
    let f = GeomFiller::new(&k, None);
    let gamma = row(w, 0, 0, w - 1);
    let mut sliced = 0;
    for (x0, x1, y1) in [(0, 3, 1), (1, 21, 1), (2, 40, 2), (5, 46, 1), (0, 47, 3)] {
        let z = rect_cycle(&k, w, (x0, x1), (0, y1));
        let s = y1 as u32 + 1;
        let out = ok(f.slice_cycle(&z, &gamma, s))?;
        let mut total = Chain::new();
        for p in &out.pieces {
            ensure(complexes::boundary(&p.cycle).is_zero(), || format!("slice {} is not a cycle", p.index))?;
            let d = f.skeleton.bfs(p.center);
            let r = complexes::support0(&p.cycle).iter().map(|&v| d[v as usize]).max().unwrap();
            ensure(r <= p.radius && p.radius <= out.r, || format!("slice {} leaves its ball: {r} > {}", p.index, p.radius))?;
            total = &total + &p.cycle;
        }
        ensure(total == z, || "slices do not sum to the cycle".into())?;
        sliced += out.pieces.len();
    }
    detail.push(format!("5 slicings, {sliced} ball-supported pieces"));

    // Geodesic covers in a tree and in a grid, checked exhaustively.
    let tree = SimpGraph::regular_tree(3, 6);
    let leaves: Vec<usize> = (0..tree.vertex_count()).filter(|&v| tree.neighbors(v).len() == 1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut families: Vec<(SimpGraph, Vec<GeodesicPath>, u32)> = Vec::new();
    for n in 0..10 {
        let count = 2 + n % 3;
        let gs = (0..count)
            .map(|_| {
                let a = leaves[rng.gen_range(0..leaves.len())];
                let b = leaves[rng.gen_range(0..leaves.len())];
                tree.canonical_geodesic(a, b).unwrap()
            })
            .filter(|g| g.len() > 0)
            .collect();
        families.push((tree.clone(), gs, 1 + n as u32 % 3));
    }
    let grid = SimpGraph::grid(21, 21);
    let col = |i: usize| GeodesicPath { vertices: (0..21).map(|j| j * 21 + i).collect() };
    families.push((grid.clone(), vec![row(21, 10, 0, 20), col(10)], 1));
    families.push((grid.clone(), vec![row(21, 3, 0, 20), row(21, 17, 0, 20), col(4)], 2));
    for (n, (g, gs, s)) in families.iter().enumerate() {
        let cover = ok(spider_cover(g, gs, *s, &Q::zero()))?;
        for p in gs {
            for &v in &p.vertices {
                let in_ball = cover.balls.iter().any(|&(c, r)| g.distance(c, v).unwrap() <= r as usize);
                let on_seg = cover.segments.iter().any(|seg| seg.contains(&v));
                ensure(in_ball || on_seg, || format!("family {n}: vertex {v} uncovered"))?;
            }
        }
        for (i, a) in cover.segments.iter().enumerate() {
            let d = g.multi_bfs(a.iter().copied());
            for b in &cover.segments[i + 1..] {
                let sep = b.iter().map(|&v| d[v]).min().unwrap();
                ensure(sep > *s, || format!("family {n}: segments {sep} apart, S = {s}"))?;
            }
        }
    }
    detail.push(format!("{} covers", families.len()));

    // Graph-like fillings of tetrahedral shells; the ratio is 1/4 at every size.
    let mut instances = 0;
    let mut family = Vec::new();
    for m in [6, 12, 24] {
        let (k, arms, tets) = tripod(m);
        let f = GeomFiller::new(&k, None);
        let pick: [Box<dyn Fn(usize) -> bool>; 4] = [
            Box::new(|_| true),
            Box::new(move |i| i < m),
            Box::new(|i| i % 2 == 0),
            Box::new(move |i| i % m < m / 2),
        ];
        for keep in pick {
            let mut mu = Chain::new();
            for (_, t) in tets.iter().enumerate().filter(|(i, _)| keep(*i)) {
                mu = &mu + &simplex_chain(t);
            }
            let z = complexes::boundary(&mu);
            let out = ok(f.fill_graphlike(&z, &arms, 1, &Q::zero()))?;
            let a = &out.certificate.output;
            ensure(complexes::boundary(a) == z, || format!("graphlike m={m}: ∂a ≠ z"))?;
            let arm_sets: Vec<&[usize]> = arms.iter().map(|p| p.vertices.as_slice()).collect();
            let r = spread(&f.skeleton, &arm_sets, a);
            ensure(r <= out.certificate.support_radius && r <= 1 + out.s, || format!("graphlike m={m}: support at distance {r}"))?;
            family.push((z.len(), out.certificate.ratio.clone()));
            instances += 1;
        }
    }
    let (var_graphlike, max_graphlike) = ratio_variation(&family);

    // Triangle fillings of thin rectangles, ‖z‖ doubling at fixed thickness.
    let w = 104;
    let k = tri_grid(w, 3);
    let f = GeomFiller::new(&k, None);
    let mut family = Vec::new();
    for len in [12usize, 24, 48] {
        for (x0, y0) in [(0, 0), (3, 0), (7, 1)] {
            let (x1, y1) = (x0 + len, y0 + 1);
            let z = rect_cycle(&k, w, (x0, x1), (y0, y1));
            let tri = [y0 * w + x0, y0 * w + x1, y1 * w + x1];
            let out = ok(f.fill_triangle(&z, tri, 1, &q(1)))?;
            let a = &out.certificate.output;
            ensure(complexes::boundary(a) == z, || format!("triangle len={len}: ∂a ≠ z"))?;
            let sides: Vec<Vec<usize>> = [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])]
                .iter()
                .map(|&(u, v)| f.skeleton.canonical_geodesic(u, v).unwrap().vertices)
                .collect();
            let side_sets: Vec<&[usize]> = sides.iter().map(Vec::as_slice).collect();
            let r = spread(&f.skeleton, &side_sets, a);
            ensure(r <= out.certificate.support_radius && r <= out.r, || format!("triangle len={len}: support at distance {r}"))?;
            ensure(out.certificate.maxh == Some(0), || "triangle family changed height".into())?;
            family.push((len, out.certificate.ratio.clone()));
            instances += 1;
        }
    }
    let (var_triangle, max_triangle) = ratio_variation(&family);
    ensure(instances >= 20, || format!("only {instances} filling instances"))?;
    ensure(var_graphlike < 0.1 && var_triangle < 0.1, || {
        format!("ratio variation graphlike {var_graphlike:.3}, triangle {var_triangle:.3}")
    })?;
    let show = |m: &[f64]| m.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(",");
    detail.push(format!(
        "{instances} certified fillings; max ratios graph-like [{}] triangle [{}], variation {:.1}% / {:.1}%",
        show(&max_graphlike),
        show(&max_triangle),
        100.0 * var_graphlike,
        100.0 * var_triangle
    ));
    Ok(detail.join("; "))
}

// ---------------------------------------------------------------- 9

fn dehn() -> Outcome {
    let rcc = z2_complex(9);
    let opts = DehnOptions {
        k_max: 16,
        budget: 1 << 26,
        roots: rcc.roots(),
        translation_keys: true,
    };
    let s = ok(dehn_sample(&rcc.complex, &opts))?;
    ensure(!s.partial && s.unfillable == 0, || format!("Z² sample incomplete: partial {}, unfillable {}", s.partial, s.unfillable))?;
    ensure(s.fit.residual_at_max.is_positive(), || format!("Z² fit residual {}", s.fit.residual_at_max))?;
    let at16 = s.rows[15].value.clone();
    ensure(at16 == q(16), || format!("FV(16) sample {at16}, expected 16"))?;

    let g = Group::free(2);
    let a = g.normal_form("a").unwrap();
    let p = GroupPair::with_standard_gens(g.clone(), vec![Subgroup::new(&g, vec![a]).unwrap()]).unwrap();
    let pres = RelativePresentation::parse("rel-pres { gens: b; peripherals: P1 = <a>; relators: ; }").unwrap();
    let quotient = ok(QuotientComplex::build(&ok(RelativeCayleyComplex::build(&pres, &p, 4))?))?;
    let opts = DehnOptions {
        k_max: 16,
        budget: 1 << 24,
        roots: vec![],
        translation_keys: false,
    };
    let f = ok(dehn_sample(&quotient.complex, &opts))?;
    ensure(f.rows.iter().all(|r| r.value.is_zero()), || "F2 quotient has a non-zero sample".into())?;
    Ok(format!(
        "Z²: FV(16) ≥ {at16}, residual {} over slope {}; F2 quotient: {} rows all 0",
        s.fit.residual_at_max,
        s.fit.slope,
        f.rows.len()
    ))
}

// ---------------------------------------------------------------- 10

/// `(n, cap)` from the low-clique bound, after checking its witness.
fn clique_bound(g: &SimpGraph, kappa: u32, c: u32) -> Result<(usize, usize), String> {
    let (n, clique) = low_clique_bound(g, kappa, c);
    ensure(clique.len() == n && clique.iter().any(|&v| g.height(v) <= c), || "witness misses the low heights".into())?;
    for &u in &clique {
        let d = g.bfs_bounded(u, kappa);
        ensure(clique.iter().all(|&v| d[v] != UNREACHED), || "witness has diameter above κ".into())?;
    }
    let (cap, _) = low_clique_bound(g, kappa, u32::MAX);
    ensure(n <= cap, || format!("n = {n} above the dimension cap {cap}"))?;
    Ok((n, cap))
}

fn height_profile(delta_z: &Q) -> Outcome {
    let c = ceil(delta_z) + 1;
    let mut detail = Vec::new();
    // (κ, H_max, two base radii): the specified κ = 10 at the largest
    // height the exact clique search handles, and κ = 2 where simplices
    // above dimension n exist inside the truncation.
    for (kappa, h, radii) in [(10, c + 1, [128, 256]), (2, c + 3, [16, 32])] {
        let mut ns = Vec::new();
        for r in radii {
            let x = ok(CuspedGraph::build(&z_pair(), r, h))?;
            ns.push(clique_bound(&x.graph, kappa, c)?);
        }
        ensure(ns[0].0 == ns[1].0, || format!("κ={kappa}: n differs across truncations: {ns:?}"))?;
        detail.push(format!("κ={kappa} H_max={h}: n = {} at R={} and R={} (caps {} / {})", ns[0].0, radii[0], radii[1], ns[0].1, ns[1].1));
    }

    // Direct profile on a small Rips complex agrees with the bound.
    let x = ok(CuspedGraph::build(&z_pair(), 2, 3))?;
    let k = ok(SComplex::build_rips(&x.graph, 2, 6))?;
    let (n, _) = clique_bound(&x.graph, 2, 1)?;
    let profile = k.min_height_dimension_profile();
    for (&m, &h) in &profile {
        ensure((h > 1) == (m >= n), || format!("profile {profile:?} disagrees with n = {n}"))?;
    }
    Ok(format!("C={c}; {}", detail.join("; ")))
}

// ----------------------------------------------------------------

fn report(n: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let elapsed = t.elapsed();
    let (pass, detail) = match out {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget {budget:?}")),
        Err(e) => (false, e),
    };
    let line = format!(
        "criterion {n:>2} {}: {name} [{:.1}s / {}s] {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    // Written past the harness capture so the lines always show.
    writeln!(std::io::stderr(), "{line}").unwrap();
    pass
}

#[test]
fn acceptance() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let mut results = Vec::new();
    results.push(report(1, "resolution identities", min(2), identities));
    results.push(report(2, "bar resolution isometry", min(1), bar_isometry));
    let mut deltas = None;
    results.push(report(3, "hyperbolicity", min(5), || {
        let (d, z, f) = hyperbolicity()?;
        deltas = Some((z, f));
        Ok(d)
    }));
    // Later criteria need δ; fall back to the known values if 3 failed.
    let (dz, df) = deltas.unwrap_or_else(|| (rational::qf(3, 2), rational::qf(3, 2)));
    results.push(report(4, "C-horoball convexity", min(5), || convexity(&dz, &df)));
    results.push(report(5, "Rips contractibility", min(10), || rips(&dz)));
    results.push(report(6, "filling LP", min(5), filling));
    results.push(report(7, "circuit decomposition", min(2), circuits));
    results.push(report(8, "geometric filling pipelines", min(15), pipelines));
    results.push(report(9, "Dehn growth contrast", min(10), dehn));
    results.push(report(10, "height profile", min(5), || height_profile(&dz)));
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
