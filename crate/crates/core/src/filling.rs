//! Exact ℓ¹ filling norms, conformal circuit decompositions and sampling of
//! the homological Dehn function.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::{self, Chain, SComplex, Simplex};
use crate::error::{Error, Result};
use crate::graphs::UNREACHED;
use crate::lincomb::LinComb;
use crate::lp::{self, LpStatus};
use crate::paircomplex::{path_chain, CombComplex2};
use crate::rational::{self, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FillMethod {
    /// The input was zero.
    Zero,
    /// The boundary map has full column rank on the allowed cells, so the
    /// filling is the unique solution of `∂μ = γ`.
    Unique,
    Simplex,
}

/// Optimal filling `μ` of a cycle: `∂μ = γ` and `‖μ‖ = value`.
#[derive(Clone, Debug)]
pub struct FillingResult<C: Ord, E: Ord> {
    pub value: Q,
    pub witness: LinComb<C>,
    pub cells_considered: usize,
    pub method: FillMethod,
    /// Prices `y` on boundary cells with `|⟨y, ∂c⟩| ≤ 1` for every allowed
    /// cell `c` and `⟨y, γ⟩ = value`, proving optimality.
    pub dual: Option<LinComb<E>>,
}

/// Minimum ℓ¹ norm of `μ = Σ μ_c c` over the given cells with `∂μ = target`.
/// With `force_simplex` the LP is solved even when the filling is unique, so
/// that a dual certificate is produced.
pub fn fill_cells<C, E>(cells: &[(C, LinComb<E>)], target: &LinComb<E>, force_simplex: bool) -> Result<FillingResult<C, E>>
where
    C: Ord + Clone,
    E: Ord + Clone,
{
    if target.is_zero() {
        return Ok(FillingResult {
            value: Q::zero(),
            witness: LinComb::new(),
            cells_considered: cells.len(),
            method: FillMethod::Zero,
            dual: Some(LinComb::new()),
        });
    }
    let (rows, cols, b) = system(cells, target)?;
    let m = rows.len();
    let n = cols.len();
    let mut witness = LinComb::new();
    let mut method = FillMethod::Simplex;
    let mut dual = None;
    let mut solved = false;
    if !force_simplex {
        let (sol, rank) = lp::linear_solve(m, &cols, &b);
        let Some(x) = sol else { return Err(Error::Infeasible) };
        if rank == n {
            for (j, v) in x.into_iter().enumerate() {
                witness.add_term(cells[j].0.clone(), v);
            }
            method = FillMethod::Unique;
            solved = true;
        }
    }
    if !solved {
        let mut split = cols.clone();
        split.extend(cols.iter().map(|c| c.iter().map(|(i, v)| (*i, -v.clone())).collect::<Vec<_>>()));
        let cost = vec![Q::one(); 2 * n];
        let sol = lp::solve(m, &split, &b, &cost);
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(Error::Infeasible),
            LpStatus::Unbounded => return Err(Error::Numerical("ℓ¹ objective reported unbounded".into())),
        }
        for j in 0..n {
            witness.add_term(cells[j].0.clone(), &sol.x[j] - &sol.x[n + j]);
        }
        let mut y = LinComb::new();
        for (key, &i) in &rows {
            y.add_term(key.clone(), sol.y[i].clone());
        }
        dual = Some(y);
    }
    let cell_map: BTreeMap<&C, &LinComb<E>> = cells.iter().map(|(c, b)| (c, b)).collect();
    if &witness.map_linear(|c| cell_map[c].clone()) != target {
        return Err(Error::Numerical("filling does not reproduce the cycle".into()));
    }
    Ok(FillingResult {
        value: witness.norm(),
        witness,
        cells_considered: cells.len(),
        method,
        dual,
    })
}

type System<E> = (BTreeMap<E, usize>, Vec<Vec<(usize, Q)>>, Vec<Q>);

fn system<C, E: Ord + Clone>(cells: &[(C, LinComb<E>)], target: &LinComb<E>) -> Result<System<E>> {
    let mut rows: BTreeMap<E, usize> = BTreeMap::new();
    for (_, bd) in cells {
        for k in bd.keys() {
            let next = rows.len();
            rows.entry(k.clone()).or_insert(next);
        }
    }
    if target.keys().any(|k| !rows.contains_key(k)) {
        return Err(Error::Infeasible);
    }
    let cols = cells
        .iter()
        .map(|(_, bd)| bd.iter().map(|(k, v)| (rows[k], v.clone())).collect())
        .collect();
    let mut b = vec![Q::zero(); rows.len()];
    for (k, v) in target.iter() {
        b[rows[k]] = v.clone();
    }
    Ok((rows, cols, b))
}

/// The same minimum computed in double precision.
pub fn fill_cells_f64<C, E: Ord + Clone>(cells: &[(C, LinComb<E>)], target: &LinComb<E>) -> Result<f64> {
    if target.is_zero() {
        return Ok(0.0);
    }
    let (rows, cols, b) = system(cells, target)?;
    let to_f = |v: &Q| rational::to_f64(v);
    let mut split: Vec<Vec<(usize, f64)>> = cols.iter().map(|c| c.iter().map(|(i, v)| (*i, to_f(v))).collect()).collect();
    split.extend(cols.iter().map(|c| c.iter().map(|(i, v)| (*i, -to_f(v))).collect::<Vec<_>>()));
    let b: Vec<f64> = b.iter().map(to_f).collect();
    let sol = lp::solve(rows.len(), &split, &b, &vec![1.0; split.len()]);
    match sol.status {
        LpStatus::Optimal => Ok(sol.value),
        LpStatus::Infeasible => Err(Error::Infeasible),
        LpStatus::Unbounded => Err(Error::Numerical("floating LP reported unbounded".into())),
    }
}

/// `(k+1)`-simplices of `k` with their boundaries, restricted to `region`.
pub fn simplicial_cells(k: &SComplex, degree: usize, region: Option<&BTreeSet<u32>>) -> Vec<(Simplex, Chain)> {
    k.simplices(degree)
        .iter()
        .filter(|s| region.is_none_or(|r| s.iter().all(|v| r.contains(v))))
        .map(|s| (s.clone(), complexes::boundary_of_simplex(s)))
        .collect()
}

fn check_simplicial(k: &SComplex, gamma: &Chain) -> Result<Option<usize>> {
    let Some(d) = complexes::degree(gamma) else { return Ok(None) };
    if gamma.keys().any(|s| s.len() != d + 1) {
        return Err(Error::invalid("chain mixes degrees"));
    }
    if d >= 1 && !complexes::boundary(gamma).is_zero() {
        return Err(Error::NotACycle);
    }
    if d + 1 > k.d_max {
        return Err(Error::DimensionCap {
            needed: d + 1,
            cap: k.d_max,
        });
    }
    Ok(Some(d))
}

/// Exact filling norm of a simplicial cycle, over the simplices of one
/// dimension higher that lie in `region` (all of `k` when `None`).
pub fn filling_norm_lp(k: &SComplex, gamma: &Chain, region: Option<&BTreeSet<u32>>) -> Result<FillingResult<Simplex, Simplex>> {
    fill_simplicial(k, gamma, region, false)
}

/// As [`filling_norm_lp`], always solving the LP so that a dual is returned.
pub fn filling_norm_dual(k: &SComplex, gamma: &Chain, region: Option<&BTreeSet<u32>>) -> Result<FillingResult<Simplex, Simplex>> {
    fill_simplicial(k, gamma, region, true)
}

fn fill_simplicial(
    k: &SComplex,
    gamma: &Chain,
    region: Option<&BTreeSet<u32>>,
    force: bool,
) -> Result<FillingResult<Simplex, Simplex>> {
    let Some(d) = check_simplicial(k, gamma)? else {
        return fill_cells::<Simplex, Simplex>(&[], gamma, force);
    };
    fill_cells(&simplicial_cells(k, d + 1, region), gamma, force)
}

/// 2-cells of `k` with their boundaries, restricted to cells whose
/// vertices all lie in `region`.
pub fn comb_cells(k: &CombComplex2, region: Option<&BTreeSet<usize>>) -> Vec<(usize, LinComb<usize>)> {
    (0..k.cell_count())
        .filter(|&c| region.is_none_or(|r| k.cell_vertices(c).iter().all(|v| r.contains(v))))
        .map(|c| (c, k.cell_chain(c)))
        .collect()
}

/// Exact filling norm of a cellular 1-cycle (keys are edge ids).
pub fn fill_comb(k: &CombComplex2, gamma: &LinComb<usize>, region: Option<&BTreeSet<usize>>) -> Result<FillingResult<usize, usize>> {
    fill_comb_with(k, gamma, region, false)
}

pub fn fill_comb_with(
    k: &CombComplex2,
    gamma: &LinComb<usize>,
    region: Option<&BTreeSet<usize>>,
    force_simplex: bool,
) -> Result<FillingResult<usize, usize>> {
    if gamma.keys().any(|&e| e >= k.edge_count()) {
        return Err(Error::invalid("cycle uses an unknown edge"));
    }
    if !k.boundary1(gamma).is_zero() {
        return Err(Error::NotACycle);
    }
    fill_cells(&comb_cells(k, region), gamma, force_simplex)
}

/// Exact and double-precision filling values of the same cycle.
#[derive(Clone, Debug, Serialize)]
pub struct FloatComparison {
    #[serde(with = "rational::text")]
    pub exact: Q,
    pub float: f64,
    pub gap: f64,
    /// `|gap| ≤ 10⁻⁶·(1 + value)`.
    pub within_tolerance: bool,
}

pub fn compare_cells<C: Ord + Clone, E: Ord + Clone>(cells: &[(C, LinComb<E>)], target: &LinComb<E>) -> Result<FloatComparison> {
    let exact = fill_cells(cells, target, false)?.value;
    let float = fill_cells_f64(cells, target)?;
    let ex = rational::to_f64(&exact);
    let gap = float - ex;
    Ok(FloatComparison {
        within_tolerance: gap.abs() <= 1e-6 * (1.0 + ex.abs()),
        exact,
        float,
        gap,
    })
}

pub fn rational_vs_float_fv(k: &SComplex, gamma: &Chain) -> Result<FloatComparison> {
    match check_simplicial(k, gamma)? {
        None => compare_cells::<Simplex, Simplex>(&[], gamma),
        Some(d) => compare_cells(&simplicial_cells(k, d + 1, None), gamma),
    }
}

pub fn rational_vs_float_comb(k: &CombComplex2, gamma: &LinComb<usize>) -> Result<FloatComparison> {
    if !k.boundary1(gamma).is_zero() {
        return Err(Error::NotACycle);
    }
    compare_cells(&comb_cells(k, None), gamma)
}

/// A simple closed path with a positive weight; `true` marks an edge
/// traversed in its own orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit<E> {
    pub coefficient: Q,
    pub edges: Vec<(E, bool)>,
    pub vertices: Vec<usize>,
}

impl<E: Ord + Clone> Circuit<E> {
    pub fn chain(&self) -> LinComb<E> {
        self.edges
            .iter()
            .map(|(e, f)| (e.clone(), rational::q(if *f { 1 } else { -1 })))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CircuitDecomposition<E> {
    pub circuits: Vec<Circuit<E>>,
}

impl<E: Ord + Clone> CircuitDecomposition<E> {
    /// `Σ a_c c`.
    pub fn reconstruct(&self) -> LinComb<E> {
        let mut out = LinComb::new();
        for c in &self.circuits {
            out.add_scaled(&c.chain(), &c.coefficient);
        }
        out
    }

    /// `Σ a_c ‖c‖`.
    pub fn weighted_norm(&self) -> Q {
        self.circuits.iter().map(|c| &c.coefficient * Q::from_integer(c.len().into())).sum()
    }
}

/// Conformal decomposition of a 1-cycle into circuits: every circuit runs
/// along the sign orientation of `z`, so `Σ a_c ‖c‖ = ‖z‖`. `ends` gives the
/// tail and head of an edge.
pub fn circuit_decomposition<E: Ord + Clone>(z: &LinComb<E>, ends: impl Fn(&E) -> (usize, usize)) -> Result<CircuitDecomposition<E>> {
    // Arcs oriented along the sign of the coefficient, weighted by |a|.
    let mut arcs: Vec<(E, bool, usize, usize)> = Vec::new();
    let mut weight: Vec<Q> = Vec::new();
    let mut net: BTreeMap<usize, Q> = BTreeMap::new();
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (e, a) in z.iter() {
        let (t, h) = ends(e);
        let (fwd, from, to) = if a.is_positive() { (true, t, h) } else { (false, h, t) };
        *net.entry(to).or_insert_with(Q::zero) += a.abs();
        *net.entry(from).or_insert_with(Q::zero) -= a.abs();
        out.entry(from).or_default().push(arcs.len());
        arcs.push((e.clone(), fwd, from, to));
        weight.push(a.abs());
    }
    if net.values().any(|v| !v.is_zero()) {
        return Err(Error::NotACycle);
    }
    let mut circuits = Vec::new();
    let mut next_start = 0;
    loop {
        while next_start < arcs.len() && weight[next_start].is_zero() {
            next_start += 1;
        }
        if next_start == arcs.len() {
            break;
        }
        let start = arcs[next_start].2;
        let mut seen: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        let mut path: Vec<usize> = Vec::new();
        let mut at = start;
        let first_cycle = loop {
            // Conservation guarantees an outgoing arc with positive weight.
            let arc = *out[&at]
                .iter()
                .find(|&&a| weight[a].is_positive())
                .ok_or(Error::NotACycle)?;
            path.push(arc);
            at = arcs[arc].3;
            if let Some(&p) = seen.get(&at) {
                break path[p..].to_vec();
            }
            seen.insert(at, path.len());
        };
        let a = first_cycle.iter().map(|&k| weight[k].clone()).min().expect("non-empty cycle");
        for &k in &first_cycle {
            weight[k] -= &a;
        }
        circuits.push(Circuit {
            coefficient: a,
            vertices: first_cycle.iter().map(|&k| arcs[k].2).collect(),
            edges: first_cycle.iter().map(|&k| (arcs[k].0.clone(), arcs[k].1)).collect(),
        });
    }
    Ok(CircuitDecomposition { circuits })
}

/// Decomposition of a simplicial 1-cycle; edge `[u, v]` runs from `u` to `v`.
pub fn circuit_decomposition_simplicial(z: &Chain) -> Result<CircuitDecomposition<Simplex>> {
    if z.keys().any(|s| s.len() != 2) {
        return Err(Error::invalid("expected a 1-chain"));
    }
    circuit_decomposition(z, |s| (s[0] as usize, s[1] as usize))
}

pub fn circuit_decomposition_comb(k: &CombComplex2, z: &LinComb<usize>) -> Result<CircuitDecomposition<usize>> {
    circuit_decomposition(z, |&e| (k.edges[e].tail, k.edges[e].head))
}

#[derive(Clone, Debug)]
pub struct DehnOptions {
    pub k_max: usize,
    /// Maximum number of search nodes in the circuit enumeration.
    pub budget: u64,
    /// Start vertices; every circuit to be sampled must meet one of them.
    /// Empty means every vertex.
    pub roots: Vec<usize>,
    /// Identify circuits whose edge-label words agree up to rotation and
    /// reversal (translates, in a labelled Cayley complex). Ignored when the
    /// complex is not label-deterministic.
    pub translation_keys: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DehnRow {
    pub k: usize,
    /// Largest filling norm over sampled circuits of length ≤ k.
    #[serde(with = "rational::text")]
    pub value: Q,
    /// Distinct sampled circuits of length exactly k.
    pub circuits: usize,
}

/// Least-squares line through the table from the shortest circuit length on.
#[derive(Clone, Debug, Serialize)]
pub struct LinearFit {
    pub from_k: usize,
    #[serde(with = "rational::text")]
    pub slope: Q,
    #[serde(with = "rational::text")]
    pub intercept: Q,
    /// Sample minus fitted value at `k_max`.
    #[serde(with = "rational::text")]
    pub residual_at_max: Q,
    /// Smallest `C` with every sample `≤ C·k`.
    #[serde(with = "rational::text")]
    pub c_bound: Q,
}

/// Lower bound for the homological Dehn function from circuit sampling.
#[derive(Clone, Debug, Serialize)]
pub struct DehnSample {
    pub rows: Vec<DehnRow>,
    pub search_nodes: u64,
    pub distinct_circuits: usize,
    /// The enumeration budget ran out; the table covers only what was seen.
    pub partial: bool,
    /// Circuits with no filling inside the truncation.
    pub unfillable: usize,
    /// `∂₂` is injective, so fillings are unique and regional fills are exact.
    pub fillings_unique: bool,
    pub fit: LinearFit,
}

pub fn dehn_sample(k: &CombComplex2, opts: &DehnOptions) -> Result<DehnSample> {
    let roots: Vec<usize> = if opts.roots.is_empty() { (0..k.vertex_count()).collect() } else { opts.roots.clone() };
    if let Some(&r) = roots.iter().find(|&&r| r >= k.vertex_count()) {
        return Err(Error::invalid(format!("root {r} is not a vertex")));
    }
    let by_labels = opts.translation_keys && k.is_label_deterministic();
    let mut labels: HashMap<&str, u32> = HashMap::new();
    for e in &k.edges {
        let next = labels.len() as u32;
        labels.entry(e.label.as_str()).or_insert(next);
    }
    let edge_label: Vec<u32> = k.edges.iter().map(|e| labels[e.label.as_str()]).collect();

    let inc = k.incidence();
    let mut search = CircuitSearch {
        inc: &inc,
        max_len: opts.k_max,
        budget: opts.budget,
        nodes: 0,
        partial: false,
        found: Vec::new(),
        keys: HashSet::new(),
    };
    for (ri, &r) in roots.iter().enumerate() {
        let dist = k.distances_from([r]);
        let mut on_path = vec![false; k.vertex_count()];
        on_path[r] = true;
        let mut path = Vec::new();
        let key_of = |p: &[(usize, bool)]| -> Vec<u64> {
            if by_labels {
                let mut key = vec![ri as u64];
                key.extend(label_word_key(p, &edge_label));
                key
            } else {
                let mut ids: Vec<u64> = p.iter().map(|&(e, _)| e as u64).collect();
                ids.sort_unstable();
                ids
            }
        };
        search.run(r, r, &dist, &mut on_path, &mut path, &key_of);
        if search.partial {
            break;
        }
    }

    let cells = comb_cells(k, None);
    let cols: Vec<complexes::rank::Column> = cells
        .iter()
        .map(|(_, b)| b.iter().map(|(&e, v)| (e as u32, rational::ceil_to_i64(v))).collect())
        .collect();
    let unique = complexes::rank::rank_mod_p(&cols) == cells.len();

    let values: Vec<Option<Q>> = search
        .found
        .par_iter()
        .map(|p| fill_circuit(k, &path_chain(p), unique))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut best = Q::zero();
    let mut shortest = None;
    for len in 1..=opts.k_max {
        let mut count = 0;
        for (p, v) in search.found.iter().zip(&values) {
            if p.len() == len {
                count += 1;
                shortest.get_or_insert(len);
                if let Some(v) = v {
                    if *v > best {
                        best = v.clone();
                    }
                }
            }
        }
        rows.push(DehnRow {
            k: len,
            value: best.clone(),
            circuits: count,
        });
    }
    let fit = linear_fit(&rows, shortest.unwrap_or(1));
    Ok(DehnSample {
        rows,
        search_nodes: search.nodes,
        distinct_circuits: search.found.len(),
        partial: search.partial,
        unfillable: values.iter().filter(|v| v.is_none()).count(),
        fillings_unique: unique,
        fit,
    })
}

/// Rotation- and reversal-minimal label word of a closed path.
fn label_word_key(p: &[(usize, bool)], edge_label: &[u32]) -> Vec<u64> {
    let letter = |&(e, f): &(usize, bool), flip: bool| (edge_label[e] as u64) << 1 | u64::from(f != flip);
    let fwd: Vec<u64> = p.iter().map(|s| letter(s, false)).collect();
    let rev: Vec<u64> = p.iter().rev().map(|s| letter(s, true)).collect();
    let n = p.len();
    let mut best: Option<Vec<u64>> = None;
    for w in [&fwd, &rev] {
        for s in 0..n {
            let rot: Vec<u64> = w[s..].iter().chain(&w[..s]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// Filling value of one circuit, `None` when the truncation has none.
/// With unique fillings the search grows a neighbourhood of the circuit
/// until it contains the filling; otherwise the whole complex is used.
fn fill_circuit(k: &CombComplex2, z: &LinComb<usize>, unique: bool) -> Result<Option<Q>> {
    if unique {
        let dist = k.distances_from(k.support0(z));
        let far = dist.iter().filter(|&&d| d != UNREACHED).max().copied().unwrap_or(0);
        for r in 1..=far {
            let region: BTreeSet<usize> = (0..k.vertex_count()).filter(|&v| dist[v] <= r).collect();
            match fill_comb(k, z, Some(&region)) {
                Ok(f) => return Ok(Some(f.value)),
                Err(Error::Infeasible) => {}
                Err(e) => return Err(e),
            }
        }
    }
    match fill_comb(k, z, None) {
        Ok(f) => Ok(Some(f.value)),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

fn linear_fit(rows: &[DehnRow], from_k: usize) -> LinearFit {
    let pts: Vec<(Q, Q)> = rows
        .iter()
        .filter(|r| r.k >= from_k)
        .map(|r| (Q::from_integer(r.k.into()), r.value.clone()))
        .collect();
    let n = Q::from_integer(pts.len().into());
    let sx: Q = pts.iter().map(|p| p.0.clone()).sum();
    let sy: Q = pts.iter().map(|p| p.1.clone()).sum();
    let sxy: Q = pts.iter().map(|p| &p.0 * &p.1).sum();
    let sxx: Q = pts.iter().map(|p| &p.0 * &p.0).sum();
    let den = &n * &sxx - &sx * &sx;
    let slope = if den.is_zero() { Q::zero() } else { (&n * &sxy - &sx * &sy) / den };
    let intercept = if pts.is_empty() { Q::zero() } else { (&sy - &slope * &sx) / &n };
    let residual_at_max = pts
        .last()
        .map(|(x, y)| y - (&slope * x + &intercept))
        .unwrap_or_else(Q::zero);
    let c_bound = rows
        .iter()
        .map(|r| &r.value / Q::from_integer(r.k.into()))
        .max()
        .unwrap_or_else(Q::zero);
    LinearFit {
        from_k,
        slope,
        intercept,
        residual_at_max,
        c_bound,
    }
}

struct CircuitSearch<'a> {
    inc: &'a [Vec<(usize, usize, bool)>],
    max_len: usize,
    budget: u64,
    nodes: u64,
    partial: bool,
    found: Vec<Vec<(usize, bool)>>,
    keys: HashSet<Vec<u64>>,
}

impl CircuitSearch<'_> {
    fn run(
        &mut self,
        root: usize,
        at: usize,
        dist: &[u32],
        on_path: &mut [bool],
        path: &mut Vec<(usize, bool)>,
        key_of: &dyn Fn(&[(usize, bool)]) -> Vec<u64>,
    ) {
        if self.partial {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.partial = true;
            return;
        }
        for &(f, w, fwd) in &self.inc[at] {
            if path.len() + 1 > self.max_len {
                break;
            }
            if w == root {
                if path.iter().any(|&(e, _)| e == f) {
                    continue;
                }
                path.push((f, fwd));
                if self.keys.insert(key_of(path)) {
                    self.found.push(path.clone());
                }
                path.pop();
                continue;
            }
            if on_path[w] || dist[w] == UNREACHED || path.len() + 1 + dist[w] as usize > self.max_len {
                continue;
            }
            on_path[w] = true;
            path.push((f, fwd));
            self.run(root, w, dist, on_path, path, key_of);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Serialised chain: keys are vertex lists (simplices) or single edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub degree: usize,
    pub terms: Vec<(Vec<u32>, String)>,
}

impl ChainJson {
    pub fn from_simplicial(c: &Chain) -> Self {
        Self {
            degree: complexes::degree(c).unwrap_or(0),
            terms: c.iter().map(|(s, v)| (s.clone(), rational::to_text(v))).collect(),
        }
    }

    pub fn from_cellular(degree: usize, c: &LinComb<usize>) -> Self {
        Self {
            degree,
            terms: c.iter().map(|(&e, v)| (vec![e as u32], rational::to_text(v))).collect(),
        }
    }

    /// Simplicial chain; keys are re-oriented to increasing order.
    pub fn to_simplicial(&self) -> Result<Chain> {
        let mut c = Chain::new();
        for (vs, v) in &self.terms {
            if vs.len() != self.degree + 1 {
                return Err(Error::invalid(format!("term {vs:?} does not have degree {}", self.degree)));
            }
            let Some((s, odd)) = complexes::orient(vs) else {
                return Err(Error::invalid(format!("degenerate simplex {vs:?}")));
            };
            let v = rational::parse(v)?;
            c.add_term(s, if odd { -v } else { v });
        }
        Ok(c)
    }

    /// Cellular chain keyed by cell (edge) id.
    pub fn to_cellular(&self) -> Result<LinComb<usize>> {
        let mut c = LinComb::new();
        for (ids, v) in &self.terms {
            let [id] = ids[..] else {
                return Err(Error::invalid("cellular terms take a single id"));
            };
            c.add_term(id as usize, rational::parse(v)?);
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::SimpGraph;
    use crate::groups::{Group, GroupPair, Subgroup};
    use crate::paircomplex::{RelativeCayleyComplex, RelativePresentation};
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    fn z2(r: usize) -> RelativeCayleyComplex {
        let g = Group::free_abelian(2);
        let pair = GroupPair::with_standard_gens(g.clone(), vec![Subgroup::trivial(&g)]).unwrap();
        let pres = RelativePresentation::parse("rel-pres { gens: x, y; relators: [x,y]; }").unwrap();
        RelativeCayleyComplex::build(&pres, &pair, r).unwrap()
    }

    /// Winding number of each unit square about a grid 1-cycle, by counting
    /// signed crossings of x-edges below the square's centre.
    fn winding_oracle(rcc: &RelativeCayleyComplex, z: &LinComb<usize>) -> Q {
        let coords = |v: usize| match rcc.key(v).0 {
            crate::groups::Element::Abelian(c) => (c[0], c[1]),
            _ => unreachable!(),
        };
        let mut total = q(0);
        for a in -10..10 {
            for b in -10..10 {
                let mut w = q(0);
                for (&e, c) in z.iter() {
                    let edge = &rcc.complex.edges[e];
                    let ((x0, y0), (x1, y1)) = (coords(edge.tail), coords(edge.head));
                    if y0 == y1 && y0 <= b && x0.min(x1) == a {
                        let dir = if x1 > x0 { 1 } else { -1 };
                        w += c * q(dir);
                    }
                }
                total += w.abs();
            }
        }
        total
    }

    fn square(k: usize) -> String {
        format!("x^{k} y^{k} x^-{k} y^-{k}")
    }

    #[test]
    fn z2_squares() {
        let rcc = z2(8);
        let id = rcc.pair.group.identity();
        for k in 1..=4 {
            let z = rcc.word_chain(&id, 0, &square(k)).unwrap();
            let f = fill_comb(&rcc.complex, &z, None).unwrap();
            assert_eq!(f.value, q((k * k) as i64));
            assert_eq!(winding_oracle(&rcc, &z), f.value);
            assert_eq!(rcc.complex.boundary2(&f.witness), z);
            let cmp = rational_vs_float_comb(&rcc.complex, &z).unwrap();
            assert!(cmp.within_tolerance, "{cmp:?}");
        }
    }

    #[test]
    fn dual_certificate() {
        let rcc = z2(4);
        let id = rcc.pair.group.identity();
        let z = rcc.word_chain(&id, 0, &square(2)).unwrap();
        let f = fill_comb_with(&rcc.complex, &z, None, true).unwrap();
        let y = f.dual.unwrap();
        let pairing = |c: &LinComb<usize>| -> Q { c.iter().map(|(e, v)| v * y.coeff(e)).sum() };
        assert_eq!(pairing(&z), q(4));
        for c in 0..rcc.complex.cell_count() {
            assert!(pairing(&rcc.complex.cell_chain(c)).abs() <= q(1));
        }
    }

    fn disc() -> SComplex {
        // Triangulated hexagon: centre 0, rim 1..6.
        let g = SimpGraph::with_vertices(7);
        let facets: Vec<Vec<u32>> = (1..=6).map(|i| vec![0, i, i % 6 + 1]).collect();
        SComplex::from_facets(g, &facets, 2).unwrap()
    }

    #[test]
    fn simplicial_examples() {
        let k = disc();
        let sigma = vec![0, 1, 2];
        let f = filling_norm_lp(&k, &complexes::boundary_of_simplex(&sigma), None).unwrap();
        assert_eq!(f.value, q(1));
        assert_eq!(f.witness, Chain::single(sigma, q(1)));
        assert_eq!(filling_norm_lp(&k, &Chain::new(), None).unwrap().value, q(0));
        let rim: Chain = (1..=6u32).map(|i| complexes::simplex_chain(&[i, i % 6 + 1])).fold(Chain::new(), |a, b| &a + &b);
        assert_eq!(filling_norm_lp(&k, &rim, None).unwrap().value, q(6));
        let region: BTreeSet<u32> = (1..=6).collect();
        assert!(matches!(filling_norm_lp(&k, &rim, Some(&region)), Err(Error::Infeasible)));
        let open = complexes::simplex_chain(&[1, 2]);
        assert!(matches!(filling_norm_lp(&k, &open, None), Err(Error::NotACycle)));
    }

    #[test]
    fn circuits() {
        let hex: Chain = (0..6u32).map(|i| complexes::simplex_chain(&[i, (i + 1) % 6])).fold(Chain::new(), |a, b| &a + &b);
        let d = circuit_decomposition_simplicial(&hex).unwrap();
        assert_eq!(d.circuits.len(), 1);
        assert_eq!(d.circuits[0].coefficient, q(1));
        let tri = |a: u32, b: u32, c: u32| complexes::boundary_of_simplex(&[a, b, c]);
        let eight = &tri(0, 1, 2) + &tri(0, 3, 4);
        let d = circuit_decomposition_simplicial(&eight).unwrap();
        assert_eq!(d.circuits.len(), 2);
        assert_eq!(d.weighted_norm(), eight.norm());
        // Two squares sharing the edge 1→2, weights 2 and 3, same direction
        // along the shared edge.
        let sq = |vs: [u32; 4]| -> Chain { (0..4).map(|i| complexes::simplex_chain(&[vs[i], vs[(i + 1) % 4]])).fold(Chain::new(), |a, b| &a + &b) };
        let z = &sq([0, 1, 2, 3]).scaled(&q(2)) + &sq([4, 1, 2, 5]).scaled(&q(-3)).scaled(&q(-1));
        let d = circuit_decomposition_simplicial(&z).unwrap();
        assert_eq!(d.reconstruct(), z);
        assert_eq!(d.weighted_norm(), z.norm());
        assert!(circuit_decomposition_simplicial(&complexes::simplex_chain(&[0, 1])).is_err());
    }

    #[test]
    fn dehn_examples() {
        let tree = CombComplex2::from_graph(&SimpGraph::regular_tree(3, 3));
        let opts = DehnOptions {
            k_max: 8,
            budget: 1 << 20,
            roots: vec![],
            translation_keys: false,
        };
        let s = dehn_sample(&tree, &opts).unwrap();
        assert!(s.rows.iter().all(|r| r.value.is_zero()));
        assert_eq!(s.distinct_circuits, 0);

        let rcc = z2(6);
        let opts = DehnOptions {
            k_max: 8,
            budget: 1 << 22,
            roots: rcc.roots(),
            translation_keys: true,
        };
        let s = dehn_sample(&rcc.complex, &opts).unwrap();
        assert!(s.fillings_unique && !s.partial);
        let at = |k: usize| s.rows[k - 1].value.clone();
        assert_eq!((at(4), at(6), at(8)), (q(1), q(2), q(4)));
        // Up to translation: 1 square, 2 dominoes, 7 polygons of perimeter 8.
        assert_eq!((s.rows[3].circuits, s.rows[5].circuits, s.rows[7].circuits), (1, 2, 7));
        assert!(s.fit.residual_at_max > q(0));
        assert_eq!(s.fit.c_bound, qf(1, 2));
    }

    #[test]
    fn chain_json_round_trip() {
        let c = &complexes::simplex_chain(&[2, 0, 1]).scaled(&qf(3, 2)) + &complexes::simplex_chain(&[0, 1, 3]);
        let j = ChainJson::from_simplicial(&c);
        let text = serde_json::to_string(&j).unwrap();
        let back: ChainJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_simplicial().unwrap(), c);
    }

    proptest! {
        #[test]
        fn fill_of_boundary_bounded_by_chain(coeffs in proptest::collection::vec(-3i64..4, 6)) {
            let k = disc();
            let mut mu = Chain::new();
            for (i, &a) in (1..=6u32).zip(&coeffs) {
                mu.add_scaled(&complexes::simplex_chain(&[0, i, i % 6 + 1]), &q(a));
            }
            let z = complexes::boundary(&mu);
            let f = filling_norm_lp(&k, &z, None).unwrap();
            prop_assert!(f.value <= mu.norm());
            prop_assert_eq!(complexes::boundary(&f.witness), z.clone());
            let cmp = rational_vs_float_fv(&k, &z).unwrap();
            prop_assert!(cmp.within_tolerance);
        }
    }
}
