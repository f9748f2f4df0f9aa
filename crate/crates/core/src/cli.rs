//! Command-line front end. Every subcommand prints one report whose header
//! echoes the parameters it ran with.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::complexes::{self, Chain, SComplex};
use crate::cusped::{default_h_max, CuspedGraph};
use crate::error::{Error, Result};
use crate::filling::{self, ChainJson, DehnOptions};
use crate::geomfill::{self, FillMode, GeomFiller};
use crate::graphs::{GeodesicPath, SimpGraph};
use crate::groups::GroupPair;
use crate::hyperbolicity;
use crate::lincomb::LinComb;
use crate::paircomplex::{CombComplex2, QuotientComplex, RelativeCayleyComplex, RelativePresentation, COMB_FORMAT};
use crate::rational::{self, Q};
use crate::resolutions::{self, BarComplex, Identity, StWindow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "relhyp", version, about = "Cusped graphs, Rips complexes, filling norms and relative resolutions")]
struct Cli {
    /// Emit the report as JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit the report as `path,value` CSV rows.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Build a truncated cusped graph.
    Cusped(CuspedArgs),
    /// Exact four-point δ of a graph or a ball in it.
    Delta(DeltaArgs),
    /// Rips complex of a graph.
    Rips(RipsArgs),
    /// Homology rank and height profile of a complex.
    Homology(HomologyArgs),
    /// Optimal ℓ¹ filling of a cycle.
    Fill(FillArgs),
    /// Dehn function samples over circuits of a 2-complex.
    Dehn(DehnArgs),
    /// Conformal circuit decomposition of a 1-cycle.
    Circuits(CircuitArgs),
    /// Geometric filling pipelines.
    Geomfill(GeomfillArgs),
    /// Relative Cayley complex of a relative presentation.
    Paircomplex(PairComplexArgs),
    /// Identity suites and cohomology of standard resolutions.
    Resolutions(ResolutionArgs),
}

#[derive(Args, Debug, Serialize)]
struct CuspedArgs {
    #[arg(long)]
    pair: PathBuf,
    #[arg(long)]
    rbase: usize,
    /// Defaults to ⌈log₂ 2R⌉ + 2.
    #[arg(long)]
    hmax: Option<u32>,
    /// Graph output (JSONL).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct DeltaArgs {
    #[arg(long)]
    graph: PathBuf,
    /// `all` or `ball:v0:R`.
    #[arg(long, default_value = "all")]
    subset: String,
}

#[derive(Args, Debug, Serialize)]
struct RipsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    kappa: u32,
    #[arg(long, default_value_t = 2)]
    dmax: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct HomologyArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long, default_value_t = 1)]
    degree: usize,
    #[arg(long)]
    reduced: bool,
    /// Accept the cone shortcut when the complex has an apex.
    #[arg(long)]
    allow_cone: bool,
}

#[derive(Args, Debug, Serialize)]
struct FillArgs {
    /// Simplicial or `comb2` complex (JSONL); the header decides.
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    cycle: PathBuf,
    /// Comma-separated vertices the filling may use.
    #[arg(long)]
    region: Option<String>,
    /// Also solve in double precision and report the gap.
    #[arg(long)]
    float: bool,
}

#[derive(Args, Debug, Serialize)]
struct DehnArgs {
    /// `comb2` complex (JSONL).
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    kmax: usize,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Comma-separated start vertices.
    #[arg(long)]
    roots: Option<String>,
    /// Identify circuits with the same label word.
    #[arg(long)]
    translation_keys: bool,
}

#[derive(Args, Debug, Serialize)]
struct CircuitArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    cycle: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum GeomMode {
    Local,
    Slice,
    Spider,
    Triangle,
    Graphlike,
}

#[derive(Args, Debug, Serialize)]
struct GeomfillArgs {
    #[arg(value_enum)]
    mode: GeomMode,
    /// Simplicial complex (JSONL).
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    cycle: Option<PathBuf>,
    /// Horoball threshold C.
    #[arg(long)]
    c: Option<u32>,
    /// Centre vertex for `local`.
    #[arg(long)]
    center: Option<usize>,
    /// Keep a `local` fill inside the C-horoball of the cycle.
    #[arg(long)]
    horoball: bool,
    /// Geodesics as `a,b;c,d`: canonical geodesics between endpoints.
    #[arg(long)]
    geodesics: Option<String>,
    /// Triangle vertices `a,b,c`.
    #[arg(long)]
    vertices: Option<String>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long, default_value_t = 0)]
    l: u32,
    /// δ as an exact rational, e.g. `1/2`.
    #[arg(long, default_value = "0")]
    delta: String,
}

#[derive(Args, Debug, Serialize)]
struct PairComplexArgs {
    #[arg(long)]
    pres: PathBuf,
    #[arg(long)]
    pair: PathBuf,
    #[arg(long)]
    radius: usize,
    /// Collapse each coset copy to a vertex.
    #[arg(long)]
    quotient: bool,
    /// Complex output (JSONL).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Loop word read from the identity in copy 0.
    #[arg(long)]
    word: Option<String>,
    /// Output for the loop's 1-chain.
    #[arg(long)]
    cycle_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ResolutionAction {
    CheckCone,
    CheckPhi,
    BarIso,
    Cohomology,
}

#[derive(Args, Debug, Serialize)]
struct ResolutionArgs {
    #[arg(value_enum)]
    action: ResolutionAction,
    #[arg(long)]
    pair: PathBuf,
    /// Highest degree for `bar-iso` and `cohomology`.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Window radius for infinite groups; finite groups use every element.
    #[arg(long, default_value_t = 2)]
    radius: usize,
}

/// Result of a subcommand: the report and whether its checks held.
struct Outcome {
    result: Value,
    ok: bool,
}

impl Outcome {
    fn ok(result: impl Serialize) -> Result<Self> {
        Ok(Self {
            result: serde_json::to_value(result)?,
            ok: true,
        })
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible | Error::TruncationUnsafe(_) => EXIT_INFEASIBLE,
        Error::Numerical(_) => EXIT_ASSERTION,
        _ => EXIT_INPUT,
    }
}

/// Runs the command line `args` (program name first), writing the report
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
        }
    };
    configure_threads();
    let outcome = execute(&cli.command);
    match outcome.and_then(|o| emit(&cli, o, out).map_err(Error::from)) {
        Ok(ok) => {
            if ok {
                EXIT_OK
            } else {
                let _ = writeln!(err, "relhyp: a checked invariant failed");
                EXIT_ASSERTION
            }
        }
        Err(e) => {
            let _ = writeln!(err, "relhyp: {e}");
            exit_code(&e)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("RELHYP_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // A second call in the same process finds the pool already built.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn emit(cli: &Cli, o: Outcome, out: &mut dyn Write) -> std::io::Result<bool> {
    let (name, params) = match serde_json::to_value(&cli.command)? {
        Value::Object(m) => m.into_iter().next().unwrap_or((String::new(), Value::Null)),
        v => (v.to_string(), Value::Null),
    };
    let report = json!({
        "command": name,
        "params": params,
        "ok": o.ok,
        "result": o.result,
    });
    if cli.csv {
        writeln!(out, "path,value")?;
        let mut rows = Vec::new();
        flatten("", &report, &mut rows);
        for (k, v) in rows {
            writeln!(out, "{},{}", csv_field(&k), csv_field(&v))?;
        }
    } else {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    }
    Ok(o.ok)
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, rows)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, rows)),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
        x => rows.push((prefix.to_string(), x.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Cusped(a) => cusped(a),
        Command::Delta(a) => delta(a),
        Command::Rips(a) => rips(a),
        Command::Homology(a) => homology(a),
        Command::Fill(a) => fill(a),
        Command::Dehn(a) => dehn(a),
        Command::Circuits(a) => circuits(a),
        Command::Geomfill(a) => geomfill_cmd(a),
        Command::Paircomplex(a) => paircomplex(a),
        Command::Resolutions(a) => resolutions_cmd(a),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse().map_err(|_| Error::invalid(format!("not a vertex id: {x:?}"))))
        .collect()
}

fn read_chain(path: &Path) -> Result<ChainJson> {
    Ok(serde_json::from_reader(open(path)?)?)
}

enum AnyComplex {
    Simplicial(SComplex),
    Comb(CombComplex2),
}

/// Reads a complex, choosing the format from the first record.
fn read_complex(path: &Path) -> Result<AnyComplex> {
    let mut first = String::new();
    let mut r = open(path)?;
    while first.trim().is_empty() {
        if r.read_line(&mut first)? == 0 {
            break;
        }
    }
    let head: Value = serde_json::from_str(first.trim()).unwrap_or(Value::Null);
    let reader = open(path)?;
    if head.get("format").and_then(Value::as_str) == Some(COMB_FORMAT) {
        Ok(AnyComplex::Comb(CombComplex2::read_jsonl(reader)?))
    } else {
        Ok(AnyComplex::Simplicial(SComplex::read_jsonl(reader)?))
    }
}

fn read_simplicial(path: &Path) -> Result<SComplex> {
    match read_complex(path)? {
        AnyComplex::Simplicial(k) => Ok(k),
        AnyComplex::Comb(_) => Err(Error::invalid("expected a simplicial complex")),
    }
}

fn cusped(a: &CuspedArgs) -> Result<Outcome> {
    let pair = GroupPair::from_file(&a.pair)?;
    let h = a.hmax.unwrap_or_else(|| default_h_max(a.rbase));
    let x = CuspedGraph::build(&pair, a.rbase, h)?;
    if let Some(p) = &a.out {
        write_with(p, |w| x.write_jsonl(w))?;
    }
    Outcome::ok(json!({
        "r_base": a.rbase,
        "h_max": h,
        "base_vertices": x.base_count(),
        "vertices": x.graph.vertex_count(),
        "edges": x.graph.edge_count(),
        "horoballs": x.horoballs.len(),
    }))
}

fn delta(a: &DeltaArgs) -> Result<Outcome> {
    let g = SimpGraph::read_jsonl(open(&a.graph)?)?;
    let vertices: Vec<usize> = match a.subset.split(':').collect::<Vec<_>>().as_slice() {
        ["all"] => (0..g.vertex_count()).collect(),
        ["ball", v0, r] => {
            let v0: usize = v0.parse().map_err(|_| Error::invalid("bad ball centre"))?;
            let r: usize = r.parse().map_err(|_| Error::invalid("bad ball radius"))?;
            if v0 >= g.vertex_count() {
                return Err(Error::invalid(format!("vertex {v0} out of range")));
            }
            g.ball(v0, r).original
        }
        _ => return Err(Error::invalid(format!("unknown subset {:?}", a.subset))),
    };
    Outcome::ok(hyperbolicity::four_point_delta(&g, &vertices)?)
}

fn rips(a: &RipsArgs) -> Result<Outcome> {
    let g = SimpGraph::read_jsonl(open(&a.graph)?)?;
    let k = SComplex::build_rips(&g, a.kappa, a.dmax)?;
    if let Some(p) = &a.out {
        write_with(p, |w| k.write_jsonl(w))?;
    }
    let counts: Vec<usize> = (0..=a.dmax).map(|d| k.count(d)).collect();
    Outcome::ok(json!({ "counts": counts, "face_closed": k.is_face_closed() }))
}

fn homology(a: &HomologyArgs) -> Result<Outcome> {
    let k = read_simplicial(&a.complex)?;
    let h = k.homology(a.degree, a.reduced, a.allow_cone)?;
    Outcome::ok(json!({
        "homology": h,
        "min_height_profile": k.min_height_dimension_profile(),
    }))
}

fn fill(a: &FillArgs) -> Result<Outcome> {
    let z = read_chain(&a.cycle)?;
    let region = a.region.as_deref().map(parse_list).transpose()?;
    let (value, method, witness, cells, certified, float) = match read_complex(&a.complex)? {
        AnyComplex::Simplicial(k) => {
            let gamma = z.to_simplicial()?;
            let reg: Option<BTreeSet<u32>> = region.map(|r| r.into_iter().map(|v| v as u32).collect());
            let r = filling::filling_norm_lp(&k, &gamma, reg.as_ref())?;
            let ok = complexes::boundary(&r.witness) == gamma && r.witness.norm() == r.value;
            let float = a.float.then(|| filling::rational_vs_float_fv(&k, &gamma)).transpose()?;
            (r.value, r.method, ChainJson::from_simplicial(&r.witness), r.cells_considered, ok, float)
        }
        AnyComplex::Comb(k) => {
            let gamma = z.to_cellular()?;
            let reg: Option<BTreeSet<usize>> = region.map(|r| r.into_iter().collect());
            let r = filling::fill_comb(&k, &gamma, reg.as_ref())?;
            let ok = k.boundary2(&r.witness) == gamma && r.witness.norm() == r.value;
            let float = a.float.then(|| filling::rational_vs_float_comb(&k, &gamma)).transpose()?;
            (r.value, r.method, ChainJson::from_cellular(2, &r.witness), r.cells_considered, ok, float)
        }
    };
    let float_ok = float.as_ref().map_or(true, |f| f.within_tolerance);
    Ok(Outcome {
        result: json!({
            "value": rational::to_text(&value),
            "method": method,
            "cells_considered": cells,
            "witness": witness,
            "certified": certified,
            "float": float,
        }),
        ok: certified && float_ok,
    })
}

fn read_comb(path: &Path) -> Result<CombComplex2> {
    match read_complex(path)? {
        AnyComplex::Comb(k) => Ok(k),
        AnyComplex::Simplicial(_) => Err(Error::invalid("expected a comb2 complex")),
    }
}

fn dehn(a: &DehnArgs) -> Result<Outcome> {
    let k = read_comb(&a.complex)?;
    let opts = DehnOptions {
        k_max: a.kmax,
        budget: a.budget,
        roots: a.roots.as_deref().map(parse_list).transpose()?.unwrap_or_default(),
        translation_keys: a.translation_keys,
    };
    Outcome::ok(filling::dehn_sample(&k, &opts)?)
}

#[derive(Serialize)]
struct CircuitJson {
    #[serde(with = "rational::text")]
    coefficient: Q,
    vertices: Vec<usize>,
    chain: ChainJson,
}

fn circuits(a: &CircuitArgs) -> Result<Outcome> {
    let z = read_chain(&a.cycle)?;
    let (circuits, exact, input_norm, weighted) = match read_complex(&a.complex)? {
        AnyComplex::Simplicial(_) => {
            let c = z.to_simplicial()?;
            let d = filling::circuit_decomposition_simplicial(&c)?;
            let list: Vec<CircuitJson> = d
                .circuits
                .iter()
                .map(|x| CircuitJson {
                    coefficient: x.coefficient.clone(),
                    vertices: x.vertices.clone(),
                    chain: ChainJson::from_simplicial(&x.chain()),
                })
                .collect();
            (list, d.reconstruct() == c, c.norm(), d.weighted_norm())
        }
        AnyComplex::Comb(k) => {
            let c = z.to_cellular()?;
            let d = filling::circuit_decomposition_comb(&k, &c)?;
            let list: Vec<CircuitJson> = d
                .circuits
                .iter()
                .map(|x| CircuitJson {
                    coefficient: x.coefficient.clone(),
                    vertices: x.vertices.clone(),
                    chain: ChainJson::from_cellular(1, &x.chain()),
                })
                .collect();
            (list, d.reconstruct() == c, c.norm(), d.weighted_norm())
        }
    };
    let ok = exact && weighted == input_norm;
    Ok(Outcome {
        result: json!({
            "circuits": circuits,
            "reconstructs": exact,
            "norm": rational::to_text(&input_norm),
            "weighted_norm": rational::to_text(&weighted),
        }),
        ok,
    })
}

fn parse_geodesics(f: &GeomFiller, s: &str) -> Result<Vec<GeodesicPath>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| match parse_list(p)?.as_slice() {
            [a, b] => f.skeleton.canonical_geodesic(*a, *b),
            _ => Err(Error::invalid(format!("geodesic {p:?} needs two endpoints"))),
        })
        .collect()
}

fn geomfill_cmd(a: &GeomfillArgs) -> Result<Outcome> {
    let k = read_simplicial(&a.complex)?;
    let f = GeomFiller::new(&k, a.c);
    let delta = rational::parse(&a.delta)?;
    let need = |o: &Option<String>, name: &str| o.clone().ok_or_else(|| Error::invalid(format!("--{name} is required")));
    let cycle = || -> Result<Chain> {
        let p = a.cycle.as_ref().ok_or_else(|| Error::invalid("--cycle is required"))?;
        read_chain(p)?.to_simplicial()
    };
    match a.mode {
        GeomMode::Local => {
            let v0 = a.center.ok_or_else(|| Error::invalid("--center is required"))?;
            let mode = if a.horoball { FillMode::Horoball } else { FillMode::Plain };
            Outcome::ok(f.local_fill(&cycle()?, v0, mode)?)
        }
        GeomMode::Slice => {
            let z = cycle()?;
            let gs = parse_geodesics(&f, &need(&a.geodesics, "geodesics")?)?;
            let [gamma] = gs.as_slice() else {
                return Err(Error::invalid("slice takes one geodesic"));
            };
            let s = a.s.ok_or_else(|| Error::invalid("--s is required"))?;
            let r = f.slice_cycle(&z, gamma, s)?;
            let mut sum = Chain::new();
            for p in &r.pieces {
                sum = &sum + &p.cycle;
            }
            let ok = sum == z && r.pieces.iter().all(|p| complexes::boundary(&p.cycle).is_zero());
            Ok(Outcome {
                result: serde_json::to_value(&r)?,
                ok,
            })
        }
        GeomMode::Spider => {
            let gs = parse_geodesics(&f, &need(&a.geodesics, "geodesics")?)?;
            let s = a.s.ok_or_else(|| Error::invalid("--s is required"))?;
            let cover = geomfill::spider_cover(&f.skeleton, &gs, s, &delta)?;
            let ok = cover.check.valid;
            Ok(Outcome {
                result: serde_json::to_value(&cover)?,
                ok,
            })
        }
        GeomMode::Triangle => {
            let vs = parse_list(&need(&a.vertices, "vertices")?)?;
            let [x, y, w] = vs[..] else {
                return Err(Error::invalid("--vertices takes three vertices"));
            };
            Outcome::ok(f.fill_triangle(&cycle()?, [x, y, w], a.l, &delta)?)
        }
        GeomMode::Graphlike => {
            let gs = parse_geodesics(&f, &need(&a.geodesics, "geodesics")?)?;
            Outcome::ok(f.fill_graphlike(&cycle()?, &gs, a.l, &delta)?)
        }
    }
}

fn paircomplex(a: &PairComplexArgs) -> Result<Outcome> {
    let pair = GroupPair::from_file(&a.pair)?;
    let pres = RelativePresentation::parse(&std::fs::read_to_string(&a.pres)?)?;
    pres.check(&pair)?;
    let rcc = RelativeCayleyComplex::build(&pres, &pair, a.radius)?;
    let word = a
        .word
        .as_deref()
        .map(|w| rcc.word_chain(&pair.group.identity(), 0, w))
        .transpose()?;
    let (k, chain, dropped) = if a.quotient {
        let qc = QuotientComplex::build(&rcc)?;
        let chain = word.map(|c| {
            c.iter()
                .filter_map(|(&e, v)| qc.edge_map[e].map(|e2| (e2, v.clone())))
                .collect::<LinComb<usize>>()
        });
        (qc.complex, chain, Some(qc.dropped_cells))
    } else {
        let free = rcc.action_is_free();
        if !free {
            return Err(Error::Numerical("group action on the complex is not free".into()));
        }
        (rcc.complex, word, None)
    };
    if let Some(p) = &a.out {
        write_with(p, |w| k.write_jsonl(w))?;
    }
    if let (Some(p), Some(c)) = (&a.cycle_out, &chain) {
        write_with(p, |w| Ok(serde_json::to_writer(&mut *w, &ChainJson::from_cellular(1, c))?))?;
    }
    Outcome::ok(json!({
        "vertices": k.vertex_count(),
        "edges": k.edge_count(),
        "cells": k.cell_count(),
        "dropped_cells": dropped,
        "cycle_norm": chain.map(|c| rational::to_text(&c.norm())),
    }))
}

fn resolutions_cmd(a: &ResolutionArgs) -> Result<Outcome> {
    let pair = GroupPair::from_file(&a.pair)?;
    match a.action {
        ResolutionAction::CheckCone | ResolutionAction::CheckPhi => {
            let w = if pair.group.order().is_some() {
                StWindow::whole(&pair)?
            } else {
                StWindow::ball(&pair, a.radius)?
            };
            let ids: &[Identity] = if matches!(a.action, ResolutionAction::CheckPhi) { &Identity::PHI } else { &Identity::CONE };
            let checks = resolutions::identity_suite(&w, ids, a.samples, a.seed)?;
            let ok = checks.iter().all(|c| c.failures == 0);
            Ok(Outcome {
                result: json!({ "window": w.len(), "checks": checks }),
                ok,
            })
        }
        ResolutionAction::BarIso => {
            let bar = BarComplex::new(&pair)?;
            let reps = (0..=a.degree)
                .map(|k| bar.check_iso(k, a.samples.min(50), a.seed))
                .collect::<Result<Vec<_>>>()?;
            let ok = reps.iter().all(|r| r.passed());
            Ok(Outcome {
                result: json!({ "ibar": bar.ibar, "degrees": reps }),
                ok,
            })
        }
        ResolutionAction::Cohomology => {
            let bar = BarComplex::new(&pair)?;
            let ranks = (0..=a.degree)
                .map(|k| bar.relative_cohomology_rank(k))
                .collect::<Result<Vec<_>>>()?;
            Outcome::ok(json!({ "ranks": ranks }))
        }
    }
}
