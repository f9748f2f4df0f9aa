//! C interface to `relhyp`. Objects are opaque handles released with their
//! `_free` function; every call returns a [`RelhypStatus`] and, on failure,
//! leaves a message for [`relhyp_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use relhyp::complexes::SComplex;
use relhyp::cusped::{default_h_max, CuspedGraph};
use relhyp::filling::{self, ChainJson};
use relhyp::groups::GroupPair;
use relhyp::hyperbolicity;
use relhyp::rational;
use relhyp::resolutions::BarComplex;
use relhyp::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelhypStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    Parse = 3,
    OutsideRegion = 4,
    Infeasible = 5,
    TruncationUnsafe = 6,
    NotACycle = 7,
    Unsupported = 8,
    Io = 9,
    Internal = 10,
}

/// A group with its peripheral subgroups.
pub struct RelhypPair(GroupPair);

/// A truncated cusped graph.
pub struct RelhypCusped(CuspedGraph);

/// A simplicial complex.
pub struct RelhypComplex(SComplex);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RelhypStatus {
    match e {
        Error::Parse { .. } | Error::UnknownSymbol(_) | Error::Json(_) => RelhypStatus::Parse,
        Error::OutsideRegion(_) => RelhypStatus::OutsideRegion,
        Error::Infeasible => RelhypStatus::Infeasible,
        Error::TruncationUnsafe(_) => RelhypStatus::TruncationUnsafe,
        Error::NotACycle => RelhypStatus::NotACycle,
        Error::Unsupported(_) => RelhypStatus::Unsupported,
        Error::Io(_) => RelhypStatus::Io,
        Error::Numerical(_) => RelhypStatus::Internal,
        _ => RelhypStatus::InvalidInput,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RelhypStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RelhypStatus::Ok,
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("null pointer passed for `{name}`"));
            RelhypStatus::NullArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            RelhypStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::Invalid(format!("`{name}` is not UTF-8"))))
}

unsafe fn borrow<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

unsafe fn store<T>(out: *mut T, value: T, name: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(name));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<CString, Fail> {
    CString::new(s).map_err(|_| Fail::Lib(Error::Invalid("output contains a NUL byte".into())))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn relhyp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a pair description such as `group free 2\nperipheral 1: a\n`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relhyp_pair_parse(text_ptr: *const c_char, out: *mut *mut RelhypPair) -> RelhypStatus {
    guard(|| {
        let pair = GroupPair::parse(text(text_ptr, "text")?, None)?;
        store(out, Box::into_raw(Box::new(RelhypPair(pair))), "out")
    })
}

/// Number of peripheral subgroups.
///
/// # Safety
/// `pair` must come from [`relhyp_pair_parse`].
#[no_mangle]
pub unsafe extern "C" fn relhyp_pair_index_count(pair: *const RelhypPair, out: *mut usize) -> RelhypStatus {
    guard(|| store(out, borrow(pair, "pair")?.0.index_count(), "out"))
}

/// # Safety
/// `pair` must come from [`relhyp_pair_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn relhyp_pair_free(pair: *mut RelhypPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Builds the cusped graph over the ball of radius `r_base`; `h_max = 0`
/// selects the default depth.
///
/// # Safety
/// `pair` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relhyp_cusped_build(
    pair: *const RelhypPair,
    r_base: usize,
    h_max: u32,
    out: *mut *mut RelhypCusped,
) -> RelhypStatus {
    guard(|| {
        let pair = &borrow(pair, "pair")?.0;
        let h = if h_max == 0 { default_h_max(r_base) } else { h_max };
        let x = CuspedGraph::build(pair, r_base, h)?;
        store(out, Box::into_raw(Box::new(RelhypCusped(x))), "out")
    })
}

/// # Safety
/// `x` must be a live handle; outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn relhyp_cusped_size(x: *const RelhypCusped, vertices: *mut usize, edges: *mut usize) -> RelhypStatus {
    guard(|| {
        let g = &borrow(x, "cusped")?.0.graph;
        store(vertices, g.vertex_count(), "vertices")?;
        store(edges, g.edge_count(), "edges")
    })
}

/// Exact four-point δ of the whole truncation as `numerator/denominator`.
///
/// # Safety
/// `x` must be a live handle; outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn relhyp_cusped_delta(x: *const RelhypCusped, numerator: *mut i64, denominator: *mut i64) -> RelhypStatus {
    guard(|| {
        let g = &borrow(x, "cusped")?.0.graph;
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        let d = hyperbolicity::four_point_delta(g, &all)?.delta_four_point;
        let parts = |v: &num_bigint::BigInt| {
            i64::try_from(v).map_err(|_| Fail::Lib(Error::Numerical("δ does not fit in 64 bits".into())))
        };
        store(numerator, parts(d.numer())?, "numerator")?;
        store(denominator, parts(d.denom())?, "denominator")
    })
}

/// # Safety
/// `x` must be a live handle and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn relhyp_cusped_free(x: *mut RelhypCusped) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Rips complex of the cusped graph.
///
/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relhyp_complex_rips(
    x: *const RelhypCusped,
    kappa: u32,
    d_max: usize,
    out: *mut *mut RelhypComplex,
) -> RelhypStatus {
    guard(|| {
        let k = SComplex::build_rips(&borrow(x, "cusped")?.0.graph, kappa, d_max)?;
        store(out, Box::into_raw(Box::new(RelhypComplex(k))), "out")
    })
}

/// Number of simplices of dimension `dim`.
///
/// # Safety
/// `k` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relhyp_complex_count(k: *const RelhypComplex, dim: usize, out: *mut usize) -> RelhypStatus {
    guard(|| {
        let k = &borrow(k, "complex")?.0;
        store(out, if dim <= k.d_max { k.count(dim) } else { 0 }, "out")
    })
}

/// Rank of (reduced) homology in degree `degree`.
///
/// # Safety
/// `k` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relhyp_complex_homology_rank(
    k: *const RelhypComplex,
    degree: usize,
    reduced: bool,
    out: *mut usize,
) -> RelhypStatus {
    guard(|| store(out, borrow(k, "complex")?.0.homology_rank(degree, reduced)?, "out"))
}

/// Optimal filling of a cycle given as chain JSON
/// (`{"degree":1,"terms":[[[0,1],"1/1"],...]}`). On success `*out_json`
/// holds `{"value":"p/q","witness":{...}}`, to be released with
/// [`relhyp_string_free`].
///
/// # Safety
/// `k` must be a live handle, `chain_json` a NUL-terminated string and
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relhyp_complex_fill(
    k: *const RelhypComplex,
    chain_json: *const c_char,
    out_json: *mut *mut c_char,
) -> RelhypStatus {
    guard(|| {
        let k = &borrow(k, "complex")?.0;
        let chain: ChainJson = serde_json::from_str(text(chain_json, "chain_json")?).map_err(Error::from)?;
        let r = filling::filling_norm_lp(k, &chain.to_simplicial()?, None)?;
        let report = serde_json::json!({
            "value": rational::to_text(&r.value),
            "witness": ChainJson::from_simplicial(&r.witness),
        });
        let s = into_c_string(report.to_string())?;
        store(out_json, s.into_raw(), "out_json")
    })
}

/// # Safety
/// `k` must be a live handle and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn relhyp_complex_free(k: *mut RelhypComplex) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Dimension of the relative cohomology `H^k(Γ, Γ′; ℝ)` of a finite pair.
///
/// # Safety
/// `pair` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relhyp_relative_cohomology_rank(pair: *const RelhypPair, degree: usize, out: *mut usize) -> RelhypStatus {
    guard(|| {
        let bar = BarComplex::new(&borrow(pair, "pair")?.0)?;
        store(out, bar.relative_cohomology_rank(degree)?, "out")
    })
}

/// Runs the command-line front end in-process. `*out_report` receives the
/// report text (release with [`relhyp_string_free`]); the return value is
/// the CLI exit code.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; `out_report` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relhyp_run_cli(argc: c_int, argv: *const *const c_char, out_report: *mut *mut c_char) -> c_int {
    let mut code = 1;
    let status = guard(|| {
        if argv.is_null() && argc > 0 {
            return Err(Fail::Null("argv"));
        }
        let mut args = vec!["relhyp".to_string()];
        for i in 0..argc.max(0) as usize {
            args.push(text(*argv.add(i), "argv[i]")?.to_string());
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        code = relhyp::cli::run(args, &mut out, &mut err);
        if code != 0 {
            set_error(String::from_utf8_lossy(&err).into_owned());
        }
        let s = into_c_string(String::from_utf8_lossy(&out).into_owned())?;
        store(out_report, s.into_raw(), "out_report")
    });
    if status == RelhypStatus::Ok {
        code
    } else {
        1
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn relhyp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
