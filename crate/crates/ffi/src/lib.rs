//! C interface to `tropiclust`.
//!
//! Seeds and tropical states are opaque handles. Every function returns a
//! [`TcStatus`]; on failure a message is available from [`tc_last_error`]
//! until the next failing call on the same thread. Strings handed out by the
//! library are freed with [`tc_string_free`], handles with their `_free`
//! function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::{json, Value};

use tropiclust::graph::exchange_graph;
use tropiclust::lattice::IntMatrix;
use tropiclust::quantum::{check_quantum_datum, solve_quantization, transport_lambda, QuantumDatum};
use tropiclust::seed::fixtures;
use tropiclust::seed::json::{parse_seed_file, seed_value, SeedFile};
use tropiclust::suite::{run_suite, SuiteOptions};
use tropiclust::tropical::{initial_state, tropical_audit, TropicalState};
use tropiclust::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidSeed = 4,
    UnknownLabel = 5,
    FrozenDirection = 6,
    InvalidQuantumDatum = 7,
    NoSolution = 8,
    GrowthLimit = 9,
    /// A check or computation failed; see the last error.
    Failed = 10,
    /// Internal error (a caught panic).
    Panic = 11,
}

/// A seed with its optional quantum datum.
pub struct TcSeed {
    file: SeedFile,
}

/// A seed reached from a root by mutation, with its G- and C-matrices.
pub struct TcState {
    state: TropicalState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> TcStatus {
    match e {
        Error::Parse(_) => TcStatus::ParseError,
        Error::InvalidSeed(_) | Error::InvalidLattice(_) | Error::UnsupportedRank(_) => TcStatus::InvalidSeed,
        Error::UnknownLabel(_) => TcStatus::UnknownLabel,
        Error::FrozenDirection(_) => TcStatus::FrozenDirection,
        Error::InvalidQuantumDatum(_) => TcStatus::InvalidQuantumDatum,
        Error::GrowthLimit(_) => TcStatus::GrowthLimit,
        _ => TcStatus::Failed,
    }
}

struct Fail(TcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal error");
            TcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(TcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(TcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(TcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(TcStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(TcStatus::NullPointer, "output pointer is null".into()));
    }
    *out = CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw();
    Ok(())
}

fn checked(file: SeedFile) -> Result<TcSeed, Fail> {
    let report = file.seed.validate();
    if !report.is_valid() {
        return Err(Fail(TcStatus::InvalidSeed, report.to_string()));
    }
    if let Some(l) = &file.lambda {
        let r = check_quantum_datum(&file.seed, &QuantumDatum::new(l.clone())?);
        if !r.is_valid() {
            return Err(Fail(TcStatus::InvalidQuantumDatum, r.to_string()));
        }
    }
    Ok(TcSeed { file })
}

fn matrix_json(m: &IntMatrix) -> Value {
    let rows: Vec<Vec<String>> = m.to_dense().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    json!({"rows": m.rows().labels(), "cols": m.cols().labels(), "entries": rows})
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next failing call.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a seed file (JSON).
///
/// # Safety
/// `json` must be a nul-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_from_json(json: *const c_char, out: *mut *mut TcSeed) -> TcStatus {
    guard(|| {
        let file = parse_seed_file(text(json, "json")?)?;
        put(out, checked(file)?)
    })
}

/// A built-in seed: `a2`, `a2f`, `markov` or `cns`.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_fixture(name: *const c_char, out: *mut *mut TcSeed) -> TcStatus {
    guard(|| {
        let seed = fixtures::by_name(text(name, "name")?)?;
        put(out, TcSeed { file: SeedFile { seed, lambda: None } })
    })
}

/// # Safety
/// `seed` must come from this library (or be null) and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_free(seed: *mut TcSeed) {
    if !seed.is_null() {
        drop(Box::from_raw(seed));
    }
}

/// Canonical JSON of the seed.
///
/// # Safety
/// `seed` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_to_json(seed: *const TcSeed, out: *mut *mut c_char) -> TcStatus {
    guard(|| put_string(out, get(seed, "seed")?.file.to_json()))
}

/// Number of mutable labels.
///
/// # Safety
/// `seed` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_rank(seed: *const TcSeed, out: *mut usize) -> TcStatus {
    guard(|| {
        let s = get(seed, "seed")?;
        if out.is_null() {
            return Err(Fail(TcStatus::NullPointer, "output pointer is null".into()));
        }
        *out = s.file.seed.mutable_lattice().len();
        Ok(())
    })
}

/// Entry `B[row][col]` (`col` a mutable label).
///
/// # Safety
/// `seed` must be a live handle; strings nul-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_entry(
    seed: *const TcSeed,
    row: *const c_char,
    col: *const c_char,
    out: *mut i64,
) -> TcStatus {
    guard(|| {
        let s = get(seed, "seed")?;
        let x = s.file.seed.entry(text(row, "row")?, text(col, "col")?)?;
        if out.is_null() {
            return Err(Fail(TcStatus::NullPointer, "output pointer is null".into()));
        }
        *out = i64::try_from(&x).map_err(|_| Fail(TcStatus::Failed, format!("{x} does not fit in 64 bits")))?;
        Ok(())
    })
}

/// Mutates at `direction`; the quantum datum, if any, is carried along.
///
/// # Safety
/// `seed` must be a live handle; `direction` nul-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_mutate(seed: *const TcSeed, direction: *const c_char, out: *mut *mut TcSeed) -> TcStatus {
    guard(|| {
        let s = get(seed, "seed")?;
        let k = text(direction, "direction")?;
        let st = initial_state(&s.file.seed)?.mutate(k)?;
        let lambda = match &s.file.lambda {
            Some(l) => Some(transport_lambda(&st, &QuantumDatum::new(l.clone())?)?.into_matrix()),
            None => None,
        };
        put(out, TcSeed { file: SeedFile { seed: st.current().clone(), lambda } })
    })
}

/// Solves for a compatible quantum datum and attaches it, returning JSON
/// `{"lambda": ..., "homogeneous": [...]}`. `TC_STATUS_NO_SOLUTION` when
/// there is none.
///
/// # Safety
/// `seed` must be a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_quantize(seed: *mut TcSeed, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        let s = seed.as_mut().ok_or_else(|| Fail(TcStatus::NullPointer, "seed is null".into()))?;
        let q = solve_quantization(&s.file.seed)
            .ok_or_else(|| Fail(TcStatus::NoSolution, "no compatible quantum datum".into()))?;
        let v = json!({
            "lambda": matrix_json(q.particular.matrix()),
            "homogeneous": q.homogeneous.iter().map(matrix_json).collect::<Vec<_>>(),
        });
        put_string(out, v.to_string())?;
        s.file.lambda = Some(q.particular.into_matrix());
        Ok(())
    })
}

/// Runs the invariant suites along `samples` random paths of length `depth`.
/// `*passed` is set to 1 or 0 and `*report` (if non-null) to a text summary.
///
/// # Safety
/// `seed` must be a live handle; `passed` valid; `report` valid or null.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_audit(
    seed: *const TcSeed,
    depth: usize,
    samples: usize,
    rng_seed: u64,
    passed: *mut i32,
    report: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let s = get(seed, "seed")?;
        if passed.is_null() {
            return Err(Fail(TcStatus::NullPointer, "passed is null".into()));
        }
        let q = s.file.lambda.clone().map(QuantumDatum::new).transpose()?;
        let opts = SuiteOptions { depth, samples, rng_seed, ..Default::default() };
        let r = run_suite(&s.file.seed, q.as_ref(), &opts)?;
        *passed = i32::from(r.passed());
        if !report.is_null() {
            put_string(report, r.to_string())?;
        }
        Ok(())
    })
}

/// Exchange graph up to `max_seeds` seeds, as DOT (`dot != 0`) or JSON.
/// `*closed` is set to 1 when the graph closed.
///
/// # Safety
/// `seed` must be a live handle; `out` and `closed` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_seed_graph(
    seed: *const TcSeed,
    max_seeds: usize,
    dot: i32,
    closed: *mut i32,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let s = get(seed, "seed")?;
        if closed.is_null() {
            return Err(Fail(TcStatus::NullPointer, "closed is null".into()));
        }
        let g = exchange_graph(&s.file.seed, max_seeds)?;
        *closed = i32::from(g.closed);
        put_string(out, if dot != 0 { g.to_dot() } else { g.to_json().to_string() })
    })
}

/// The initial tropical state of a classical seed.
///
/// # Safety
/// `seed` must be a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_state_new(seed: *const TcSeed, out: *mut *mut TcState) -> TcStatus {
    guard(|| put(out, TcState { state: initial_state(&get(seed, "seed")?.file.seed)? }))
}

/// # Safety
/// `state` must come from this library (or be null) and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_state_free(state: *mut TcState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle; `direction` nul-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_state_mutate(state: *const TcState, direction: *const c_char, out: *mut *mut TcState) -> TcStatus {
    guard(|| {
        let st = get(state, "state")?;
        put(out, TcState { state: st.state.mutate(text(direction, "direction")?)? })
    })
}

/// JSON `{"path", "B", "G", "C", "G_co", "C_co"}`; matrix entries are
/// decimal strings.
///
/// # Safety
/// `state` must be a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_state_to_json(state: *const TcState, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        let st = &get(state, "state")?.state;
        let v = json!({
            "path": st.path(),
            "seed": seed_value(st.current(), None),
            "B": matrix_json(st.current().b()),
            "G": matrix_json(st.g()),
            "C": matrix_json(st.c()),
            "G_co": matrix_json(st.g_co()),
            "C_co": matrix_json(st.c_co()),
        });
        put_string(out, v.to_string())
    })
}

/// Checks the tropical identities of the state; `TC_STATUS_FAILED` with the
/// report as last error when one does not hold.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_state_audit(state: *const TcState) -> TcStatus {
    guard(|| {
        let a = tropical_audit(&get(state, "state")?.state);
        if a.passed() {
            Ok(())
        } else {
            Err(Fail(TcStatus::Failed, a.to_string()))
        }
    })
}
