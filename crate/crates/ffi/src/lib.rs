//! C interface to stabkit.
//!
//! Objects are opaque handles created by `*_new` functions and released with
//! the matching `*_free`. Every fallible call returns a [`StkStatus`]; on
//! failure the message is available from [`stk_last_error_message`] on the
//! same thread. Strings returned through out-parameters are owned by the
//! caller and must be released with [`stk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stabkit::flow::{flow_to_zero, FlowConfig, FlowStatus};
use stabkit::gallery::{classify_points, FlowOutcome, PointsProblem};
use stabkit::polytope::{hm_classify, StabilityClass, WeightSystem};
use stabkit::rational;
use stabkit::slope::{mu, mu_c, slope_classify, Family, HilbertData, HilbertSamuelData};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Numerical = 3,
    InvalidUtf8 = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StkClass {
    Stable = 0,
    Polystable = 1,
    StrictlySemistable = 2,
    Unstable = 3,
}

impl From<StabilityClass> for StkClass {
    fn from(c: StabilityClass) -> Self {
        match c {
            StabilityClass::Stable => StkClass::Stable,
            StabilityClass::Polystable => StkClass::Polystable,
            StabilityClass::StrictlySemistable => StkClass::StrictlySemistable,
            StabilityClass::Unstable => StkClass::Unstable,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StkFlowStatus {
    Balanced = 0,
    Escaped = 1,
    Stalled = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StkFlowOutcome {
    BalancedInOrbit = 0,
    LimitOutsideOrbit = 1,
    Escaped = 2,
    Inconclusive = 3,
}

/// Hilbert–Mumford verdict. `weight` is meaningful only when `has_witness`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct StkVerdict {
    pub class: StkClass,
    pub has_witness: bool,
    pub weight: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct StkFlowSummary {
    pub status: StkFlowStatus,
    pub outcome: StkFlowOutcome,
    pub iterations: usize,
    pub final_moment_norm: f64,
}

/// Torus weights with the support of a vector.
pub struct StkWeightSystem(WeightSystem);

/// Distinct weighted points on the sphere.
pub struct StkPointConfig(PointsProblem);

/// A slope family with its Hilbert data computed.
pub struct StkSlopeFamily {
    h: HilbertData,
    hs: HilbertSamuelData,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let c = CString::new(msg.to_string().replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: StkStatus, msg: impl ToString) -> StkStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting a panic into [`StkStatus::Panic`].
fn guard(f: impl FnOnce() -> StkStatus) -> StkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(StkStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, StkStatus> {
    if p.is_null() {
        return Err(fail(StkStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(StkStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> StkStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            StkStatus::Ok
        }
        Err(_) => fail(StkStatus::Panic, "output contains NUL"),
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn stk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn stk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a weight system from `count` weights of `dim` coordinates each,
/// stored row-major. A NULL `support` means every weight is supported.
///
/// # Safety
/// `weights` must hold `dim * count` values and `support` (if not NULL)
/// `support_len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stk_weight_system_new(
    dim: usize,
    weights: *const i64,
    count: usize,
    support: *const usize,
    support_len: usize,
    out: *mut *mut StkWeightSystem,
) -> StkStatus {
    guard(|| {
        if out.is_null() || (weights.is_null() && count > 0) {
            return fail(StkStatus::NullPointer, "null argument");
        }
        let flat: &[i64] = if count == 0 { &[] } else { std::slice::from_raw_parts(weights, dim * count) };
        let rows: Vec<Vec<i64>> = if dim == 0 { vec![Vec::new(); count] } else { flat.chunks(dim).map(<[i64]>::to_vec).collect() };
        let support = if support.is_null() {
            (0..count).collect()
        } else {
            std::slice::from_raw_parts(support, support_len).to_vec()
        };
        match WeightSystem::new(dim, rows, support) {
            Ok(ws) => {
                *out = Box::into_raw(Box::new(StkWeightSystem(ws)));
                StkStatus::Ok
            }
            Err(e) => fail(StkStatus::InvalidInput, e),
        }
    })
}

/// # Safety
/// `ws` must come from [`stk_weight_system_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn stk_weight_system_free(ws: *mut StkWeightSystem) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Classifies the weight system. When unstable, the destabilizing
/// one-parameter subgroup is written to `witness`, which must hold `dim`
/// entries (it may be NULL if not wanted).
///
/// # Safety
/// Pointers must be valid; `witness`, if not NULL, must hold `dim` values.
#[no_mangle]
pub unsafe extern "C" fn stk_hm_classify(ws: *const StkWeightSystem, out: *mut StkVerdict, witness: *mut i64) -> StkStatus {
    guard(|| {
        if ws.is_null() || out.is_null() {
            return fail(StkStatus::NullPointer, "null argument");
        }
        let ws = &(*ws).0;
        let v = hm_classify(ws);
        *out = StkVerdict { class: v.class.into(), has_witness: v.witness.is_some(), weight: v.weight.unwrap_or(0) };
        if let (Some(w), false) = (&v.witness, witness.is_null()) {
            std::slice::from_raw_parts_mut(witness, ws.dim()).copy_from_slice(w.as_slice());
        }
        StkStatus::Ok
    })
}

/// Builds a configuration of `n` unit vectors (`3n` doubles) with positive
/// multiplicities.
///
/// # Safety
/// `points` must hold `3 * n` values and `multiplicities` `n` values.
#[no_mangle]
pub unsafe extern "C" fn stk_points_new(
    points: *const f64,
    multiplicities: *const u32,
    n: usize,
    out: *mut *mut StkPointConfig,
) -> StkStatus {
    guard(|| {
        if out.is_null() || (n > 0 && (points.is_null() || multiplicities.is_null())) {
            return fail(StkStatus::NullPointer, "null argument");
        }
        let (pts, mult): (Vec<[f64; 3]>, &[u32]) = if n == 0 {
            (Vec::new(), &[])
        } else {
            let flat = std::slice::from_raw_parts(points, 3 * n);
            (flat.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(), std::slice::from_raw_parts(multiplicities, n))
        };
        match PointsProblem::new(&pts, mult) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(StkPointConfig(p)));
                StkStatus::Ok
            }
            Err(e) => fail(StkStatus::InvalidInput, e),
        }
    })
}

/// # Safety
/// `p` must come from [`stk_points_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn stk_points_free(p: *mut StkPointConfig) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Combinatorial verdict. `witness` receives the index of the overweight
/// point, or -1.
///
/// # Safety
/// Pointers must be valid; `witness` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn stk_points_classify(p: *const StkPointConfig, class: *mut StkClass, witness: *mut i64) -> StkStatus {
    guard(|| {
        if p.is_null() || class.is_null() {
            return fail(StkStatus::NullPointer, "null argument");
        }
        let v = classify_points((*p).0.multiplicities());
        *class = v.class.into();
        if !witness.is_null() {
            *witness = v.witness.map_or(-1, |i| i as i64);
        }
        StkStatus::Ok
    })
}

/// Runs the moment-map flow to tolerance `tol` (0 for the default).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stk_points_flow(
    p: *const StkPointConfig,
    tol: f64,
    max_iters: usize,
    out: *mut StkFlowSummary,
) -> StkStatus {
    guard(|| {
        if p.is_null() || out.is_null() {
            return fail(StkStatus::NullPointer, "null argument");
        }
        let mut cfg = FlowConfig::default();
        if tol > 0.0 {
            cfg.tol = tol;
        }
        if max_iters > 0 {
            cfg.max_iters = max_iters;
        }
        let problem = (*p).0.clone().with_collision_threshold(PointsProblem::collision_threshold_for(cfg.tol));
        match flow_to_zero(&problem, &cfg) {
            Ok(r) => {
                *out = StkFlowSummary {
                    status: match r.status {
                        FlowStatus::Balanced => StkFlowStatus::Balanced,
                        FlowStatus::Escaped => StkFlowStatus::Escaped,
                        FlowStatus::Stalled => StkFlowStatus::Stalled,
                    },
                    outcome: match FlowOutcome::of(&r) {
                        FlowOutcome::BalancedInOrbit => StkFlowOutcome::BalancedInOrbit,
                        FlowOutcome::LimitOutsideOrbit => StkFlowOutcome::LimitOutsideOrbit,
                        FlowOutcome::Escaped => StkFlowOutcome::Escaped,
                        FlowOutcome::Inconclusive => StkFlowOutcome::Inconclusive,
                    },
                    iterations: r.iterations,
                    final_moment_norm: r.final_norm(),
                };
                StkStatus::Ok
            }
            Err(e) => fail(StkStatus::Numerical, e),
        }
    })
}

/// Parses a family description (the JSON accepted by `stabkit slope`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stk_slope_family_from_json(json: *const c_char, out: *mut *mut StkSlopeFamily) -> StkStatus {
    guard(|| {
        if out.is_null() {
            return fail(StkStatus::NullPointer, "null argument");
        }
        let text = match str_arg(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let built = serde_json::from_str::<Family>(text).map_err(|e| e.to_string()).and_then(|f| f.build().map_err(|e| e.to_string()));
        match built {
            Ok((h, hs)) => {
                *out = Box::into_raw(Box::new(StkSlopeFamily { h, hs }));
                StkStatus::Ok
            }
            Err(e) => fail(StkStatus::InvalidInput, e),
        }
    })
}

/// # Safety
/// `f` must come from [`stk_slope_family_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn stk_slope_family_free(f: *mut StkSlopeFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `μ(X)` as an exact `"p/q"` string.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stk_slope_mu(f: *const StkSlopeFamily, out: *mut *mut c_char) -> StkStatus {
    guard(|| {
        if f.is_null() || out.is_null() {
            return fail(StkStatus::NullPointer, "null argument");
        }
        match mu(&(*f).h) {
            Ok(q) => put_string(out, rational::format(&q)),
            Err(e) => fail(StkStatus::InvalidInput, e),
        }
    })
}

/// `μ_c` of the subscheme at the rational `c` (given as `"p/q"`), as an exact
/// `"p/q"` string.
///
/// # Safety
/// Pointers must be valid; `c` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn stk_slope_mu_c(f: *const StkSlopeFamily, c: *const c_char, out: *mut *mut c_char) -> StkStatus {
    guard(|| {
        if f.is_null() || out.is_null() {
            return fail(StkStatus::NullPointer, "null argument");
        }
        let c = match str_arg(c).map(rational::parse) {
            Ok(Ok(q)) => q,
            Ok(Err(e)) => return fail(StkStatus::InvalidInput, e.0),
            Err(s) => return s,
        };
        match mu_c(&(*f).hs, &c) {
            Ok(q) => put_string(out, rational::format(&q)),
            Err(e) => fail(StkStatus::InvalidInput, e),
        }
    })
}

/// Full slope verdict as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stk_slope_classify_json(f: *const StkSlopeFamily, out: *mut *mut c_char) -> StkStatus {
    guard(|| {
        if f.is_null() || out.is_null() {
            return fail(StkStatus::NullPointer, "null argument");
        }
        match slope_classify(&(*f).h, &(*f).hs) {
            Ok(v) => put_string(out, serde_json::to_string(&v).expect("verdicts serialize")),
            Err(e) => fail(StkStatus::InvalidInput, e),
        }
    })
}

/// Runs a command-line invocation in process. `args_json` is a JSON array of
/// argument strings without the program name, e.g.
/// `["hm", "weights.json", "--json"]`. Standard output is returned through
/// `out` (always set, possibly empty); the return value is the exit code
/// (0 success, 2 input error, 3 numerical abort), or -1 if `args_json` is
/// unusable.
///
/// # Safety
/// `args_json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stk_run_json(args_json: *const c_char, out: *mut *mut c_char) -> c_int {
    if out.is_null() {
        set_error("null argument");
        return -1;
    }
    *out = ptr::null_mut();
    let result = catch_unwind(AssertUnwindSafe(|| {
        let text = str_arg(args_json).map_err(|_| "args_json must be a UTF-8 string".to_string())?;
        let args: Vec<String> = serde_json::from_str(text).map_err(|e| format!("args_json: {e}"))?;
        let mut stdout = Vec::new();
        let mut stderr = Vec::new();
        let code = stabkit::cli::run(std::iter::once("stabkit".to_string()).chain(args), &mut stdout, &mut stderr);
        if code != 0 {
            set_error(String::from_utf8_lossy(&stderr).trim());
        }
        Ok::<_, String>((code, String::from_utf8_lossy(&stdout).into_owned()))
    }));
    match result {
        Ok(Ok((code, s))) => {
            if put_string(out, s) != StkStatus::Ok {
                return -1;
            }
            code
        }
        Ok(Err(msg)) => {
            set_error(msg);
            -1
        }
        Err(_) => {
            set_error("internal panic");
            -1
        }
    }
}
