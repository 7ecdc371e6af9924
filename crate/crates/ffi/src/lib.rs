//! C ABI for the planner: opaque handles, status codes, and a thread-local
//! last-error message. All strings are NUL-terminated UTF-8; strings
//! returned by this library must be released with [`tigris_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;

use tigris::planner::{plan, PlannerKind, StopCondition, World};
use tigris::scenario::{ResultFile, Scenario};
use tigris::Error;

/// Outcome of a call. Anything but `Ok` leaves details in
/// [`tigris_last_error_message`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TigrisStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    Io = 3,
    Parse = 4,
    PlanFailed = 5,
    InvalidUtf8 = 6,
    IndexOutOfRange = 7,
}

/// Planner selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TigrisPlanner {
    Tigris = 0,
    Rig = 1,
}

/// A vehicle pose: position in meters, heading in radians.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TigrisState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub psi: f64,
}

/// Opaque scenario handle.
pub struct TigrisScenario(Scenario);

/// Opaque plan-result handle.
pub struct TigrisPlanResult(tigris::PlanResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> TigrisStatus {
    match err {
        Error::Config(_) | Error::InvalidInput(_) | Error::ZeroWeights => {
            TigrisStatus::InvalidInput
        }
        Error::Io(_) => TigrisStatus::Io,
        Error::Parse(_) => TigrisStatus::Parse,
        _ => TigrisStatus::PlanFailed,
    }
}

/// Message for the most recent failure on this thread; valid until the next
/// failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn tigris_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, TigrisStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(TigrisStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        TigrisStatus::InvalidUtf8
    })
}

fn put_scenario(out: *mut *mut TigrisScenario, scenario: Scenario) -> TigrisStatus {
    if out.is_null() {
        set_error("null output argument");
        return TigrisStatus::NullArgument;
    }
    unsafe { *out = Box::into_raw(Box::new(TigrisScenario(scenario))) };
    TigrisStatus::Ok
}

/// Loads a scenario from a TOML file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. On success `*out` owns the scenario and must be released with
/// [`tigris_scenario_free`].
#[no_mangle]
pub unsafe extern "C" fn tigris_scenario_load(
    path: *const c_char,
    out: *mut *mut TigrisScenario,
) -> TigrisStatus {
    let path = match read_str(path) {
        Ok(s) => s,
        Err(st) => return st,
    };
    match Scenario::load(Path::new(path)) {
        Ok(s) => put_scenario(out, s),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Parses a scenario from TOML text.
///
/// # Safety
/// As [`tigris_scenario_load`], with `text` holding the document itself.
#[no_mangle]
pub unsafe extern "C" fn tigris_scenario_parse(
    text: *const c_char,
    out: *mut *mut TigrisScenario,
) -> TigrisStatus {
    let text = match read_str(text) {
        Ok(s) => s,
        Err(st) => return st,
    };
    match Scenario::from_toml(text) {
        Ok(s) => put_scenario(out, s),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Generates a scenario from the built-in desk-scale template.
///
/// # Safety
/// `out` must be a valid pointer; release the result with
/// [`tigris_scenario_free`].
#[no_mangle]
pub unsafe extern "C" fn tigris_scenario_generate(
    seed: u64,
    out: *mut *mut TigrisScenario,
) -> TigrisStatus {
    let scenario = tigris::bench::generate_scenario(seed, &Scenario::desk_template());
    put_scenario(out, scenario)
}

/// Serializes a scenario to TOML.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid. The returned
/// string must be released with [`tigris_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tigris_scenario_to_toml(
    scenario: *const TigrisScenario,
    out: *mut *mut c_char,
) -> TigrisStatus {
    if scenario.is_null() || out.is_null() {
        set_error("null argument");
        return TigrisStatus::NullArgument;
    }
    let text = (*scenario).0.to_toml();
    *out = CString::new(text).unwrap_or_default().into_raw();
    TigrisStatus::Ok
}

/// # Safety
/// `scenario` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn tigris_scenario_free(scenario: *mut TigrisScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Runs a planner on the scenario.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid. On success `*out`
/// owns the result and must be released with [`tigris_result_free`].
#[no_mangle]
pub unsafe extern "C" fn tigris_plan(
    scenario: *const TigrisScenario,
    planner: TigrisPlanner,
    out: *mut *mut TigrisPlanResult,
) -> TigrisStatus {
    if scenario.is_null() || out.is_null() {
        set_error("null argument");
        return TigrisStatus::NullArgument;
    }
    let sc = &(*scenario).0;
    let kind = match planner {
        TigrisPlanner::Tigris => PlannerKind::Tigris,
        TigrisPlanner::Rig => PlannerKind::Rig,
    };
    let run = || -> Result<tigris::PlanResult, Error> {
        sc.validate()?;
        let grid = sc.build_grid()?;
        let world = World {
            grid: &grid,
            sensor: &sc.sensor,
            weights: &sc.weights,
            zones: &sc.zones,
        };
        plan(&world, sc.start, &sc.planner, kind)
    };
    match run() {
        Ok(r) => {
            *out = Box::into_raw(Box::new(TigrisPlanResult(r)));
            TigrisStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Sets the iteration budget on the scenario's planner configuration.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tigris_scenario_set_iterations(
    scenario: *mut TigrisScenario,
    iterations: u64,
) -> TigrisStatus {
    if scenario.is_null() {
        set_error("null argument");
        return TigrisStatus::NullArgument;
    }
    (*scenario).0.planner.stop = StopCondition::Iterations(iterations);
    TigrisStatus::Ok
}

/// Sets the planner seed.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tigris_scenario_set_seed(
    scenario: *mut TigrisScenario,
    seed: u64,
) -> TigrisStatus {
    if scenario.is_null() {
        set_error("null argument");
        return TigrisStatus::NullArgument;
    }
    (*scenario).0.planner.seed = seed;
    TigrisStatus::Ok
}

/// Total information reward of the result (NaN for a null handle).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tigris_result_info(result: *const TigrisPlanResult) -> f64 {
    if result.is_null() {
        return f64::NAN;
    }
    (*result).0.info
}

/// Path cost in meters (NaN for a null handle).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tigris_result_cost(result: *const TigrisPlanResult) -> f64 {
    if result.is_null() {
        return f64::NAN;
    }
    (*result).0.cost
}

/// Number of states on the returned path (0 for a null handle).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tigris_result_state_count(result: *const TigrisPlanResult) -> usize {
    if result.is_null() {
        return 0;
    }
    (*result).0.states.len()
}

/// Number of nodes in the finished search tree (0 for a null handle).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tigris_result_node_count(result: *const TigrisPlanResult) -> usize {
    if result.is_null() {
        return 0;
    }
    (*result).0.node_count
}

/// Copies path state `index` into `out`.
///
/// # Safety
/// `result` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tigris_result_state(
    result: *const TigrisPlanResult,
    index: usize,
    out: *mut TigrisState,
) -> TigrisStatus {
    if result.is_null() || out.is_null() {
        set_error("null argument");
        return TigrisStatus::NullArgument;
    }
    let states = &(*result).0.states;
    match states.get(index) {
        Some(s) => {
            *out = TigrisState {
                x: s.x,
                y: s.y,
                z: s.z,
                psi: s.psi,
            };
            TigrisStatus::Ok
        }
        None => {
            set_error("state index out of range");
            TigrisStatus::IndexOutOfRange
        }
    }
}

/// Number of points on the reward-over-time curve.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tigris_result_curve_len(result: *const TigrisPlanResult) -> usize {
    if result.is_null() {
        return 0;
    }
    (*result).0.curve.len()
}

/// Copies curve point `index` (x = iteration or seconds, y = best reward).
///
/// # Safety
/// `result` must be a live handle; `x` and `y` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tigris_result_curve_point(
    result: *const TigrisPlanResult,
    index: usize,
    x: *mut f64,
    y: *mut f64,
) -> TigrisStatus {
    if result.is_null() || x.is_null() || y.is_null() {
        set_error("null argument");
        return TigrisStatus::NullArgument;
    }
    let curve = &(*result).0.curve;
    match curve.get(index) {
        Some(&(cx, cy)) => {
            *x = cx;
            *y = cy;
            TigrisStatus::Ok
        }
        None => {
            set_error("curve index out of range");
            TigrisStatus::IndexOutOfRange
        }
    }
}

/// Serializes the result to the TOML result-file format.
///
/// # Safety
/// `result` must be a live handle; `out` must be valid. Release the string
/// with [`tigris_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tigris_result_to_toml(
    result: *const TigrisPlanResult,
    out: *mut *mut c_char,
) -> TigrisStatus {
    if result.is_null() || out.is_null() {
        set_error("null argument");
        return TigrisStatus::NullArgument;
    }
    let text = ResultFile::new((*result).0.clone()).to_toml();
    *out = CString::new(text).unwrap_or_default().into_raw();
    TigrisStatus::Ok
}

/// # Safety
/// `result` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn tigris_result_free(result: *mut TigrisPlanResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `s` must be a string returned by this library and not already freed.
#[no_mangle]
pub unsafe extern "C" fn tigris_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
