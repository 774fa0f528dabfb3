//! C ABI over the stepworld harness.
//!
//! Worlds and policies are opaque handles created and freed through this
//! interface. Every fallible function returns an [`SwStatus`]; on failure a
//! message is available from [`sw_last_error`] until the next call on the
//! same thread. Output parameters are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use stepworld::worlds::Verdict;
use stepworld::{
    analyze_good_world, builtin_world, life_value, parse_world, run_life, search_ai, worlds_indistinguishable,
    Error, MeaningOfLife, PolicyCode, Requirement, TestSuite, TestWorldSpec, TransducerPolicy, WorldDef,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidConfig = 4,
    AlphabetMismatch = 5,
    Unsupported = 6,
    ResourceLimit = 7,
    OutOfRange = 8,
    Io = 9,
    Panic = 10,
}

/// A parsed world together with its meaning of life.
pub struct SwWorld {
    world: Arc<WorldDef>,
    meaning: MeaningOfLife,
}

/// A finite-state transducer policy.
pub struct SwPolicy {
    policy: TransducerPolicy,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> SwStatus {
    match err {
        Error::AlphabetMismatch(_) => SwStatus::AlphabetMismatch,
        Error::InvalidConfig(_) => SwStatus::InvalidConfig,
        Error::Unsupported(_) => SwStatus::Unsupported,
        Error::ResourceLimit { .. } => SwStatus::ResourceLimit,
        Error::OutOfRange(_) => SwStatus::OutOfRange,
        Error::Parse(_) => SwStatus::Parse,
        Error::Io { .. } => SwStatus::Io,
    }
}

struct Fail(SwStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> SwStatus {
    set_error(String::new());
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SwStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SwStatus::Panic
        }
    }
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if ptr.is_null() {
        return Err(Fail(SwStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| Fail(SwStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Fail> {
    ptr.as_ref().ok_or_else(|| Fail(SwStatus::NullArgument, format!("{what} is null")))
}

unsafe fn out<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    ptr.as_mut().ok_or_else(|| Fail(SwStatus::NullArgument, format!("{what} is null")))
}

/// Message for the most recent failure on this thread; empty after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn sw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a world from its text form.
///
/// # Safety
/// `source` must be a nul-terminated string; `world_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_world_parse(source: *const c_char, world_out: *mut *mut SwWorld) -> SwStatus {
    guard(|| {
        let source = text(source, "source")?;
        let slot = out(world_out, "world_out")?;
        let wf = parse_world(source)?;
        *slot = Box::into_raw(Box::new(SwWorld { world: Arc::new(wf.world), meaning: wf.meaning }));
        Ok(())
    })
}

/// Loads one of the shipped worlds by name.
///
/// # Safety
/// `name` must be a nul-terminated string; `world_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_world_builtin(name: *const c_char, world_out: *mut *mut SwWorld) -> SwStatus {
    guard(|| {
        let name = text(name, "name")?;
        let slot = out(world_out, "world_out")?;
        let wf = builtin_world(name)
            .ok_or_else(|| Fail(SwStatus::InvalidConfig, format!("no builtin world {name:?}")))?;
        *slot = Box::into_raw(Box::new(SwWorld { world: Arc::new(wf.world), meaning: wf.meaning }));
        Ok(())
    })
}

/// # Safety
/// `world` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sw_world_free(world: *mut SwWorld) {
    if !world.is_null() {
        drop(Box::from_raw(world));
    }
}

/// # Safety
/// `world` must be a live handle; `count_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_world_state_count(world: *const SwWorld, count_out: *mut usize) -> SwStatus {
    guard(|| {
        let w = deref(world, "world")?;
        *out(count_out, "count_out")? = w.world.state_count();
        Ok(())
    })
}

/// Fatal-error check: writes 1 if some reachable state has a worse best
/// long-run rate than the start, else 0.
///
/// # Safety
/// `world` must be a live handle; `fatal_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_world_has_fatal_errors(world: *const SwWorld, fatal_out: *mut i32) -> SwStatus {
    guard(|| {
        let w = deref(world, "world")?;
        let slot = out(fatal_out, "fatal_out")?;
        let report = analyze_good_world(&w.world, &w.meaning)?;
        *slot = (report.verdict == Verdict::HasFatalErrors) as i32;
        Ok(())
    })
}

/// Writes 1 if the two worlds have equal trees of life up to `depth`
/// (negative for unbounded), else 0.
///
/// # Safety
/// `a` and `b` must be live handles; `equal_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_worlds_indistinguishable(
    a: *const SwWorld,
    b: *const SwWorld,
    depth: i64,
    equal_out: *mut i32,
) -> SwStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        let slot = out(equal_out, "equal_out")?;
        let depth = usize::try_from(depth).ok();
        *slot = worlds_indistinguishable(&a.world, &b.world, depth)? as i32;
        Ok(())
    })
}

/// Decodes a policy index over the alphabets of `world`.
///
/// # Safety
/// `world` must be a live handle; `policy_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_policy_decode(
    world: *const SwWorld,
    index: u64,
    policy_out: *mut *mut SwPolicy,
) -> SwStatus {
    guard(|| {
        let w = deref(world, "world")?;
        let slot = out(policy_out, "policy_out")?;
        let policy = PolicyCode::decode(index, w.world.sigma().clone(), w.world.omega().clone())?;
        *slot = Box::into_raw(Box::new(SwPolicy { policy }));
        Ok(())
    })
}

/// # Safety
/// `policy` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sw_policy_free(policy: *mut SwPolicy) {
    if !policy.is_null() {
        drop(Box::from_raw(policy));
    }
}

/// # Safety
/// `policy` must be a live handle; `count_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_policy_state_count(policy: *const SwPolicy, count_out: *mut usize) -> SwStatus {
    guard(|| {
        let p = deref(policy, "policy")?;
        *out(count_out, "count_out")? = p.policy.state_count();
        Ok(())
    })
}

/// Lives `steps` steps of `world` with `policy` from birth and writes the
/// life value.
///
/// # Safety
/// `world` and `policy` must be live handles; `value_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_run_life_value(
    world: *const SwWorld,
    policy: *const SwPolicy,
    steps: usize,
    seed: u64,
    value_out: *mut i64,
) -> SwStatus {
    guard(|| {
        let w = deref(world, "world")?;
        let p = deref(policy, "policy")?;
        let slot = out(value_out, "value_out")?;
        let mut agent = p.policy.clone();
        let life = run_life(&w.world, &mut agent, steps, seed)?;
        *slot = life_value(&life, &w.meaning);
        Ok(())
    })
}

/// Searches policies with up to `max_states` states for the first whose
/// evaluation-window value in `world` reaches `min_value`. Writes 1 to
/// `found_out` and the index to `index_out` if one exists within
/// `policy_cap` candidates, else 0.
///
/// # Safety
/// `world` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_search_single(
    world: *const SwWorld,
    train_steps: u64,
    eval_steps: u64,
    min_value: i64,
    seed: u64,
    max_states: usize,
    policy_cap: u64,
    found_out: *mut i32,
    index_out: *mut u64,
) -> SwStatus {
    guard(|| {
        let w = deref(world, "world")?;
        let found = out(found_out, "found_out")?;
        let index = out(index_out, "index_out")?;
        let spec = TestWorldSpec::new(
            "world",
            w.world.clone(),
            w.meaning.clone(),
            train_steps,
            eval_steps,
            Requirement::MinValue(min_value),
            seed,
        )?;
        let report = search_ai(&TestSuite::unbudgeted(vec![spec], policy_cap)?, max_states)?;
        *found = report.winner.is_some() as i32;
        *index = report.winner.map_or(0, |c| c.index);
        Ok(())
    })
}
