//! C ABI for `vershik-ga`.
//!
//! Words cross the boundary as `int32_t` arrays of signed generator indices.
//! Every fallible call returns a [`VgStatus`]; on failure a description is
//! available from [`vg_last_error_message`] on the same thread. Objects are
//! opaque handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use vershik_ga::instance_gen::{generate, InstanceSpec, Layout};
use vershik_ga::word::{normal_form, pseudo_normal_form};
use vershik_ga::{
    cost, is_solution, run, Chromosome, DcspInstance, GaConfig, GroupSpec, InstanceFile, Outcome,
    ParameterSet, RunResult, SubstitutionMode, Word,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    /// The output buffer was too short; the required length was still written.
    BufferTooSmall = 3,
    Internal = 4,
}

/// GA settings for [`vg_solve`]. Obtain defaults from [`vg_solve_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct VgSolveOptions {
    /// Operator counts ν_C, ν_M, ν_D, ν_I, ν_S, ν_R; they sum to the population size.
    pub counts: [usize; 6],
    pub sigma: usize,
    pub initial_length: usize,
    pub seed: u64,
    /// True: substitute the recommended generator instead of a random one.
    pub recommended_substitution: bool,
}

/// A parsed or generated instance.
pub struct VgInstance {
    inner: DcspInstance,
    witness: Option<Chromosome>,
}

/// Outcome of a GA run.
pub struct VgResult {
    inner: RunResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(VgStatus, String);

impl From<vershik_ga::Error> for Failure {
    fn from(e: vershik_ga::Error) -> Self {
        Failure(VgStatus::InvalidInput, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> VgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            VgStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            VgStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(VgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn read_word(p: *const i32, len: usize, spec: &GroupSpec, what: &str) -> Result<Word, Failure> {
    if len == 0 {
        return Ok(Word::empty());
    }
    if p.is_null() {
        return Err(null(what));
    }
    let w = Word::from_values(slice::from_raw_parts(p, len))?;
    spec.check(&w)?;
    Ok(w)
}

unsafe fn write_word(w: &Word, out: *mut i32, cap: usize, out_len: *mut usize) -> Result<(), Failure> {
    if out_len.is_null() {
        return Err(null("out_len"));
    }
    let values = w.values();
    *out_len = values.len();
    if values.len() > cap {
        return Err(Failure(
            VgStatus::BufferTooSmall,
            format!("need {} letters, buffer holds {cap}", values.len()),
        ));
    }
    if !values.is_empty() {
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    Ok(())
}

unsafe fn reduce_with(
    rank: usize,
    word: *const i32,
    len: usize,
    out: *mut i32,
    cap: usize,
    out_len: *mut usize,
    f: fn(&Word, &GroupSpec) -> Word,
) -> VgStatus {
    guard(|| {
        let spec = GroupSpec::new(rank)?;
        let w = read_word(word, len, &spec, "word")?;
        write_word(&f(&w, &spec), out, cap, out_len)
    })
}

/// Normal form of `word[0..len]` in V_rank, written to `out[0..cap]`.
/// `*out_len` receives the length of the result even if `cap` is too small.
///
/// # Safety
/// Pointers must be valid for the given lengths.
#[no_mangle]
pub unsafe extern "C" fn vg_normal_form(
    rank: usize,
    word: *const i32,
    len: usize,
    out: *mut i32,
    cap: usize,
    out_len: *mut usize,
) -> VgStatus {
    reduce_with(rank, word, len, out, cap, out_len, normal_form)
}

/// Geodesic cancellation of `word` without reordering; see [`vg_normal_form`].
///
/// # Safety
/// Pointers must be valid for the given lengths.
#[no_mangle]
pub unsafe extern "C" fn vg_pseudo_normal_form(
    rank: usize,
    word: *const i32,
    len: usize,
    out: *mut i32,
    cap: usize,
    out_len: *mut usize,
) -> VgStatus {
    reduce_with(rank, word, len, out, cap, out_len, pseudo_normal_form)
}

/// Parses an instance in the text format (`n:`, `Y:`, `Z:`, `a:`, `b:` and
/// optional witness lines `x:`, `y:`).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vg_instance_parse(text: *const c_char, out: *mut *mut VgInstance) -> VgStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Failure(VgStatus::InvalidInput, "text is not UTF-8".into()))?;
        let file: InstanceFile = s.parse()?;
        *out = Box::into_raw(Box::new(VgInstance {
            inner: file.instance,
            witness: file.witness,
        }));
        Ok(())
    })
}

/// Random instance with Y = {1..m-1}, Z = {m+2..2m} for even `rank` = 2m,
/// keeping the generating witness.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vg_instance_generate(
    rank: usize,
    l_a: usize,
    l_x: usize,
    l_y: usize,
    seed: u64,
    out: *mut *mut VgInstance,
) -> VgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = generate(&InstanceSpec {
            rank,
            l_a,
            l_x,
            l_y,
            layout: Layout::ProblemP,
            seed,
        })?;
        let witness = Some(g.witness());
        *out = Box::into_raw(Box::new(VgInstance {
            inner: g.instance,
            witness,
        }));
        Ok(())
    })
}

/// # Safety
/// `inst` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn vg_instance_free(inst: *mut VgInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Text form of an instance, released with [`vg_string_free`].
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vg_instance_to_string(inst: *const VgInstance, out: *mut *mut c_char) -> VgStatus {
    guard(|| {
        let inst = deref(inst, "inst")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let file = InstanceFile {
            instance: inst.inner.clone(),
            witness: inst.witness.clone(),
        };
        let s = CString::new(file.to_string()).map_err(|e| Failure(VgStatus::Internal, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn vg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_pair(
    inst: &DcspInstance,
    x: *const i32,
    x_len: usize,
    y: *const i32,
    y_len: usize,
) -> Result<Chromosome, Failure> {
    Ok(Chromosome::new(
        read_word(x, x_len, inst.spec(), "x")?,
        read_word(y, y_len, inst.spec(), "y")?,
    ))
}

/// Reduced length of `x a y b⁻¹`. `x` must lie in V(Y) and `y` in V(Z).
///
/// # Safety
/// `inst` must be a live handle and the word pointers valid for their lengths.
#[no_mangle]
pub unsafe extern "C" fn vg_cost(
    inst: *const VgInstance,
    x: *const i32,
    x_len: usize,
    y: *const i32,
    y_len: usize,
    out_cost: *mut usize,
) -> VgStatus {
    guard(|| {
        let inst = &deref(inst, "inst")?.inner;
        if out_cost.is_null() {
            return Err(null("out_cost"));
        }
        *out_cost = cost(inst, &read_pair(inst, x, x_len, y, y_len)?)?;
        Ok(())
    })
}

/// Writes whether `(x, y)` solves the instance.
///
/// # Safety
/// As for [`vg_cost`].
#[no_mangle]
pub unsafe extern "C" fn vg_is_solution(
    inst: *const VgInstance,
    x: *const i32,
    x_len: usize,
    y: *const i32,
    y_len: usize,
    out_solved: *mut bool,
) -> VgStatus {
    guard(|| {
        let inst = &deref(inst, "inst")?.inner;
        if out_solved.is_null() {
            return Err(null("out_solved"));
        }
        *out_solved = is_solution(inst, &read_pair(inst, x, x_len, y, y_len)?);
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn vg_solve_options_default() -> VgSolveOptions {
    let config = GaConfig::default();
    VgSolveOptions {
        counts: ParameterSet::default().counts(),
        sigma: config.sigma,
        initial_length: config.initial_length,
        seed: config.seed,
        recommended_substitution: false,
    }
}

/// Runs the GA. A null `options` means [`vg_solve_options_default`].
/// Timing out is not an error: inspect the result with [`vg_result_solved`].
///
/// # Safety
/// `inst` must be a live handle; `options` null or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vg_solve(
    inst: *const VgInstance,
    options: *const VgSolveOptions,
    out: *mut *mut VgResult,
) -> VgStatus {
    guard(|| {
        let inst = &deref(inst, "inst")?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = options.as_ref().copied().unwrap_or_else(|| vg_solve_options_default());
        let params = ParameterSet::from_counts(opts.counts)?;
        let config = GaConfig {
            sigma: opts.sigma,
            initial_length: opts.initial_length,
            seed: opts.seed,
            substitution: if opts.recommended_substitution {
                SubstitutionMode::Recommended
            } else {
                SubstitutionMode::Random
            },
        };
        let inner = run(inst, &params, &config)?;
        *out = Box::into_raw(Box::new(VgResult { inner }));
        Ok(())
    })
}

/// # Safety
/// `r` must come from [`vg_solve`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn vg_result_free(r: *mut VgResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live handle or null (which reads as false).
#[no_mangle]
pub unsafe extern "C" fn vg_result_solved(r: *const VgResult) -> bool {
    r.as_ref().is_some_and(|r| r.inner.solved())
}

/// Index of the generation in which the solution appeared, or σ on timeout.
///
/// # Safety
/// `r` must be a live handle or null (which reads as 0).
#[no_mangle]
pub unsafe extern "C" fn vg_result_generations(r: *const VgResult) -> usize {
    r.as_ref().map_or(0, |r| r.inner.generations)
}

/// # Safety
/// `r` must be a live handle or null (which reads as 0).
#[no_mangle]
pub unsafe extern "C" fn vg_result_final_cost(r: *const VgResult) -> usize {
    r.as_ref().map_or(0, |r| r.inner.final_cost())
}

/// # Safety
/// `r` must be a live handle or null (which reads as 0).
#[no_mangle]
pub unsafe extern "C" fn vg_result_elapsed_ms(r: *const VgResult) -> u64 {
    r.as_ref().map_or(0, |r| r.inner.elapsed.as_millis() as u64)
}

unsafe fn result_side(
    r: *const VgResult,
    pick: fn(&Chromosome) -> &Word,
    out: *mut i32,
    cap: usize,
    out_len: *mut usize,
) -> VgStatus {
    guard(|| {
        let r = deref(r, "result")?;
        match &r.inner.outcome {
            Outcome::Solution(c) => write_word(pick(c), out, cap, out_len),
            Outcome::Timeout => Err(Failure(VgStatus::InvalidInput, "run timed out without a solution".into())),
        }
    })
}

/// The `x` part of a solution; see [`vg_normal_form`] for the buffer protocol.
///
/// # Safety
/// `r` must be a live handle and `out` valid for `cap` letters.
#[no_mangle]
pub unsafe extern "C" fn vg_result_x(r: *const VgResult, out: *mut i32, cap: usize, out_len: *mut usize) -> VgStatus {
    result_side(r, |c| &c.chi, out, cap, out_len)
}

/// The `y` part of a solution.
///
/// # Safety
/// As for [`vg_result_x`].
#[no_mangle]
pub unsafe extern "C" fn vg_result_y(r: *const VgResult, out: *mut i32, cap: usize, out_len: *mut usize) -> VgStatus {
    result_side(r, |c| &c.zeta, out, cap, out_len)
}

/// Message for the last call on this thread; empty after a success. The
/// pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn vg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
