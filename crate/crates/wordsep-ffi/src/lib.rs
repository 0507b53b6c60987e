//! C ABI for the word-separation laboratory.
//!
//! Conventions, mirrored in `include/wordsep.h`:
//! - Machines are opaque handles ([`WsMachine`]); free with [`ws_machine_free`].
//! - Structured inputs and outputs are JSON strings. Returned strings are
//!   owned by the caller and must be released with [`ws_string_free`] —
//!   except [`ws_version`] and [`ws_last_error`], which are borrowed.
//! - Every fallible call returns a `WS_*` status code; on failure,
//!   [`ws_last_error`] describes the problem (thread-local, valid until the
//!   next call on the same thread).
//! - Panics never cross the boundary; they surface as `WS_ERR_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::json;

use wordsep::afa::{
    bounded_machine, encoding_machine, set_machine, singleton_vs_set_machine,
    subtraction_machine, three_state_machine, Afa,
};
use wordsep::baseline::min_separating_dfa;
use wordsep::exactnum::{parse_rational, ComplexFloat, Rational};
use wordsep::freegroup::pair_to_element;
use wordsep::mcqfa::{
    free_rotation_machine, rotation_machine, spin_lift_machine, swap_pair_machine,
    tensor_machines, Mcqfa,
};
use wordsep::report::{EvalOptions, SeparationMode, DEFAULT_NONZERO_MIN, DEFAULT_TOL};
use wordsep::wordmap::{build_separating_mcqfa, estimate_alpha};
use wordsep::words::{PairClass, Word, WordPair};

pub const WS_OK: i32 = 0;
/// Null pointer, invalid UTF-8, or malformed JSON.
pub const WS_ERR_ARGUMENT: i32 = 1;
/// The library rejected the construction or input word.
pub const WS_ERR_DOMAIN: i32 = 2;
/// The evaluation ran but the claimed separation did not hold.
pub const WS_ERR_VIOLATED: i32 = 3;
/// A panic was trapped at the boundary.
pub const WS_ERR_PANIC: i32 = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&ch| ch != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL-free by construction");
    });
}

fn domain_error(e: wordsep::Error) -> i32 {
    set_error(&e.to_string());
    WS_ERR_DOMAIN
}

enum MachineImpl {
    Affine(Afa),
    Exact(Mcqfa<Rational>),
    Float(Mcqfa<ComplexFloat>),
}

/// Opaque machine handle passed over the C boundary.
pub struct WsMachine(MachineImpl);

impl MachineImpl {
    fn describe(&self) -> serde_json::Value {
        match self {
            MachineImpl::Affine(m) => m.to_json(),
            MachineImpl::Exact(m) => m.to_json(),
            MachineImpl::Float(m) => m.to_json(),
        }
    }

    fn alphabet(&self) -> u8 {
        match self {
            MachineImpl::Affine(m) => m.alphabet(),
            MachineImpl::Exact(m) => m.alphabet(),
            MachineImpl::Float(m) => m.alphabet(),
        }
    }

    fn accept(&self, word: &Word) -> wordsep::Result<(String, f64)> {
        Ok(match self {
            MachineImpl::Affine(m) => {
                let p = m.run(word)?.accept_probability;
                (p.to_string(), rational_to_f64(&p))
            }
            MachineImpl::Exact(m) => {
                let p = m.run(word)?.accept_probability;
                (p.to_string(), rational_to_f64(&p))
            }
            MachineImpl::Float(m) => {
                let p = m.run(word)?.accept_probability;
                (p.to_string(), p)
            }
        })
    }

    fn evaluate(
        &self,
        accept: &[Word],
        reject: &[Word],
        mode: SeparationMode,
        opts: &EvalOptions,
    ) -> wordsep::Result<wordsep::report::SeparationReport> {
        match self {
            MachineImpl::Affine(m) => m.evaluate_separation(accept, reject, mode, opts),
            MachineImpl::Exact(m) => m.evaluate_separation(accept, reject, mode, opts),
            MachineImpl::Float(m) => m.evaluate_separation(accept, reject, mode, opts),
        }
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Read a C string; records an error and yields None on null/invalid UTF-8.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Option<&'a str> {
    if ptr.is_null() {
        set_error(&format!("{what} is a null pointer"));
        return None;
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Some(s),
        Err(_) => {
            set_error(&format!("{what} is not valid UTF-8"));
            None
        }
    }
}

fn write_json(out: *mut *mut c_char, value: &serde_json::Value) -> i32 {
    if out.is_null() {
        set_error("output pointer is null");
        return WS_ERR_ARGUMENT;
    }
    let text = serde_json::to_string(value).expect("JSON serialization");
    let owned = CString::new(text).expect("serde_json emits no NUL bytes");
    unsafe { *out = owned.into_raw() };
    WS_OK
}

fn trap(body: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic trapped at the C boundary");
            WS_ERR_PANIC
        }
    }
}

/// Semantic version of the library, as a borrowed static string.
#[no_mangle]
pub extern "C" fn ws_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread. Borrowed; valid
/// until the next library call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn ws_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned through a `char **` output parameter.
/// # Safety
/// `s` must be null or a pointer previously returned by this library
/// through a `char **` output and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ws_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn build_machine(spec: &serde_json::Value) -> Result<MachineImpl, i32> {
    let model = spec["model"].as_str().ok_or_else(|| {
        set_error("spec needs a \"model\" string");
        WS_ERR_ARGUMENT
    })?;
    let word_field = |key: &str| -> Result<Word, i32> {
        let s = spec[key].as_str().ok_or_else(|| {
            set_error(&format!("model {model} needs a \"{key}\" word"));
            WS_ERR_ARGUMENT
        })?;
        Word::parse(s, 2).map_err(domain_error)
    };
    let words_field = |key: &str| -> Result<Vec<Word>, i32> {
        let items = spec[key].as_array().ok_or_else(|| {
            set_error(&format!("model {model} needs a \"{key}\" array of words"));
            WS_ERR_ARGUMENT
        })?;
        items
            .iter()
            .map(|v| {
                let s = v.as_str().ok_or_else(|| {
                    set_error(&format!("\"{key}\" entries must be strings"));
                    WS_ERR_ARGUMENT
                })?;
                Word::parse(s, 2).map_err(domain_error)
            })
            .collect()
    };
    let u32_field = |key: &str| -> Result<u32, i32> {
        spec[key].as_u64().map(|v| v as u32).ok_or_else(|| {
            set_error(&format!("model {model} needs an integer \"{key}\""));
            WS_ERR_ARGUMENT
        })
    };
    let scale = || spec["k"].as_u64().unwrap_or(1);
    let alphabet = || spec["alphabet"].as_u64().unwrap_or(2) as u8;

    Ok(match model {
        "mcqfa-rotation" => {
            MachineImpl::Float(rotation_machine(u32_field("d")?, u32_field("t")?).map_err(domain_error)?)
        }
        "mcqfa-swap" => MachineImpl::Float(swap_pair_machine()),
        "afa-subtract" => MachineImpl::Affine(
            subtraction_machine(u32_field("d")?, u32_field("t")?).map_err(domain_error)?,
        ),
        "afa-exact" => MachineImpl::Affine(
            encoding_machine(&word_field("x")?, &word_field("y")?).map_err(domain_error)?,
        ),
        "afa-bounded" => MachineImpl::Affine(
            bounded_machine(&word_field("x")?, alphabet(), scale()).map_err(domain_error)?,
        ),
        "afa-3state" => MachineImpl::Affine(
            three_state_machine(&word_field("x")?, alphabet(), scale()).map_err(domain_error)?,
        ),
        "afa-set-exact" => MachineImpl::Affine(
            singleton_vs_set_machine(&word_field("x")?, &words_field("set")?)
                .map_err(domain_error)?,
        ),
        "afa-set-bounded" => {
            let sharpen = spec["sharpen"].as_bool().unwrap_or(true);
            MachineImpl::Affine(
                set_machine(&words_field("set")?, scale(), sharpen).map_err(domain_error)?,
            )
        }
        "nondet" => {
            let parts = words_field("set")?
                .iter()
                .map(spin_lift_machine)
                .collect::<wordsep::Result<Vec<_>>>()
                .map_err(domain_error)?;
            MachineImpl::Float(tensor_machines(&parts, DEFAULT_TOL).map_err(domain_error)?)
        }
        "nondet-exact" => {
            let parts = words_field("set")?
                .iter()
                .map(free_rotation_machine)
                .collect::<wordsep::Result<Vec<_>>>()
                .map_err(domain_error)?;
            MachineImpl::Exact(tensor_machines(&parts, 0.0).map_err(domain_error)?)
        }
        other => {
            set_error(&format!("unknown model \"{other}\""));
            return Err(WS_ERR_DOMAIN);
        }
    })
}

/// Build a machine from a JSON spec, e.g.
/// `{"model":"afa-exact","x":"ab","y":"ba"}` or
/// `{"model":"afa-bounded","x":"a","k":100}`. See the header for the
/// full list of models and their fields.
/// # Safety
/// `spec_json` must be null or point to a NUL-terminated string; `out`
/// must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_machine_build(
    spec_json: *const c_char,
    out: *mut *mut WsMachine,
) -> i32 {
    trap(|| {
        let Some(text) = (unsafe { read_str(spec_json, "spec_json") }) else {
            return WS_ERR_ARGUMENT;
        };
        if out.is_null() {
            set_error("output pointer is null");
            return WS_ERR_ARGUMENT;
        }
        let spec: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => {
                set_error(&format!("spec is not valid JSON: {e}"));
                return WS_ERR_ARGUMENT;
            }
        };
        match build_machine(&spec) {
            Ok(machine) => {
                unsafe { *out = Box::into_raw(Box::new(WsMachine(machine))) };
                WS_OK
            }
            Err(code) => code,
        }
    })
}

/// Serialize the machine (states, transitions, marker, acceptance set)
/// to its JSON schema.
/// # Safety
/// `machine` must be null or a live handle from this library; `out_json`
/// must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_machine_describe(
    machine: *const WsMachine,
    out_json: *mut *mut c_char,
) -> i32 {
    trap(|| {
        let Some(m) = (unsafe { machine.as_ref() }) else {
            set_error("machine handle is null");
            return WS_ERR_ARGUMENT;
        };
        write_json(out_json, &m.0.describe())
    })
}

/// Run one word; the result carries the exact value string and a float view:
/// `{"word":"ab","value":"1","approx":1.0}`.
/// # Safety
/// `machine` must be null or a live handle; `word` null or a
/// NUL-terminated string; `out_json` null or valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn ws_machine_accept(
    machine: *const WsMachine,
    word: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    trap(|| {
        let Some(m) = (unsafe { machine.as_ref() }) else {
            set_error("machine handle is null");
            return WS_ERR_ARGUMENT;
        };
        let Some(text) = (unsafe { read_str(word, "word") }) else {
            return WS_ERR_ARGUMENT;
        };
        let parsed = match Word::parse(text, m.0.alphabet()) {
            Ok(w) => w,
            Err(e) => return domain_error(e),
        };
        match m.0.accept(&parsed) {
            Ok((value, approx)) => write_json(
                out_json,
                &json!({"word": text, "value": value, "approx": approx}),
            ),
            Err(e) => domain_error(e),
        }
    })
}

fn parse_mode(request: &serde_json::Value) -> Result<SeparationMode, i32> {
    match request["mode"].as_str() {
        Some("exact") | None => Ok(SeparationMode::Exact),
        Some("nondet") => Ok(SeparationMode::Nondet),
        Some("bounded") => {
            let text = request["bound"].as_str().ok_or_else(|| {
                set_error("bounded mode needs a \"bound\" rational string like \"2/201\"");
                WS_ERR_ARGUMENT
            })?;
            let bound = parse_rational(text).ok_or_else(|| {
                set_error(&format!("cannot parse \"{text}\" as a rational"));
                WS_ERR_ARGUMENT
            })?;
            Ok(SeparationMode::Bounded(bound))
        }
        Some(other) => {
            set_error(&format!(
                "unknown mode \"{other}\" (expected exact, nondet, or bounded)"
            ));
            Err(WS_ERR_ARGUMENT)
        }
    }
}

/// Verify a separation claim. Request:
/// `{"accept":["ab"],"reject":["ba"],"mode":"exact"}` with optional
/// `"bound"` (for mode "bounded"), `"tol"`, `"nonzero_min"`. Returns
/// `WS_OK` when the claim held, `WS_ERR_VIOLATED` when it ran but did not;
/// the report JSON is written either way.
/// # Safety
/// `machine` must be null or a live handle; `request_json` null or a
/// NUL-terminated string; `out_json` null or valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn ws_machine_evaluate(
    machine: *const WsMachine,
    request_json: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    trap(|| {
        let Some(m) = (unsafe { machine.as_ref() }) else {
            set_error("machine handle is null");
            return WS_ERR_ARGUMENT;
        };
        let Some(text) = (unsafe { read_str(request_json, "request_json") }) else {
            return WS_ERR_ARGUMENT;
        };
        let request: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => {
                set_error(&format!("request is not valid JSON: {e}"));
                return WS_ERR_ARGUMENT;
            }
        };
        let side = |key: &str| -> Result<Vec<Word>, i32> {
            let items = request[key].as_array().ok_or_else(|| {
                set_error(&format!("request needs an \"{key}\" array of words"));
                WS_ERR_ARGUMENT
            })?;
            items
                .iter()
                .map(|v| {
                    let s = v.as_str().ok_or_else(|| {
                        set_error(&format!("\"{key}\" entries must be strings"));
                        WS_ERR_ARGUMENT
                    })?;
                    Word::parse(s, m.0.alphabet()).map_err(domain_error)
                })
                .collect()
        };
        let accept = match side("accept") {
            Ok(w) => w,
            Err(code) => return code,
        };
        let reject = match side("reject") {
            Ok(w) => w,
            Err(code) => return code,
        };
        let mode = match parse_mode(&request) {
            Ok(m) => m,
            Err(code) => return code,
        };
        let opts = EvalOptions {
            tol: request["tol"].as_f64().unwrap_or(DEFAULT_TOL),
            nonzero_min: request["nonzero_min"].as_f64().unwrap_or(DEFAULT_NONZERO_MIN),
        };
        match m.0.evaluate(&accept, &reject, mode, &opts) {
            Ok(report) => {
                let verified = report.verified;
                let code = write_json(out_json, &report.to_json());
                if code != WS_OK {
                    code
                } else if verified {
                    WS_OK
                } else {
                    set_error("separation claim violated; see the report");
                    WS_ERR_VIOLATED
                }
            }
            Err(e) => domain_error(e),
        }
    })
}

/// Release a machine handle.
/// # Safety
/// `machine` must be null or a handle from this library not yet freed;
/// the handle is dead after this call.
#[no_mangle]
pub unsafe extern "C" fn ws_machine_free(machine: *mut WsMachine) {
    if !machine.is_null() {
        drop(unsafe { Box::from_raw(machine) });
    }
}

/// Classify a pair as easy (some letter count differs) or hard, with the
/// witness letter or the binary reduction.
/// # Safety
/// `x` and `y` must be null or NUL-terminated strings; `out_json` must
/// be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_classify(
    x: *const c_char,
    y: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    trap(|| {
        let (Some(xs), Some(ys)) =
            (unsafe { read_str(x, "x") }, unsafe { read_str(y, "y") })
        else {
            return WS_ERR_ARGUMENT;
        };
        let pair = match WordPair::parse(xs, ys, 2) {
            Ok(p) => p,
            Err(e) => return domain_error(e),
        };
        let mut j = json!({
            "x": pair.x.display_letters(),
            "y": pair.y.display_letters(),
        });
        match pair.classify() {
            PairClass::Easy { witness_symbol } => {
                j["class"] = json!("easy");
                j["witness"] =
                    json!(wordsep::words::symbol_letter(witness_symbol).to_string());
            }
            PairClass::Hard(red) => {
                j["class"] = json!("hard");
                j["reduction"] = json!({
                    "x": red.pair.x.display_letters(),
                    "y": red.pair.y.display_letters(),
                });
            }
        }
        write_json(out_json, &j)
    })
}

/// Smallest DFA (≤ n_max states) sending the two words to different
/// states: `{"size":2,"table":[...]}`, with nulls when none exists.
/// # Safety
/// `x` and `y` must be null or NUL-terminated strings; `out_json` must
/// be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_dfa_min(
    x: *const c_char,
    y: *const c_char,
    n_max: u32,
    out_json: *mut *mut c_char,
) -> i32 {
    trap(|| {
        let (Some(xs), Some(ys)) =
            (unsafe { read_str(x, "x") }, unsafe { read_str(y, "y") })
        else {
            return WS_ERR_ARGUMENT;
        };
        let pair = match WordPair::parse(xs, ys, 1) {
            Ok(p) => p,
            Err(e) => return domain_error(e),
        };
        match min_separating_dfa(&pair.x, &pair.y, n_max as usize) {
            Ok(found) => write_json(
                out_json,
                &json!({
                    "size": found.as_ref().map(|d| d.n_states()),
                    "table": found.as_ref().map(|d| d.table().to_vec()),
                }),
            ),
            Err(e) => domain_error(e),
        }
    })
}

/// Coordinate-search estimate of the largest rotation angle the pair's
/// quotient word map attains on SU(2): `{"omega":...,"alpha_hat":...}`.
/// # Safety
/// `x` and `y` must be null or NUL-terminated strings; `out_json` must
/// be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_wordmap_estimate(
    x: *const c_char,
    y: *const c_char,
    restarts: u32,
    iterations: u32,
    seed: u64,
    out_json: *mut *mut c_char,
) -> i32 {
    trap(|| {
        let (Some(xs), Some(ys)) =
            (unsafe { read_str(x, "x") }, unsafe { read_str(y, "y") })
        else {
            return WS_ERR_ARGUMENT;
        };
        let pair = match WordPair::parse(xs, ys, 2) {
            Ok(p) => p,
            Err(e) => return domain_error(e),
        };
        let omega = match pair_to_element(&pair.x, &pair.y) {
            Ok(w) => w,
            Err(e) => return domain_error(e),
        };
        let estimate = match estimate_alpha(&omega, restarts, iterations, seed) {
            Ok(est) => est,
            Err(e) => return domain_error(e),
        };
        write_json(
            out_json,
            &json!({
                "omega": omega.to_string(),
                "alpha_hat": estimate.alpha_hat,
                "restarts": restarts,
                "iterations": iterations,
                "seed": seed,
            }),
        )
    })
}

/// Estimate the attainable angle and, when it clears a quarter turn,
/// build the 2-state certificate machine that separates the pair with
/// one-sided error ≤ 1e−6. On success writes the machine handle and a
/// JSON summary with the residual.
/// # Safety
/// `x` and `y` must be null or NUL-terminated strings; `out_machine` and
/// `out_json` must be null or valid for one pointer write each.
#[no_mangle]
pub unsafe extern "C" fn ws_certificate_build(
    x: *const c_char,
    y: *const c_char,
    restarts: u32,
    iterations: u32,
    seed: u64,
    out_machine: *mut *mut WsMachine,
    out_json: *mut *mut c_char,
) -> i32 {
    trap(|| {
        let (Some(xs), Some(ys)) =
            (unsafe { read_str(x, "x") }, unsafe { read_str(y, "y") })
        else {
            return WS_ERR_ARGUMENT;
        };
        if out_machine.is_null() {
            set_error("output machine pointer is null");
            return WS_ERR_ARGUMENT;
        }
        let pair = match WordPair::parse(xs, ys, 2) {
            Ok(p) => p,
            Err(e) => return domain_error(e),
        };
        let omega = match pair_to_element(&pair.x, &pair.y) {
            Ok(w) => w,
            Err(e) => return domain_error(e),
        };
        let estimate = match estimate_alpha(&omega, restarts, iterations, seed) {
            Ok(est) => est,
            Err(e) => return domain_error(e),
        };
        let (machine, residual) = match build_separating_mcqfa(&pair.x, &pair.y, &estimate) {
            Ok(built) => built,
            Err(e) => return domain_error(e),
        };
        let summary = json!({
            "omega": omega.to_string(),
            "alpha_hat": estimate.alpha_hat,
            "residual": residual,
        });
        let code = write_json(out_json, &summary);
        if code != WS_OK {
            return code;
        }
        unsafe {
            *out_machine = Box::into_raw(Box::new(WsMachine(MachineImpl::Float(machine))));
        }
        WS_OK
    })
}
