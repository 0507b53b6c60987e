//! Exercises the C ABI through the exported functions themselves:
//! status codes, ownership rules, error reporting, and JSON shapes.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use wordsep_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Take ownership of a returned string and free it through the ABI.
unsafe fn take_json(ptr: *mut c_char) -> serde_json::Value {
    assert!(!ptr.is_null(), "expected a JSON result");
    let text = CStr::from_ptr(ptr).to_str().unwrap().to_owned();
    ws_string_free(ptr);
    serde_json::from_str(&text).expect("well-formed JSON")
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ws_last_error()).to_str().unwrap().to_owned()
}

fn build(spec: &str) -> *mut WsMachine {
    let spec = cstr(spec);
    let mut machine: *mut WsMachine = ptr::null_mut();
    let code = unsafe { ws_machine_build(spec.as_ptr(), &mut machine) };
    assert_eq!(code, WS_OK, "build failed: {}", unsafe { last_error() });
    assert!(!machine.is_null());
    machine
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(ws_version()) }.to_str().unwrap();
    assert!(!v.is_empty());
    assert!(v.chars().next().unwrap().is_ascii_digit());
}

#[test]
fn exact_pair_machine_round_trip() {
    let machine = build(r#"{"model":"afa-exact","x":"ab","y":"ba"}"#);

    let mut out: *mut c_char = ptr::null_mut();
    let code = unsafe { ws_machine_describe(machine, &mut out) };
    assert_eq!(code, WS_OK);
    let description = unsafe { take_json(out) };
    assert_eq!(description["schema"], 1);
    assert_eq!(description["model"], "afa");
    assert_eq!(description["states"], 2);

    let word = cstr("ab");
    let mut out: *mut c_char = ptr::null_mut();
    let code = unsafe { ws_machine_accept(machine, word.as_ptr(), &mut out) };
    assert_eq!(code, WS_OK);
    let run = unsafe { take_json(out) };
    assert_eq!(run["value"], "1");
    assert_eq!(run["approx"], 1.0);

    let request = cstr(r#"{"accept":["ab"],"reject":["ba"],"mode":"exact"}"#);
    let mut out: *mut c_char = ptr::null_mut();
    let code = unsafe { ws_machine_evaluate(machine, request.as_ptr(), &mut out) };
    assert_eq!(code, WS_OK);
    let report = unsafe { take_json(out) };
    assert_eq!(report["verified"], true);
    assert_eq!(report["exact"], true);

    unsafe { ws_machine_free(machine) };
}

#[test]
fn violated_claim_reports_but_flags() {
    let machine = build(r#"{"model":"afa-exact","x":"ab","y":"ba"}"#);
    // Claim the wrong orientation: the report must still be written.
    let request = cstr(r#"{"accept":["ba"],"reject":["ab"],"mode":"exact"}"#);
    let mut out: *mut c_char = ptr::null_mut();
    let code = unsafe { ws_machine_evaluate(machine, request.as_ptr(), &mut out) };
    assert_eq!(code, WS_ERR_VIOLATED);
    let report = unsafe { take_json(out) };
    assert_eq!(report["verified"], false);
    unsafe { ws_machine_free(machine) };
}

#[test]
fn bounded_mode_parses_rational_bound() {
    let machine = build(r#"{"model":"afa-3state","x":"a","k":100}"#);
    let request = cstr(r#"{"accept":["a"],"reject":["b","ab"],"mode":"bounded","bound":"2/201"}"#);
    let mut out: *mut c_char = ptr::null_mut();
    let code = unsafe { ws_machine_evaluate(machine, request.as_ptr(), &mut out) };
    assert_eq!(code, WS_OK, "{}", unsafe { last_error() });
    let report = unsafe { take_json(out) };
    assert_eq!(report["verified"], true);
    unsafe { ws_machine_free(machine) };
}

#[test]
fn nondet_tensor_machines_build_and_verify() {
    for (spec, states) in [
        (r#"{"model":"nondet","set":["a","b"]}"#, 4u64),
        (r#"{"model":"nondet-exact","set":["a","b"]}"#, 9u64),
    ] {
        let machine = build(spec);
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { ws_machine_describe(machine, &mut out) }, WS_OK);
        let description = unsafe { take_json(out) };
        assert_eq!(description["states"], states);

        let request = cstr(r#"{"accept":["ab","ba"],"reject":["a","b"],"mode":"nondet"}"#);
        let mut out: *mut c_char = ptr::null_mut();
        let code = unsafe { ws_machine_evaluate(machine, request.as_ptr(), &mut out) };
        assert_eq!(code, WS_OK, "{}", unsafe { last_error() });
        let report = unsafe { take_json(out) };
        assert_eq!(report["verified"], true);
        unsafe { ws_machine_free(machine) };
    }
}

#[test]
fn classify_hard_and_easy() {
    let (x, y) = (cstr("acb"), cstr("bca"));
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { ws_classify(x.as_ptr(), y.as_ptr(), &mut out) }, WS_OK);
    let j = unsafe { take_json(out) };
    assert_eq!(j["class"], "hard");
    assert_eq!(j["reduction"]["x"], "ab");
    assert_eq!(j["reduction"]["y"], "ba");

    let (x, y) = (cstr("a"), cstr("aa"));
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { ws_classify(x.as_ptr(), y.as_ptr(), &mut out) }, WS_OK);
    let j = unsafe { take_json(out) };
    assert_eq!(j["class"], "easy");
    assert_eq!(j["witness"], "a");
}

#[test]
fn classify_identical_words_is_domain_error() {
    let (x, y) = (cstr("ab"), cstr("ab"));
    let mut out: *mut c_char = ptr::null_mut();
    let code = unsafe { ws_classify(x.as_ptr(), y.as_ptr(), &mut out) };
    assert_eq!(code, WS_ERR_DOMAIN);
    assert!(unsafe { last_error() }.contains("identical"));
}

#[test]
fn dfa_min_finds_two_states() {
    let (x, y) = (cstr("ab"), cstr("ba"));
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { ws_dfa_min(x.as_ptr(), y.as_ptr(), 4, &mut out) }, WS_OK);
    let j = unsafe { take_json(out) };
    assert_eq!(j["size"], 2);
    assert!(j["table"].is_array());
}

#[test]
fn wordmap_estimate_and_certificate() {
    let (x, y) = (cstr("ab"), cstr("ba"));
    let mut out: *mut c_char = ptr::null_mut();
    let code =
        unsafe { ws_wordmap_estimate(x.as_ptr(), y.as_ptr(), 16, 40, 0, &mut out) };
    assert_eq!(code, WS_OK);
    let estimate = unsafe { take_json(out) };
    assert_eq!(estimate["omega"], "a b A B");
    assert!(estimate["alpha_hat"].as_f64().unwrap() > std::f64::consts::FRAC_PI_2 - 1e-3);

    let mut machine: *mut WsMachine = ptr::null_mut();
    let mut out: *mut c_char = ptr::null_mut();
    let code = unsafe {
        ws_certificate_build(x.as_ptr(), y.as_ptr(), 16, 40, 0, &mut machine, &mut out)
    };
    assert_eq!(code, WS_OK, "{}", unsafe { last_error() });
    let summary = unsafe { take_json(out) };
    assert!(summary["residual"].as_f64().unwrap() <= 1e-6);

    // The certificate machine itself separates the pair with one-sided
    // error below the certificate tolerance.
    let word = cstr("ab");
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { ws_machine_accept(machine, word.as_ptr(), &mut out) },
        WS_OK
    );
    let hit = unsafe { take_json(out) };
    assert!(hit["approx"].as_f64().unwrap() >= 1.0 - 1e-6);
    let word = cstr("ba");
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { ws_machine_accept(machine, word.as_ptr(), &mut out) },
        WS_OK
    );
    let miss = unsafe { take_json(out) };
    assert!(miss["approx"].as_f64().unwrap() <= 1e-6);
    unsafe { ws_machine_free(machine) };
}

#[test]
fn null_and_malformed_inputs_are_argument_errors() {
    let mut machine: *mut WsMachine = ptr::null_mut();
    assert_eq!(
        unsafe { ws_machine_build(ptr::null(), &mut machine) },
        WS_ERR_ARGUMENT
    );
    let spec = cstr("not json");
    assert_eq!(
        unsafe { ws_machine_build(spec.as_ptr(), &mut machine) },
        WS_ERR_ARGUMENT
    );
    let spec = cstr(r#"{"model":"afa-exact","x":"ab","y":"ba"}"#);
    assert_eq!(
        unsafe { ws_machine_build(spec.as_ptr(), ptr::null_mut()) },
        WS_ERR_ARGUMENT
    );
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { ws_machine_describe(ptr::null(), &mut out) },
        WS_ERR_ARGUMENT
    );
}

#[test]
fn unknown_model_and_bad_word_are_domain_errors() {
    let spec = cstr(r#"{"model":"quantum-doohickey"}"#);
    let mut machine: *mut WsMachine = ptr::null_mut();
    assert_eq!(
        unsafe { ws_machine_build(spec.as_ptr(), &mut machine) },
        WS_ERR_DOMAIN
    );
    assert!(unsafe { last_error() }.contains("quantum-doohickey"));

    // A word outside the machine's alphabet is a domain error, not a crash.
    let machine = build(r#"{"model":"afa-exact","x":"ab","y":"ba"}"#);
    let word = cstr("abc");
    let mut out: *mut c_char = ptr::null_mut();
    let code = unsafe { ws_machine_accept(machine, word.as_ptr(), &mut out) };
    assert_eq!(code, WS_ERR_DOMAIN);
    unsafe { ws_machine_free(machine) };
}

#[test]
fn free_functions_tolerate_null() {
    unsafe {
        ws_string_free(ptr::null_mut());
        ws_machine_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/wordsep.h");
    for symbol in [
        "ws_version",
        "ws_last_error",
        "ws_string_free",
        "ws_machine_build",
        "ws_machine_describe",
        "ws_machine_accept",
        "ws_machine_evaluate",
        "ws_machine_free",
        "ws_classify",
        "ws_dfa_min",
        "ws_wordmap_estimate",
        "ws_certificate_build",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
    for status in ["WS_OK", "WS_ERR_ARGUMENT", "WS_ERR_DOMAIN", "WS_ERR_VIOLATED", "WS_ERR_PANIC"]
    {
        assert!(header.contains(status), "header is missing {status}");
    }
}
