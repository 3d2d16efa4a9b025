use std::ffi::{c_char, CStr, CString};
use std::ptr;

use lclkit_ffi::*;

const FULL: &str = r#"{"states":["q"],"initial":"q","delta":{"q":{"0":"q","1":"q"}}}"#;
const ZERO: &str = r#"{"states":["q"],"initial":"q","delta":{"q":{"0":"q"}}}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    lclkit_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let e = lclkit_last_error();
    assert!(!e.is_null());
    CStr::from_ptr(e).to_string_lossy().into_owned()
}

unsafe fn automaton(json: &str) -> *mut LclkitAutomaton {
    let mut a = ptr::null_mut();
    assert_eq!(
        lclkit_automaton_from_json(c(json).as_ptr(), &mut a),
        LclkitStatus::Ok
    );
    a
}

#[test]
fn decide_f_through_the_abi() {
    unsafe {
        for (json, want) in [
            (FULL, r#"{"kind":"not_in_f","stem":"","cycle":"1"}"#),
            (ZERO, r#"{"kind":"in_f"}"#),
        ] {
            let a = automaton(json);
            let mut out = ptr::null_mut();
            assert_eq!(lclkit_automaton_decide_f(a, &mut out), LclkitStatus::Ok);
            assert_eq!(take(out), want);
            assert!(lclkit_last_error().is_null());
            lclkit_automaton_free(a);
        }
    }
}

#[test]
fn encode_decode_round_trip() {
    unsafe {
        let spec = c(&format!(r#"{{"a0":{FULL},"a1":{ZERO},"depth":3}}"#));
        let mut g = ptr::null_mut();
        assert_eq!(
            lclkit_component_build(spec.as_ptr(), &mut g),
            LclkitStatus::Ok
        );
        assert_eq!(lclkit_graph_vertex_count(g), 1 + 15 + 4);
        let mut gs = ptr::null_mut();
        assert_eq!(lclkit_gadget_encode(g, &mut gs), LclkitStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(lclkit_gadget_decode(gs, &mut back), LclkitStatus::Ok);
        let (mut j1, mut j2) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(lclkit_graph_to_json(g, &mut j1), LclkitStatus::Ok);
        assert_eq!(lclkit_graph_to_json(back, &mut j2), LclkitStatus::Ok);
        assert_eq!(take(j1), take(j2));

        // Decoding the original (not an encoding) fails cleanly.
        let mut bad = ptr::null_mut();
        assert_eq!(lclkit_gadget_decode(g, &mut bad), LclkitStatus::NotInImage);
        assert!(bad.is_null());
        assert!(!last_error().is_empty());

        for h in [g, gs, back] {
            lclkit_graph_free(h);
        }
    }
}

#[test]
fn solve_and_verify() {
    unsafe {
        let a = automaton(ZERO);
        let mut g = ptr::null_mut();
        assert_eq!(lclkit_automaton_truncate(a, 3, &mut g), LclkitStatus::Ok);
        let sigma = c("sigma");
        let mut out = ptr::null_mut();
        assert_eq!(
            lclkit_solve(g, sigma.as_ptr(), 4, LclkitMode::Lenient, 3, &mut out),
            LclkitStatus::Ok
        );
        assert_eq!(take(out), r#"{"result":"unsat"}"#);
        assert_eq!(
            lclkit_solve(g, sigma.as_ptr(), 5, LclkitMode::Lenient, -1, &mut out),
            LclkitStatus::Ok
        );
        let sat = take(out);
        let prefix = r#"{"result":"sat","colors":"#;
        assert!(sat.starts_with(prefix), "{sat}");
        let coloring = c(&format!(
            r#"{{"colors":{}}}"#,
            &sat[prefix.len()..sat.len() - 1]
        ));
        assert_eq!(
            lclkit_verify(
                g,
                coloring.as_ptr(),
                sigma.as_ptr(),
                0,
                LclkitMode::Lenient,
                3,
                &mut out
            ),
            LclkitStatus::Ok
        );
        assert_eq!(take(out), r#"{"ok":true,"failures":[]}"#);
        lclkit_graph_free(g);
        lclkit_automaton_free(a);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            lclkit_graph_from_json(c("{oops").as_ptr(), &mut g),
            LclkitStatus::MalformedInput
        );
        assert!(g.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(
            lclkit_graph_from_json(ptr::null(), &mut g),
            LclkitStatus::NullPointer
        );

        let mut a = ptr::null_mut();
        let dead = c(r#"{"states":["q","r"],"initial":"q","delta":{"q":{"0":"r"},"r":{}}}"#);
        assert_eq!(
            lclkit_automaton_from_json(dead.as_ptr(), &mut a),
            LclkitStatus::MalformedInput
        );
        assert!(last_error().contains('r'));

        let z = automaton(ZERO);
        let mut t = ptr::null_mut();
        assert_eq!(lclkit_automaton_truncate(z, 2, &mut t), LclkitStatus::Ok);
        let mut out = ptr::null_mut();
        let tau = c("tau");
        assert_eq!(
            lclkit_solve(t, tau.as_ptr(), 2, LclkitMode::Strict, -1, &mut out),
            LclkitStatus::InvalidArgument
        );
        let proper = c("proper-k");
        assert_eq!(
            lclkit_solve(t, proper.as_ptr(), 0, LclkitMode::Strict, -1, &mut out),
            LclkitStatus::InvalidArgument
        );
        assert_eq!(
            lclkit_solve(t, proper.as_ptr(), 2, LclkitMode::Strict, -1, &mut out),
            LclkitStatus::Ok
        );
        assert_eq!(take(out), r#"{"result":"sat","colors":{"t0/0":1}}"#);
        lclkit_graph_free(t);
        lclkit_automaton_free(z);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(lclkit_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
