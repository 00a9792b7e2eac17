use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use kexpr_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = kexpr_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    kexpr_string_free(s);
    out
}

#[test]
fn size_of_expressions() {
    let mut n = 0usize;
    unsafe {
        assert_eq!(kexpr_size_of(cstr("((cos((sin(C)*sqrt(cos(E))))))").as_ptr(), 0, &mut n), KexprStatus::Ok);
        assert_eq!(n, 7);
        let linked = cstr("((cos(sin(A))+E*(B/7.0)))+sin((0.0*A))");
        assert_eq!(kexpr_size_of(linked.as_ptr(), 3, &mut n), KexprStatus::Ok);
        assert_eq!(n, 12);
        assert_eq!(kexpr_size_of(cstr("a + * b").as_ptr(), 0, &mut n), KexprStatus::Data);
        assert!(last_error().contains("position 4"));
    }
}

#[test]
fn null_and_utf8_arguments() {
    let mut n = 0usize;
    unsafe {
        assert_eq!(kexpr_size_of(ptr::null(), 0, &mut n), KexprStatus::NullArgument);
        assert_eq!(kexpr_size_of(cstr("a").as_ptr(), 0, ptr::null_mut()), KexprStatus::NullArgument);
        let bad = [0xffu8 as c_char, 0];
        assert_eq!(kexpr_size_of(bad.as_ptr(), 0, &mut n), KexprStatus::InvalidUtf8);
        kexpr_string_free(ptr::null_mut());
        kexpr_run_free(ptr::null_mut());
    }
}

#[test]
fn rrse_identity() {
    let y = [1.0, 3.0];
    let p = [0.0, 0.0];
    let mut e = 0.0;
    unsafe {
        assert_eq!(kexpr_rrse(p.as_ptr(), y.as_ptr(), 2, &mut e), KexprStatus::Ok);
        assert!((e - 5f64.sqrt()).abs() < 1e-12);
        let flat = [2.0, 2.0];
        assert_eq!(kexpr_rrse(p.as_ptr(), flat.as_ptr(), 2, &mut e), KexprStatus::Data);
    }
}

#[test]
fn dataset_expression_round() {
    unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(kexpr_dataset_synth(cstr("dew").as_ptr(), 40, 2, &mut ds), KexprStatus::Ok);
        let mut rows = 0;
        assert_eq!(kexpr_dataset_rows(ds, &mut rows), KexprStatus::Ok);
        assert_eq!(rows, 40);

        let mut ex = ptr::null_mut();
        assert_eq!(kexpr_expr_parse(cstr("d0-(100-d1)/5").as_ptr(), &mut ex), KexprStatus::Ok);
        let (mut e, mut bad) = (1.0, 9usize);
        assert_eq!(kexpr_expr_rrse(ex, ds, &mut e, &mut bad), KexprStatus::Ok);
        assert!(e < 1e-12);
        assert_eq!(bad, 0);
        let mut n = 0;
        assert_eq!(kexpr_expr_size(ex, 0, &mut n), KexprStatus::Ok);
        assert_eq!(n, 7);
        kexpr_expr_free(ex);

        assert_eq!(kexpr_expr_parse(cstr("q*2").as_ptr(), &mut ex), KexprStatus::Ok);
        assert_eq!(kexpr_expr_rrse(ex, ds, &mut e, ptr::null_mut()), KexprStatus::Config);
        kexpr_expr_free(ex);

        assert_eq!(kexpr_dataset_synth(cstr("tp9").as_ptr(), 40, 2, &mut ds), KexprStatus::Config);
        kexpr_dataset_free(ds);
    }
}

#[test]
fn short_run_through_handles() {
    unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(kexpr_dataset_synth(cstr("tp1").as_ptr(), 30, 1, &mut ds), KexprStatus::Ok);
        let mut cfg = ptr::null_mut();
        let params = cstr("pop.subpop.0.size = 20\ngep.species.gene-headsize = 4\n");
        assert_eq!(kexpr_config_from_string(params.as_ptr(), &mut cfg), KexprStatus::Ok);
        assert_eq!(kexpr_config_set_generations(cfg, 5), KexprStatus::Ok);
        assert_eq!(kexpr_config_set_seed(cfg, 3), KexprStatus::Ok);
        assert_eq!(kexpr_config_set_algorithm(cfg, cstr("nsga2").as_ptr()), KexprStatus::Ok);
        assert_eq!(kexpr_config_set_algorithm(cfg, cstr("paes").as_ptr()), KexprStatus::Config);

        let mut run = ptr::null_mut();
        assert_eq!(kexpr_run(cfg, ds, &mut run), KexprStatus::Ok);
        let mut len = 0;
        assert_eq!(kexpr_run_front_len(run, &mut len), KexprStatus::Ok);
        assert!(len >= 1);
        let (mut e, mut s) = (0.0, 0);
        assert_eq!(kexpr_run_front_objectives(run, 0, &mut e, &mut s), KexprStatus::Ok);
        assert!(e.is_finite() && s >= 1);
        assert_eq!(kexpr_run_front_objectives(run, len, &mut e, &mut s), KexprStatus::OutOfRange);

        let mut txt = ptr::null_mut();
        assert_eq!(kexpr_run_front_infix(run, 0, &mut txt), KexprStatus::Ok);
        let infix = take(txt);
        let mut n = 0;
        assert_eq!(kexpr_size_of(cstr(&infix).as_ptr(), 3, &mut n), KexprStatus::Ok);
        assert_eq!(n, s);
        assert_eq!(kexpr_run_best_infix(run, &mut txt), KexprStatus::Ok);
        assert!(!take(txt).is_empty());

        kexpr_run_free(run);
        kexpr_config_free(cfg);
        kexpr_dataset_free(ds);
    }
}

#[test]
fn bad_config_text_reports_line() {
    unsafe {
        let mut cfg = ptr::null_mut();
        let params = cstr("generations = 5\nselect.tournament.sise = 2\n");
        assert_eq!(kexpr_config_from_string(params.as_ptr(), &mut cfg), KexprStatus::Config);
        let msg = last_error();
        assert!(msg.contains("line 2") && msg.contains("select.tournament.size"), "{msg}");
    }
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/kexpr.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["kexpr_size_of", "kexpr_rrse", "kexpr_run", "kexpr_last_error", "KEXPR_STATUS_OK"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).output() else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
