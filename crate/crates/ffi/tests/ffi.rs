use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use rainbow_ffi::*;

fn last_error() -> String {
    let p = rb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn graph(make: impl FnOnce(*mut *mut RbGraph) -> RbStatus) -> *mut RbGraph {
    let mut g = ptr::null_mut();
    assert_eq!(make(&mut g), RbStatus::Ok);
    assert!(!g.is_null());
    g
}

#[test]
fn constructors_and_colors() {
    unsafe {
        let g = graph(|o| rb_graph_mm(3, o));
        let (mut n, mut p, mut c) = (0usize, 0usize, 0u32);
        assert_eq!(rb_graph_n(g, &mut n), RbStatus::Ok);
        assert_eq!(rb_graph_palette_len(g, &mut p), RbStatus::Ok);
        assert_eq!((n, p), (8, 7));
        assert_eq!(rb_graph_color(g, 5, 3, &mut c), RbStatus::Ok);
        assert_eq!(c, 5 ^ 3);
        assert_eq!(rb_graph_color(g, 2, 2, &mut c), RbStatus::InvalidArgument);
        assert_eq!(rb_graph_color(g, 0, 8, &mut c), RbStatus::InvalidArgument);
        rb_graph_free(g);

        let mut out = ptr::null_mut();
        assert_eq!(rb_graph_round_robin(7, &mut out), RbStatus::InvalidArgument);
        assert!(out.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(rb_graph_random(1 << 20, 0, &mut out), RbStatus::SizeCap);
    }
}

#[test]
fn text_round_trip() {
    unsafe {
        let g = graph(|o| rb_graph_random(9, 4, o));
        let mut text = ptr::null_mut();
        assert_eq!(rb_graph_to_text(g, &mut text), RbStatus::Ok);
        let h = graph(|o| rb_graph_from_text(text, o));
        for u in 0..9 {
            for v in 0..9 {
                if u != v {
                    let (mut a, mut b) = (0, 0);
                    rb_graph_color(g, u, v, &mut a);
                    rb_graph_color(h, u, v, &mut b);
                    assert_eq!(a, b);
                }
            }
        }
        rb_string_free(text);
        rb_graph_free(g);
        rb_graph_free(h);

        let bad = CString::new("n 3\n0 1 1\n").unwrap();
        let mut out = ptr::null_mut();
        assert_ne!(rb_graph_from_text(bad.as_ptr(), &mut out), RbStatus::Ok);
        assert_eq!(rb_graph_from_text(ptr::null(), &mut out), RbStatus::NullPointer);
    }
}

#[test]
fn solve_reports() {
    unsafe {
        let g = graph(|o| rb_graph_random(40, 2, o));
        for (method, k) in [(RbMethod::Greedy, 1), (RbMethod::Maximalize, 2), (RbMethod::Ladder, 3), (RbMethod::Naive, 2)] {
            let mut r = ptr::null_mut();
            assert_eq!(rb_solve(g, method, k, 0, 0, &mut r), RbStatus::Ok, "{method:?}");
            let (mut len, mut written, mut num, mut den) = (0usize, 0usize, 0i64, 0i64);
            assert_eq!(rb_report_len(r, &mut len), RbStatus::Ok);
            assert_eq!(rb_report_vertices(r, ptr::null_mut(), 0, &mut written), RbStatus::Ok);
            assert_eq!(written, len);
            let mut buf = vec![usize::MAX; len];
            assert_eq!(rb_report_vertices(r, buf.as_mut_ptr(), len, &mut written), RbStatus::Ok);
            assert!(buf.iter().all(|&v| v < 40));
            assert_eq!(rb_report_bound(r, &mut num, &mut den), RbStatus::Ok);
            assert!(len as i64 * den >= num);
            let json: serde_json::Value =
                serde_json::from_str(CStr::from_ptr(rb_report_json(r)).to_str().unwrap()).unwrap();
            assert_eq!(json["length"], len);
            assert_eq!(json["vertices"].as_array().unwrap().len(), len);
            rb_report_free(r);
        }
        let mut r = ptr::null_mut();
        assert_eq!(rb_solve(g, RbMethod::Greedy, 1, 40, 0, &mut r), RbStatus::InvalidArgument);
        assert_eq!(rb_solve(g, RbMethod::Exact, 1, 0, 0, &mut r), RbStatus::SizeCap);
        assert_eq!(rb_solve(g, RbMethod::Exact, 1, 0, 50, &mut r), RbStatus::BudgetExhausted);
        assert!(!r.is_null());
        rb_report_free(r);
        rb_graph_free(g);
    }
}

#[test]
fn hamiltonian() {
    unsafe {
        let mut h = RbHamiltonian::Unknown;
        for m in [2, 3] {
            let g = graph(|o| rb_graph_mm(m, o));
            assert_eq!(rb_has_hamiltonian_rainbow_path(g, 0, &mut h), RbStatus::Ok);
            assert_eq!(h, RbHamiltonian::NotExists);
            rb_graph_free(g);
        }
        let g = graph(|o| rb_graph_random(9, 1, o));
        assert_eq!(rb_has_hamiltonian_rainbow_path(g, 0, &mut h), RbStatus::Ok);
        assert_eq!(h, RbHamiltonian::Exists);
        rb_graph_free(g);
        assert_eq!(rb_has_hamiltonian_rainbow_path(ptr::null(), 0, &mut h), RbStatus::NullPointer);
    }
}

#[test]
fn null_handles() {
    unsafe {
        let mut n = 0;
        assert_eq!(rb_graph_n(ptr::null(), &mut n), RbStatus::NullPointer);
        assert_eq!(rb_report_len(ptr::null(), &mut n), RbStatus::NullPointer);
        assert!(rb_report_json(ptr::null()).is_null());
        rb_graph_free(ptr::null_mut());
        rb_report_free(ptr::null_mut());
        rb_string_free(ptr::null_mut());
    }
}

#[test]
fn c_program_links_against_header() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("librainbow_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("rainbow_smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("run cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("n=30 "));
}
