use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use vershik_ga_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(vg_last_error_message()) }.to_string_lossy().into_owned()
}

fn reduce(f: unsafe extern "C" fn(usize, *const i32, usize, *mut i32, usize, *mut usize) -> VgStatus, rank: usize, w: &[i32]) -> Vec<i32> {
    let mut buf = vec![0; w.len()];
    let mut len = 0;
    let st = unsafe { f(rank, w.as_ptr(), w.len(), buf.as_mut_ptr(), buf.len(), &mut len) };
    assert_eq!(st, VgStatus::Ok, "{}", last_error());
    buf.truncate(len);
    buf
}

const WORKED: &str = "n: 10\nY: 1 2 3 4 5 6 7 8 9 10\nZ: 1 2 3 4 5 6 7 8 9 10\n\
a: 2 -3 -4 5 7 6 10 9\nb: 2 -3 -4 5 7 6 10 9\n";

fn parse(text: &str) -> *mut VgInstance {
    let c = CString::new(text).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { vg_instance_parse(c.as_ptr(), &mut inst) }, VgStatus::Ok, "{}", last_error());
    inst
}

#[test]
fn normal_forms_match_the_library() {
    assert_eq!(reduce(vg_normal_form, 8, &[6, 8, -1, 2, -8, -2, 6, 4, 5]), vec![-1, 4, 6, 6, 5]);
    assert_eq!(reduce(vg_pseudo_normal_form, 8, &[1, -1]), Vec::<i32>::new());
    assert_eq!(reduce(vg_normal_form, 3, &[]), Vec::<i32>::new());
}

#[test]
fn buffer_too_small_reports_needed_length() {
    let w = [1, 3, 5];
    let mut buf = [0; 2];
    let mut len = 0;
    let st = unsafe { vg_normal_form(6, w.as_ptr(), 3, buf.as_mut_ptr(), 2, &mut len) };
    assert_eq!(st, VgStatus::BufferTooSmall);
    assert_eq!(len, 3);
    assert!(!last_error().is_empty());
}

#[test]
fn bad_inputs_are_rejected() {
    let mut len = 0;
    let w = [0, 1];
    let st = unsafe { vg_normal_form(4, w.as_ptr(), 2, ptr::null_mut(), 0, &mut len) };
    assert_eq!(st, VgStatus::InvalidInput);
    let w = [9];
    assert_eq!(unsafe { vg_normal_form(4, w.as_ptr(), 1, ptr::null_mut(), 0, &mut len) }, VgStatus::InvalidInput);
    assert_eq!(unsafe { vg_normal_form(4, ptr::null(), 3, ptr::null_mut(), 0, &mut len) }, VgStatus::NullPointer);
    let ok = [2];
    assert_eq!(unsafe { vg_normal_form(4, ok.as_ptr(), 1, ptr::null_mut(), 0, ptr::null_mut()) }, VgStatus::NullPointer);

    let text = CString::new("n: 10\nY: 1\n").unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { vg_instance_parse(text.as_ptr(), &mut inst) }, VgStatus::InvalidInput);
    assert!(inst.is_null());
    assert!(last_error().contains("missing"), "{}", last_error());
    assert_eq!(unsafe { vg_instance_parse(ptr::null(), &mut inst) }, VgStatus::NullPointer);
    unsafe { vg_instance_free(ptr::null_mut()) };
    unsafe { vg_result_free(ptr::null_mut()) };
    unsafe { vg_string_free(ptr::null_mut()) };
}

#[test]
fn cost_and_solution_check() {
    let inst = parse(WORKED);
    let (x, y) = ([-2, 3], [-9, -10]);
    let mut c = usize::MAX;
    assert_eq!(unsafe { vg_cost(inst, ptr::null(), 0, ptr::null(), 0, &mut c) }, VgStatus::Ok);
    assert_eq!(c, 0);
    assert_eq!(unsafe { vg_cost(inst, x.as_ptr(), 2, y.as_ptr(), 2, &mut c) }, VgStatus::Ok);
    assert!(c > 0);
    let mut ok = true;
    assert_eq!(unsafe { vg_is_solution(inst, x.as_ptr(), 2, y.as_ptr(), 2, &mut ok) }, VgStatus::Ok);
    assert!(!ok);
    unsafe { vg_instance_free(inst) };
}

#[test]
fn generate_roundtrip_and_solve() {
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { vg_instance_generate(10, 30, 3, 3, 11, &mut inst) }, VgStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { vg_instance_to_string(inst, &mut s) }, VgStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { vg_string_free(s) };
    assert!(text.starts_with("n: 10\nY: 1 2 3 4\nZ: 7 8 9 10\n"));
    let again = parse(&text);

    let mut opts = vg_solve_options_default();
    opts.sigma = 2000;
    opts.seed = 4;
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { vg_solve(again, &opts, &mut r) }, VgStatus::Ok);
    assert!(unsafe { vg_result_solved(r) });
    assert_eq!(unsafe { vg_result_final_cost(r) }, 0);
    assert!(unsafe { vg_result_generations(r) } < 2000);

    let (mut x, mut y) = (vec![0; 64], vec![0; 64]);
    let (mut xl, mut yl) = (0, 0);
    assert_eq!(unsafe { vg_result_x(r, x.as_mut_ptr(), 64, &mut xl) }, VgStatus::Ok);
    assert_eq!(unsafe { vg_result_y(r, y.as_mut_ptr(), 64, &mut yl) }, VgStatus::Ok);
    let mut ok = false;
    assert_eq!(unsafe { vg_is_solution(inst, x.as_ptr(), xl, y.as_ptr(), yl, &mut ok) }, VgStatus::Ok);
    assert!(ok);
    unsafe {
        vg_result_free(r);
        vg_instance_free(again);
        vg_instance_free(inst);
    }
}

#[test]
fn timeout_has_no_solution_words() {
    let inst = parse("n: 10\nY: 1 2 3 4\nZ: 7 8 9 10\na: 5 6 5\nb: 1 2 5 6 5 8 7\n");
    let mut opts = vg_solve_options_default();
    opts.sigma = 1;
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { vg_solve(inst, &opts, &mut r) }, VgStatus::Ok);
    assert!(!unsafe { vg_result_solved(r) });
    let mut len = 0;
    assert_eq!(unsafe { vg_result_x(r, ptr::null_mut(), 0, &mut len) }, VgStatus::InvalidInput);
    opts.sigma = 0;
    let mut r2 = ptr::null_mut();
    assert_eq!(unsafe { vg_solve(inst, &opts, &mut r2) }, VgStatus::InvalidInput);
    opts.sigma = 10;
    opts.counts = [1, 1, 1, 1, 0, 0];
    assert_eq!(unsafe { vg_solve(inst, &opts, &mut r2) }, VgStatus::InvalidInput);
    assert!(r2.is_null());
    unsafe {
        vg_result_free(r);
        vg_instance_free(inst);
    }
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/vershik_ga.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "vg_normal_form", "vg_pseudo_normal_form", "vg_instance_parse", "vg_instance_generate",
        "vg_instance_free", "vg_instance_to_string", "vg_string_free", "vg_cost", "vg_is_solution",
        "vg_solve_options_default", "vg_solve", "vg_result_free", "vg_result_solved",
        "vg_result_generations", "vg_result_final_cost", "vg_result_elapsed_ms", "vg_result_x",
        "vg_result_y", "vg_last_error_message", "VG_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(cc.status.success());
    let src = std::env::temp_dir().join(format!("vg_header_check_{}.c", std::process::id()));
    std::fs::write(&src, "#include \"vershik_ga.h\"\nint main(void) { VgSolveOptions o = vg_solve_options_default(); return (int)o.sigma == 0; }\n").unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .output()
        .unwrap();
    let _ = std::fs::remove_file(&src);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
