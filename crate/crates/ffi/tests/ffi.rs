use std::ffi::{c_char, CStr, CString};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use sigcube_ffi::*;

const G0_VERTICES: &str = "id,Gender,City\n1,M,NY\n2,F,NY\n3,M,NY\n4,F,LA\n5,M,LA\n6,F,LA\n";
const G0_EDGES: &str = "1,2\n1,3\n2,3\n3,4\n4,5\n5,6\n";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = sc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { sc_string_free(p) };
    s
}

fn g0_files(dir: &Path) -> (CString, CString) {
    let (v, e) = (dir.join("vertices.csv"), dir.join("edges.csv"));
    fs::write(&v, G0_VERTICES).unwrap();
    fs::write(&e, G0_EDGES).unwrap();
    (c(v.to_str().unwrap()), c(e.to_str().unwrap()))
}

unsafe fn load_g0(dir: &Path) -> *mut ScGraph {
    let (v, e) = g0_files(dir);
    let mut g = ptr::null_mut();
    assert_eq!(sc_graph_load(v.as_ptr(), e.as_ptr(), &mut g), ScStatus::Ok);
    g
}

#[test]
fn g0_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    unsafe {
        let g = load_g0(tmp.path());
        assert_eq!((sc_graph_vertex_count(g), sc_graph_edge_count(g), sc_graph_dim_count(g)), (6, 6, 2));

        let mut t = ptr::null_mut();
        assert_eq!(sc_significance_compute(g, c("ss-mean").as_ptr(), 0, &mut t), ScStatus::Ok);
        let (mut ss, mut support, mut keep) = (0.0, 0usize, true);
        let st = sc_table_lookup(g, t, c("Gender").as_ptr(), c("F").as_ptr(), &mut ss, &mut support, &mut keep);
        assert_eq!(st, ScStatus::Ok);
        assert!((ss - 19.0 / 6.0).abs() <= 1e-12);
        assert_eq!(support, 3);
        assert!(!keep);

        let mut csv = ptr::null_mut();
        assert_eq!(sc_table_csv(g, t, &mut csv), ScStatus::Ok);
        assert!(take_string(csv).contains("Gender,M,3.30555555556,3,true\n"));
        sc_table_free(t);

        let mut t = ptr::null_mut();
        assert_eq!(sc_significance_compute(g, c("none").as_ptr(), 0, &mut t), ScStatus::Ok);
        let mut cube = ptr::null_mut();
        assert_eq!(sc_cube_build(g, t, c("steps").as_ptr(), 0, 1, &mut cube), ScStatus::Ok);
        assert_eq!(sc_cube_node_count(cube), 8);

        let mut text = ptr::null_mut();
        assert_eq!(sc_cube_query(cube, c("Gender").as_ptr(), &mut text), ScStatus::Ok);
        let gender = take_string(text);
        assert!(gender.contains("S\tM\t1\n") && gender.contains("E\tF\tM\t5\n"));

        let mut ab = ptr::null_mut();
        let mut ba = ptr::null_mut();
        assert_eq!(sc_cube_query(cube, c("City,Gender").as_ptr(), &mut ab), ScStatus::Ok);
        assert_eq!(sc_cube_query(cube, c("Gender,City").as_ptr(), &mut ba), ScStatus::Ok);
        assert_eq!(take_string(ab), take_string(ba));

        let dir = tmp.path().join("cube");
        assert_eq!(sc_cube_write(cube, c(dir.to_str().unwrap()).as_ptr(), true), ScStatus::Ok);
        assert_eq!(fs::read_to_string(dir.join("Gender.cuboid")).unwrap(), gender);

        sc_cube_free(cube);
        sc_table_free(t);
        sc_graph_free(g);
    }
}

#[test]
fn error_codes() {
    let tmp = tempfile::tempdir().unwrap();
    unsafe {
        let mut g = ptr::null_mut();
        let missing = c(tmp.path().join("absent.csv").to_str().unwrap());
        assert_eq!(sc_graph_load(missing.as_ptr(), missing.as_ptr(), &mut g), ScStatus::Load);
        assert!(last_error().contains("absent.csv"));
        assert!(g.is_null());

        assert_eq!(sc_graph_load(ptr::null(), missing.as_ptr(), &mut g), ScStatus::NullArgument);
        assert_eq!(sc_graph_generate(10, 100, 2, 2, 0, 0.0, &mut g), ScStatus::Parameter);

        let g = load_g0(tmp.path());
        let mut t = ptr::null_mut();
        assert_eq!(sc_significance_compute(g, c("support").as_ptr(), 0, &mut t), ScStatus::Parameter);
        assert_eq!(sc_significance_compute(g, c("none").as_ptr(), 0, &mut t), ScStatus::Ok);
        assert!(sc_last_error_message().is_null());

        let mut cube = ptr::null_mut();
        assert_eq!(sc_cube_build(g, t, c("sideways").as_ptr(), 0, 0, &mut cube), ScStatus::Parameter);
        assert_eq!(sc_cube_build(g, t, c("level").as_ptr(), 1, 0, &mut cube), ScStatus::Ok);

        let mut text = ptr::null_mut();
        assert_eq!(sc_cube_query(cube, c("Bogus").as_ptr(), &mut text), ScStatus::QueryMiss);
        assert!(last_error().contains("unknown dimension Bogus"));
        assert_eq!(sc_cube_query(cube, c("Gender,City").as_ptr(), &mut text), ScStatus::QueryMiss);
        assert!(text.is_null());
        assert_eq!(sc_cube_query(ptr::null(), c("Gender").as_ptr(), &mut text), ScStatus::NullArgument);

        let mut other = ptr::null_mut();
        assert_eq!(sc_graph_generate(20, 30, 2, 2, 1, 0.0, &mut other), ScStatus::Ok);
        let mut wrong = ptr::null_mut();
        assert_eq!(sc_cube_build(other, t, c("steps").as_ptr(), 0, 0, &mut wrong), ScStatus::Verification);

        sc_cube_free(cube);
        sc_table_free(t);
        sc_graph_free(g);
        sc_graph_free(other);
        sc_graph_free(ptr::null_mut());
        sc_string_free(ptr::null_mut());
    }
}

#[test]
fn strategies_agree_through_handles() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(sc_graph_generate(300, 900, 4, 3, 11, 0.0, &mut g), ScStatus::Ok);
        let mut t = ptr::null_mut();
        assert_eq!(sc_significance_compute(g, c("ss-mean").as_ptr(), 0, &mut t), ScStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sc_cube_build(g, t, c("level").as_ptr(), 0, 2, &mut a), ScStatus::Ok);
        assert_eq!(sc_cube_build(g, t, c("steps").as_ptr(), 0, 1, &mut b), ScStatus::Ok);
        assert_eq!(sc_cube_node_count(a), sc_cube_node_count(b));
        assert!(sc_cube_combines(b) < sc_cube_combines(a));
        let dims = c("D1,D2,D3,D4");
        let (mut qa, mut qb) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sc_cube_query(a, dims.as_ptr(), &mut qa), ScStatus::Ok);
        assert_eq!(sc_cube_query(b, dims.as_ptr(), &mut qb), ScStatus::Ok);
        assert_eq!(take_string(qa), take_string(qb));
        sc_cube_free(a);
        sc_cube_free(b);
        sc_table_free(t);
        sc_graph_free(g);
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sigcube.h")
}

#[test]
fn header_declares_every_export() {
    let h = fs::read_to_string(header()).unwrap();
    let src = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for f in exports {
        assert!(h.contains(&format!(" {f}(")) || h.contains(&format!("*{f}(")), "{f} missing from header");
    }
    assert!(h.contains("SC_STATUS_QUERY_MISS = 3"));
    assert!(h.contains("typedef struct ScCube ScCube;"));
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "sigcube.h"

int main(int argc, char **argv) {
    ScGraph *g = NULL;
    ScTable *t = NULL;
    ScCube *c = NULL;
    char *text = NULL;
    if (sc_graph_load(argv[1], argv[2], &g) != SC_STATUS_OK) return 10;
    if (sc_significance_compute(g, "none", 0, &t) != SC_STATUS_OK) return 11;
    if (sc_cube_build(g, t, "steps", 0, 1, &c) != SC_STATUS_OK) return 12;
    if (sc_cube_query(c, "Gender", &text) != SC_STATUS_OK) return 13;
    fputs(text, stdout);
    sc_string_free(text);
    if (sc_cube_query(c, "Bogus", &text) != SC_STATUS_QUERY_MISS) return 14;
    if (strstr(sc_last_error_message(), "Bogus") == NULL) return 15;
    sc_cube_free(c);
    sc_table_free(t);
    sc_graph_free(g);
    return 0;
}
"#;

/// Compiles a C program against the header and the shared library.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(cc.status.success());
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let libdir = deps.parent().unwrap().to_path_buf();
    let lib = libdir.join("libsigcube_ffi.so");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("smoke.c");
    let exe = tmp.path().join("smoke");
    fs::write(&src, C_SMOKE).unwrap();
    let build = Command::new("cc")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg("-o")
        .arg(&exe)
        .arg("-L")
        .arg(&libdir)
        .arg("-lsigcube_ffi")
        .arg(format!("-Wl,-rpath,{}", libdir.display()))
        .output()
        .unwrap();
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));
    let (v, e) = g0_files(tmp.path());
    let run = Command::new(&exe)
        .arg(v.to_str().unwrap())
        .arg(e.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let out = String::from_utf8(run.stdout).unwrap();
    assert!(out.contains("E\tF\tM\t5\n"), "{out}");
}
