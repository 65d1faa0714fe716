//! Compiles a C program against the generated header and static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "descent_tree.h"

int main(void) {
    DtTree *t = NULL;
    if (dt_tree_parse("a[a[a,a],d[d,a]]", &t) != DT_STATUS_OK) return 10;
    DtPoly *p = NULL;
    if (dt_tree_polynomial(NULL, t, DT_ALGO_AUTO, &p) != DT_STATUS_OK) return 11;
    int64_t roots[8];
    size_t len = 0;
    if (dt_poly_integer_roots(p, roots, 8, &len) != DT_STATUS_OK) return 12;
    for (size_t i = 0; i < len; i++) printf("%lld ", (long long)roots[i]);
    char *v = NULL;
    if (dt_tree_count(NULL, t, 10, DT_ALGO_EXPLICIT, &v) != DT_STATUS_OK) return 13;
    printf("%s\n", v);
    dt_string_free(v);
    DtTree *bad = NULL;
    if (dt_tree_parse("x", &bad) != DT_STATUS_PARSE || dt_last_error() == NULL) return 14;
    dt_poly_free(p);
    dt_tree_free(t);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|deps| deps.parent()).unwrap();
    let lib = profile_dir.join("libdescent_tree_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());

    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    // 1/3·1000 − 100 − 580/3 + 80 = 120
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "-8 5 6 120\n");
}
