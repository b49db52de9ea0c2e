//! Compiles and runs a small C program against the generated header and the
//! static library, proving the ABI from the consumer side. Skipped when no C
//! compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const C_MAIN: &str = r#"
#include <stdio.h>
#include "frob.h"

int main(void) {
    struct FrobParams *params = NULL;
    if (frob_params_new(3, 5, 1, &params) != FROB_STATUS_OK) return 1;
    uint64_t g = 0;
    if (frob_params_g_ell(params, &g) != FROB_STATUS_OK || g != 22) return 2;

    uint64_t count = 0;
    if (frob_rep_count(3, 5, 45, &count) != FROB_STATUS_OK || count != 4) return 3;

    uint64_t *gaps = NULL;
    size_t len = 0;
    if (frob_gaps(params, &gaps, &len) != FROB_STATUS_OK || len != 19) return 4;
    frob_u64_buffer_free(gaps, len);
    frob_params_free(params);

    struct FrobCountReport report;
    if (frob_count_report(3, 5, 0, &report) != FROB_STATUS_OK) return 5;
    if (report.pi_ell != 2 || report.pi_of_g != 4) return 6;

    if (frob_count_report(4, 6, 0, &report) != FROB_STATUS_NOT_COPRIME) return 7;
    printf("ok\n");
    return 0;
}
"#;

fn cc_available() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

#[test]
fn c_program_links_and_runs() {
    if !cc_available() {
        eprintln!("skipping: no C compiler on PATH");
        return;
    }

    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = crate_dir.join("include");
    // Under `cargo test` the staticlib lives in the deps dir next to this
    // test binary; under `cargo build` it is uplifted one level.
    let deps_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let staticlib = [
        deps_dir.join("libfrob_ffi.a"),
        deps_dir.parent().unwrap().join("libfrob_ffi.a"),
    ]
    .into_iter()
    .find(|p| p.exists())
    .unwrap_or_else(|| panic!("libfrob_ffi.a not found near {}", deps_dir.display()));

    let work = tempfile::tempdir().unwrap();
    let c_path = work.path().join("smoke.c");
    let bin_path = work.path().join("smoke");
    std::fs::write(&c_path, C_MAIN).unwrap();

    let compile = Command::new("cc")
        .arg(&c_path)
        .arg(&staticlib)
        .arg(format!("-I{}", include_dir.display()))
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin_path)
        .output()
        .unwrap();
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin_path).output().unwrap();
    assert!(run.status.success(), "exit: {:?}", run.status);
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
