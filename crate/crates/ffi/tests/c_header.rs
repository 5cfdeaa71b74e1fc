use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "fastmix.h"

int main(void) {
    FmGraph *g = NULL;
    if (fm_graph_generate("star", 4, 0, &g) != FM_STATUS_OK) return 1;
    FmConductance c;
    size_t set[5];
    if (fm_conductance(g, FM_MEASURE_VERTEX, &c, set, 5) != FM_STATUS_OK) return 2;
    if (c.num != 1 || c.den != 2 || !c.exact) return 3;

    FmChain *p = NULL;
    if (fm_build_almost_mix(g, NULL, 0.5, FM_DEFAULT_ROOT, &p) != FM_STATUS_OK) return 4;
    size_t n = fm_chain_size(p);
    double m[25];
    if (fm_chain_matrix(p, m, 25, NULL) != FM_STATUS_OK || n != 5) return 5;
    fm_chain_free(p);

    FmSchedule *s = NULL;
    double tv = 1.0;
    if (fm_build_schedule(g, NULL, FM_DEFAULT_ROOT, &s) != FM_STATUS_OK) return 6;
    if (fm_schedule_worst_tv(s, &tv) != FM_STATUS_OK || tv > 1e-12) return 7;
    fm_schedule_free(s);

    FmGraph *bad = NULL;
    if (fm_graph_parse("0 1\n1 x\n", &bad) != FM_STATUS_PARSE) return 8;
    if (fm_last_error() == NULL) return 9;
    fm_graph_free(g);
    printf("ok %s\n", fm_version());
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libfastmix_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
