use bfunc_cli::fixtures::CATALOG;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bfunc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfunc")).args(args).output().unwrap()
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.job"))
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn every_fixture_honors_its_exit_code() {
    for f in CATALOG {
        let out = bfunc(&["--job", fixture_path(f.name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(f.expected_exit), "{}: {}", f.name, String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        assert_eq!(r["exit_code"], f.expected_exit);
        assert_eq!(r["tool"]["name"], "bfunc");
    }
}

#[test]
fn certificates_are_byte_identical_across_runs() {
    for f in CATALOG {
        let a = report(&bfunc(&["--fixture", f.name]));
        let b = report(&bfunc(&["--fixture", f.name]));
        assert_eq!(
            serde_json::to_string(&a["certificate"]).unwrap(),
            serde_json::to_string(&b["certificate"]).unwrap(),
            "{}",
            f.name
        );
        assert_eq!(a["result"], b["result"]);
    }
}

#[test]
fn xy_xz_fixture_reports_b() {
    let r = report(&bfunc(&["verify-feq", "--fixture", "xy_xz_feq"]));
    assert_eq!(r["result"]["b"], "s^2 + 3*s + 2");
    assert_eq!(r["result"]["formal"]["verdict"], "verified");
    assert_eq!(r["result"]["specialized"]["verdict"], "verified");
}

#[test]
fn corrupted_b_gives_smallest_witness() {
    let out = bfunc(&["--fixture", "xy_xz_corrupted_b"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["result"]["specialized"]["t"], serde_json::json!([0, 0]));
    assert_eq!(r["result"]["formal"]["verdict"], "refuted");
}

#[test]
fn corrupted_copy_on_disk_is_refuted() {
    let dir = tempfile::tempdir().unwrap();
    let src = std::fs::read_to_string(fixture_path("xy_xz_feq")).unwrap();
    let path = dir.path().join("corrupt.job");
    std::fs::write(&path, src.replace("(s+1)*(s+2)", "(s+1)*(s+2)*(s+5)")).unwrap();
    let out = bfunc(&["--job", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn searches_recover_b() {
    let r = report(&bfunc(&["--fixture", "x2_search"]));
    assert_eq!(r["result"]["b"], "s^2 + 3/2*s + 1/2");
    assert_eq!(r["result"]["minimal_within_bounds"], true);
    let r = report(&bfunc(&["--fixture", "xy_xz_search"]));
    assert_eq!(r["result"]["b"], "s^2 + 3*s + 2");
}

#[test]
fn not_found_states_it_is_not_a_nonexistence_proof() {
    let out = bfunc(&["--fixture", "x2_search_too_small"]);
    assert_eq!(out.status.code(), Some(3));
    let note = report(&out)["result"]["note"].as_str().unwrap().to_string();
    assert!(note.contains("does not show that none exists"));
}

#[test]
fn cap_override_is_reported() {
    let out = bfunc(&["--fixture", "xy_xz_search", "--max-unknowns", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out)["result"]["skipped_by_cap"]["cap"], 3);
}

#[test]
fn veronese_mismatch_carries_note() {
    let r = report(&bfunc(&["--fixture", "veronese_compare"]));
    assert_eq!(r["result"]["matches"], false);
    assert_eq!(r["result"]["intrinsic"]["generators"], serde_json::json!([[0, 0]]));
    assert!(r["result"]["note"].is_string());
}

#[test]
fn input_errors_exit_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.job");
    std::fs::write(&path, "version = 1\ntask = \"lct\"\n[ring]\nvars = [\"x\"]\n[lct]\nideal = [[1]]\nbogus = 1\n").unwrap();
    let out = bfunc(&["--job", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 7, column 1"), "{err}");

    let out = bfunc(&["--job", dir.path().join("missing.job").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(bfunc(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(bfunc(&["lct", "--fixture", "xy_xz_feq"]).status.code(), Some(1));
}

#[test]
fn table_format_and_catalog() {
    let out = bfunc(&["--fixture", "xy_xz_lct", "--format", "table", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("result.lct") && l.trim_end().ends_with('1')), "{text}");

    let out = bfunc(&["list-fixtures"]);
    let cat: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = cat.as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"cusp_feq"));
    assert!(names.contains(&"veronese_compare"));
}

#[test]
fn reports_match_golden_files() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden");
    for f in CATALOG {
        let golden: Value = serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{}.json", f.name))).unwrap()).unwrap();
        let r = report(&bfunc(&["--fixture", f.name]));
        assert_eq!(r["result"], golden["result"], "{}", f.name);
        assert_eq!(r["certificate"], golden["certificate"], "{}", f.name);
    }
}
