use std::fs;
use std::path::Path;

use assert_cmd::Command;
use serde_json::Value;
use tempfile::TempDir;

fn tverberg() -> Command {
    let mut cmd = Command::cargo_bin("tverberg").unwrap();
    cmd.env_remove("TVERBERG_OUT");
    cmd
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn generate(dir: &Path, s: usize) -> std::path::PathBuf {
    tverberg().args(["generate", "--s", &s.to_string(), "--out"]).arg(dir).assert().success();
    dir.join("grid.json")
}

#[test]
fn generate_writes_grid_svg_and_manifest() {
    let tmp = TempDir::new().unwrap();
    tverberg().args(["generate", "--s", "6", "--refined=false", "--out"]).arg(tmp.path()).assert().code(0);
    let grid = read_json(&tmp.path().join("grid.json"));
    assert_eq!(grid["schema"], "v1");
    assert_eq!(grid["kind"], "point_grid");
    let points: usize = grid["points"].as_array().unwrap().iter().map(|r| r.as_array().unwrap().len()).sum();
    assert_eq!(points, 36);
    let svg = fs::read_to_string(tmp.path().join("grid.svg")).unwrap();
    assert_eq!(svg.matches("stroke-dasharray").count(), 6);
    let manifest = read_json(&tmp.path().join("manifest.json"));
    assert_eq!(manifest["schema"], "v1");
    assert_eq!(manifest["subcommand"], "generate");
    assert_eq!(manifest["status"], "pass");
    let names: Vec<&str> = manifest["artifacts"].as_array().unwrap().iter().map(|a| a["path"].as_str().unwrap()).collect();
    assert_eq!(names, ["grid.json", "grid.svg"]);
}

#[test]
fn scalloped_ten_gon_has_ten_dashed_arcs() {
    let tmp = TempDir::new().unwrap();
    generate(tmp.path(), 10);
    let svg = fs::read_to_string(tmp.path().join("grid.svg")).unwrap();
    assert_eq!(svg.matches("stroke-dasharray").count(), 10);
}

#[test]
fn certify_maximal_counts_two_s_squared() {
    let tmp = TempDir::new().unwrap();
    let grid = generate(&tmp.path().join("g"), 6);
    let out = tmp.path().join("c");
    tverberg().args(["certify", "--mode", "maximal", "--grid"]).arg(&grid).arg("--out").arg(&out).assert().code(0);
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["report"]["status"], "pass");
    assert_eq!(report["report"]["checked_count"], 72);
    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["transcript_hashes"][0], report["report"]["transcript_hash"]);
}

#[test]
fn certify_negative_and_torus_modes() {
    let tmp = TempDir::new().unwrap();
    tverberg().args(["certify", "--s", "5", "--mode", "negative", "--out"]).arg(tmp.path().join("n")).assert().code(0);
    tverberg()
        .args(["certify", "--s", "3", "--r", "3", "--mode", "maximal", "--out"])
        .arg(tmp.path().join("t"))
        .assert()
        .code(0);
    let report = read_json(&tmp.path().join("t/report.json"));
    assert_eq!(report["report"]["claim_id"], "torus-witness");
    assert_eq!(report["precision_attempts"][0]["precision_bits"], 128);
}

#[test]
fn exhaust_small_grid_enumerates_all_bipartitions() {
    let tmp = TempDir::new().unwrap();
    let grid = generate(&tmp.path().join("g"), 3);
    let out = tmp.path().join("e");
    tverberg().arg("exhaust").arg("--grid").arg(&grid).arg("--out").arg(&out).assert().code(0);
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["report"]["checked_count"], 512);
    assert_eq!(report["report"]["status"], "pass");
}

#[test]
fn broken_grid_fails_with_exit_two() {
    let tmp = TempDir::new().unwrap();
    let grid = generate(&tmp.path().join("g"), 3);
    let mut value = read_json(&grid);
    value["points"][1][1] = serde_json::json!(["0", "0"]);
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, value.to_string()).unwrap();
    tverberg().arg("certify").arg("--grid").arg(&bad).arg("--out").arg(tmp.path().join("c")).assert().code(2);
    let report = read_json(&tmp.path().join("c/report.json"));
    assert_eq!(report["report"]["status"], "fail");
    assert!(report["report"]["counterexample"].is_object());
    tverberg().arg("exhaust").arg("--grid").arg(&bad).arg("--out").arg(tmp.path().join("e")).assert().code(2);
}

fn stderr_error(out: &std::process::Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn usage_and_cap_errors_exit_one() {
    let tmp = TempDir::new().unwrap();
    tverberg().args(["certify", "--bogus"]).assert().code(1);
    tverberg().arg("frobnicate").assert().code(1);
    tverberg().args(["certify", "--mode", "sideways"]).assert().code(1);
    let out = tverberg().args(["generate", "--s", "1", "--out"]).arg(tmp.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_error(&out);
    assert_eq!(err["schema"], "v1");
    assert_eq!(err["error"]["kind"], "invalid_parameter");
    let out = tverberg().args(["exhaust", "--s", "5", "--out"]).arg(tmp.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_error(&out)["error"]["kind"], "cap_exceeded");
    let out = tverberg().args(["certify", "--grid", "/nonexistent/grid.json", "--out"]).arg(tmp.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    tverberg().arg("--help").assert().code(0);
    tverberg().arg("--version").assert().code(0);
}

#[test]
fn replay_reproduces_identical_artifacts() {
    let tmp = TempDir::new().unwrap();
    let first = tmp.path().join("a");
    tverberg().args(["separate", "--a", "5", "--seed", "11", "--out"]).arg(&first).assert().code(0);
    let second = tmp.path().join("b");
    tverberg().arg("--replay").arg(first.join("manifest.json")).arg("--out").arg(&second).assert().code(0);
    for name in ["family.json", "separation.json", "system.svg", "manifest.json"] {
        assert_eq!(fs::read(first.join(name)).unwrap(), fs::read(second.join(name)).unwrap(), "{name}");
    }
    let manifest = read_json(&first.join("manifest.json"));
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["parameters"]["separate"]["a"], 5);
}

#[test]
fn replay_of_a_certificate_checks_input_digests() {
    let tmp = TempDir::new().unwrap();
    let grid = generate(&tmp.path().join("g"), 2);
    let first = tmp.path().join("c1");
    tverberg().arg("certify").arg("--grid").arg(&grid).arg("--out").arg(&first).assert().code(0);
    let second = tmp.path().join("c2");
    tverberg().arg("--replay").arg(first.join("manifest.json")).arg("--out").arg(&second).assert().code(0);
    assert_eq!(fs::read(first.join("report.json")).unwrap(), fs::read(second.join("report.json")).unwrap());
    // a changed input no longer matches the recorded digest
    generate(&tmp.path().join("g"), 3);
    tverberg().arg("--replay").arg(first.join("manifest.json")).arg("--out").arg(tmp.path().join("c3")).assert().code(1);
}

#[test]
fn output_directory_from_environment() {
    let tmp = TempDir::new().unwrap();
    let env_dir = tmp.path().join("env");
    tverberg().env("TVERBERG_OUT", &env_dir).args(["generate", "--s", "2"]).assert().code(0);
    assert!(env_dir.join("grid.json").exists());
    let flag_dir = tmp.path().join("flag");
    tverberg().env("TVERBERG_OUT", &env_dir).args(["turan", "vc", "--n", "5", "--out"]).arg(&flag_dir).assert().code(0);
    assert!(flag_dir.join("vc.json").exists());
    assert!(!env_dir.join("vc.json").exists());
}

#[test]
fn render_grid_partition_and_separation() {
    let tmp = TempDir::new().unwrap();
    let grid = generate(&tmp.path().join("g"), 3);
    let out = tmp.path().join("r");
    tverberg().arg("render").arg("--grid").arg(&grid).args(["--partition", "0", "--name", "one.svg", "--out"]).arg(&out).assert().code(0);
    let one = fs::read_to_string(out.join("one.svg")).unwrap();
    // every cell on the first side: three row hulls, no column hull
    assert_eq!(one.matches("<polygon").count(), 3);
    tverberg().arg("render").arg("--grid").arg(&grid).args(["--partition", "170", "--name", "mixed.svg", "--out"]).arg(&out).assert().code(0);
    let mixed = fs::read_to_string(out.join("mixed.svg")).unwrap();
    assert!(mixed.contains("#000000"));
    let sep = tmp.path().join("s");
    tverberg().args(["separate", "--a", "4", "--out"]).arg(&sep).assert().code(0);
    tverberg().arg("render").arg("--separation").arg(sep.join("separation.json")).arg("--out").arg(&out).assert().code(0);
    assert_eq!(fs::read(out.join("render.svg")).unwrap(), fs::read(sep.join("system.svg")).unwrap());
    let torus = tmp.path().join("t");
    tverberg().args(["generate", "--s", "2", "--r", "3", "--out"]).arg(&torus).assert().code(0);
    tverberg().arg("render").arg("--grid").arg(torus.join("torus.json")).arg("--out").arg(&out).assert().code(1);
}

#[test]
fn turan_subcommands() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path();
    tverberg().args(["turan", "hypercube", "--k", "2", "--m", "3", "--s", "2", "--out"]).arg(out).assert().code(0);
    assert_eq!(read_json(&out.join("hypercube.json"))["result"]["value"], 4);
    tverberg().args(["turan", "recursion", "--k", "2", "--m", "2", "--s", "4", "--out"]).arg(out).assert().code(0);
    assert_eq!(read_json(&out.join("recursion.json"))["check"]["holds"], true);
    tverberg().args(["turan", "boxes", "--n", "3", "--d", "2", "--out"]).arg(out).assert().code(0);
    assert_eq!(read_json(&out.join("boxes.json"))["value"], 3);
    tverberg().args(["turan", "box-free", "--parts", "2", "--s", "3", "--trials", "4", "--out"]).arg(out).assert().code(0);
    tverberg().args(["turan", "empty-tuple", "--d", "2", "--trials", "4", "--out"]).arg(out).assert().code(0);
    tverberg().args(["turan", "thicken", "--r", "2", "--seed", "5", "--out"]).arg(out).assert().code(0);
    let t = read_json(&out.join("thickening.json"));
    assert!(t["thickening"]["total_facets"].as_u64().unwrap() <= t["thickening"]["budget"].as_u64().unwrap());
    tverberg().args(["turan", "hypercube", "--k", "2", "--m", "2", "--s", "6", "--cap", "10", "--out"]).arg(out).assert().code(1);
}
