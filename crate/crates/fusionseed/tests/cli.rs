use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fusionseed"));
    c.env_remove("FUSIONSEED_CAP");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fusionseed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn emit(family: &str, params: &[&str], name: &str) -> PathBuf {
    let path = scratch(name);
    let out = run(bin().args(["zoo", "emit", family]).args(params).arg("--out").arg(&path));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn emit_then_check_echoes_family() {
    let path = emit("sn_deleted", &["p=5", "n=5", "scalars=false"], "s5.json");
    let report = json(&run(bin().arg("check").arg(&path)));
    assert_eq!(report["instance"]["family"]["family"], "sn_deleted");
    assert_eq!(report["instance"]["family"]["n"], 5);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["group_order"], 120);
    let menu = report["criterion"]["e0_menu"].as_array().unwrap();
    let full = menu.iter().find(|e| e["e0"] == "H_0∪H_*").expect("H_0∪H_* admissible");
    assert_eq!(full["exotic"]["row"], "realizable/PSL_p(q)");
}

#[test]
fn reports_are_bytewise_deterministic() {
    let path = emit("sl2p_ext", &["p=5", "shape=3,3", "group=gl2"], "ext.json");
    let a = run(bin().arg("check").arg(&path).args(["--seed", "7"]));
    let b = run(bin().arg("check").arg(&path).args(["--seed", "7"]));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_exit_2() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"p": 6, "dim": 1, "generators": [[[1]]]}"#).unwrap();
    assert_eq!(run(bin().arg("check").arg(&bad)).status.code(), Some(2));
    assert_eq!(run(bin().args(["check", "/nonexistent/instance.json"])).status.code(), Some(2));
    assert_eq!(run(bin().args(["zoo", "emit", "no_such_family"])).status.code(), Some(2));
    assert_eq!(run(bin().arg("frobnicate")).status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_3() {
    let path = emit("extraspecial_p5", &[], "p5.json");
    let out = run(bin().arg("check").arg(&path).env("FUSIONSEED_CAP", "1000"));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn p7_needs_heavy() {
    let path = emit("extraspecial_p7", &[], "p7.json");
    assert_eq!(run(bin().arg("check").arg(&path)).status.code(), Some(3));
}

#[test]
fn zoo_list_covers_families() {
    let out = run(bin().args(["zoo", "list"]));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 12);
    for family in ["sl2p_simple", "sl2p_ext", "sn_perm", "sn_deleted", "an_deleted", "monomial", "gl2_3", "extraspecial_p5", "extraspecial_p7"] {
        assert!(text.lines().any(|l| l.starts_with(family)), "{family} missing");
    }
}

#[test]
fn sgroup_on_deleted_permutation_module() {
    let path = emit("sn_deleted", &["p=5", "n=5", "scalars=false"], "s5-sgroup.json");
    let report = json(&run(bin().arg("sgroup").arg(&path)));
    assert_eq!(report["structure_holds"], true);
    assert_eq!(report["filtration_quotients_are_lines"], true);
    assert_eq!(report["e0"], "H_0");
    assert!(report["theta"].as_array().unwrap().iter().all(|t| t["error"].is_null()));
}

#[test]
fn regress_filter_runs_subset() {
    let out = run(bin().args(["regress", "--filter", "strongly-closed/perm@5"]));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("strongly-closed/perm@5"));
    assert!(text.contains("0 failing"));
}
