//! End-to-end CLI coverage: exit-code contract, report determinism, the
//! golden report, and spec-file loading.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn lieconf() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lieconf"))
}

fn run(args: &[&str]) -> Output {
    lieconf().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lieconf-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn passing_run_exits_zero_with_valid_json() {
    let out = run(&["axioms", "--preset", "block", "--max-index", "2", "--stable"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["checks"].as_array().unwrap().len() > 0);
}

#[test]
fn failing_checks_exit_one() {
    // a bracket table violating skew-symmetry
    let spec = write_temp(
        "broken.toml",
        r#"
preset = "custom"
[[bracket]]
i = 0
j = 0
value = "(d + 3*l) J0"
"#,
    );
    let out = run(&["axioms", "--spec", spec.to_str().unwrap(), "--max-index", "0", "--stable"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(v["summary"]["failed"].as_u64().unwrap() > 0);
    // the failing entry carries the pretty-printed residual
    let has_residual = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["status"] == "fail" && !c["failures"].as_array().unwrap().is_empty());
    assert!(has_residual);
}

#[test]
fn config_errors_exit_two() {
    let out = run(&["axioms", "--preset", "nonsense", "--stable"]);
    assert_eq!(out.status.code(), Some(2));

    let bad_poly = write_temp(
        "badpoly.toml",
        r#"
preset = "custom"
[[bracket]]
i = 0
j = 0
value = "(d + 3*q) J0"
"#,
    );
    let out = run(&["axioms", "--spec", bad_poly.to_str().unwrap(), "--stable"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("column"), "parse errors carry a location: {err}");

    // center used without declaring one
    let bad_center = write_temp(
        "badcenter.toml",
        r#"
preset = "custom"
has_center = false
[[bracket]]
i = 0
j = 0
value = "(d + 2*l) J0 + l^3 c"
"#,
    );
    let out = run(&["axioms", "--spec", bad_center.to_str().unwrap(), "--stable"]);
    assert_eq!(out.status.code(), Some(2));

    // cost guard: cohomology degree above the supported range
    let out = run(&["cohomology", "--q", "4", "--stable"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stable_reports_are_byte_identical() {
    let args = ["verify-all", "--preset", "block", "-N", "2", "-D", "3", "--stable"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout_str(&a), stdout_str(&b));
}

#[test]
fn golden_axioms_report() {
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/axioms_block_window1.json");
    let golden = std::fs::read_to_string(golden_path).unwrap();
    let out = run(&["axioms", "--preset", "block", "--max-index", "1", "--stable"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_str(&out), golden);
}

#[test]
fn custom_table_agrees_with_the_preset_on_its_window() {
    // the block bracket written out for i,j ≤ 2
    let mut entries = String::new();
    for i in 0..=2usize {
        for j in 0..=2usize {
            entries.push_str(&format!(
                "[[bracket]]\ni = {i}\nj = {j}\nvalue = \"({}*d + {}*l) J{}\"\n",
                i + 1,
                i + j + 2,
                i + j
            ));
        }
    }
    let spec = write_temp("blockish.toml", &format!("preset = \"custom\"\n{entries}"));
    let custom = run(&["axioms", "--spec", spec.to_str().unwrap(), "--max-index", "1", "--stable"]);
    let preset = run(&["axioms", "--preset", "block", "--max-index", "1", "--stable"]);
    assert_eq!(custom.status.code(), Some(0));
    let vc: serde_json::Value = serde_json::from_str(&stdout_str(&custom)).unwrap();
    let vp: serde_json::Value = serde_json::from_str(&stdout_str(&preset)).unwrap();
    assert_eq!(vc["checks"], vp["checks"]);
}

#[test]
fn preset_spec_files_load() {
    let spec = write_temp("preset.toml", "preset = \"block\"\n");
    let from_file = run(&["axioms", "--spec", spec.to_str().unwrap(), "--max-index", "1", "--stable"]);
    let from_flag = run(&["axioms", "--preset", "block", "--max-index", "1", "--stable"]);
    assert_eq!(from_file.status.code(), Some(0));
    let vf: serde_json::Value = serde_json::from_str(&stdout_str(&from_file)).unwrap();
    let vp: serde_json::Value = serde_json::from_str(&stdout_str(&from_flag)).unwrap();
    assert_eq!(vf["checks"], vp["checks"]);
}

#[test]
fn derivations_report_the_zero_quotient() {
    let out = run(&["derivations", "--preset", "block", "-N", "2", "-D", "3", "--stable"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["results"]["quotient_dim"], 0);
}

#[test]
fn missing_custom_entries_are_hard_errors() {
    let spec = write_temp(
        "gappy.toml",
        r#"
preset = "custom"
[[bracket]]
i = 0
j = 0
value = "(d + 2*l) J1"
"#,
    );
    // jacobi at the window needs (0,1)/(1,0)/(1,1), which the table lacks
    let out = run(&["axioms", "--spec", spec.to_str().unwrap(), "--max-index", "1", "--stable"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("no bracket entry"), "{err}");
}

#[test]
fn text_format_and_output_file() {
    let dir = std::env::temp_dir().join(format!("lieconf-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let out = run(&[
        "derivations",
        "-N",
        "2",
        "-D",
        "3",
        "--format",
        "text",
        "--stable",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("PASS"));
    assert!(text.contains("summary:"));
}

#[test]
fn cohomology_reports_dimensions() {
    let out = run(&[
        "cohomology", "--preset", "block", "--coeff", "trivial", "--q", "2", "-N", "3", "-D", "6",
        "--reduced", "--stable",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["results"]["h_dim"], 1);
    // the expectation is embedded with its mathematical justification
    let dim_check = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "cohomology-dim")
        .unwrap();
    assert_eq!(dim_check["expected"], 1);
    assert!(dim_check["note"].as_str().unwrap().contains("reduced"));
}

#[test]
fn coeff_parsing_variants() {
    for coeff in ["trivial", "c_a:a=1", "c_a:a=symbolic", "m:delta=1/2,alpha=2", "m:delta=D,alpha=A"] {
        let out = run(&["modules", "--coeff", coeff, "-N", "2", "-D", "3", "--stable"]);
        assert_eq!(out.status.code(), Some(0), "coeff {coeff}");
    }
    let out = run(&["modules", "--coeff", "m:delta=bogus@", "--stable"]);
    assert_eq!(out.status.code(), Some(2));
}
