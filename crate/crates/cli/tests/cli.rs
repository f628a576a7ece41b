//! End-to-end tests of the `drwitt` binary: formats, config precedence,
//! exit codes, and the model dump schema.

use std::io::Write;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_drwitt"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn text_table_shows_golden_cells() {
    let (code, stdout, _) = run(&[
        "--p", "2", "--f", "1", "--n", "3", "--variety", "p1", "--i-min", "0", "--i-max", "4",
        "--r-min", "0", "--r-max", "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.matches("Z/8").count(), 4);
    assert!(stdout.contains("Z_p"));
    assert!(stdout.contains("4 nonzero of 15 cells"));
}

#[test]
fn json_schema_fields() {
    let (code, stdout, _) = run(&[
        "--p", "3", "--variety", "point", "--n", "2", "--format", "json", "--oracle", "true",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["request"]["variety"], "point");
    assert_eq!(v["request"]["p"], 3);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert_eq!(cells[0]["i"], 0);
    assert_eq!(cells[0]["r"], 0);
    assert_eq!(cells[0]["factors"], serde_json::json!([2]));
    assert_eq!(cells[0]["limit"], "Z_p");
    assert_eq!(cells[0]["oracle"], "agree");
    assert!(v.get("model").is_none());
}

#[test]
fn model_dump_serializes_witt_coordinates() {
    let (code, stdout, _) = run(&[
        "--p", "2", "--f", "2", "--n", "2", "--variety", "p1", "--format", "json",
        "--dump-model",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let model = &v["model"];
    assert_eq!(model["field"]["p"], 2);
    assert_eq!(model["field"]["modulus"], serde_json::json!([1, 1]));
    assert_eq!(model["n"], 2);
    assert_eq!(model["components"]["0,0"], serde_json::json!([2]));
    assert_eq!(model["components"]["1,1"], serde_json::json!([2]));
    // F on the (0,0) entry: the 1×1 matrix [1] with twist +1, and each
    // entry a Witt vector {p, f, n, coords}
    let f00 = &model["ops"]["0,0"]["F"];
    assert_eq!(f00["twist"], 1);
    let w = &f00["matrix"][0][0];
    assert_eq!(w["p"], 2);
    assert_eq!(w["f"], 2);
    assert_eq!(w["n"], 2);
    assert_eq!(w["coords"], serde_json::json!([[1, 0], [0, 0]]));
    // dump-model requires JSON
    let (code, _, stderr) = run(&["--dump-model", "--format", "text"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("dump-model"));
}

#[test]
fn csv_format() {
    let (code, stdout, _) = run(&[
        "--p", "2", "--n", "3", "--variety", "point", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("i,r,factors,limit,oracle"));
    assert_eq!(lines.next(), Some("0,0,3,Z_p,"));
    assert_eq!(lines.next(), Some("1,0,3,Z_p,"));
}

#[test]
fn config_preset_and_flag_override() {
    let dir = std::env::temp_dir().join("drwitt-test-config");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("preset.cfg");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "# preset for the point table").unwrap();
    writeln!(file, "p = 3").unwrap();
    writeln!(file, "variety = point").unwrap();
    writeln!(file, "n = 2").unwrap();
    writeln!(file, "format = csv").unwrap();
    drop(file);
    let path_str = path.to_str().unwrap();
    let (code, stdout, _) = run(&["--config", path_str]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("i,r,factors"));
    assert!(stdout.contains("0,0,2,Z_p,"));
    // flags override the config
    let (code, stdout, _) = run(&["--config", path_str, "--format", "text", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("Z/27"));
    // unknown keys are invalid requests
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "frobnicate = 1\n").unwrap();
    let (code, _, stderr) = run(&["--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown key"));
}

#[test]
fn exit_codes_for_invalid_requests() {
    for args in [
        vec!["--p", "6"],
        vec!["--variety", "abelian-surface"],
        vec!["--n", "0"],
        vec!["--mod-pm", "3", "--n", "3"],
        vec!["--f", "0"],
    ] {
        let (code, _, stderr) = run(&args);
        assert_eq!(code, 2, "args {args:?} → stderr {stderr}");
        assert!(stderr.contains("error"));
    }
}

#[test]
fn empty_range_is_an_empty_table() {
    let (code, stdout, _) = run(&["--i-min", "4", "--i-max", "0", "--variety", "point"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("0 nonzero of 0 cells"));
}

#[test]
fn mod_pm_mode_has_no_limit_column() {
    let (code, stdout, _) = run(&[
        "--p", "2", "--n", "3", "--variety", "p1", "--mod-pm", "1", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["request"]["mod_pm"], 1);
    for cell in v["cells"].as_array().unwrap() {
        assert!(cell.get("limit").is_none());
    }
    // the four golden spots carry a single factor of exponent 1
    let nonzero: Vec<(i64, i64)> = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| !c["factors"].as_array().unwrap().is_empty())
        .map(|c| (c["i"].as_i64().unwrap(), c["r"].as_i64().unwrap()))
        .collect();
    assert_eq!(nonzero, vec![(0, 0), (1, 0), (2, 1), (3, 1)]);
}
