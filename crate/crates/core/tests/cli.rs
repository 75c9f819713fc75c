use std::process::{Command, Output};

use biharm::report::{self, ClassifyDocument};

fn biharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biharm"))
        .args(args)
        .env_remove("BIHARM_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn classify_tgi_json() {
    let o = biharm(&["classify", "--family", "tgi", "--m", "2", "--n", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["report"]["index_exact"], 1);
    assert_eq!(v["report"]["nullity_exact"], 10);
    let split = &v["report"]["nullity_split"];
    assert_eq!((split["s1_gradient_blocks"].as_u64(), split["s2_divergence_free"].as_u64(), split["s3_vertical"].as_u64()), (Some(3), Some(3), Some(4)));
    assert_eq!(v["report"]["lambda1"], serde_json::json!({"num": 4, "den": 1}));
}

#[test]
fn classify_json_round_trips() {
    for args in [
        &["classify", "--family", "tgi", "--m", "3", "--n", "5", "--format", "json"][..],
        &["classify", "--family", "veronese", "--m", "5", "--format", "json"],
        &["classify", "--family", "veronese-projective", "--m", "3", "--format", "json"],
        &["classify", "--family", "clifford", "--l", "2", "--lambda-max", "40", "--format", "json"],
        &["classify", "--family", "identity", "--n", "4", "--format", "json"],
    ] {
        let out = stdout(&biharm(args));
        let doc: ClassifyDocument = serde_json::from_str(&out).unwrap();
        assert_eq!(report::to_json(&doc), out);
        assert_eq!(stdout(&biharm(args)), out);
    }
}

#[test]
fn spectrum_at_zero_is_a_single_row() {
    let o = biharm(&["spectrum", "--family", "clifford", "--l", "1", "--lambda-max", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "value_num,value_den,level,multiplicity\n0,1,\"(0,0)\",1\n");
}

#[test]
fn spectrum_csv_columns() {
    let o = biharm(&["spectrum", "--family", "veronese", "--m", "2", "--lambda-max", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "value_num,value_den,level,multiplicity\n0,1,k=0,1\n4,3,k=1,3\n4,1,k=2,5\n");
}

#[test]
fn quadform_rows() {
    let o = biharm(&["quadform", "--family", "tgi", "--m", "2", "--n", "3", "--lambda-max", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &v["rows"][1];
    assert_eq!(row["normal"]["value"], serde_json::json!({"num": 16, "den": 1}));
    assert_eq!(row["tangent"]["value"], serde_json::json!({"num": 64, "den": 1}));
    assert_eq!(row["cross"], serde_json::json!({"num": -32, "den": 1}));
    assert_eq!(row["block"]["direction"], serde_json::json!([2, 1]));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["classify", "--family", "tgi", "--m", "2"][..],
        &["classify", "--family", "tgi", "--m", "4", "--n", "3"],
        &["classify", "--family", "veronese", "--m", "1"],
        &["classify", "--family", "clifford", "--l", "1", "--m", "2"],
        &["classify", "--family", "tgi", "--m", "2", "--n", "3", "--lambda-max", "1/2"],
        &["classify", "--family", "tgi", "--m", "2", "--n", "3", "--format", "csv"],
        &["spectrum", "--family", "tgi", "--m", "2", "--n", "3", "--lambda-max", "two"],
        &["spectrum", "--family", "tgi", "--m", "2", "--n", "3", "--lambda-max", "-1"],
        &["quadform", "--family", "tgi", "--m", "2", "--n", "3", "--lambda-max", "1/0"],
        &["verify", "--case", "torus", "--grid", "48"],
        &["verify", "--case", "circle", "--n", "0"],
        &["frobnicate"],
    ] {
        let o = biharm(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn verify_torus_passes_and_strict_tolerance_fails() {
    let o = biharm(&["verify", "--case", "torus", "--grid", "64", "--seed", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 7);
    let check = &v["checks"][0];
    for key in ["name", "anchor", "computed", "expected", "tolerance", "pass"] {
        assert!(check.get(key).is_some(), "{key}");
    }

    let o = biharm(&["verify", "--case", "torus", "--grid", "64", "--seed", "7", "--tolerance", "1e-20", "--fields", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_json_is_byte_identical() {
    let args = ["verify", "--case", "circle", "--grid", "32", "--seed", "5", "--fields", "10", "--format", "json"];
    assert_eq!(biharm(&args).stdout, biharm(&args).stdout);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_biharm"))
        .args(["classify", "--family", "identity", "--n", "3", "--format", "json"])
        .env("BIHARM_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("classify-identity-n3.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["identity"]["nullity_exact"], 6);
}

#[test]
fn help_exits_0() {
    let o = biharm(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("classify"));
}
