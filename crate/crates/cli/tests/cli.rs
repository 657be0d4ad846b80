use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn tiltkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tiltkit"))
        .args(args)
        .env_remove("TILTKIT_WORKSPACE")
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn condition<'a>(v: &'a Value, id: &str) -> &'a Value {
    v["conditions"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap_or_else(|| panic!("no {id}"))
}

#[test]
fn algebra_build_summaries() {
    let o = tiltkit(&["algebra", "build", &fixture("kr_3_2.json")]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["dimension"], 7);
    assert_eq!(v["corner_dims"], serde_json::json!([[3, 2], [0, 2]]));
    assert_eq!(json(&tiltkit(&["algebra", "build", &fixture("a2.json")]))["dimension"], 3);
}

#[test]
fn malformed_inputs_are_errors() {
    let o = tiltkit(&["algebra", "build", &fixture("malformed_arrow.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"z\""));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\n  \"field\": \"Q\",\n  \"quiver\": [\n").unwrap();
    let o = tiltkit(&["algebra", "build", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn prime_fields_unsupported() {
    let o = tiltkit(&["--field", "Fp", "algebra", "info", &fixture("a2.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported field"));
}

#[test]
fn apr_trichotomy() {
    let o = tiltkit(&["apr", &fixture("kr_2_2.json"), "--e", "x"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["verdict"], "VALID");
    assert_eq!(v["invariants"]["triangular_blocks"]["upper"], 2);
    assert!(v["E"]["quiver"]["vertices"].is_array());

    let v = json(&tiltkit(&["apr", &fixture("kr_3_2.json"), "--e", "x"]));
    assert_eq!(v["verdict"], "VALID");
    assert!(v["invariants"].get("triangular_blocks").is_none());

    let o = tiltkit(&["apr", &fixture("kr_1_2.json"), "--e", "x"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(condition(&json(&o), "m_free_summand")["verdict"], "FAIL");
}

#[test]
fn apr_rejects_non_triangular_split() {
    let o = tiltkit(&["apr", &fixture("kr_2_2.json"), "--e", "y"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn glue_identity_and_violation() {
    let v = json(&tiltkit(&[
        "glue",
        &fixture("kr_2_2.json"),
        "--e",
        "x",
        "--mode",
        "jshriek",
        "--y",
        "regular",
        "--z",
        "regular",
    ]));
    assert_eq!(v["verdict"], "VALID");
    assert_eq!(v["invariants"]["agree"], true);

    let o = tiltkit(&[
        "glue",
        &fixture("kr_2_2.json"),
        "--e",
        "x",
        "--mode",
        "jshriek",
        "--y",
        "regular",
        "--z",
        &fixture("b_regular_degree1.json"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let c = condition(&v, "hom_iy_jz");
    assert_eq!(c["verdict"], "FAIL");
    assert!(c["witness"].as_str().unwrap().starts_with("n = 1"));
    assert!(v["E"].is_null());
}

#[test]
fn glue_stalk_lists_blocks() {
    let v = json(&tiltkit(&[
        "glue",
        &fixture("kr_2_2.json"),
        "--e",
        "x",
        "--mode",
        "stalk",
        "--y",
        "regular",
        "--shift",
        "1",
    ]));
    assert_eq!(v["verdict"], "VALID");
    assert_eq!(condition(&v, "structure_constants_agree")["verdict"], "PASS");
    assert_eq!(v["invariants"]["triangular_blocks"]["bimodule"], 2);

    let v = json(&tiltkit(&[
        "glue",
        &fixture("a3_rad2.json"),
        "--e",
        "1",
        "--mode",
        "stalk",
        "--y",
        "regular",
        "--shift",
        "2",
    ]));
    assert_eq!(v["verdict"], "VALID");
    assert_eq!(v["invariants"]["triangular_blocks"]["bimodule"], 1);
}

#[test]
fn recollement_corpora() {
    let o = tiltkit(&["recollement", "verify", &fixture("kr_2_2.json"), "--e", "x", &fixture("corpus_kr22")]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["corpus_files"].as_array().unwrap().len(), 3);
    assert_eq!(v["prop33"]["all"], true);

    let o = tiltkit(&["recollement", "verify", &fixture("kr_2_2.json"), "--e", "x", &fixture("corpus_corrupt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["failures"][0]["witness"].as_str().unwrap().contains("bad_delta"));
}

#[test]
fn module_check_reports() {
    let v = json(&tiltkit(&["module", "check", &fixture("kr_2_2.json"), &fixture("corpus_kr22/simple_y.json")]));
    assert_eq!(v["verdict"], "VALID");
    assert_eq!(v["projective"], false);
    let o = tiltkit(&["module", "check", &fixture("kr_2_2.json"), &fixture("corpus_corrupt/bad_delta.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tilting_check_module_and_complex() {
    let v = json(&tiltkit(&["tilting-check", &fixture("kr_2_2.json"), &fixture("corpus_kr22/simple_x.json")]));
    assert_eq!(v["verdict"], "INVALID");
    let o = tiltkit(&["tilting-check", &fixture("kr_2_2.json"), &fixture("corpus_kr22/alpha_string.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invariants_compare_exit_status() {
    let o = tiltkit(&["invariants", "compare", &fixture("kr_2_2.json"), &fixture("kr_2_2.json")]);
    assert!(o.status.success());
    let o = tiltkit(&["invariants", "compare", &fixture("kr_2_2.json"), &fixture("kr_3_2.json")]);
    assert_eq!(o.status.code(), Some(1));
}

fn files_under(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(files_under(&p));
        } else {
            out.push(p);
        }
    }
    out.sort();
    out
}

#[test]
fn workspace_cache_is_pure_memoization() {
    let ws = tempfile::tempdir().unwrap();
    let out = ws.path().join("cert.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_tiltkit"))
            .args(["apr", &fixture("kr_2_2.json"), "--e", "x", "--out", out.to_str().unwrap()])
            .env("TILTKIT_WORKSPACE", ws.path().join("cache"))
            .output()
            .unwrap()
    };
    let first = run();
    let cached = files_under(&ws.path().join("cache"));
    assert_eq!(cached.len(), 1);
    let written = std::fs::read(&out).unwrap();
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    std::fs::remove_dir_all(ws.path().join("cache")).unwrap();
    let third = run();
    assert_eq!(first.stdout, third.stdout);
    assert_eq!(std::fs::read(&out).unwrap(), written);
    assert_eq!(written, first.stdout);
    // uncached run agrees as well
    assert_eq!(tiltkit(&["apr", &fixture("kr_2_2.json"), "--e", "x"]).stdout, first.stdout);
}

#[test]
fn stored_algebras_resolve_by_key() {
    let ws = tempfile::tempdir().unwrap();
    let root = ws.path().to_str().unwrap();
    let v = json(&tiltkit(&["--workspace", root, "algebra", "build", &fixture("kr_3_2.json")]));
    let key = v["artifact"].as_str().unwrap().to_string();
    let info = json(&tiltkit(&["--workspace", root, "algebra", "info", &key]));
    assert_eq!(info["dimension"], 7);
}
