//! Black-box tests of the command-line interface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gmtame"))
}

#[test]
fn spectrum_json_output_parses_and_matches() {
    let out = bin()
        .args(["spectrum", "x^2 + y^2 + x^2*y^2", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mu"], 5);
    assert_eq!(v["mean"], "1");
    let spec = v["spectrum"].as_array().unwrap();
    assert_eq!(spec.len(), 3);
    assert_eq!(spec[0]["alpha"], "1/2");
    assert_eq!(spec[0]["mult"], 1);
    assert_eq!(spec[1]["alpha"], "1");
    assert_eq!(spec[1]["mult"], 3);
    assert_eq!(spec[2]["alpha"], "3/2");
    assert_eq!(spec[2]["mult"], 1);
}

#[test]
fn goodbasis_json_has_matrices_and_monodromy() {
    let out = bin()
        .args(["goodbasis", "x^2 + y^3", "--format", "json", "--checks", "full"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mu"], 2);
    assert_eq!(v["a1"][0][0], "5/6");
    assert_eq!(v["a1"][1][1], "7/6");
    assert_eq!(v["a1"][0][1], "0");
    assert_eq!(v["phis"].as_array().unwrap().len(), 2);
    assert!(v["monodromy"].as_array().unwrap().len() >= 1);
}

#[test]
fn output_is_deterministic() {
    let run = || {
        bin()
            .args(["goodbasis", "x^3 + y^3", "--format", "json"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn parse_error_is_exit_code_2() {
    let out = bin().args(["spectrum", "x^2 +"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_corpus_verifies() {
    let corpus = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/corpus.json");
    let out = bin().args(["verify", corpus, "--jobs", "4"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "verify failed:\n{}", text);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 7);
    assert!(!text.contains("FAIL"));
}

#[test]
fn corrupted_expectation_fails_with_diff() {
    let dir = std::env::temp_dir().join("gmtame-cli-test-corrupt");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"[{
            "name": "wrong-spectrum",
            "polynomial": "x^2 + y^2",
            "mu": 1,
            "spectrum": [{ "alpha": "1/2", "mult": 1 }]
        }]"#,
    )
    .unwrap();
    let out = bin().args(["verify", path.to_str().unwrap()]).output().unwrap();
    assert!(!out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL wrong-spectrum"));
    assert!(text.contains("spectrum: got"), "diff missing:\n{}", text);
}

#[test]
fn empty_corpus_passes_with_warning() {
    let dir = std::env::temp_dir().join("gmtame-cli-test-empty");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.json");
    std::fs::write(&path, "[]").unwrap();
    let out = bin().args(["verify", path.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("warning"), "stderr: {}", err);
}
