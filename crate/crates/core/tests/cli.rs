use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn qrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrank")).args(args).env_remove("QRANK_BUDGET").env_remove("QRANK_THREADS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qrank-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn wd_of_full_space() {
    let out = qrank(&["wd", data("full_2x2_f2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{\"rank_distribution\":[1,9,6],\"enumerator\":\"x^2 + 9*x*y + 6*y^2\"}\n");
}

#[test]
fn check_all_on_zero_code_passes() {
    let out = qrank(&["check", "all", data("zero_2x2_f2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).ends_with("8 checks, 0 failed\n"));

    let out = qrank(&["check", "macwilliams", "--format", "json", data("full_2x2_f2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 2);
    assert_eq!(reports[0]["rhs"], "x^2");
}

#[test]
fn lattice_count_only() {
    let out = qrank(&["lattice", "--q", "2", "--n", "4", "--count-only"]);
    assert_eq!(stdout(&out), "67\n");
    let out = qrank(&["lattice", "--q", "2", "--n", "6", "--count-only"]);
    assert_eq!(stdout(&out), "2825\n");
}

#[test]
fn dual_twice_is_byte_identical() {
    let original = scratch("random.json");
    let once = scratch("dual.json");
    let twice = scratch("dual2.json");
    let out = qrank(&["random-code", "--q", "3", "--n", "3", "--m", "2", "--seed", "11", "-o", original.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(qrank(&["dual", original.to_str().unwrap(), "-o", once.to_str().unwrap()]).status.success());
    assert!(qrank(&["dual", once.to_str().unwrap(), "-o", twice.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&original).unwrap(), std::fs::read(&twice).unwrap());

    for fixture in ["zero_2x2_f2.json", "full_2x2_f2.json"] {
        let canonical = scratch(&format!("canonical-{fixture}"));
        let back = scratch(&format!("back-{fixture}"));
        assert!(qrank(&["dual", data(fixture).to_str().unwrap(), "-o", canonical.to_str().unwrap()]).status.success());
        assert!(qrank(&["dual", canonical.to_str().unwrap(), "-o", back.to_str().unwrap()]).status.success());
        let again = qrank(&["dual", back.to_str().unwrap()]);
        assert_eq!(again.stdout, std::fs::read(&canonical).unwrap());
    }
}

#[test]
fn restrict_and_polymatroid() {
    let full = data("full_2x2_f2.json");
    let out = qrank(&["restrict", "--subspace", "1,1", full.to_str().unwrap()]);
    assert_eq!(stdout(&out), "{\"field\":{\"p\":2,\"e\":1},\"n\":2,\"m\":2,\"generators\":[[[1,0],[1,0]],[[0,1],[0,1]]]}\n");

    let out = qrank(&["polymatroid", full.to_str().unwrap()]);
    assert_eq!(stdout(&out), "{\n  \"\": 0,\n  \"0,1\": 2,\n  \"1,0\": 2,\n  \"1,1\": 2,\n  \"1,0;0,1\": 4\n}\n");
    let table: serde_json::Value = serde_json::from_slice(&qrank(&["polymatroid", "--dual", full.to_str().unwrap()]).stdout).unwrap();
    assert_eq!(table["1,0;0,1"], 0);
}

#[test]
fn rgf_of_full_space() {
    let out = qrank(&["rgf", data("full_2x2_f2.json").to_str().unwrap(), "--format", "text"]);
    assert_eq!(stdout(&out), "R = X1^4 + 3*X1^2*X3 - 3*X1^2*X4 + X3^2 - 3*X3*X4 + 2*X4^2\n");
}

#[test]
fn errors_exit_two() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"field\":{\"q\":6},\"n\":1,\"m\":1,\"generators\":[]}").unwrap();
    let out = qrank(&["wd", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let out = qrank(&["check", "nonsense", data("zero_2x2_f2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = qrank(&["--budget", "4", "wd", data("full_2x2_f2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_qrank"))
        .args(["wd", data("full_2x2_f2.json").to_str().unwrap()])
        .env("QRANK_BUDGET", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "budget falls back to the environment");
}
