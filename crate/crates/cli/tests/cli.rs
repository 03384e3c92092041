use std::io::Write;
use std::process::{Command, Output};

use artin_series::report::without_timings;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_artin-series"))
}

fn run_text(toml: &str, extra: &[&str]) -> Output {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(toml.as_bytes()).unwrap();
    bin().arg("run").arg(f.path()).args(extra).output().unwrap()
}

#[test]
fn empty_scenario_passes() {
    let out = run_text("name = \"empty\"\n", &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unit_ideal_fails_the_sft_task() {
    let out = run_text("[[task]]\nkind = \"sft\"\nk_max = 2\nideals = [[\"1\"]]\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[non-sft]"), "{text}");
    assert!(text.contains("proper"), "{text}");
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(run_text("[[task]]\nkind = \"nope\"\n", &[]).status.code(), Some(2));
    assert_eq!(
        run_text("[[task]]\nkind = \"flat\"\nrings = [\"nope\"]\n", &[])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run_text("this is not toml", &[]).status.code(), Some(2));
    assert_eq!(
        bin()
            .args(["run", "/no/such/file.toml"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failing_checks_exit_one() {
    let out = run_text("[[task]]\nkind = \"regular\"\ngens = [\"X1*X2\", \"X1*X3\"]\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[height-generated]"), "{text}");
    let out = run_text(
        "[[task]]\nkind = \"regular\"\ngens = [\"X1*X2\", \"X1*X3\"]\nexpect = \"reject\"\n",
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn list_is_stable() {
    let a = bin().arg("list").output().unwrap();
    let b = bin().arg("list").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for name in ["example-ring", "quadratic-tower", "paper-suite"] {
        assert!(text.lines().any(|l| l.trim() == name), "{name}");
    }
}

#[test]
fn json_report_is_deterministic_and_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n);
    for (name, seed) in [("a.json", "3"), ("b.json", "3"), ("c.json", "4")] {
        let out = bin()
            .args(["run", "smoke", "--seed", seed, "--out"])
            .arg(path(name))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let read = |n: &str| without_timings(&std::fs::read_to_string(path(n)).unwrap());
    assert_eq!(read("a.json"), read("b.json"));
    assert_ne!(read("a.json"), read("c.json"));
    let v: serde_json::Value = serde_json::from_str(&read("a.json")).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 3);
    assert!(v["tasks"].as_array().unwrap().iter().all(|t| t["verdict"] == "pass"));
}

#[test]
fn example_commands() {
    let out = bin()
        .args(["example", "sft", "--k-max", "3", "--ideal", "z0,z1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(["example", "wb", "--trunc", "4", "--window", "2", "--samples", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn scenario_family_and_sections() {
    let toml = r#"
name = "list-family"
seed = 5
trunc = 3

[family]
stream = "list"
base_vars = ["t"]
base_relations = ["t^2"]
generators = [{ name = "u", relations = ["u^2", "t*u"] }, { name = "v", relations = ["v^2", "t*v"] }]
window = 2

[family.chain]
generators = ["t", "u", "v"]
t = 2

[series]
n = 2

[ideal]
gens = ["X1", "X2"]

[[task]]
kind = "regular"

[[task]]
kind = "dimension"

[[task]]
kind = "non-noetherian"
"#;
    let out = run_text(toml, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
