use std::path::PathBuf;
use std::process::{Command, Output};

use gramtri::export::{parse_json, render_json};
use gramtri::FamilyTag;

fn gramtri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gramtri"))
        .args(args)
        .env_remove("GRAMTRI_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = gramtri(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    gramtri(args).status.code().expect("exit code")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn triangle_goldens() {
    assert_eq!(
        stdout(&["triangle", "--family", "whitney", "--m", "1", "--r", "1", "--rows", "4", "--format", "oeis"]),
        "1\n1,1\n1,4,1\n1,11,11,1\n"
    );
    assert_eq!(stdout(&["triangle", "--params", "0,1,0,1,0,0", "--rows", "0"]), "1\n");
    let so = stdout(&["triangle", "--family", "second-order", "--r", "2", "--rows", "3"]);
    assert_eq!(so.lines().last(), Some("1,8,6"));
    assert_eq!(
        stdout(&["triangle", "--family", "stirling2", "--rows", "2", "--format", "csv"]),
        "n,k,value\n0,0,1\n1,0,0\n1,1,1\n2,0,0\n2,1,1\n2,2,1\n"
    );
}

#[test]
fn json_output_round_trips() {
    for args in [
        &["triangle", "--family", "whitney", "--m", "3", "--r", "2", "--rows", "5", "--format", "json"][..],
        &["triangle", "--params", "1/2,-1,0,3,1,-2", "--rows", "4", "--format", "json"][..],
        &["triangle", "--family", "r-eulerian", "--r", "3", "--rows", "5", "--format", "json"][..],
    ] {
        let s = stdout(args);
        assert_eq!(render_json(&parse_json(&s).unwrap()), s);
    }
}

#[test]
fn family_fixtures_match_parameter_tuples() {
    let text = std::fs::read_to_string(fixture("families.txt")).unwrap();
    let mut seen = 0;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (flags, tuple) = line.split_once('|').unwrap();
        let flags: Vec<&str> = flags.split_whitespace().collect();
        let tuple = tuple.trim();
        let mut named = vec!["triangle", "--rows", "6", "--format", "json"];
        named.extend(&flags);
        let doc: serde_json::Value = serde_json::from_str(&stdout(&named)).unwrap();
        let params: Vec<String> = serde_json::from_value(doc["params"].clone()).unwrap();
        assert_eq!(params.join(","), tuple, "{line}");

        let family: FamilyTag = serde_json::from_value(doc["family"].clone()).unwrap();
        if family.recurrence_start() == 1 {
            let a = stdout(&[&["triangle", "--rows", "6"][..], &flags].concat());
            let b = stdout(&["triangle", "--rows", "6", "--params", tuple]);
            assert_eq!(a, b, "{line}");
        }
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn help_documents_the_family_mapping() {
    let help = stdout(&["triangle", "--help"]);
    assert!(help.contains("whitney --m M --r R    (R, M, 0, M-R, -M, M)"));
    assert!(help.contains("stirling2              (0, 1, 0, 1, 0, 0)"));
}

#[test]
fn grammar_expansions() {
    let args = ["grammar", "--hao", "2,3,0,1,-3,3", "--seed", "u*v^2"];
    assert_eq!(stdout(&[&args[..], &["--n", "1"]].concat()), "u*v^5 + 2*u^4*v^2\n");
    assert_eq!(stdout(&[&args[..], &["--n", "0"]].concat()), "u*v^2\n");
    let rules = fixture("eulerian_grammar.txt");
    let rules = rules.to_str().unwrap();
    assert_eq!(
        stdout(&["grammar", "--rules", rules, "--seed", "u*v^2", "--n", "2", "--all"]),
        "D^0: u*v^2\nD^1: u*v^4 + 2*u*v^2\nD^2: u*v^6 + 6*u*v^4 + 4*u*v^2\n"
    );
}

#[test]
fn grammar_parse_errors_have_positions() {
    let dir = std::env::temp_dir().join(format!("gramtri-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    std::fs::write(&path, "u -> u*v\nv -> v^\n").unwrap();
    let out = gramtri(&["grammar", "--rules", path.to_str().unwrap(), "--seed", "u", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.txt:2:"), "{err}");
}

#[test]
fn series_output() {
    assert_eq!(stdout(&["series", "--tree-function", "--order", "4"]), "0, 1, 1, 3/2, 8/3\n");
    assert_eq!(stdout(&["series", "--tree-function", "--order", "4", "--egf"]), "0, 1, 2, 9, 64\n");
    let rules = fixture("eulerian_grammar.txt");
    assert_eq!(
        stdout(&["series", "--rules", rules.to_str().unwrap(), "--x", "u", "--order", "3", "--egf"]),
        "u, u*v^2, u*v^4 + 2*u*v^2, u*v^6 + 6*u*v^4 + 4*u*v^2\n"
    );
}

#[test]
fn verify_examples() {
    assert!(stdout(&["verify", "row-sums", "--family", "whitney", "--max-n", "7"]).contains("PASS row-sums"));
    assert!(stdout(&["verify", "second-order-egf", "--y", "1/2", "--order", "6"]).starts_with("$ "));
    assert_eq!(code(&["verify", "second-order-egf", "--y", "1", "--order", "4"]), 1);
    assert_eq!(code(&["verify", "no-such-suite"]), 2);
    assert!(stdout(&["verify", "list"]).lines().count() >= 12);
}

#[test]
fn verify_all_report_shape() {
    let out = gramtri(&["verify", "all", "--max-n", "4", "--budget", "1e6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let suites = report["suites"].as_array().unwrap();
    assert!(suites.len() >= 12);
    assert_eq!(report["passed"], true);
    let names: Vec<&str> = suites.iter().map(|s| s["suite"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(suites.iter().all(|s| !s["grid"].as_str().unwrap().is_empty()));
}

#[test]
fn plain_and_json_reports_agree() {
    for (args, ok) in [
        (vec!["verify", "touchard", "--max-n", "3"], true),
        (vec!["verify", "row-sums", "--params", "1,1,2,1,0,0", "--max-n", "2"], false),
    ] {
        let plain = gramtri(&args);
        let json = gramtri(&[&args[..], &["--format", "json"]].concat());
        assert_eq!(plain.status.code(), json.status.code());
        assert_eq!(plain.status.success(), ok);
        let plain = String::from_utf8(plain.stdout).unwrap();
        let report: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
        assert_eq!(report["passed"], ok);
        assert_eq!(plain.lines().last().unwrap().starts_with("PASS"), ok);
    }
}

#[test]
fn budget_exit_code_and_env() {
    assert_eq!(code(&["oracle", "r-excedances", "--n", "8", "--budget", "1e2"]), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_gramtri"))
        .args(["verify", "set-partitions", "--max-n", "6"])
        .env("GRAMTRI_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(code(&["verify", "set-partitions", "--budget", "many"]), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["triangle", "--rows", "3"]), 2);
    assert_eq!(code(&["triangle", "--family", "whitney", "--m", "2", "--rows", "3"]), 2);
    assert_eq!(code(&["triangle", "--params", "1,2,3", "--rows", "3"]), 2);
    assert_eq!(code(&["triangle", "--params", "0,1,0,1,0,0", "--rows", "3", "--format", "xml"]), 2);
    assert_eq!(code(&["grammar", "--hao", "1/2,1,0,1,0,0", "--n", "1"]), 2);
}

#[test]
fn oracle_tables_and_diff() {
    let out = stdout(&["oracle", "stirling-descents", "--n", "3", "--r", "2", "--family", "second-order"]);
    assert!(out.starts_with("descents\tcount\n0\t1\n1\t8\n2\t6\n"), "{out}");
    assert!(out.ends_with("match\n"));
    let out = stdout(&["oracle", "cadet-leaves", "--n", "3", "--family", "second-order", "--r", "2"]);
    assert!(out.ends_with("match\n"), "{out}");
    assert_eq!(code(&["oracle", "set-partitions", "--n", "4", "--family", "whitney", "--m", "1", "--r", "0"]), 1);
    let out = stdout(&["oracle", "components", "--a", "1,1,0", "--n", "3", "--params", "1,1,0,1,0,0"]);
    assert!(out.ends_with("match\n"), "{out}");
    let out = stdout(&["oracle", "vleaves", "--n", "2", "--family", "whitney", "--m", "1", "--r", "1"]);
    assert_eq!(out, "v-leaves\tcount\n1\t1\n2\t1\n");
}
