use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn scalekit(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_scalekit"));
    cmd.args(args).env_remove("SCALEKIT_SEED");
    if let Some(s) = seed_env {
        cmd.env("SCALEKIT_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn envelope_fields_in_order() {
    let out = scalekit(&["counterexample", "b4", "--trials", "20", "--points", "10"], None);
    assert!(out.status.success());
    let v = json(&out);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["schema", "command", "seed", "expect_fail", "config", "contract_holds", "consistent", "report"]);
    assert_eq!(v["seed"], 20240611);
    assert_eq!(v["config"]["which"]["example"], "b4");
}

#[test]
fn seed_precedence() {
    let args = ["counterexample", "b4", "--trials", "5"];
    assert_eq!(json(&scalekit(&args, Some("7")))["seed"], 7);
    let flagged = [&args[..], &["--seed", "9"]].concat();
    assert_eq!(json(&scalekit(&flagged, Some("7")))["seed"], 9);
    let a = scalekit(&args, Some("7"));
    let b = scalekit(&[&args[..], &["--seed", "7"]].concat(), None);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn counterexamples_exit_one_unless_expected() {
    for example in [&["counterexample", "b2", "--K", "50"][..], &["counterexample", "b7", "--dense", "30"]] {
        let plain = scalekit(example, None);
        assert_eq!(plain.status.code(), Some(1), "{example:?}");
        assert!(String::from_utf8_lossy(&plain.stderr).contains("contract violated"));
        let expected = scalekit(&[example, &["--expect-fail"]].concat(), None);
        assert_eq!(expected.status.code(), Some(0), "{example:?}");
    }
}

#[test]
fn bad_input_exits_two() {
    let out = scalekit(&["summability", "--family", "pow(k,"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = scalekit(&["growth", "--dims", "k", "--K", "3", "--theta", "1,1,2"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn markdown_and_csv_views() {
    let md = scalekit(&["--format", "md", "summability", "--family", "pow(k, n)", "--K", "500"], None);
    let text = String::from_utf8(md.stdout).unwrap();
    assert!(text.starts_with("# scalekit summability"));
    assert!(text.contains("## report.entries") && text.contains("| n | m |"));
    let csv = scalekit(&["--format", "csv", "summability", "--family", "pow(k, n)", "--K", "500"], None);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("table,summary\n"));
    assert!(text.contains("table,report.entries\nn,m,"));
}

#[test]
fn dimension_file_input() {
    let mut file = std::env::temp_dir();
    file.push(format!("scalekit-dims-{}.txt", std::process::id()));
    {
        let mut f = std::fs::File::create(&file).unwrap();
        writeln!(f, "# polynomial growth\n1\n2\nk\nk^2").unwrap();
    }
    let out = scalekit(&["classify-standard-schwartz", "--dims-file", file.to_str().unwrap()], None);
    std::fs::remove_file(&file).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["contract_holds"], true);
    assert_eq!(v["report"]["witness"]["total"], 1 + 4 + 9 + 256);
}
