use std::process::{Command, Output};

use mcharlier::CharlierTable;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcharlier"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_reports_agreement() {
    let o = run(&["eval", "--n", "1,1", "--k", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["value"], "3/4");
    assert_eq!(v["methods"].as_array().unwrap().len(), 3);
}

#[test]
fn eval_rejects_wrong_arity() {
    let o = run(&["eval", "--n", "1,1,1", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_configurations_are_rejected() {
    for args in [
        vec!["table", "--sigma", "1/2"],
        vec!["table", "--sigma", "1/2,1/2"],
        vec!["table", "--sigma", "1/2,-3/2"],
        vec!["table", "--sigma", "1/0,1"],
        vec!["table", "--nmax", "9", "--cutoff", "8"],
        vec!["table", "--kmax", "9", "--cutoff", "8"],
        vec!["bench", "--strategies", "bogus"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_every_suite_passes_by_default() {
    for suite in [
        "orthogonality",
        "compatibility",
        "backward",
        "forward",
        "difference",
        "rij",
        "fock",
        "psi",
        "agreement",
    ] {
        let o = run(&["verify", "--suite", suite, "--nmax", "4"]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
    }
}

#[test]
fn verify_three_directions() {
    let o = run(&[
        "--r",
        "3",
        "--sigma",
        "1/3,1,5/2",
        "verify",
        "--suite",
        "all",
        "--nmax",
        "4",
        "--cutoff",
        "6",
        "--kmax",
        "5",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = run(&[
        "verify", "--suite", "all", "--format", "json", "--jobs", "1",
    ]);
    let b = run(&[
        "verify", "--suite", "all", "--format", "json", "--jobs", "4",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let t1 = run(&["table", "--format", "csv", "--jobs", "1"]);
    let t2 = run(&["table", "--format", "csv", "--jobs", "3"]);
    assert_eq!(t1.stdout, t2.stdout);
}

#[test]
fn table_json_round_trips() {
    let o = run(&["table", "--nmax", "4", "--format", "json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let table = CharlierTable::from_json(&text).unwrap();
    assert_eq!(table.len(), 15);
    assert_eq!(format!("{}\n", table.to_json()), text);
}

#[test]
fn table_csv_is_graded_lex() {
    let o = run(&["table", "--nmax", "2", "--kmax", "2", "--format", "csv"]);
    let text = stdout(&o);
    let indices: Vec<&str> = text.lines().skip(1).map(|l| &l[..3]).collect();
    assert_eq!(indices, ["0,0", "1,0", "0,1", "2,0", "1,1", "0,2"]);
    assert!(text.starts_with("n1,n2,k=0,k=1,k=2\n"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = run(&["table", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(path).unwrap().starts_with("n1,n2"));
}

#[test]
fn corrupted_table_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let text = stdout(&run(&["table", "--nmax", "3", "--format", "json"]));
    let mut table = CharlierTable::from_json(&text).unwrap();
    let n = mcharlier::MultiIndex::new(vec![0, 2]);
    let bumped = table.get(&n).unwrap() + &mcharlier::UniPoly::from_ints(&[0, 1]);
    table.replace(&n, bumped).unwrap();
    std::fs::write(&path, table.to_json()).unwrap();
    let o = run(&["verify", "--nmax", "3", "--table", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn bench_text_has_a_row_per_strategy() {
    let o = run(&["bench", "--nmax", "3", "--strategies", "explicit,genfunc"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("explicit")));
    assert!(text.lines().any(|l| l.starts_with("genfunc")));
    assert!(!text.lines().any(|l| l.starts_with("recurrence")));
}
