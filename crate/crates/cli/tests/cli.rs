use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normcomb")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_twelve() {
    let o = run(&["classify", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-5\n");
}

#[test]
fn classify_json_and_negative_input() {
    let o = run(&["classify", "-3/4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "5");
    assert_eq!(v["valuation"], -2);
}

#[test]
fn replay_lemma_json() {
    let o = run(&["replay", "lemma-4.4", "--format", "json", "--samples", "500"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cases = v.as_array().unwrap();
    assert_eq!(cases.len(), 8);
    assert!(cases.iter().all(|c| c["status"] == "proved"));
}

#[test]
fn json_is_byte_stable() {
    let args = ["replay", "lemma-4.8", "--format", "json", "--samples", "300", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn mutated_lattice_fails_replay() {
    let o = run(&["replay", "all", "--drop-norm", "-2:-5", "--samples", "100"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn hilbert_symbols() {
    assert_eq!(stdout(&run(&["hilbert", "-1", "-1"])), "-1\n");
    assert_eq!(stdout(&run(&["hilbert", "2", "-1"])), "1\n");
    let o = run(&["hilbert", "-1", "5", "--drop-norm", "-1:5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sum_rule_and_lattice() {
    assert_eq!(stdout(&run(&["sum-rule", "1", "1"])), "{1,2,5,10}\n");
    let o = run(&["sum-rule", "c", "-c", "--scenario", "case-b-3is1"]);
    assert!(stdout(&o).contains("may vanish"));
    let o = run(&["lattice", "case-b-k", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["all_index_2"], false);
    assert_eq!(v["lattice"]["groups"]["-2"], serde_json::json!(["1", "2"]));
}

#[test]
fn table_two_and_layout() {
    let o = run(&["table", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["table", "1"]);
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().starts_with("case"));
    assert!(text.contains("1+x/5"));
}

#[test]
fn demushkin_json() {
    let o = run(&["demushkin", "--p", "2", "--n", "2", "--s", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["abelianization"]["torsion"], 4);
    assert_eq!(v["abelianization"]["free_rank"], 3);
    assert_eq!(v["square_class_rank"], 4);
}

#[test]
fn probe_passes() {
    let o = run(&["probe", "--samples", "2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["replay", "lemma-9.9"]).status.code(), Some(2));
    assert_eq!(run(&["sum-rule", "3", "1"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--scenario", "case-c", "lattice"]).status.code(), Some(2));
    assert_eq!(run(&["table", "4"]).status.code(), Some(2));
}
