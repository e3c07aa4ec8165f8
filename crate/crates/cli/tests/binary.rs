use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superhopf"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn full_verification_at_one_one_passes() {
    let o = run(&["--m", "1", "--n", "1", "verify", "--samples", "200", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn hopf_suite_at_two_one_passes() {
    let o = run(&["--m", "2", "--n", "1", "verify", "--suite", "hopf"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn large_symbolic_hopf_needs_opt_in() {
    let o = run(&["--m", "2", "--n", "2", "verify", "--suite", "hopf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--allow-large"));
}

#[test]
fn unknown_generator_is_a_usage_error() {
    let o = run(&["nf", "y11"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("y11"));
}

#[test]
fn classical_mode_rejects_other_q() {
    let o = run(&["--mode", "classical", "--q", "2", "nf", "x11"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn normal_form_text_output() {
    let o = run(&["nf", "(x11+xi12)*(x11-xi12)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x11*x11 + (q - 1)*x11*xi12");
}

#[test]
fn normal_form_json_output() {
    let o = run(&["--json", "nf", "xi12*x11"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"][0]["coeff"], "q");
    assert_eq!(v["terms"][0]["word"], serde_json::json!([[1, 1], [1, 2]]));
}

#[test]
fn comultiplication_of_a_generator() {
    let o = run(&["delta", "xi12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("x11 ⊗ xi12") || text.contains("x11⊗xi12"), "{text}");
}

#[test]
fn berezinian_and_coaction_commands_run() {
    assert_eq!(run(&["berezinian"]).status.code(), Some(0));
    assert_eq!(run(&["coaction", "--dual", "1"]).status.code(), Some(0));
    assert_eq!(run(&["--m", "2", "--n", "1", "qdet", "--block", "11"]).status.code(), Some(0));
    assert_eq!(run(&["invcheck"]).status.code(), Some(0));
}

#[test]
fn tiny_budget_reports_exhaustion() {
    let o = run(&["--max-terms", "3", "verify", "--suite", "hopf"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}
