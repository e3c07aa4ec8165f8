use superhopf_cli::suite::{run_suite, Mode, QValue, SuiteKind, VerificationConfig};

fn small_config() -> VerificationConfig {
    let mut cfg = VerificationConfig::new(1, 1, Mode::Quantum, QValue::Symbolic);
    cfg.samples = 100;
    cfg.trials = 10;
    cfg.seed = 7;
    cfg
}

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../report.schema.json");
    let value: serde_json::Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

#[test]
fn untimed_report_is_reproducible() {
    let cfg = small_config();
    let a = run_suite(&cfg).unwrap().to_json_untimed();
    let b = run_suite(&cfg).unwrap().to_json_untimed();
    assert_eq!(a, b);
}

#[test]
fn reports_match_the_schema() {
    let schema = schema();
    let mut configs = vec![small_config()];
    let mut classical = VerificationConfig::new(2, 1, Mode::Classical, QValue::Symbolic);
    classical.suites = vec![SuiteKind::Presentation, SuiteKind::Points];
    classical.samples = 50;
    classical.trials = 5;
    configs.push(classical);
    let mut tight = small_config();
    tight.suites = vec![SuiteKind::Hopf];
    tight.max_terms = 3;
    configs.push(tight);
    for cfg in configs {
        let report = run_suite(&cfg).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let msgs: Vec<String> = match schema.validate(&value) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| e.to_string()).collect(),
        };
        assert!(msgs.is_empty(), "schema violations: {msgs:?}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let schema = schema();
    let report = run_suite(&small_config()).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    value["status"] = "maybe".into();
    assert!(!schema.is_valid(&value));
}

#[test]
fn exit_code_follows_status() {
    let report = run_suite(&small_config()).unwrap();
    assert_eq!(report.exit_code(), 0);
    let mut tight = small_config();
    tight.suites = vec![SuiteKind::Hopf];
    tight.max_terms = 3;
    assert_eq!(run_suite(&tight).unwrap().exit_code(), 3);
}

#[test]
fn text_report_has_one_line_per_check_and_a_summary() {
    let report = run_suite(&small_config()).unwrap();
    let text = report.to_text();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), report.results.len() + 1);
    let n = report.results.len();
    assert!(lines[n].ends_with(&format!("{n}/{n} checks pass")), "{}", lines[n]);
}
