use std::path::PathBuf;
use std::process::{Command, Output};

use codetutor_core::judge::ErrorType;
use codetutor_eval::{render_report, Format, Report};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn eval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eval"))
        .args(args)
        .env_remove("LLM_API_KEY")
        .env_remove("LLM_MODEL")
        .output()
        .expect("eval binary runs")
}

fn stdout(output: &Output) -> String {
    assert!(
        output.status.success(),
        "eval failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn failure_rate_report_from_fixtures() {
    let out = eval(&[
        "failure-rate",
        "--bank",
        &path("eval_bank.json"),
        "--mock",
        &path("mock/tutor.json"),
    ]);
    let text = stdout(&out);
    let Report::FailureRate(report) = Report::from_json(&text).unwrap() else {
        panic!("wrong report kind");
    };
    assert_eq!(report.n, 108);
    assert_eq!(report.per_type[&ErrorType::HardCoding].n_i, 23);
    assert_eq!(report.per_type[&ErrorType::UnnecessaryCode].n_i, 19);
    assert!(text.contains("\"R_i\": 21.30"), "{text}");
    assert!(text.contains("\"R_i\": 17.59"), "{text}");

    let again = render_report(&Report::FailureRate(report), Format::Json).unwrap();
    assert_eq!(again, text, "rendering is stable across a parse");
}

#[test]
fn failure_rate_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rates.csv");
    let out = eval(&[
        "failure-rate",
        "--bank",
        &path("eval_bank.json"),
        "--mock",
        &path("mock/tutor.json"),
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("error_type,n_i,N,R_i"));
    assert!(text.contains("HardCoding,23,108,21.30\n"), "{text}");
    assert!(text.contains("UnnecessaryCode,19,108,17.59\n"), "{text}");
}

#[test]
fn latency_and_cost_reports() {
    let latency = stdout(&eval(&[
        "latency",
        "--bank",
        &path("bank.json"),
        "--mock",
        &path("mock/tutor.json"),
    ]));
    let Report::Latency(report) = Report::from_json(&latency).unwrap() else {
        panic!("wrong report kind");
    };
    let names: Vec<&str> = report.profiles.iter().map(|p| p.profile.as_str()).collect();
    assert_eq!(names, ["initial", "improved"]);
    assert_eq!(report.profiles[0].stats.mean_ms, 620.0);
    assert_eq!(report.profiles[1].stats.mean_ms, 364.0);

    let cost = stdout(&eval(&[
        "cost",
        "--bank",
        &path("bank.json"),
        "--mock",
        &path("mock/tutor.json"),
        "--pricing",
        &path("pricing.json"),
        "--format",
        "csv",
    ]));
    let rows: Vec<&str> = cost.lines().collect();
    assert_eq!(
        rows[0],
        "profile,model_id,records,mean_input_tokens,mean_output_tokens,mean_usd,delta_pct,failures"
    );
    assert_eq!(rows[1], "initial,gpt-4,93,1830.00,641.00,0.09336,0.00,0");
    assert_eq!(rows[2], "improved,gpt-4,93,1450.00,513.00,0.07428,20.44,0");
}

#[test]
fn bad_arguments_fail_cleanly() {
    let out = eval(&[
        "failure-rate",
        "--bank",
        "/nonexistent/bank.json",
        "--mock",
        &path("mock/tutor.json"),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let out = eval(&[
        "latency",
        "--bank",
        &path("bank.json"),
        "--mock",
        &path("mock/tutor.json"),
        "--profiles",
        "nope",
    ]);
    assert!(!out.status.success());
}
