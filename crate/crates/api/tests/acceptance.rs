//! End-to-end acceptance checks. Every check runs against the mock gateway
//! and prints one PASS/FAIL line; the process fails if any check fails.
//!
//! Run with `cargo test -p codetutor-api --test acceptance`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use codetutor_core::bank::{load_bank, Bank, DatasetRecord};
use codetutor_core::gateway::{estimate_cost, LlmUsage, MockReply, MockRule, MockScript, PricingTable};
use codetutor_core::judge::{CorrectnessVerdict, ErrorType, VerdictState};
use codetutor_core::review::{
    fenced_blocks, leak_similarity, parse_review_response, redact_solution_leak, run_review_pipeline, FixLine,
    PromptProfile, ReviewOutcome, WITHHELD,
};
use codetutor_core::validate::{strip_comments, validate_source, ValidationErrorKind, Verdict};
use codetutor_eval::{
    cost_bench, evaluate_submissions, failure_rate, latency_bench, EvalRecord, FailureRateReport, RunOptions,
};

use common::{app, fixture, fixture_bank, get, mock_gateway, post};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn ctx<E: Display>(what: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{what}: {e}")
}

struct Line {
    passed: bool,
}

fn run(name: &str, budget: Option<Duration>, check: impl FnOnce() -> Check) -> Line {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let result = match (result, budget) {
        (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, budget {limit:.2?}")),
        (r, _) => r,
    };
    let ms = elapsed.as_secs_f64() * 1000.0;
    match &result {
        Ok(detail) => println!("PASS  {name:<28} {detail} [{ms:.0} ms]"),
        Err(why) => println!("FAIL  {name:<28} {why} [{ms:.0} ms]"),
    }
    Line { passed: result.is_ok() }
}

fn load_script(name: &str) -> Result<MockScript, String> {
    MockScript::load(fixture(name)).map_err(ctx(name))
}

fn load_json(name: &str) -> Result<Value, String> {
    let text = std::fs::read_to_string(fixture(name)).map_err(ctx(name))?;
    serde_json::from_str(&text).map_err(ctx(name))
}

fn reply_text(reply: &Value) -> &str {
    reply.as_str().or_else(|| reply["text"].as_str()).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// failure rates

/// Codes the tutor script grades as wrong, read straight from the script file.
fn scripted_failures(script: &Value) -> BTreeSet<String> {
    let mut codes = BTreeSet::new();
    for rule in script["rules"].as_array().into_iter().flatten() {
        let when: Vec<&str> = rule["when"]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_str)
            .collect();
        if when.first() != Some(&"## Grading Rules") || !reply_text(&rule["reply"]).starts_with("VERDICT: WRONG") {
            continue;
        }
        for needle in &when[1..] {
            if let Some(code) = needle
                .strip_prefix("## Submitted Code\n```python\n")
                .and_then(|rest| rest.strip_suffix("\n```"))
            {
                codes.insert(code.to_string());
            }
        }
    }
    codes
}

/// Straight recount of `n_i` and `R_i` with no shared code.
fn brute_force(records: &[EvalRecord]) -> BTreeMap<ErrorType, (usize, f64)> {
    let n = records.len();
    let mut out = BTreeMap::new();
    for t in ErrorType::ALL {
        if !records.iter().any(|r| r.record.error_type == Some(t)) {
            continue;
        }
        let mut n_i = 0;
        for r in records {
            if r.record.error_type == Some(t) && r.verdict.state != VerdictState::Correct {
                n_i += 1;
            }
        }
        out.insert(t, (n_i, 100.0 * n_i as f64 / n as f64));
    }
    out
}

fn agrees(report: &FailureRateReport, oracle: &BTreeMap<ErrorType, (usize, f64)>, n: usize) -> Result<(), String> {
    ensure!(report.n == n, "N = {} but {} records", report.n, n);
    ensure!(
        report.per_type.keys().eq(oracle.keys()),
        "types {:?} vs oracle {:?}",
        report.per_type.keys().collect::<Vec<_>>(),
        oracle.keys().collect::<Vec<_>>()
    );
    for (t, (n_i, r_i)) in oracle {
        let got = &report.per_type[t];
        ensure!(got.n_i == *n_i, "{t}: n_i {} vs oracle {n_i}", got.n_i);
        ensure!((got.r_i - r_i).abs() < 1e-9, "{t}: R_i {} vs oracle {r_i}", got.r_i);
    }
    Ok(())
}

fn synthetic_record(id: usize, rng: &mut ChaCha8Rng) -> EvalRecord {
    let label = *ErrorType::ALL.choose(rng).unwrap();
    let state = *VerdictState::ALL.choose(rng).unwrap();
    let error_type = (state == VerdictState::Wrong).then_some(label);
    EvalRecord {
        record_id: id,
        record: DatasetRecord {
            ex_id: format!("ex{}", id % 7),
            title: String::new(),
            desc: String::new(),
            solution: "print(1)".into(),
            sub_code: format!("print({id})"),
            solved_subs: 0,
            total_subs: 0,
            accuracy: 0.0,
            error_type: Some(label),
        },
        verdict: CorrectnessVerdict::new(state, "", error_type),
        usage: LlmUsage::default(),
        profile_name: "improved".into(),
    }
}

fn failure_rates() -> Check {
    let bank = load_bank(fixture("eval_bank.json")).map_err(ctx("eval_bank.json"))?;
    let (_, gateway) = mock_gateway(load_script("mock/tutor.json")?);
    let (records, failures) =
        evaluate_submissions(&bank, &PromptProfile::improved(), &gateway, 4).map_err(ctx("evaluate"))?;
    ensure!(failures.is_empty(), "gateway failures: {failures:?}");
    ensure!(
        records.len() == 108,
        "{} records evaluated, expected 108",
        records.len()
    );
    let report = failure_rate(&records).map_err(ctx("failure_rate"))?;

    let failing = scripted_failures(&load_json("mock/tutor.json")?);
    let mut from_files: BTreeMap<ErrorType, usize> = BTreeMap::new();
    for r in bank.records() {
        let label = r.error_type.ok_or("unlabelled fixture record")?;
        *from_files.entry(label).or_default() += usize::from(failing.contains(&r.sub_code));
    }
    for (t, n_i) in &from_files {
        let got = report.per_type.get(t).map_or(0, |r| r.n_i);
        ensure!(got == *n_i, "{t}: harness n_i {got}, fixture files say {n_i}");
    }
    agrees(&report, &brute_force(&records), records.len())?;

    let hc = &report.per_type[&ErrorType::HardCoding];
    let uc = &report.per_type[&ErrorType::UnnecessaryCode];
    ensure!(hc.n_i == 23 && uc.n_i == 19, "n_i HC {} UC {}", hc.n_i, uc.n_i);
    ensure!((hc.r_i - 21.30).abs() <= 0.005, "HardCoding R = {:.4}", hc.r_i);
    ensure!((uc.r_i - 17.59).abs() <= 0.005, "UnnecessaryCode R = {:.4}", uc.r_i);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut sizes = vec![1, 2, 108, 1000];
    sizes.extend((0..60).map(|_| rng.random_range(1..=1000)));
    for n in &sizes {
        let synthetic: Vec<EvalRecord> = (0..*n).map(|id| synthetic_record(id, &mut rng)).collect();
        let report = failure_rate(&synthetic).map_err(ctx("failure_rate"))?;
        agrees(&report, &brute_force(&synthetic), *n).map_err(|e| format!("random N={n}: {e}"))?;
    }

    Ok(format!(
        "HC {:.2}% UC {:.2}% (N=108); recount agrees on {} random fixtures",
        hc.r_i,
        uc.r_i,
        sizes.len()
    ))
}

// ---------------------------------------------------------------------------
// flow gating

fn flow_gating() -> Check {
    let bank = fixture_bank();
    let cases = load_json("flow_cases.json")?;
    let cases = cases.as_array().ok_or("flow_cases.json is not an array")?;
    ensure!(cases.len() == 50, "{} flow cases, expected 50", cases.len());
    let (mock, gateway) = mock_gateway(load_script("mock/flow.json")?);

    let mut tally: BTreeMap<(String, &str), usize> = BTreeMap::new();
    for profile in [PromptProfile::initial(), PromptProfile::improved()] {
        for (i, case) in cases.iter().enumerate() {
            let id = case["exercise_id"].as_str().unwrap_or_default();
            let source = case["source"].as_str().unwrap_or_default();
            let expect = case["expect"].as_str().unwrap_or_default();
            let exercise = bank
                .exercise(id)
                .ok_or_else(|| format!("case {i}: unknown exercise {id}"))?;

            mock.clear_log();
            let outcome = run_review_pipeline(exercise, source, &profile, &gateway)
                .map_err(|e| format!("case {i} ({}): {e}", profile.name))?;
            let calls = mock.call_count();
            let label = format!("case {i} {expect} under {}", profile.name);

            match (expect, profile.gate_submissions) {
                ("empty", true) => {
                    ensure!(calls == 0, "{label}: {calls} calls");
                    ensure!(outcome == ReviewOutcome::EmptySubmission, "{label}: {outcome:?}");
                }
                ("invalid", true) => {
                    ensure!(calls == 0, "{label}: {calls} calls");
                    let ReviewOutcome::Invalid(report) = &outcome else {
                        return Err(format!("{label}: {outcome:?}"));
                    };
                    let kind = case["kind"].as_str().unwrap_or_default();
                    ensure!(
                        report.findings.iter().any(|f| format!("{:?}", f.kind) == kind),
                        "{label}: expected {kind}, got {:?}",
                        report.kinds()
                    );
                }
                ("empty" | "invalid", false) => ensure!(calls >= 1, "{label}: no gateway call"),
                ("looks_good", _) => {
                    ensure!(calls == 1, "{label}: {calls} calls");
                    ensure!(matches!(outcome, ReviewOutcome::LooksGood(_)), "{label}: {outcome:?}");
                }
                ("review", _) => {
                    ensure!(calls == 2, "{label}: {calls} calls");
                    ensure!(matches!(outcome, ReviewOutcome::Reviewed(_)), "{label}: {outcome:?}");
                }
                _ => return Err(format!("{label}: unknown expectation")),
            }
            let recorded = outcome.usage().call_count as usize;
            ensure!(
                outcome.comment().is_none() || recorded == calls,
                "{label}: usage reports {recorded} calls, log has {calls}"
            );
            *tally.entry((profile.name.clone(), expect)).or_default() += 1;
        }
    }
    let counts: Vec<String> = ["empty", "invalid", "looks_good", "review"]
        .iter()
        .map(|e| format!("{e} {}", tally.get(&("improved".to_string(), *e)).copied().unwrap_or(0)))
        .collect();
    Ok(format!("50 cases x 2 profiles ({})", counts.join(", ")))
}

// ---------------------------------------------------------------------------
// latency and cost

struct ScriptedCall {
    input: u64,
    output: u64,
}

/// The RNP and RCG replies a profile's prompts select in the tutor script,
/// found by matching the profile's own template text against rule needles.
fn scripted_calls(script: &Value, profile: &PromptProfile) -> Result<(ScriptedCall, ScriptedCall), String> {
    let rcg_text: String = profile.rcg_sections.iter().map(|s| s.text.as_str()).collect();
    let mut rnp = None;
    let mut rcg = None;
    for rule in script["rules"].as_array().into_iter().flatten() {
        let when: Vec<&str> = rule["when"]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_str)
            .collect();
        let call = || ScriptedCall {
            input: rule["reply"]["input_tokens"].as_u64().unwrap_or(0),
            output: rule["reply"]["output_tokens"].as_u64().unwrap_or(0),
        };
        if when.len() == 1 && profile.rnp_template.contains(when[0]) && rnp.is_none() {
            rnp = Some(call());
        }
        if when.first() == Some(&"## Restriction") && when[1..].iter().all(|w| rcg_text.contains(w)) && rcg.is_none() {
            rcg = Some(call());
        }
    }
    Ok((
        rnp.ok_or_else(|| format!("no RNP rule for {}", profile.name))?,
        rcg.ok_or_else(|| format!("no RCG rule for {}", profile.name))?,
    ))
}

fn latency_and_cost() -> Check {
    let bank = fixture_bank();
    let script_json = load_json("mock/tutor.json")?;
    let pricing_json = load_json("pricing.json")?;
    let (_, gateway) = mock_gateway(load_script("mock/tutor.json")?);
    let pricing = PricingTable::load(fixture("pricing.json")).map_err(ctx("pricing.json"))?;
    let profiles = [PromptProfile::initial(), PromptProfile::improved()];
    let opts = RunOptions::default();

    let latency = latency_bench(&bank, &profiles, &gateway, opts).map_err(ctx("latency_bench"))?;
    let cost = cost_bench(&bank, &profiles, &gateway, &pricing, opts).map_err(ctx("cost_bench"))?;

    let base_ms = script_json["latency"]["base_ms"].as_f64().ok_or("latency.base_ms")?;
    let per_token_ms = script_json["latency"]["per_max_output_token_ms"]
        .as_f64()
        .ok_or("latency slope")?;
    let in_rate = pricing_json["gpt-4"]["input_usd_per_1k"].as_f64().ok_or("input rate")?;
    let out_rate = pricing_json["gpt-4"]["output_usd_per_1k"]
        .as_f64()
        .ok_or("output rate")?;

    let mut expected_ms = Vec::new();
    let mut expected_usd = Vec::new();
    for (i, profile) in profiles.iter().enumerate() {
        let (rnp, rcg) = scripted_calls(&script_json, profile)?;
        let input = (rnp.input + rcg.input) as f64;
        let output = (rnp.output.min(profile.rnp_max_output_tokens as u64)
            + rcg.output.min(profile.max_output_tokens as u64)) as f64;
        let usd = input / 1000.0 * in_rate + output / 1000.0 * out_rate;
        let ms = 2.0 * base_ms + per_token_ms * f64::from(profile.rnp_max_output_tokens + profile.max_output_tokens);

        let lat = &latency.profiles[i];
        let c = &cost.profiles[i];
        ensure!(
            lat.failures.is_empty() && c.failures.is_empty(),
            "{}: gateway failures",
            profile.name
        );
        ensure!(
            lat.stats.count == bank.records().len(),
            "{}: {} samples",
            profile.name,
            lat.stats.count
        );
        ensure!(
            (lat.stats.mean_ms - ms).abs() < 1e-9,
            "{}: mean {} ms, oracle {ms}",
            profile.name,
            lat.stats.mean_ms
        );
        ensure!(
            (c.mean_cost.usd - usd).abs() < 1e-12,
            "{}: mean ${}, oracle ${usd}",
            profile.name,
            c.mean_cost.usd
        );
        expected_ms.push(ms);
        expected_usd.push(usd);
    }
    // Hand sums: (380+1450, 1+640) and (350+1100, 1+512) tokens at 0.03/0.06 per 1k.
    ensure!(
        (expected_usd[0] - 0.09336).abs() < 1e-12,
        "oracle initial ${}",
        expected_usd[0]
    );
    ensure!(
        (expected_usd[1] - 0.07428).abs() < 1e-12,
        "oracle improved ${}",
        expected_usd[1]
    );

    let (initial_ms, improved_ms) = (latency.profiles[0].stats.mean_ms, latency.profiles[1].stats.mean_ms);
    ensure!(
        improved_ms < initial_ms,
        "improved {improved_ms} ms not below initial {initial_ms} ms"
    );
    let oracle_delta = (expected_usd[0] - expected_usd[1]) / expected_usd[0] * 100.0;
    let delta = cost.profiles[1].delta_pct.ok_or("no cost delta")?;
    ensure!(delta > 0.0, "cost delta {delta} not positive");
    ensure!(
        (delta - oracle_delta).abs() <= 0.01,
        "cost delta {delta:.4}% vs oracle {oracle_delta:.4}%"
    );
    Ok(format!(
        "latency {initial_ms:.1} -> {improved_ms:.1} ms; cost delta {delta:.3}% (oracle {oracle_delta:.3}%)"
    ))
}

// ---------------------------------------------------------------------------
// cost formula

fn usage(input: u64, output: u64) -> LlmUsage {
    LlmUsage {
        input_tokens: input,
        output_tokens: output,
        ..LlmUsage::default()
    }
}

fn cost_formula() -> Check {
    let mut pricing = PricingTable::default();
    pricing.insert("gpt-4", 0.03, 0.06);
    let usd = |u: &LlmUsage| {
        estimate_cost(u, &pricing, "gpt-4")
            .map(|c| c.usd)
            .map_err(ctx("estimate_cost"))
    };

    let point = usd(&usage(1000, 500))?;
    ensure!(point == 0.06, "estimate_cost(1000, 500) = {point:?}");
    ensure!(format!("{point:.5}") == "0.06000", "formatted as {point:.5}");
    ensure!(usd(&usage(0, 0))? == 0.0, "zero usage has a cost");

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for _ in 0..100 {
        let a = usage(rng.random_range(0..200_000), rng.random_range(0..50_000));
        let b = usage(rng.random_range(0..200_000), rng.random_range(0..50_000));
        let sum = usd(&(a + b))?;
        let parts = usd(&a)? + usd(&b)?;
        ensure!(
            (sum - parts).abs() <= 1e-12 * sum.max(1.0),
            "additivity: {sum} vs {parts}"
        );
        let k = rng.random_range(1..=20u64);
        let scaled = usd(&usage(a.input_tokens * k, a.output_tokens * k))?;
        ensure!(
            (scaled - k as f64 * usd(&a)?).abs() <= 1e-12 * scaled.max(1.0),
            "scaling by {k}"
        );
    }
    Ok(format!("0.06 -> \"{point:.5}\"; linear on 100 random pairs"))
}

// ---------------------------------------------------------------------------
// annotation round-trip

const WORDS: &[&str] = &[
    "check", "the", "loop", "bound", "rename", "variable", "convert", "input", "print", "result", "add", "colon",
];

fn hint(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(1..=6);
    (0..n)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

fn annotation_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut dropped_total = 0;
    let mut kept_total = 0;
    for case in 0..200 {
        let n_lines = rng.random_range(1..=25);
        let code: Vec<String> = (1..=n_lines).map(|k| format!("x{k} = {k}")).collect();
        let code = code.join("\n");

        let mut raw = format!("### Review\n{}.\n", hint(&mut rng));
        let decoy = rng.random_bool(0.5);
        if decoy {
            raw.push_str("```python\n### Code to fix\n- line 1: decoy inside a fence\n```\n");
        }
        let (section, level) = *[("Code to fix", "###"), ("code to fix", "##"), ("Code To Fix:", "###")]
            .choose(&mut rng)
            .unwrap();
        raw.push_str(&format!("{level} {section}\n"));
        let mut kept = Vec::new();
        let mut dropped = Vec::new();
        for _ in 0..rng.random_range(0..=8) {
            let line = rng.random_range(0..=n_lines + 5);
            let entry = FixLine {
                line,
                hint: hint(&mut rng),
            };
            let bullet = ["-", "*", "+"].choose(&mut rng).unwrap();
            let word = ["line", "Line", "LINE"].choose(&mut rng).unwrap();
            raw.push_str(&format!("{bullet} {word} {}: {}\n", entry.line, entry.hint));
            if (1..=n_lines).contains(&line) {
                kept.push(entry);
            } else {
                dropped.push(entry);
            }
        }
        let tail = rng.random_bool(0.5);
        if tail {
            raw.push_str(&format!("{level} Next steps\nKeep going.\n"));
        }

        let parsed = parse_review_response(&raw, &code);
        ensure!(
            parsed.fix_lines == kept,
            "case {case}: fix lines {:?}, expected {kept:?}",
            parsed.fix_lines
        );
        ensure!(
            parsed.dropped == dropped,
            "case {case}: dropped {:?}, expected {dropped:?}",
            parsed.dropped
        );
        ensure!(
            !parsed.body_markdown.to_lowercase().contains("code to fix") || decoy,
            "case {case}: section left in body"
        );
        ensure!(
            !decoy || parsed.body_markdown.contains("decoy inside a fence"),
            "case {case}: decoy removed"
        );
        ensure!(
            !tail || parsed.body_markdown.ends_with("Keep going."),
            "case {case}: trailing section lost"
        );
        kept_total += kept.len();
        dropped_total += dropped.len();
    }
    Ok(format!(
        "200 reviews, {kept_total} annotations recovered, {dropped_total} out of bounds dropped"
    ))
}

// ---------------------------------------------------------------------------
// leak redaction

fn leak_redaction() -> Check {
    let bank = fixture_bank();
    let mut cases = 0;
    for profile in [PromptProfile::initial(), PromptProfile::improved()] {
        for exercise in bank.exercises() {
            let rcg = format!(
                "### Review\nCompare with this:\n```python\n{}\n```\n### Code to fix\n- line 1: start over",
                exercise.solution
            );
            let (_, gateway) = mock_gateway(MockScript {
                rules: vec![
                    MockRule::new(["Answer with only `yes` or `no`."], MockReply::text("yes")),
                    MockRule::new(["## Restriction"], MockReply::text(rcg)),
                ],
                ..MockScript::default()
            });
            let outcome = run_review_pipeline(exercise, "print(0)", &profile, &gateway)
                .map_err(|e| format!("{}: {e}", exercise.id))?;
            let comment = outcome
                .comment()
                .ok_or_else(|| format!("{}: {outcome:?}", exercise.id))?;
            ensure!(comment.redaction.leaked, "{}: leak not reported", exercise.id);
            ensure!(
                comment.redaction.max_similarity == 1.0,
                "{}: similarity {}",
                exercise.id,
                comment.redaction.max_similarity
            );
            ensure!(
                comment.body_markdown.contains(WITHHELD),
                "{}: block not replaced",
                exercise.id
            );
            ensure!(
                fenced_blocks(&comment.body_markdown).is_empty(),
                "{}: fence survived",
                exercise.id
            );
            cases += 1;
        }
    }

    let similarity = leak_similarity("a b c x y", "a b c d e");
    ensure!((similarity - 0.2).abs() < 1e-12, "Jaccard example gives {similarity}");
    let body = "Try something like\n```python\na b c x y\n```";
    let (kept, report) = redact_solution_leak(body, "a b c d e", 0.6);
    ensure!(kept == body && !report.leaked, "Jaccard 0.2 example was redacted");
    Ok(format!(
        "{cases} verbatim leaks withheld; Jaccard {similarity:.1} block kept"
    ))
}

// ---------------------------------------------------------------------------
// validator

fn kinds(source: &str) -> (Verdict, BTreeSet<String>) {
    let report = validate_source(source);
    let kinds = report.findings.iter().map(|f| format!("{:?}", f.kind)).collect();
    (report.verdict, kinds)
}

/// Breaks a program in one of four ways, or leaves it alone.
fn mutate(code: &str, rng: &mut ChaCha8Rng) -> String {
    let mut lines: Vec<String> = code.lines().map(str::to_string).collect();
    match rng.random_range(0..5) {
        0 => {
            if let Some(l) = lines.iter_mut().find(|l| l.trim_end().ends_with(':')) {
                l.truncate(l.trim_end().len() - 1);
            }
        }
        1 => {
            if let Some(l) = lines.iter_mut().rev().find(|l| l.contains(')')) {
                let at = l.rfind(')').unwrap();
                l.remove(at);
            }
        }
        2 => lines.push("print('unfinished".into()),
        3 => {
            if let Some(l) = lines
                .iter_mut()
                .find(|l| l.starts_with("    ") && !l.starts_with("     "))
            {
                *l = format!("  {}", l.trim_start());
            }
        }
        _ => {}
    }
    lines.join("\n")
}

/// Adds full-line and trailing comments without quotes. Trailing comments
/// only go on lines without quotes, so they never land inside a string.
fn add_comments(code: &str, rng: &mut ChaCha8Rng) -> String {
    let mut out = Vec::new();
    for (i, line) in code.lines().enumerate() {
        if rng.random_bool(0.3) {
            let indent = " ".repeat(rng.random_range(0..=9));
            out.push(format!("{indent}# note {i}: {}", WORDS.choose(rng).unwrap()));
        }
        if rng.random_bool(0.3) && !line.contains(['\'', '"', '#']) {
            out.push(format!("{line}  # {}", WORDS.choose(rng).unwrap()));
        } else {
            out.push(line.to_string());
        }
    }
    if rng.random_bool(0.3) {
        out.push("# end".into());
    }
    out.join("\n")
}

fn validator_suite() -> Check {
    use ValidationErrorKind::*;
    type Example = (&'static str, Verdict, Vec<(ValidationErrorKind, usize)>);
    let examples: [Example; 4] = [
        ("print('hi')", Verdict::Valid, vec![]),
        ("", Verdict::Invalid, vec![(EmptySource, 1)]),
        ("if x > 0\n    print(x)", Verdict::Invalid, vec![(MissingColon, 1)]),
        ("print('hi", Verdict::Invalid, vec![(UnterminatedString, 1)]),
    ];
    for (source, verdict, findings) in examples {
        let report = validate_source(source);
        ensure!(report.verdict == verdict, "{source:?}: {:?}", report.verdict);
        ensure!(report.kinds() == findings, "{source:?}: {:?}", report.kinds());
    }
    let indent = validate_source("def f():\n   x=1\n     y=2\n  z=3");
    ensure!(
        indent.verdict == Verdict::Invalid && indent.kinds().contains(&(BadIndentation, 4)),
        "indent example: {:?}",
        indent.kinds()
    );
    for (source, stripped) in [
        ("x = 1  # set x", "x = 1"),
        ("print('#tag')", "print('#tag')"),
        ("# only a comment\ny = 2", "y = 2"),
    ] {
        ensure!(
            strip_comments(source) == stripped,
            "strip_comments({source:?}) = {:?}",
            strip_comments(source)
        );
    }

    let eval_bank: Bank = load_bank(fixture("eval_bank.json")).map_err(ctx("eval_bank.json"))?;
    let bases: BTreeSet<&str> = eval_bank
        .exercises()
        .map(|e| e.solution.as_str())
        .chain(eval_bank.records().iter().map(|r| r.sub_code.as_str()))
        .collect();
    let bases: Vec<&str> = bases.into_iter().collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut invalid = 0;
    for i in 0..100 {
        let program = mutate(bases.choose(&mut rng).unwrap(), &mut rng);
        let commented = add_comments(&program, &mut rng);
        let stripped = strip_comments(&commented);
        ensure!(
            strip_comments(&stripped) == stripped,
            "program {i}: strip_comments not idempotent"
        );
        let plain = kinds(&program);
        ensure!(
            kinds(&commented) == plain,
            "program {i}: comments changed {:?} -> {:?}\n{commented}",
            plain,
            kinds(&commented)
        );
        ensure!(
            kinds(&stripped) == plain,
            "program {i}: stripping changed {:?} -> {:?}",
            plain,
            kinds(&stripped)
        );
        invalid += usize::from(plain.0 == Verdict::Invalid);
    }
    Ok(format!(
        "5 examples exact; 100 programs ({invalid} invalid) comment-invariant"
    ))
}

// ---------------------------------------------------------------------------
// API scan

fn adversarial_script(bank: &Bank) -> MockScript {
    let mut rules = Vec::new();
    for ex in bank.exercises() {
        let desc = ex.description.trim().to_string();
        let fenced = format!("```python\n{}\n```", ex.solution);
        rules.push(MockRule::new(
            [desc.clone(), "## Restriction".into()],
            MockReply::text(format!(
                "### Review\nJust copy this:\n{fenced}\nor without a language tag:\n```\n{}\n```\n### Code to fix\n- line 1: replace with the code above",
                ex.solution
            )),
        ));
        rules.push(MockRule::new(
            [desc, "## Grading Rules".into()],
            MockReply::text(format!(
                "VERDICT: WRONG\nTYPE: HardCoding\nThe expected program is\n{fenced}"
            )),
        ));
    }
    rules.push(MockRule::new(
        ["Answer with only `yes` or `no`."],
        MockReply::text("yes"),
    ));
    MockScript {
        rules,
        ..MockScript::default()
    }
}

fn scan(body: &Value, solutions: &[&str], threshold: f64) -> Result<(), String> {
    let keys = common::keys(body);
    ensure!(!keys.iter().any(|k| k == "solution"), "payload has a solution field");
    for text in common::strings(body) {
        for block in fenced_blocks(&text) {
            for solution in solutions {
                let sim = leak_similarity(&block.content, solution);
                ensure!(
                    sim < threshold,
                    "fenced block with similarity {sim:.2}: {:?}",
                    block.content
                );
            }
        }
    }
    Ok(())
}

async fn api_scan() -> Check {
    let bank = fixture_bank();
    let threshold = PromptProfile::improved()
        .leak_threshold
        .min(PromptProfile::initial().leak_threshold);
    let (mock, router) = app(bank.clone(), adversarial_script(&bank));
    let all: Vec<&str> = bank.exercises().map(|e| e.solution.as_str()).collect();
    let mut responses = 0;
    let mut withheld = 0;

    for path in ["/health", "/exercises", "/exercises/not-an-exercise"] {
        let (_, body) = get(&router, path).await;
        scan(&body, &all, threshold).map_err(|e| format!("GET {path}: {e}"))?;
        responses += 1;
    }
    for ex in bank.exercises() {
        let path = format!("/exercises/{}", ex.id);
        let (status, body) = get(&router, &path).await;
        ensure!(status.is_success(), "GET {path}: {status}");
        scan(&body, &[&ex.solution], threshold).map_err(|e| format!("GET {path}: {e}"))?;
        responses += 1;
    }
    for profile in ["initial", "improved"] {
        for (i, record) in bank.records().iter().enumerate() {
            let solution = &bank.exercise(&record.ex_id).ok_or("record without exercise")?.solution;
            let req = json!({"exercise_id": record.ex_id, "source": record.sub_code, "profile": profile});
            for path in ["/submissions", "/reviews"] {
                let (status, body) = post(&router, path, req.clone()).await;
                ensure!(
                    status.is_success() || status.as_u16() == 422,
                    "POST {path} record {i} ({profile}): {status} {body}"
                );
                scan(&body, &[solution], threshold).map_err(|e| format!("POST {path} record {i} ({profile}): {e}"))?;
                withheld += usize::from(common::strings(&body).iter().any(|s| s.contains(WITHHELD)));
                responses += 1;
            }
        }
    }
    ensure!(withheld > 0, "the adversarial script never triggered redaction");
    Ok(format!(
        "{responses} responses clean; {withheld} carried withheld blocks; {} model calls",
        mock.call_count()
    ))
}

fn main() -> ExitCode {
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .expect("tokio runtime");
    let secs = Duration::from_secs;
    let lines = [
        run("failure-rate fixture", Some(secs(1)), failure_rates),
        run("flow gating", Some(secs(5)), flow_gating),
        run("latency/cost comparison", Some(secs(10)), latency_and_cost),
        run("cost formula", None, cost_formula),
        run("annotation round-trip", None, annotation_round_trip),
        run("leak redaction", None, leak_redaction),
        run("validator suite", None, validator_suite),
        run("api anti-cheat scan", None, || runtime.block_on(api_scan())),
    ];
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
