//! The twelve acceptance criteria, one PASS/FAIL line each.
//!
//! Extra arguments restrict the run to suites whose name contains one of them,
//! e.g. `cargo test --test acceptance -- covariance qv`.

use std::process::ExitCode;
use std::time::Instant;

use frale_cli::checks::{run_suite, Budget, Suite, SuiteConfig, SuiteReport};

const SEED: u64 = 20_240_601;

fn suite_name(s: Suite) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn summary(report: &SuiteReport) -> String {
    report
        .verdicts
        .iter()
        .map(|v| format!("{}={}", v.check, if v.passed() { "ok" } else { "fail" }))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (i, &suite) in Suite::ACCEPTANCE.iter().enumerate() {
        let name = suite_name(suite);
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (passed, detail) = match run_suite(suite, &SuiteConfig::new(SEED), &Budget::unlimited()) {
            Ok(report) => {
                if !report.passed {
                    eprintln!("{}", serde_json::to_string_pretty(&report).unwrap_or_default());
                }
                (report.passed, summary(&report))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!passed);
        println!(
            "{} criterion {:>2} [{}] {}: {} ({:.1}s)",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            name,
            suite.title(),
            detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
