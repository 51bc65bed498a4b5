//! Runs every acceptance criterion and prints one PASS/FAIL line each.
//!
//! Lines go straight to the stderr handle so they show up even when the
//! test harness captures output.

use std::io::Write;

use georadon::acceptance::{run_criterion, SuiteConfig, CRITERIA};

#[test]
fn acceptance_suite() {
    let cfg = SuiteConfig::default();
    let mut err = std::io::stderr().lock();
    writeln!(err).unwrap();
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let report = run_criterion(id, &cfg);
        writeln!(err, "{}  ({:.1}s)", report.summary_line(), report.seconds).unwrap();
        for check in report.checks.iter().filter(|c| !c.passed) {
            writeln!(err, "    failed check: {} value {:.10e} target {:.10e}", check.label, check.value, check.target).unwrap();
        }
        for note in &report.notes {
            writeln!(err, "    note: {note}").unwrap();
        }
        if !report.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
