//! Full acceptance battery: runs every verification criterion at its full
//! sampling volume and prints one pass/fail line per criterion.

use std::io::Write;

use maninlab_core::suite::{run_all, SuiteConfig};

/// Writes through the raw stream so the lines are visible in test output
/// even when the harness captures the print macros.
fn emit(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

/// Per-criterion wall-clock budgets in milliseconds (0 = no budget).
const BUDGET_MS: [u128; 10] =
    [5_000, 30_000, 0, 0, 0, 0, 0, 120_000, 0, 0];

#[test]
fn acceptance_criteria() {
    let cfg = SuiteConfig::default();
    let results = run_all(&cfg);
    let mut ok = true;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        emit(format!(
            "criterion {:2} [{}] {} — {} ({} checks, {} ms)",
            r.id, verdict, r.name, r.detail, r.checks, r.runtime_ms
        ));
        if !r.passed {
            ok = false;
        }
        let budget = BUDGET_MS[r.id - 1];
        if budget > 0 && r.runtime_ms > budget {
            emit(format!(
                "criterion {:2} exceeded its {} ms budget ({} ms)",
                r.id, budget, r.runtime_ms
            ));
            ok = false;
        }
    }
    assert!(ok, "one or more acceptance criteria failed");
}

#[test]
fn structural_corruption_is_detected() {
    assert!(maninlab_core::suite::detects_corruption());
}
