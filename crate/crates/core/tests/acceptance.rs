//! One pass/fail line per acceptance criterion; all comparisons are exact.

use brzeta::verify::{run_suite, VerifyOptions, SUITES};

#[test]
fn acceptance_criteria() {
    let opts = VerifyOptions::default();
    let mut failed = Vec::new();
    for name in SUITES {
        let report = run_suite(name, &opts).expect("known suite");
        println!("{report}");
        for c in report.failures() {
            let m = c.mismatch.as_ref().unwrap();
            println!("    {}: at {} expected {} got {}", c.label, m.monomial, m.expected, m.actual);
        }
        if !report.passed() {
            failed.push(report.criterion);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
