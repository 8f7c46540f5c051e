use std::io::Write;

use mw_slice::checks::{check_all, Faults, Profile};

#[test]
fn acceptance_criteria() {
    let report = check_all(Profile::Full, Faults::default());
    // direct handle so the lines show even when libtest captures output
    let mut out = std::io::stdout().lock();
    for c in &report.criteria {
        writeln!(out, "{c}").unwrap();
    }
    drop(out);
    let failed: Vec<u32> = report
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.id)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
    assert_eq!(report.criteria.len(), 11);
}
