use std::time::Instant;

use orelab_core::suites::{run_suite, suite_names, SuiteParams};

#[test]
fn every_suite_passes_with_defaults() {
    let params = SuiteParams::default();
    for name in suite_names() {
        let start = Instant::now();
        let report = run_suite(name, &params).unwrap_or_else(|e| panic!("{name}: {e}"));
        eprintln!("{name}: {} in {:.2?}", report.status, start.elapsed());
        assert!(report.passed(), "{report}");
    }
}
