//! Acceptance gate: runs the full verification suite and prints one
//! pass/fail line per criterion before asserting that all of them hold.

use sphereval_core::verify::run_all;
use sphereval_core::Config;

#[test]
fn acceptance_criteria() {
    let cfg = Config {
        // keep the Monte Carlo oracle at full strength but pin the seed
        seed: 0,
        ..Config::default()
    };
    let results = run_all(&cfg);
    assert_eq!(results.len(), 11);
    let mut all_ok = true;
    for (idx, r) in results.iter().enumerate() {
        let tag = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:2} [{}] {:<36} residual {:.3e} (tolerance {:.1e}) - {}",
            idx + 1,
            tag,
            r.check,
            r.residual,
            r.tolerance,
            r.detail
        );
        all_ok &= r.passed();
    }
    assert!(all_ok, "one or more acceptance criteria failed");
}
