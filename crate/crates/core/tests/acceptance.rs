//! The acceptance gate: every criterion runs at its stated size with a
//! fixed seed and prints one line. Run with `--nocapture` to see the lines.

use ztree_core::suites;

#[test]
fn acceptance() {
    let seed = 7;
    let checks = suites::run_all(seed).expect("suites must run to completion");
    let mut all_ok = true;
    for (i, c) in checks.iter().enumerate() {
        let status = if c.ok() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:2} ({}): {} — {} checks, {} failures",
            i + 1,
            c.name,
            status,
            c.passed + c.failed,
            c.failed
        );
        if let Some(f) = &c.first_failure {
            println!("    first failure: {f}");
        }
        all_ok &= c.ok();
    }
    assert!(all_ok, "some acceptance criteria failed");
}
