//! Acceptance suite: every criterion over Q, F_10007 and F_65537, one line each.
//! Runs without the test harness so the lines are always printed.

use std::process::ExitCode;

use rabcone::selftest::{default_fields, selftest};

fn main() -> ExitCode {
    let report = selftest(&default_fields(), 0);
    let lines = report.summary_lines();
    for line in &lines {
        println!("{line}");
    }
    let failed = lines.iter().filter(|l| l.contains("[FAIL]")).count();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed == 0 && report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
