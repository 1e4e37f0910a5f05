//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Items 1 to 10 run in-process at the standard profile with seed 7. Item 11
//! additionally runs the built binary twice and compares its output bytes.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rpp_cli::suite::{item_name, run_item, ItemReport, Profile, ITEM_IDS};

const SEED: u64 = 7;

/// Wall-clock limits in seconds, where the criterion sets one.
fn time_limit(id: u32) -> Option<f64> {
    match id {
        1 => Some(10.0),
        2 => Some(30.0),
        5 | 10 => Some(60.0),
        _ => None,
    }
}

fn failed_checks(report: &ItemReport) -> Vec<String> {
    report.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect()
}

fn quick_run_bytes() -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rpp"))
        .args(["suite", "run", "--quick", "--seed", &SEED.to_string()])
        .output()
        .map_err(|e| format!("cannot start rpp: {e}"))?;
    if !out.status.success() {
        return Err(format!("exit status {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn binary_is_deterministic() -> Result<(), String> {
    let first = quick_run_bytes()?;
    let second = quick_run_bytes()?;
    if first.is_empty() {
        return Err("empty output".into());
    }
    if first != second {
        return Err(format!("outputs differ ({} vs {} bytes)", first.len(), second.len()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut all_passed = true;
    for id in ITEM_IDS {
        let start = Instant::now();
        let report = run_item(id, Profile::Standard, SEED);
        let elapsed: Duration = start.elapsed();
        let mut problems = failed_checks(&report);
        if let Some(limit) = time_limit(id) {
            if elapsed.as_secs_f64() > limit {
                problems.push(format!("took {:.1} s, limit {limit} s", elapsed.as_secs_f64()));
            }
        }
        if id == 11 {
            if let Err(e) = binary_is_deterministic() {
                problems.push(format!("rpp suite run --quick: {e}"));
            }
        }
        let passed = problems.is_empty();
        all_passed &= passed;
        println!(
            "criterion {id:>2} {:<26} {} ({:.1} s)",
            item_name(id),
            if passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for p in problems {
            println!("    {p}");
        }
    }
    println!("acceptance: {}", if all_passed { "all criteria pass" } else { "FAILED" });
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
