//! All fourteen acceptance criteria at full coverage, one PASS/FAIL line each.
//! Runs without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use lojacobi::suite::{overall, Status, Suite, SuiteConfig};

fn main() -> ExitCode {
    let mut suite = Suite::new(SuiteConfig { positivity_k: 6, ..SuiteConfig::default() });
    let mut results = Vec::new();
    for id in 1..=14 {
        let r = suite.run(id);
        println!("{}", r.summary_line());
        for (k, v) in &r.details {
            println!("       {k}: {v}");
        }
        for f in &r.failures {
            println!("       failure: {f}");
        }
        results.push(r);
    }
    let status = overall(&results);
    println!("acceptance: {}", status.name());
    if status == Status::Pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
