//! The acceptance battery: one line per criterion, all ten must pass. Runs
//! without the libtest harness so the lines are always printed.

use std::process::ExitCode;

use kplus_cli::verify::{default_workers, Suite, VerifyOptions};

fn main() -> ExitCode {
    let suite = Suite::new(VerifyOptions { seed: 0, workers: default_workers() });
    let mut failed = Vec::new();
    for id in 1..=10 {
        let r = suite.run(id);
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
