//! Prints one line per acceptance criterion and exits non-zero if any fails.

use std::process::ExitCode;

use semigroup_ergodic::acceptance::{run, Fixture};

fn main() -> ExitCode {
    let fx = match Fixture::new(false) {
        Ok(fx) => fx,
        Err(e) => {
            eprintln!("acceptance fixture: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut failed = 0;
    for id in 1..=10 {
        let r = run(&fx, id);
        println!("{r}");
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
