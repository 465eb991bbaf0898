//! Runs every verification suite and prints one line per suite.

use lsym::checks::{run_suite, CheckOptions, Suite};

fn main() -> lsym::error::Result<()> {
    let opts = CheckOptions::default();
    for suite in Suite::ALL {
        let rep = run_suite(suite, &opts)?;
        println!("{:<20} {} ({} checks, {:.2}s)", suite.to_string(), if rep.passed { "PASS" } else { "FAIL" }, rep.outcomes.len(), rep.seconds);
    }
    Ok(())
}
