//! The full verification suite, printed as a table per S.
//!
//! Runs every check the `verify` subcommand runs: dense unitarity of all
//! gates, equivalence of both joint-transformation realizations with the
//! defining equation, exhaustive XOR injectivity, outcome uniformity,
//! teleportation fidelity in both modes, mode agreement, subspace
//! confinement, and no-signalling.
//!
//!     cargo run --example verify_claims

use qudit_teleport::make_shape;
use qudit_teleport::oracle::{check_all, DENSE_DIM_CAP};

fn main() -> qudit_teleport::Result<()> {
    let mut all_passed = true;
    for s in [2usize, 3, 4, 6, 8] {
        let shape = make_shape(s, None)?;
        let report = check_all(&shape, 16, 1, DENSE_DIM_CAP)?;
        println!(
            "S = {s} (L = {}, {} checks, trials = {}):",
            report.qubit_count,
            report.checks.len(),
            report.trials
        );
        println!(
            "    {:<36} {:>12} {:>10}   verdict",
            "check", "worst", "tolerance"
        );
        for check in &report.checks {
            let verdict = if check.skipped {
                "skip"
            } else if check.passed {
                "pass"
            } else {
                "FAIL"
            };
            println!(
                "    {:<36} {:>12.3e} {:>10.0e}   {verdict}",
                check.name, check.worst_deviation, check.tolerance
            );
        }
        println!();
        all_passed &= report.passed;
    }
    if !all_passed {
        println!("at least one check failed");
        std::process::exit(1);
    }
    println!("all checks passed");
    Ok(())
}
