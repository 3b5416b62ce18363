//! Seeded measurement sampling against the exact uniform distribution.
//!
//! Draws 20000 outcomes for a qutrit teleportation and compares each
//! observed frequency with the exact probability 1/12, reporting the pull in
//! standard deviations. Rerunning with the same seed reproduces the counts
//! exactly; a different seed gives a fresh sample.
//!
//!     cargo run --example sampling_statistics

use qudit_teleport::protocol::{random_amplitudes, run_teleportation};
use qudit_teleport::{make_shape, Mode, OutcomeSelection};

fn sample_counts(seed: u64, trials: usize) -> qudit_teleport::Result<Vec<usize>> {
    let shape = make_shape(3, None)?;
    let input = random_amplitudes(3, 2025);
    let transcripts = run_teleportation(
        &shape,
        &input,
        Mode::Direct,
        OutcomeSelection::Sampled { seed, trials },
    )?;
    let mut counts = vec![0usize; 3 * shape.n_dim()];
    for t in &transcripts {
        counts[t.record.j * shape.n_dim() + t.record.n] += 1;
    }
    Ok(counts)
}

fn main() -> qudit_teleport::Result<()> {
    let trials = 20_000usize;
    let p = 1.0 / 12.0;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();

    let counts = sample_counts(99, trials)?;
    println!("{trials} samples of a 12-outcome uniform distribution (seed 99):");
    println!("    j  n    count   frequency    pull (sigma)");
    for (idx, &count) in counts.iter().enumerate() {
        let frequency = count as f64 / trials as f64;
        println!(
            "    {}  {}   {count:>6}   {frequency:.6}    {:+.2}",
            idx / 4,
            idx % 4,
            (frequency - p) / sigma
        );
    }
    println!("exact probability is 1/12 = {p:.6}, sigma = {sigma:.6}");
    println!();

    let rerun = sample_counts(99, trials)?;
    println!(
        "same seed reproduces the counts exactly: {}",
        if rerun == counts { "yes" } else { "NO" }
    );
    let other = sample_counts(100, trials)?;
    println!(
        "a different seed draws a different sample: {}",
        if other != counts { "yes" } else { "NO" }
    );
    Ok(())
}
