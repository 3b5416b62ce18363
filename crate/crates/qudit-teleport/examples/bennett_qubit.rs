//! The S = 2 special case: teleporting one qubit over one EPR pair.
//!
//! Runs all four measurement outcomes for a fixed input qubit and prints the
//! correction Bob applies for each, which lands exactly on the four cases of
//! standard single-qubit teleportation: identity, bit-flip, phase-flip, and
//! their product.
//!
//!     cargo run --example bennett_qubit

use num_complex::Complex64;
use qudit_teleport::oracle::dense_from_kernel;
use qudit_teleport::protocol::run_teleportation;
use qudit_teleport::{make_shape, GateSpec, Mode, OutcomeSelection};

fn main() -> qudit_teleport::Result<()> {
    let shape = make_shape(2, None)?;

    // 0.6|0⟩ + 0.8i|1⟩, an arbitrary point on the Bloch sphere.
    let input = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    println!("input qubit: 0.6|0> + 0.8i|1>");
    println!();

    let transcripts =
        run_teleportation(&shape, &input, Mode::Direct, OutcomeSelection::Exhaustive)?;

    let correction_names = [
        ((0, 0), "identity"),
        ((0, 1), "bit-flip"),
        ((1, 0), "bit-flip then phase-flip"),
        ((1, 1), "phase-flip"),
    ];

    for t in &transcripts {
        let (j, n) = (t.record.j, t.record.n);
        let name = correction_names
            .iter()
            .find(|((ej, en), _)| (*ej, *en) == (j, n))
            .map(|(_, name)| *name)
            .unwrap();
        println!(
            "outcome (j={j}, n={n})  probability {:.4}  correction: {name}",
            t.record.probability
        );
        let matrix = dense_from_kernel(&GateSpec::BobCorrection { j, n }, &shape)?;
        for row in 0..2 {
            println!(
                "    [{:>5.2} {:+.2}i   {:>5.2} {:+.2}i]",
                matrix.get(row, 0).re,
                matrix.get(row, 0).im,
                matrix.get(row, 1).re,
                matrix.get(row, 1).im
            );
        }
        println!(
            "    Bob before: [{:.3}{:+.3}i, {:.3}{:+.3}i]   after: [{:.3}{:+.3}i, {:.3}{:+.3}i]   fidelity {:.12}",
            t.bob_raw.amplitudes()[0].re,
            t.bob_raw.amplitudes()[0].im,
            t.bob_raw.amplitudes()[1].re,
            t.bob_raw.amplitudes()[1].im,
            t.bob_corrected.amplitudes()[0].re,
            t.bob_corrected.amplitudes()[0].im,
            t.bob_corrected.amplitudes()[1].re,
            t.bob_corrected.amplitudes()[1].im,
            t.fidelity
        );
        println!();
    }

    println!("every outcome recovered the input exactly; the sender's copy is gone.");
    Ok(())
}
