//! The joint sender-side unitary as a product of two-body gates.
//!
//! The S·N-dimensional transformation factors as (Π_k U_Ck)·DFT_S·(Π_k U_Ck):
//! an XOR row, the qudit Fourier transform, and the same XOR row again. This
//! example reconstructs both sides as dense matrices and compares them
//! entrywise, then prints the S = 2 factors in full.
//!
//!     cargo run --example gate_decomposition

use qudit_teleport::oracle::{dense_from_kernel, dense_u_ac, DenseMatrix};
use qudit_teleport::{make_shape, GateSpec};

fn print_matrix(label: &str, matrix: &DenseMatrix) {
    println!("{label}:");
    for row in 0..matrix.rows() {
        let mut line = String::from("    ");
        for col in 0..matrix.cols() {
            let entry = matrix.get(row, col);
            line.push_str(&format!("{:+.3}{:+.3}i  ", entry.re, entry.im));
        }
        println!("{line}");
    }
}

fn main() -> qudit_teleport::Result<()> {
    println!("max entrywise |decomposed - equation| per S:");
    println!("    S   L   dimension   deviation");
    for s in 2..=8usize {
        let shape = make_shape(s, None)?;
        let equation = dense_u_ac(&shape)?;
        let decomposed = dense_from_kernel(&GateSpec::UAcDecomposed, &shape)?;
        let deviation = decomposed.max_entry_diff(&equation)?;
        println!(
            "    {s}   {}   {:>4}x{:<4}   {deviation:.3e}",
            shape.qubit_count(),
            equation.rows(),
            equation.cols()
        );
    }
    println!();

    // The S = 2 factors, small enough to read.
    let shape = make_shape(2, None)?;
    print_matrix(
        "DFT_2 (the Hadamard)",
        &dense_from_kernel(&GateSpec::DftS, &shape)?,
    );
    println!();
    print_matrix(
        "U_C0 (XOR bit 0 of the qudit label into qubit A_0)",
        &dense_from_kernel(&GateSpec::CtrlXor(0), &shape)?,
    );
    println!();
    print_matrix(
        "joint unitary from its defining equation",
        &dense_u_ac(&shape)?,
    );
    println!();
    print_matrix(
        "U_C0 . DFT_2 . U_C0 reconstructed from the kernels",
        &dense_from_kernel(&GateSpec::UAcDecomposed, &shape)?,
    );
    Ok(())
}
