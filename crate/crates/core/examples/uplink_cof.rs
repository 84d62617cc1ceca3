// Uplink compute-and-forward on a sparse channel: the system matrix splits
// into independent blocks and each block runs at its own bottleneck rate.

use std::error::Error;

use dascof::gfield::GaussianPrime;
use dascof::linalg::real_matrix;
use dascof::schemes::{build_system_matrix, cof_sum_rate, network_decompose, rcof_sum_rate};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = GaussianPrime::new(251)?;
    let snr = 100.0;
    let h = real_matrix(&[
        &[1.0, 0.6, 0.0, 0.0],
        &[0.5, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 1.2, 0.0],
        &[0.0, 0.0, 0.3, 0.9],
    ]);
    let sys = build_system_matrix(&h, snr, p)?;
    println!("integer matrix A =\n{}", sys.a);
    let dec = network_decompose(&sys.q);
    for b in &dec.blocks {
        println!("block: receivers {:?} users {:?}", b.rows, b.cols);
    }
    for r0 in [2.0, 6.0, f64::INFINITY] {
        let up = cof_sum_rate(&sys, r0)?;
        let down = rcof_sum_rate(&h.transpose(), snr, p, r0)?;
        println!("r0 {r0:>4}: CoF {:.3} bits ({} blocks), RCoF {:.3} bits", up.sum_rate, up.blocks, down.sum_rate);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
