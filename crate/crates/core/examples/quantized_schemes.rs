// Scalar-quantized receivers: the discrete noise pmf, its entropy and the
// QCoF, LQF and RQCoF sum rates for a small prime.

use std::error::Error;

use dascof::gfield::GaussianPrime;
use dascof::linalg::real_matrix;
use dascof::quantized::{
    lqf_sum_rate, noise_entropy, pmf_from_sigma, qcof_sum_rate, rqcof_sum_rate, DEFAULT_M_MAX,
};
use dascof::schemes::cof_sum_rate;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = GaussianPrime::new(7)?;
    for sigma in [0.2, 0.5, 1.0, 3.0] {
        let pmf = pmf_from_sigma(p, sigma, DEFAULT_M_MAX);
        println!("sigma_eps {sigma}: H = {:.4} bits, P(0) = {:.4}", noise_entropy(&pmf), pmf.probs[0]);
    }

    let h = real_matrix(&[&[1.0, 0.4, 0.0], &[0.0, 1.0, 0.5], &[0.3, 0.0, 1.0]]);
    let (snr, r0) = (1000.0, 6.0);
    let sys = dascof::schemes::build_system_matrix(&h, snr, p)?;
    println!("CoF   {:.3}", cof_sum_rate(&sys, r0)?.sum_rate);
    println!("QCoF  {:.3}", qcof_sum_rate(&h, snr, p, r0)?.sum_rate);
    println!("LQF   {:.3}", lqf_sum_rate(&h, snr, p, r0)?.sum_rate);
    println!("RQCoF {:.3}", rqcof_sum_rate(&h, snr, p, r0)?.sum_rate);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
