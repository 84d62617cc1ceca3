// Integer-forcing beamforming on a nearly singular downlink channel, where
// plain zero forcing wastes most of its power.

use std::error::Error;

use dascof::baselines::{dpc_sum_capacity, zfb_rate};
use dascof::gfield::GaussianPrime;
use dascof::ifb::ifb_rate;
use dascof::linalg::real_matrix;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = GaussianPrime::new(251)?;
    let hd = real_matrix(&[&[1.0, 0.98], &[1.0, 1.02]]);
    for snr_db in [10.0, 20.0, 30.0, 40.0] {
        let snr = 10f64.powf(snr_db / 10.0);
        let (design, report) = ifb_rate(&hd, snr, p)?;
        println!(
            "snr {snr_db:>4} dB: IFB {:.3}, ZFB {:.3}, DPC {:.3}, tr(BB^H) {:.1}",
            report.sum_rate,
            zfb_rate(&hd, snr)?,
            dpc_sum_capacity(&hd, snr)?,
            design.trace_power()
        );
    }
    let (design, _) = ifb_rate(&hd, 1e4, p)?;
    println!("precoder integer matrix:\n{}", design.a_tilde);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
