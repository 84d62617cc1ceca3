// Greedy antenna selection: 12 antennas serve 4 users over a sparse channel.

use std::error::Error;

use dascof::gfield::GaussianPrime;
use dascof::harness::{draw_uplink, ChannelModel};
use dascof::schemes::{build_system_matrix, cof_sum_rate};
use dascof::selection::at_select_cof;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = GaussianPrime::new(251)?;
    let model = ChannelModel::BernoulliGaussian { q: 0.4, k: 4, l: 12 };
    let (snr, r0) = (100.0, 6.0);
    for trial in 0..3 {
        let h = draw_uplink(&model, 11, trial);
        let sys = build_system_matrix(&h, snr, p)?;
        match at_select_cof(&sys, r0) {
            Ok(sel) => {
                let rate = cof_sum_rate(&sys.select_rows(&sel.chosen), r0)?;
                println!("trial {trial}: antennas {:?} -> {:.3} bits", sel.chosen, rate.sum_rate);
            }
            Err(e) => println!("trial {trial}: no full-rank selection ({e})"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
