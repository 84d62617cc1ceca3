// Downlink reference points on one channel: ZFB and DPC without backhaul
// limits, their compressed versions, and the cooperative upper bound.

use std::error::Error;

use dascof::baselines::{cdpc_rate, cooperative_bound, czfb_rate, dpc_sum_capacity, zfb_rate};
use dascof::baselines::{qf_rate, qmf_rate};
use dascof::linalg::real_matrix;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let hd = real_matrix(&[&[1.0, 0.5, 0.1], &[0.2, 1.0, 0.4], &[0.0, 0.6, 1.0]]);
    let snr = 100.0;
    println!("ZFB  {:.3}", zfb_rate(&hd, snr)?);
    println!("DPC  {:.3} (per-antenna power)", dpc_sum_capacity(&hd, snr)?);
    println!("coop {:.3}", cooperative_bound(&hd, snr)?);
    for r0 in [2.0, 4.0, 8.0] {
        println!(
            "r0 {r0}: CZFB {:.3}, CDPC {:.3}, QMF {:.3}, QF {:.3}",
            czfb_rate(&hd, snr, r0)?,
            cdpc_rate(&hd, snr, r0)?,
            qmf_rate(&hd.transpose(), snr, r0)?,
            qf_rate(&hd.transpose(), snr, r0)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
