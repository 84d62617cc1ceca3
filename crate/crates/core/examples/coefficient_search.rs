// Best integer coefficients for one receiver: LLL then sphere enumeration.

use std::error::Error;

use dascof::lattice::{computation_rate, find_best_coefficients};
use dascof::linalg::c;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let h = [c(1.0, 0.2), c(0.7, -0.4), c(0.05, 0.0)];
    for snr_db in [0.0, 10.0, 20.0, 30.0] {
        let snr = 10f64.powf(snr_db / 10.0);
        let sol = find_best_coefficients(&h, snr)?;
        let a: Vec<String> = sol.a.iter().map(|z| z.to_string()).collect();
        println!("snr {snr_db:>4} dB: a = [{}], sigma2 = {:.4}, rate = {:.4}", a.join(", "), sol.sigma2, sol.rate);
        assert!((computation_rate(&h, &sol.a, snr)? - sol.rate).abs() < 1e-9);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
