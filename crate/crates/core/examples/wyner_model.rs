// Symmetric Wyner model: CoF with and without power allocation against
// QMF and decode-forward.

use std::error::Error;

use dascof::baselines::{
    df_wyner_rate, qmf_wyner_per_user, wyner_power_allocation, wyner_rate_at, PaScheme, WynerParams,
};
use dascof::gfield::GaussianPrime;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = GaussianPrime::new(251)?;
    let snr = 10f64.powf(2.5);
    println!("r0    CoF  CoF-PA   beta  QCoF-PA    QMF     DF");
    for r0 in [2.0, 5.0, 8.0, 10.0] {
        let params = WynerParams::new(0.7, snr, r0)?;
        let pa = wyner_power_allocation(&params, PaScheme::Cof, None)?;
        let qpa = wyner_power_allocation(&params, PaScheme::Cof, Some(p))?;
        println!(
            "{r0:>4} {:>6.3} {:>7.3} {:>6.3} {:>8.3} {:>6.3} {:>6.3}",
            wyner_rate_at(&params, PaScheme::Cof, None, 1.0)?,
            pa.rate,
            pa.beta,
            qpa.rate,
            qmf_wyner_per_user(&params).rate,
            df_wyner_rate(&params)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
