// Small Monte Carlo sweep through the library harness, printed as CSV.

use std::error::Error;

use dascof::harness::{run_montecarlo, summarize, write_csv, ChannelModel, Scheme, Selection, SimConfig, SCHEMA_VERSION};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = SimConfig {
        schema_version: SCHEMA_VERSION,
        model: ChannelModel::BernoulliGaussian { q: 0.5, k: 3, l: 6 },
        snr_db: vec![10.0, 20.0],
        r0: vec![6.0],
        p: 7,
        schemes: vec![Scheme::Cof, Scheme::Qcof, Scheme::Lqf],
        trials: 20,
        selection: Selection::Greedy,
        seed: 5,
    };
    cfg.validate()?;
    let rows = run_montecarlo(&cfg)?;
    let mut csv = Vec::new();
    write_csv(&rows[..6], &mut csv)?;
    print!("{}", String::from_utf8(csv)?);
    for s in summarize(&rows) {
        println!("{} @ {} dB: mean {:.3}, outage {:.2}", s.scheme, s.snr_db, s.mean_sum_rate, s.outage_fraction);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
