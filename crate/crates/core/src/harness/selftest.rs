//! Quick oracle checks behind the `selftest` subcommand.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::model::{draw_matrix, ChannelModel};
use crate::baselines::{cdpc_rate, cooperative_bound, czfb_rate, dpc_sum_capacity, zfb_rate};
use crate::gfield::{FqElem, GaussianInt, GaussianPrime, IntMatrix};
use crate::ifb::ifb_rate;
use crate::lattice::{effective_noise_variance, find_best_coefficients};
use crate::quantized::{mod_then_quantize, pmf_from_sigma, quantize_then_mod, DEFAULT_M_MAX};
use crate::schemes::lemma2_product;

#[derive(Clone, Debug, Default)]
pub struct SelftestReport {
    /// `(name, passed, detail)`.
    pub checks: Vec<(String, bool, String)>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    fn record(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push((name.to_string(), passed, detail));
    }
}

fn field_axioms(p: GaussianPrime) -> bool {
    let all: Vec<FqElem> = FqElem::all(p).collect();
    let (zero, one) = (FqElem::zero(p), FqElem::one(p));
    all.iter().all(|&a| {
        a + zero == a
            && a * one == a
            && a + (-a) == zero
            && (a.is_zero() || a * a.inverse().expect("nonzero") == one)
            && all.iter().all(|&b| a + b == b + a && a * b == b * a)
    }) && all.iter().step_by(3).all(|&a| {
        all.iter().step_by(5).all(|&b| all.iter().step_by(7).all(|&c| a * (b + c) == a * b + a * c && (a * b) * c == a * (b * c)))
    })
}

/// Exhaustive minimum of `σ²` over the box `|Re|, |Im| ≤ r`, two users.
fn box_minimum(h: &[num_complex::Complex64], snr: f64, r: i64) -> f64 {
    let mut best = f64::INFINITY;
    let vals: Vec<GaussianInt> = (-r..=r).flat_map(|a| (-r..=r).map(move |b| GaussianInt::new(a, b))).collect();
    for &x in &vals {
        for &y in &vals {
            if let Ok((s, _)) = effective_noise_variance(h, &[x, y], snr) {
                best = best.min(s);
            }
        }
    }
    best
}

pub fn run_selftest(seed: u64) -> SelftestReport {
    let mut report = SelftestReport::default();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let p7 = GaussianPrime::new(7).expect("7 is a Gaussian prime");
    let rayleigh2 = ChannelModel::Rayleigh { k: 2, l: 1 };

    report.record("field axioms, p = 7", field_axioms(p7), "exhaustive identities, sampled triples".into());

    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let snr = [1.0, 10.0, 100.0][i % 3];
        let h: Vec<_> = draw_matrix(&rayleigh2, 1, 2, &mut rng).iter().copied().collect();
        let found = find_best_coefficients(&h, snr).map(|s| s.sigma2).unwrap_or(f64::NAN);
        let oracle = box_minimum(&h, snr, 3);
        worst = worst.max((found - oracle).abs() / oracle);
    }
    report.record("coefficient search vs box oracle", worst <= 1e-9, format!("max relative gap {worst:.2e}"));

    let sums: Vec<f64> = [0.3, 1.0, 3.0].iter().map(|&s| pmf_from_sigma(p7, s, DEFAULT_M_MAX).probs.iter().sum()).collect();
    report.record(
        "noise pmf normalization",
        sums.iter().all(|s| (s - 1.0).abs() < 1e-12),
        format!("sums {sums:?}"),
    );

    let sawtooth = (0..2000).all(|i| {
        let x = -40.0 + 0.0371 * i as f64 + 0.0013;
        quantize_then_mod(x, p7) == mod_then_quantize(x, p7)
    });
    report.record("quantize/modulo commutation", sawtooth, "2000 grid points".into());

    let mut lemma_ok = true;
    let mut tested = 0;
    for t in 0..40u64 {
        let a = IntMatrix::from_fn(4, 4, |i, j| GaussianInt::new(((i * 7 + j * 3) as i64 + t as i64 * 5) % 9 - 4, ((i + 2 * j) as i64 * (t as i64 + 1)) % 5 - 2));
        if a.reduce(p7).rank() < 4 {
            continue;
        }
        tested += 1;
        lemma_ok &= lemma2_product(&a, p7).is_ok_and(|m| m == crate::gfield::FqMatrix::identity(4, p7));
    }
    report.record("finite-field inverse identity", lemma_ok && tested > 0, format!("{tested} full-rank matrices"));

    let model = ChannelModel::Rayleigh { k: 3, l: 3 };
    let mut sandwich = true;
    let mut ifb_ok = true;
    let p = GaussianPrime::new(251).expect("251 is a Gaussian prime");
    for i in 0..10 {
        let hd = draw_matrix(&model, 3, 3, &mut rng);
        let snr = 10f64.powf(0.5 * (i % 5) as f64);
        let r0 = 1.0 + (i % 4) as f64;
        let ok = (|| -> crate::Result<bool> {
            let (cz, cd, coop) = (czfb_rate(&hd, snr, r0)?, cdpc_rate(&hd, snr, r0)?, cooperative_bound(&hd, snr)?);
            let (zf, dpc) = (zfb_rate(&hd, snr)?, dpc_sum_capacity(&hd, snr)?);
            Ok(cz <= cd + 1e-6 && cd <= coop + 1e-6 && zf <= dpc + 1e-6)
        })();
        sandwich &= ok.unwrap_or(false);
        ifb_ok &= match (ifb_rate(&hd, snr, p), zfb_rate(&hd, snr)) {
            (Ok((_, r)), Ok(z)) => r.sum_rate >= z - 1e-9,
            _ => false,
        };
    }
    report.record("downlink dominance sandwich", sandwich, "10 Rayleigh 3x3 draws".into());
    report.record("IFB at least ZFB", ifb_ok, "10 Rayleigh 3x3 draws".into());
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let r = run_selftest(1);
        assert!(r.passed(), "{:?}", r.checks);
    }
}
