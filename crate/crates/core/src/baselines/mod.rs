//! Reference schemes: QMF, QF, DF, compressed DPC and zero-forcing, and the
//! Wyner-model power allocation for CoF / RCoF.

mod dpc;
mod qmf;
mod wyner;

pub use dpc::{per_antenna_dpc, sum_power_dpc, DpcOptions, DpcSolution};
pub use qmf::{greedy_qf_selection, qf_rate, qmf_rate, MAX_QMF_RELAYS};
pub use wyner::{
    df_wyner_rate, integrate, qmf_wyner_integral, qmf_wyner_per_user, wyner_channel, wyner_power_allocation,
    wyner_rate_at, PaResult, PaScheme, PowerAllocation, QmfWynerSolution, WynerParams,
};

use crate::error::{Error, Result};
use crate::linalg::{inverse, row_norm_sqr, CMatrix};
use crate::schemes::check_backhaul;

/// Rows `b_ℓ` of `Hd⁻¹` with squared norms.
fn inverse_row_norms(hd: &CMatrix) -> Result<Vec<f64>> {
    let b = inverse(hd)?;
    Ok((0..b.nrows()).map(|i| row_norm_sqr(&b, i)).collect())
}

/// Compressed zero-forcing beamforming,
/// `Σ_ℓ log2(1 + (snr/‖b‖²) / (1 + (1 + ‖h̃_ℓ‖² snr) / (2^{r0} − 1)))`.
/// As in [`zfb_rate`], `‖b‖²` is the largest row norm of `Hd⁻¹`, which keeps
/// every antenna within its power budget.
pub fn czfb_rate(hd: &CMatrix, snr: f64, r0: f64) -> Result<f64> {
    check_backhaul(r0)?;
    if r0 == 0.0 {
        return Ok(0.0);
    }
    let worst = inverse_row_norms(hd)?.into_iter().fold(0.0, f64::max);
    let denom = r0.exp2() - 1.0;
    Ok((0..hd.nrows())
        .map(|l| {
            let penalty = 1.0 + (1.0 + row_norm_sqr(hd, l) * snr) / denom;
            (1.0 + snr / worst / penalty).log2()
        })
        .sum())
}

/// Zero-forcing with the precoder scaled so the strongest antenna meets `snr`:
/// `L · log2(1 + snr / max_ℓ ‖b_ℓ‖²)`.
pub fn zfb_rate(hd: &CMatrix, snr: f64) -> Result<f64> {
    let norms = inverse_row_norms(hd)?;
    let worst = norms.iter().copied().fold(0.0, f64::max);
    Ok(norms.len() as f64 * (1.0 + snr / worst).log2())
}

/// Compressed DPC: the CP quantizes the precoded signals, which leaves per-antenna
/// power `snr(1 − 2^{−r0})` and raises the noise at UT `ℓ` to
/// `1 + ‖h̃_ℓ‖² snr 2^{−r0}`.
pub fn cdpc_solution(hd: &CMatrix, snr: f64, r0: f64) -> Result<DpcSolution> {
    check_backhaul(r0)?;
    let zero = DpcSolution { capacity: 0.0, lower: 0.0, upper: 0.0, lambda: vec![], powers: vec![], iterations: 0 };
    if r0 == 0.0 {
        return Ok(zero);
    }
    let q = (-r0).exp2();
    let mut scaled = hd.clone();
    for l in 0..hd.nrows() {
        let noise = 1.0 + row_norm_sqr(hd, l) * snr * q;
        scaled.row_mut(l).unscale_mut(noise.sqrt());
    }
    per_antenna_dpc(&scaled, snr * (1.0 - q), &DpcOptions::default())
}

pub fn cdpc_rate(hd: &CMatrix, snr: f64, r0: f64) -> Result<f64> {
    Ok(cdpc_solution(hd, snr, r0)?.capacity)
}

/// Per-antenna DPC sum capacity with unit noise (no backhaul limit).
pub fn dpc_sum_capacity(hd: &CMatrix, snr: f64) -> Result<f64> {
    Ok(per_antenna_dpc(hd, snr, &DpcOptions::default())?.capacity)
}

/// Sum capacity with full cooperation and a total power `L·snr` spread freely
/// over the antennas; upper-bounds every downlink scheme here.
pub fn cooperative_bound(hd: &CMatrix, snr: f64) -> Result<f64> {
    sum_power_dpc(hd, hd.ncols() as f64 * snr)
}

/// Greedy user selection for CZFB: repeatedly add the user giving the largest
/// CZFB sum rate until `target` users are served. With `stop_early` the search
/// also ends once no remaining user increases the rate.
pub fn greedy_zf_user_selection(
    h: &CMatrix,
    snr: f64,
    r0: f64,
    target: usize,
    stop_early: bool,
) -> Result<(Vec<usize>, f64)> {
    if target > h.ncols() {
        return Err(Error::param(format!("cannot serve {target} users with {} antennas", h.ncols())));
    }
    let mut chosen: Vec<usize> = Vec::new();
    let mut best_rate = 0.0;
    while chosen.len() < target {
        let mut step: Option<(usize, f64)> = None;
        for k in (0..h.nrows()).filter(|k| !chosen.contains(k)) {
            let mut trial = chosen.clone();
            trial.push(k);
            trial.sort_unstable();
            let rate = czfb_subset_rate(h, &trial, snr, r0);
            let bar = match step {
                Some(s) => s.1,
                None if stop_early => best_rate,
                None => f64::NEG_INFINITY,
            };
            if rate > bar {
                step = Some((k, rate));
            }
        }
        match step {
            Some((k, rate)) => {
                chosen.push(k);
                chosen.sort_unstable();
                best_rate = rate;
            }
            None => break,
        }
    }
    Ok((chosen, best_rate))
}

/// CZFB rate for a user subset served by all antennas (pseudo-inverse precoder).
fn czfb_subset_rate(h: &CMatrix, users: &[usize], snr: f64, r0: f64) -> f64 {
    if r0 == 0.0 {
        return 0.0;
    }
    let sub = h.select_rows(users);
    let gram = &sub * sub.adjoint();
    let Ok(ginv) = inverse(&gram) else {
        return 0.0;
    };
    // Precoder Hᴴ(HHᴴ)⁻¹ with a common stream power set by its heaviest antenna row.
    let b = sub.adjoint() * ginv;
    let worst = (0..b.nrows()).map(|i| row_norm_sqr(&b, i)).fold(0.0, f64::max);
    if !(worst > 0.0) || !worst.is_finite() {
        return 0.0;
    }
    let denom = r0.exp2() - 1.0;
    users
        .iter()
        .map(|&k| {
            let penalty = 1.0 + (1.0 + row_norm_sqr(h, k) * snr) / denom;
            (1.0 + snr / worst / penalty).log2()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;

    #[test]
    fn czfb_identity_example() {
        let snr: f64 = 10.0;
        let r0: f64 = 3.0;
        let want = (1.0 + snr / (1.0 + (1.0 + snr) / (r0.exp2() - 1.0))).log2();
        assert!((czfb_rate(&CMatrix::identity(1, 1), snr, r0).unwrap() - want).abs() < 1e-12);
        assert_eq!(czfb_rate(&CMatrix::identity(2, 2), snr, 0.0).unwrap(), 0.0);
        let zfb = zfb_rate(&CMatrix::identity(2, 2), snr).unwrap();
        assert!((czfb_rate(&CMatrix::identity(2, 2), snr, 200.0).unwrap() - zfb).abs() < 1e-9);
        let hd = real_matrix(&[&[1.0, 0.8], &[0.1, 1.0]]);
        let zfb = zfb_rate(&hd, snr).unwrap();
        assert!((czfb_rate(&hd, snr, 200.0).unwrap() - zfb).abs() < 1e-9);
    }

    #[test]
    fn zfb_and_dpc_agree_on_identity() {
        let snr: f64 = 20.0;
        let want = 3.0 * (1.0 + snr).log2();
        assert!((zfb_rate(&CMatrix::identity(3, 3), snr).unwrap() - want).abs() < 1e-12);
        assert!((dpc_sum_capacity(&CMatrix::identity(3, 3), snr).unwrap() - want).abs() < 1e-6);
    }

    #[test]
    fn cdpc_scalar_closed_form() {
        let (snr, r0): (f64, f64) = (10.0, 1.5);
        let h = real_matrix(&[&[0.8]]);
        let q = (-r0).exp2();
        let noise = 1.0 + 0.64 * snr * q;
        let want = (1.0 + snr * (1.0 - q) * 0.64 / noise).log2();
        assert!((cdpc_rate(&h, snr, r0).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn singular_channel_is_an_error() {
        let h = real_matrix(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(zfb_rate(&h, 1.0), Err(Error::Singular));
    }
}
