//! Quantize-map-forward and quantize-forward uplink rates.

use crate::error::{Error, Result};
use crate::linalg::{log2det_identity_plus, CMatrix};
use crate::schemes::check_backhaul;

pub const MAX_QMF_RELAYS: usize = 12;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximizes a concave function on `[lo, hi]` by golden-section search.
pub(crate) fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

fn qmf_inner(h: &CMatrix, snr: f64, r0: f64, r: f64) -> f64 {
    let l = h.nrows();
    let gain = snr * (1.0 - (-r).exp2());
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << l) {
        let size = mask.count_ones() as f64;
        let rest: Vec<usize> = (0..l).filter(|i| mask & (1 << i) == 0).collect();
        let sub = h.select_rows(&rest);
        let v = size * (r0 - r) + log2det_identity_plus(&sub, gain);
        best = best.min(v);
    }
    best
}

/// QMF sum rate `max_r min_S |S|(r0 − r) + log2 det(I + snr(1 − 2^{−r}) H_{Sᶜ}H_{Sᶜ}ᴴ)`
/// for an `L × K` uplink channel (rows are antenna terminals).
pub fn qmf_rate(h: &CMatrix, snr: f64, r0: f64) -> Result<f64> {
    check_backhaul(r0)?;
    if h.nrows() > MAX_QMF_RELAYS {
        return Err(Error::TooManyRelays { relays: h.nrows(), limit: MAX_QMF_RELAYS });
    }
    if !(snr >= 0.0) || r0 == 0.0 || h.nrows() == 0 {
        return Ok(0.0);
    }
    if !r0.is_finite() {
        return Ok(log2det_identity_plus(h, snr));
    }
    let (_, v) = golden_max(|r| qmf_inner(h, snr, r0, r), 0.0, r0, 1e-10);
    Ok(v.max(0.0))
}

/// QF sum rate `log2 det(I + snr·D·HHᴴ)` with `D = diag(1 / (1 + D_ℓ))` and
/// `D_ℓ = (1 + snr‖h_ℓ‖²) / (2^{r0} − 1)`.
pub fn qf_rate(h: &CMatrix, snr: f64, r0: f64) -> Result<f64> {
    check_backhaul(r0)?;
    if r0 == 0.0 {
        return Ok(0.0);
    }
    let denom = r0.exp2() - 1.0;
    let mut scaled = h.clone();
    for i in 0..h.nrows() {
        let dl = (1.0 + snr * h.row(i).norm_squared()) / denom;
        let w = (1.0 / (1.0 + dl)).sqrt();
        scaled.row_mut(i).scale_mut(w);
    }
    Ok(log2det_identity_plus(&scaled, snr))
}

/// Greedy AT selection for QF: add, one at a time, the antenna terminal whose
/// row gives the largest QF sum rate, until `target` rows are active.
pub fn greedy_qf_selection(h: &CMatrix, snr: f64, r0: f64, target: usize) -> Result<(Vec<usize>, f64)> {
    check_backhaul(r0)?;
    if target > h.nrows() {
        return Err(Error::param(format!("cannot activate {target} of {} relays", h.nrows())));
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(target);
    let mut best_rate = 0.0;
    while chosen.len() < target {
        let mut step: Option<(usize, f64)> = None;
        for i in (0..h.nrows()).filter(|i| !chosen.contains(i)) {
            let mut trial = chosen.clone();
            trial.push(i);
            trial.sort_unstable();
            let rate = qf_rate(&h.select_rows(&trial), snr, r0)?;
            if step.is_none_or(|s| rate > s.1) {
                step = Some((i, rate));
            }
        }
        let (i, rate) = step.expect("target does not exceed the relay count");
        chosen.push(i);
        chosen.sort_unstable();
        best_rate = rate;
    }
    Ok((chosen, best_rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real_matrix};

    #[test]
    fn qf_scalar_example() {
        let r = qf_rate(&real_matrix(&[&[1.0]]), 1.0, 1.0).unwrap();
        assert!((r - (4.0f64 / 3.0).log2()).abs() < 1e-12);
        assert_eq!(qf_rate(&real_matrix(&[&[1.0]]), 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn qmf_limits() {
        let h = CMatrix::from_fn(3, 2, |i, j| c(0.3 * i as f64 + 0.1, 0.2 * j as f64 - 0.4));
        assert_eq!(qmf_rate(&h, 10.0, 0.0).unwrap(), 0.0);
        let full = log2det_identity_plus(&h, 10.0);
        assert!((qmf_rate(&h, 10.0, 60.0).unwrap() - full).abs() < 1e-6);
    }

    #[test]
    fn qmf_relay_limit() {
        let h = CMatrix::zeros(13, 2);
        assert!(matches!(qmf_rate(&h, 1.0, 1.0), Err(Error::TooManyRelays { .. })));
    }

    #[test]
    fn qf_greedy_prefers_strong_rows() {
        let h = real_matrix(&[&[0.1, 0.0], &[3.0, 0.1], &[0.0, 2.0], &[0.2, 0.2]]);
        let (chosen, rate) = greedy_qf_selection(&h, 10.0, 4.0, 2).unwrap();
        assert_eq!(chosen, vec![1, 2]);
        assert!((rate - qf_rate(&h.select_rows(&[1, 2]), 10.0, 4.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8 && v.abs() < 1e-15);
    }
}
