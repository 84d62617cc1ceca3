//! Symmetric Wyner model: the QMF fixed point for infinitely many cells, the
//! decode-forward baseline and the odd/even power allocation for CoF and RCoF.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gfield::GaussianPrime;
use crate::lattice::find_best_coefficients;
use crate::linalg::CMatrix;
use crate::quantized::{noise_entropy, pmf_from_sigma, sigma_eps, QuantGrid, DEFAULT_M_MAX};

use super::qmf::golden_max;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WynerParams {
    pub gamma: f64,
    pub snr: f64,
    pub r0: f64,
}

impl WynerParams {
    pub fn new(gamma: f64, snr: f64, r0: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::param(format!("gamma must lie in (0, 1], got {gamma}")));
        }
        if !(snr >= 0.0) || !snr.is_finite() {
            return Err(Error::param(format!("snr {snr}")));
        }
        if !(r0 >= 0.0) {
            return Err(Error::param(format!("backhaul rate {r0}")));
        }
        Ok(WynerParams { gamma, snr, r0 })
    }
}

/// `L × L` Wyner channel: unit diagonal, `γ` to both neighbours, wrapped
/// around for `L ≥ 3`.
pub fn wyner_channel(gamma: f64, l: usize) -> CMatrix {
    let mut h = CMatrix::identity(l, l);
    for i in 0..l {
        for j in [(i + 1) % l, (i + l - 1) % l] {
            if j != i {
                h[(i, j)] = Complex64::new(gamma, 0.0);
            }
        }
    }
    h
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    // Seed with four panels so periodic integrands are not mistaken for constants.
    let n = 4;
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = simpson(lo, hi, fa, fm, fb);
            adaptive(&f, lo, hi, fa, fm, fb, whole, tol / n as f64, 40)
        })
        .sum()
}

/// `F(r) = ∫₀¹ log2(1 + snr(1 − 2^{−r})(1 + 2γ cos 2πθ)²) dθ`.
pub fn qmf_wyner_integral(gamma: f64, snr: f64, r: f64) -> f64 {
    let gain = snr * (1.0 - (-r).exp2());
    if gain <= 0.0 {
        return 0.0;
    }
    integrate(
        |t| {
            let s = 1.0 + 2.0 * gamma * (2.0 * std::f64::consts::PI * t).cos();
            (1.0 + gain * s * s).log2()
        },
        0.0,
        1.0,
        1e-8,
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QmfWynerSolution {
    /// Per-user rate `F(r*)`.
    pub rate: f64,
    pub r_star: f64,
    /// `|F(r*) − (r0 − r*)|`.
    pub residual: f64,
}

/// Per-user QMF rate in the infinite Wyner model: the root of `F(r) = r0 − r`.
pub fn qmf_wyner_per_user(params: &WynerParams) -> QmfWynerSolution {
    let WynerParams { gamma, snr, r0 } = *params;
    if r0 == 0.0 || snr == 0.0 {
        return QmfWynerSolution { rate: 0.0, r_star: if snr == 0.0 { r0 } else { 0.0 }, residual: 0.0 };
    }
    let g = |r: f64| qmf_wyner_integral(gamma, snr, r) - (r0 - r);
    let (mut lo, mut hi) = (0.0, r0);
    while hi - lo > 1e-13 * r0.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let f = qmf_wyner_integral(gamma, snr, r);
    QmfWynerSolution { rate: f, r_star: r, residual: (f - (r0 - r)).abs() }
}

/// Per-user decode-forward rate `min{max(R1, R2), r0}`.
pub fn df_wyner_rate(params: &WynerParams) -> f64 {
    let WynerParams { gamma, snr, r0 } = *params;
    let g2 = gamma * gamma;
    let r1 = (1.0 + snr / (1.0 + 2.0 * g2 * snr)).log2();
    let r2 = (0.5 * (1.0 + 2.0 * g2 * snr).log2()).min((1.0 + (1.0 + 2.0 * g2) * snr).log2() / 3.0);
    r1.max(r2).min(r0)
}

/// Effective channels of odd and even cells when odd terminals use power `βP`
/// and even ones `(2 − β)P`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerAllocation {
    pub beta: f64,
    pub h_odd: Vec<Complex64>,
    pub h_even: Vec<Complex64>,
}

impl PowerAllocation {
    pub fn new(gamma: f64, beta: f64) -> Self {
        let (sb, sc) = (beta.sqrt(), (2.0 - beta).sqrt());
        let r = |x: f64| Complex64::new(x, 0.0);
        PowerAllocation {
            beta,
            h_odd: vec![r(gamma * sc), r(sb), r(gamma * sc)],
            h_even: vec![r(gamma * sb), r(sc), r(gamma * sb)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaScheme {
    /// Symmetric rate `min{r0, R_o, R_e}`.
    Cof,
    /// Average `½(min{r0, R_o} + min{r0, R_e})`.
    Rcof,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PaResult {
    pub beta: f64,
    /// Per-user rate at `beta`.
    pub rate: f64,
}

fn branch_rate(h: &[Complex64], snr: f64, grid: Option<&QuantGrid>) -> Result<f64> {
    let sol = find_best_coefficients(h, snr)?;
    Ok(match grid {
        None => sol.rate,
        Some(g) => {
            let pmf = pmf_from_sigma(g.p, sigma_eps(sol.sigma2, g), DEFAULT_M_MAX);
            (g.p.symbol_bits() - noise_entropy(&pmf)).max(0.0)
        }
    })
}

/// Per-user rate of the chosen scheme at a fixed `β`. With `p` the quantized
/// rates `2 log2 p − H(ζ)` replace the computation rates.
pub fn wyner_rate_at(params: &WynerParams, scheme: PaScheme, p: Option<GaussianPrime>, beta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::param(format!("beta {beta} outside [0, 1]")));
    }
    if params.snr == 0.0 {
        return Ok(0.0);
    }
    let grid = p.map(|p| QuantGrid::new(p, params.snr)).transpose()?;
    let pa = PowerAllocation::new(params.gamma, beta);
    let ro = branch_rate(&pa.h_odd, params.snr, grid.as_ref())?;
    let re = branch_rate(&pa.h_even, params.snr, grid.as_ref())?;
    let r0 = params.r0;
    Ok(match scheme {
        PaScheme::Cof => r0.min(ro).min(re),
        PaScheme::Rcof => 0.5 * (r0.min(ro) + r0.min(re)),
    })
}

/// Grid search over `β ∈ [0, 1]` with step 0.005, then golden-section
/// refinement around the best grid point.
pub fn wyner_power_allocation(params: &WynerParams, scheme: PaScheme, p: Option<GaussianPrime>) -> Result<PaResult> {
    let steps = 200;
    let mut best = PaResult { beta: 1.0, rate: wyner_rate_at(params, scheme, p, 1.0)? };
    for i in 0..steps {
        let beta = i as f64 / steps as f64;
        let rate = wyner_rate_at(params, scheme, p, beta)?;
        if rate > best.rate {
            best = PaResult { beta, rate };
        }
    }
    let lo = (best.beta - 1.0 / steps as f64).max(0.0);
    let hi = (best.beta + 1.0 / steps as f64).min(1.0);
    let (beta, rate) = golden_max(|b| wyner_rate_at(params, scheme, p, b).unwrap_or(f64::NEG_INFINITY), lo, hi, 1e-6);
    if rate > best.rate {
        best = PaResult { beta, rate };
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_shape() {
        let h = wyner_channel(0.5, 4);
        assert_eq!(h[(0, 3)].re, 0.5);
        assert_eq!(h[(0, 2)].re, 0.0);
        assert_eq!(h[(2, 2)].re, 1.0);
        let h2 = wyner_channel(0.5, 2);
        assert_eq!(h2[(0, 1)].re, 0.5);
    }

    #[test]
    fn integrate_cosine_square() {
        let v = integrate(|t| (2.0 * std::f64::consts::PI * t).cos().powi(2), 0.0, 1.0, 1e-10);
        assert!((v - 0.5).abs() < 1e-9);
    }

    #[test]
    fn df_gamma_zero_limit() {
        // γ → 0 is outside the model; evaluate the formula directly at a tiny γ.
        let p = WynerParams { gamma: 0.0, snr: 100.0, r0: 100.0 };
        assert!((df_wyner_rate(&p) - 101f64.log2()).abs() < 1e-12);
        assert_eq!(df_wyner_rate(&WynerParams { r0: 0.0, ..p }), 0.0);
    }

    #[test]
    fn uniform_power_is_beta_one() {
        let pa = PowerAllocation::new(0.7, 1.0);
        assert_eq!(pa.h_odd, pa.h_even);
        assert!((pa.h_odd[0].re - 0.7).abs() < 1e-15 && (pa.h_odd[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn qmf_fixed_point_trivial_cases() {
        let s = qmf_wyner_per_user(&WynerParams { gamma: 0.7, snr: 100.0, r0: 0.0 });
        assert_eq!(s.rate, 0.0);
        let s = qmf_wyner_per_user(&WynerParams { gamma: 0.7, snr: 0.0, r0: 3.0 });
        assert_eq!(s.rate, 0.0);
        let s = qmf_wyner_per_user(&WynerParams { gamma: 0.7, snr: 316.2, r0: 4.0 });
        assert!(s.residual <= 1e-6 && s.rate > 0.0 && s.rate < 4.0);
    }
}
