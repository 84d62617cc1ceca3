//! Effective-noise quadratic form, complex LLL, sphere enumeration and the
//! optimal integer-coefficient search for compute-and-forward.

mod enumerate;
mod lll;

pub use enumerate::{
    canonicalize, enumerate_short_vectors, enumerate_short_vectors_capped, is_canonical,
    DEFAULT_ENUMERATION_CAP,
};
pub use lll::{is_lll_reduced, lll_reduce, ReducedBasis, DEFAULT_DELTA};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gfield::GaussianInt;
use crate::linalg::CMatrix;

/// Best integer coefficients for one receiver.
#[derive(Clone, Debug, PartialEq)]
pub struct CofSolution {
    pub a: Vec<GaussianInt>,
    pub alpha: Complex64,
    pub sigma2: f64,
    pub rate: f64,
}

/// Tuning knobs for [`find_best_coefficients_with`].
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub delta: f64,
    pub cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { delta: DEFAULT_DELTA, cap: DEFAULT_ENUMERATION_CAP }
    }
}

fn check_inputs(h: &[Complex64], snr: f64) -> Result<()> {
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::param(format!("snr must be positive and finite, got {snr}")));
    }
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::param("channel vector has non-finite entries"));
    }
    Ok(())
}

/// `σ²(h, a)` and the MMSE scaling `α` for coefficient vector `a`.
pub fn effective_noise_variance(h: &[Complex64], a: &[GaussianInt], snr: f64) -> Result<(f64, Complex64)> {
    check_inputs(h, snr)?;
    if h.len() != a.len() {
        return Err(Error::dims(format!("h has {} entries, a has {}", h.len(), a.len())));
    }
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let h_norm2: f64 = h.iter().map(|z| z.norm_sqr()).sum();
    let a_norm2 = a.iter().map(|x| x.norm_sqr()).sum::<i64>() as f64;
    let ha: Complex64 = h.iter().zip(a).map(|(hk, ak)| hk.conj() * ak.to_complex()).sum();
    let denom = 1.0 + snr * h_norm2;
    let raw = snr * (a_norm2 - snr * ha.norm_sqr() / denom);
    // The smallest eigenvalue of the form is snr / (1 + snr‖h‖²).
    let floor = a_norm2 * snr / denom;
    let sigma2 = raw.max(floor);
    let alpha = ha * (snr / denom);
    Ok((sigma2, alpha))
}

/// `log2⁺(snr / σ²)`.
pub fn computation_rate(h: &[Complex64], a: &[GaussianInt], snr: f64) -> Result<f64> {
    let (sigma2, _) = effective_noise_variance(h, a, snr)?;
    Ok(rate_from_sigma2(snr, sigma2))
}

pub(crate) fn rate_from_sigma2(snr: f64, sigma2: f64) -> f64 {
    (snr / sigma2).log2().max(0.0)
}

/// Lower-triangular `L` with `L Lᴴ = snr·I − snr² hhᴴ / (1 + snr‖h‖²)`, so that
/// `σ²(h, a) = ‖Lᴴ a‖²`.
pub fn cholesky_factor(h: &[Complex64], snr: f64) -> Result<CMatrix> {
    check_inputs(h, snr)?;
    let k = h.len();
    let h_norm2: f64 = h.iter().map(|z| z.norm_sqr()).sum();
    let scale = snr * snr / (1.0 + snr * h_norm2);
    let m = CMatrix::from_fn(k, k, |i, j| {
        let diag = if i == j { snr } else { 0.0 };
        Complex64::new(diag, 0.0) - h[i] * h[j].conj() * scale
    });
    let ch = m.cholesky().ok_or(Error::Singular)?;
    Ok(ch.unpack())
}

/// Minimizes `σ²(h, a)` over nonzero `a ∈ Z[j]^K` with default LLL and cap settings.
pub fn find_best_coefficients(h: &[Complex64], snr: f64) -> Result<CofSolution> {
    find_best_coefficients_with(h, snr, &SearchConfig::default())
}

pub fn find_best_coefficients_with(h: &[Complex64], snr: f64, cfg: &SearchConfig) -> Result<CofSolution> {
    check_inputs(h, snr)?;
    if h.is_empty() {
        return Err(Error::dims("empty channel vector"));
    }
    let l = cholesky_factor(h, snr)?;
    let f = l.adjoint();
    let reduced = lll_reduce(&f, cfg.delta)?;
    let (_, shortest) = reduced.shortest_column();
    let radius = shortest * (1.0 + 1e-9);
    let candidates = enumerate_short_vectors_capped(&reduced, radius, cfg.cap)?;

    let mut best: Option<(f64, Vec<GaussianInt>)> = None;
    for a in candidates {
        let (s2, _) = effective_noise_variance(h, &a, snr)?;
        best = match best {
            None => Some((s2, a)),
            Some((bs, ba)) => {
                let tie = (s2 - bs).abs() <= 1e-12 * bs;
                if (!tie && s2 < bs) || (tie && a < ba) {
                    Some((s2, a))
                } else {
                    Some((bs, ba))
                }
            }
        };
    }
    // The shortest reduced column always lies inside the sphere.
    let (_, a) = best.expect("sphere contains the shortest basis column");
    let (sigma2, alpha) = effective_noise_variance(h, &a, snr)?;
    Ok(CofSolution { rate: rate_from_sigma2(snr, sigma2), a, alpha, sigma2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn scalar_noise_examples() {
        let (s, a) = effective_noise_variance(&[c(1.0, 0.0)], &[g(1, 0)], 1.0).unwrap();
        assert!((s - 0.5).abs() < 1e-12 && (a - c(0.5, 0.0)).norm() < 1e-12);
        let (s, a) = effective_noise_variance(&[c(2.0, 0.0)], &[g(1, 0)], 1.0).unwrap();
        assert!((s - 0.2).abs() < 1e-12 && (a - c(0.4, 0.0)).norm() < 1e-12);
        assert_eq!(effective_noise_variance(&[c(1.0, 0.0)], &[g(0, 0)], 1.0), Err(Error::ZeroVector));
    }

    #[test]
    fn rate_examples() {
        assert!((computation_rate(&[c(1.0, 0.0)], &[g(1, 0)], 1.0).unwrap() - 1.0).abs() < 1e-12);
        // σ² = 2 / 2.1 from the eigen-decomposition of 0.1·I + hhᴴ.
        let r = computation_rate(&[c(1.0, 0.0), c(1.0, 0.0)], &[g(1, 0), g(1, 0)], 10.0).unwrap();
        assert!((r - (10.0f64 / (2.0 / 2.1)).log2()).abs() < 1e-12);
        assert!((r - 3.392).abs() < 1e-3);
        assert_eq!(computation_rate(&[c(0.0, 0.0)], &[g(3, 0)], 1.0).unwrap(), 0.0);
    }

    #[test]
    fn cholesky_examples() {
        let l = cholesky_factor(&[c(0.0, 0.0); 3], 4.0).unwrap();
        assert!((l - CMatrix::identity(3, 3) * c(2.0, 0.0)).norm() < 1e-12);
        let l = cholesky_factor(&[c(1.0, 0.0)], 1.0).unwrap();
        assert!((l[(0, 0)].re - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn best_coefficient_examples() {
        let s = find_best_coefficients(&[c(2.0, 0.0)], 1.0).unwrap();
        assert_eq!(s.a, vec![g(1, 0)]);
        assert!((s.sigma2 - 0.2).abs() < 1e-12);
        let s = find_best_coefficients(&[c(1.0, 0.0), c(1.0, 0.0)], 100.0).unwrap();
        assert_eq!(s.a, vec![g(1, 0), g(1, 0)]);
        let s = find_best_coefficients(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 10.0).unwrap();
        assert_eq!(s.a, vec![g(1, 0), g(0, 0), g(0, 0)]);
    }

    #[test]
    fn rejects_bad_snr() {
        assert!(find_best_coefficients(&[c(1.0, 0.0)], 0.0).is_err());
        assert!(find_best_coefficients(&[c(f64::NAN, 0.0)], 1.0).is_err());
    }
}
