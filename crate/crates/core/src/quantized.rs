//! Scalar-quantized compute-and-forward: the discrete effective-noise pmf, its
//! entropy, the QCoF / LQF / RQCoF sum rates and a symbol-level simulation of
//! the quantized transceiver chain.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::gfield::{mod_p_reduce, FqElem, FqMatrix, GaussianInt, GaussianPrime, IntMatrix};
use crate::lattice::effective_noise_variance;
use crate::linalg::CMatrix;
use crate::schemes::{
    build_system_matrix, channel_row, check_backhaul, decomposed_sum_rate, RateReport, SystemMatrix,
};

pub const DEFAULT_M_MAX: usize = 2;
const TAIL_TOLERANCE: f64 = 1e-12;

/// Shaping interval `τ = √(6·snr)` and the fine grid `(τ/p)Z[j]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantGrid {
    pub p: GaussianPrime,
    pub tau: f64,
    pub snr: f64,
}

impl QuantGrid {
    pub fn new(p: GaussianPrime, snr: f64) -> Result<Self> {
        if !(snr > 0.0) || !snr.is_finite() {
            return Err(Error::param(format!("snr must be positive and finite, got {snr}")));
        }
        Ok(QuantGrid { p, tau: (6.0 * snr).sqrt(), snr })
    }

    /// Spacing of the quantization grid.
    pub fn step(&self) -> f64 {
        self.tau / self.p.value() as f64
    }
}

/// Distribution of one real component `ν` of the quantized noise over `Z_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoisePmf {
    pub p: GaussianPrime,
    pub probs: Vec<f64>,
    pub sigma_eps: f64,
    /// `1 − Σ` of the truncated sums before renormalization.
    pub renormalized_mass: f64,
    /// Number of wrap-around terms actually summed.
    pub m_terms: usize,
}

/// Upper tail of the standard normal.
fn qfunc(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// `P(ε rounds to x)` for `ε ~ N(0, σ²)`.
fn phi(x: f64, sigma: f64) -> f64 {
    let lo = (2.0 * x - 1.0) / (2.0 * sigma);
    let hi = (2.0 * x + 1.0) / (2.0 * sigma);
    if x >= 0.0 {
        qfunc(lo) - qfunc(hi)
    } else {
        qfunc(-hi) - qfunc(-lo)
    }
}

/// Appendix-style pmf for a given `σ_ε`, summing at least `m_max` wrap-around
/// terms and more while the uncovered tail exceeds `1e-12`.
pub fn pmf_from_sigma(p: GaussianPrime, sigma_eps: f64, m_max: usize) -> NoisePmf {
    let pv = p.value() as usize;
    let pf = pv as f64;
    if !(sigma_eps > 0.0) {
        let mut probs = vec![0.0; pv];
        probs[0] = 1.0;
        return NoisePmf { p, probs, sigma_eps: 0.0, renormalized_mass: 0.0, m_terms: 0 };
    }
    let mut m_terms = m_max;
    while 2.0 * qfunc((pf * (m_terms as f64 + 1.0) - 0.5) / sigma_eps) > TAIL_TOLERANCE {
        m_terms += 1;
    }
    let mut probs = vec![0.0; pv];
    probs[0] = phi(0.0, sigma_eps) + 2.0 * (1..=m_terms).map(|m| phi(pf * m as f64, sigma_eps)).sum::<f64>();
    for (beta, prob) in probs.iter_mut().enumerate().skip(1) {
        let b = beta as f64;
        *prob = (0..=m_terms)
            .map(|m| {
                let shift = pf * m as f64;
                phi(b + shift, sigma_eps) + phi(pf - b + shift, sigma_eps)
            })
            .sum();
    }
    let total: f64 = probs.iter().sum();
    for x in probs.iter_mut() {
        *x /= total;
    }
    NoisePmf { p, probs, sigma_eps, renormalized_mass: 1.0 - total, m_terms }
}

/// `σ_ε` of each real component of the scaled effective noise.
pub fn sigma_eps(sigma2: f64, grid: &QuantGrid) -> f64 {
    let scale = grid.p.value() as f64 / grid.tau;
    (scale * scale * sigma2 / 2.0).sqrt()
}

/// Gaussian-approximation pmf of the quantized effective noise at a receiver.
pub fn effective_noise_pmf(h: &[Complex64], a: &[GaussianInt], grid: &QuantGrid) -> Result<NoisePmf> {
    effective_noise_pmf_with(h, a, grid, DEFAULT_M_MAX)
}

pub fn effective_noise_pmf_with(
    h: &[Complex64],
    a: &[GaussianInt],
    grid: &QuantGrid,
    m_max: usize,
) -> Result<NoisePmf> {
    let (sigma2, _) = effective_noise_variance(h, a, grid.snr)?;
    Ok(pmf_from_sigma(grid.p, sigma_eps(sigma2, grid), m_max))
}

/// `H(ζ) = 2·H(ν)` in bits.
pub fn noise_entropy(pmf: &NoisePmf) -> f64 {
    let h: f64 = pmf.probs.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum();
    (2.0 * h).max(0.0)
}

/// Empirical histogram of `g⁻¹([Q_Z(ε)] mod p)` from `samples` Gaussian draws.
pub fn empirical_noise_pmf<R: Rng + ?Sized>(p: GaussianPrime, sigma_eps: f64, samples: usize, rng: &mut R) -> Vec<f64> {
    let pv = p.value() as i64;
    let mut counts = vec![0u64; pv as usize];
    let normal = Normal::new(0.0, sigma_eps).expect("finite standard deviation");
    for _ in 0..samples {
        let e: f64 = normal.sample(rng);
        counts[(e.round() as i64).rem_euclid(pv) as usize] += 1;
    }
    counts.iter().map(|&c| c as f64 / samples as f64).collect()
}

/// Per-row quantized computation rates `2 log2 p − H(ζ_ℓ)`; zero for unusable rows.
pub fn quantized_rates(sys: &SystemMatrix, grid: &QuantGrid) -> Vec<f64> {
    (0..sys.rows())
        .map(|i| {
            if !sys.usable[i] {
                return 0.0;
            }
            let pmf = pmf_from_sigma(grid.p, sigma_eps(sys.sigma2[i], grid), DEFAULT_M_MAX);
            (grid.p.symbol_bits() - noise_entropy(&pmf)).max(0.0)
        })
        .collect()
}

/// QCoF uplink sum rate with network decomposition.
pub fn qcof_sum_rate(h: &CMatrix, snr: f64, p: GaussianPrime, r0: f64) -> Result<RateReport> {
    let grid = QuantGrid::new(p, snr)?;
    let sys = build_system_matrix(h, snr, p)?;
    qcof_from_system(&sys, &grid, r0)
}

pub fn qcof_from_system(sys: &SystemMatrix, grid: &QuantGrid, r0: f64) -> Result<RateReport> {
    let rates = quantized_rates(sys, grid);
    decomposed_sum_rate(&sys.q, &rates, &sys.usable, r0)
}

/// LQF uplink sum rate `2K log2 p − Σ_k H(ζ_k)` for a square channel.
pub fn lqf_sum_rate(h: &CMatrix, snr: f64, p: GaussianPrime, r0: f64) -> Result<RateReport> {
    let grid = QuantGrid::new(p, snr)?;
    let sys = build_system_matrix(h, snr, p)?;
    lqf_from_system(&sys, &grid, r0)
}

pub fn lqf_from_system(sys: &SystemMatrix, grid: &QuantGrid, r0: f64) -> Result<RateReport> {
    check_backhaul(r0)?;
    let needed = grid.p.symbol_bits();
    if needed > r0 {
        return Err(Error::BackhaulTooSmall { r0, needed });
    }
    if sys.rows() != sys.cols() {
        return Err(Error::dims(format!("LQF needs a square system, got {}x{}", sys.rows(), sys.cols())));
    }
    let rank = sys.q.rank();
    if rank < sys.cols() {
        return Err(Error::RankDeficient { rank, needed: sys.cols() });
    }
    let per_user = quantized_rates(sys, grid);
    Ok(RateReport { sum_rate: per_user.iter().sum(), per_user, blocks: 1 })
}

/// RQCoF downlink sum rate `Σ_ℓ min{r0, 2 log2 p − H(ζ_ℓ)}`.
pub fn rqcof_sum_rate(hd: &CMatrix, snr: f64, p: GaussianPrime, r0: f64) -> Result<RateReport> {
    check_backhaul(r0)?;
    if !hd.is_square() {
        return Err(Error::dims(format!("downlink channel is {}x{}", hd.nrows(), hd.ncols())));
    }
    let grid = QuantGrid::new(p, snr)?;
    let sys = build_system_matrix(hd, snr, p)?;
    rqcof_from_system(&sys, &grid, r0)
}

pub fn rqcof_from_system(sys: &SystemMatrix, grid: &QuantGrid, r0: f64) -> Result<RateReport> {
    check_backhaul(r0)?;
    let rank = sys.q.rank();
    if rank < sys.rows() {
        return Err(Error::RankDeficient { rank, needed: sys.rows() });
    }
    let per_user: Vec<f64> = quantized_rates(sys, grid).into_iter().map(|r| r.min(r0)).collect();
    Ok(RateReport { sum_rate: per_user.iter().sum(), per_user, blocks: 1 })
}

/// `x − τ·Q_{Z[j]}(x/τ)`, the centered modulo of the shaping lattice `τZ[j]`.
fn mod_shaping(x: Complex64, tau: f64) -> Complex64 {
    x - GaussianInt::round(x / tau).to_complex() * tau
}

struct SimShape {
    l: usize,
    k: usize,
    n: usize,
}

fn check_sim_shapes(
    h: &CMatrix,
    a: &IntMatrix,
    codewords: &FqMatrix,
    dithers: &CMatrix,
    noise: &CMatrix,
    grid: &QuantGrid,
) -> Result<SimShape> {
    let (l, k) = h.shape();
    let n = codewords.cols();
    if a.rows() != l || a.cols() != k {
        return Err(Error::dims(format!("A is {}x{}, H is {l}x{k}", a.rows(), a.cols())));
    }
    if codewords.rows() != k || dithers.shape() != (k, n) || noise.shape() != (l, n) {
        return Err(Error::dims("codeword, dither and noise shapes disagree with H"));
    }
    if codewords.modulus() != grid.p {
        return Err(Error::dims("codewords live in a different field"));
    }
    Ok(SimShape { l, k, n })
}

/// Transmitted symbols `x = [t + d] mod τZ[j]` with `t = (τ/p)·g(c)`.
pub fn transmit(codewords: &FqMatrix, dithers: &CMatrix, grid: &QuantGrid) -> CMatrix {
    let step = grid.step();
    CMatrix::from_fn(codewords.rows(), codewords.cols(), |k, t| {
        let c = codewords.get(k, t).lift().to_complex() * step;
        mod_shaping(c + dithers[(k, t)], grid.tau)
    })
}

fn mmse_scalings(h: &CMatrix, a: &IntMatrix, snr: f64) -> Result<Vec<Complex64>> {
    (0..h.nrows())
        .map(|i| effective_noise_variance(&channel_row(h, i), a.row(i), snr).map(|(_, alpha)| alpha))
        .collect()
}

/// Runs the quantized transmitter and receiver chain with MMSE scaling and
/// returns the decoded combinations `u` (receivers × symbols).
pub fn simulate_quantized_symbols(
    h: &CMatrix,
    a: &IntMatrix,
    grid: &QuantGrid,
    codewords: &FqMatrix,
    dithers: &CMatrix,
    noise: &CMatrix,
) -> Result<FqMatrix> {
    let alpha = mmse_scalings(h, a, grid.snr)?;
    simulate_quantized_symbols_with_scaling(h, a, grid, codewords, dithers, noise, &alpha)
}

/// Same as [`simulate_quantized_symbols`] with caller-chosen scalings `α_ℓ`.
pub fn simulate_quantized_symbols_with_scaling(
    h: &CMatrix,
    a: &IntMatrix,
    grid: &QuantGrid,
    codewords: &FqMatrix,
    dithers: &CMatrix,
    noise: &CMatrix,
    alpha: &[Complex64],
) -> Result<FqMatrix> {
    let s = check_sim_shapes(h, a, codewords, dithers, noise, grid)?;
    if alpha.len() != s.l {
        return Err(Error::dims("one scaling per receiver is required"));
    }
    let x = transmit(codewords, dithers, grid);
    let y = h * &x + noise;
    let p = grid.p;
    let inv_step = 1.0 / grid.step();
    Ok(FqMatrix::from_fn(s.l, s.n, p, |l, t| {
        let dither_sum: Complex64 = (0..s.k).map(|k| a[(l, k)].to_complex() * dithers[(k, t)]).sum();
        let sig = alpha[l] * y[(l, t)] - dither_sum;
        let idx = GaussianInt::round(sig * inv_step);
        mod_p_reduce(idx, p)
    }))
}

/// The algebraic form `⊕_k q_k c_k ⊕ ζ` of the decoder output, with
/// `ζ = g⁻¹([Q_{Z[j]}((p/τ)ξ)] mod p)` computed from the same realization.
pub fn algebraic_symbols(
    h: &CMatrix,
    a: &IntMatrix,
    grid: &QuantGrid,
    codewords: &FqMatrix,
    dithers: &CMatrix,
    noise: &CMatrix,
    alpha: &[Complex64],
) -> Result<FqMatrix> {
    let s = check_sim_shapes(h, a, codewords, dithers, noise, grid)?;
    if alpha.len() != s.l {
        return Err(Error::dims("one scaling per receiver is required"));
    }
    let x = transmit(codewords, dithers, grid);
    let p = grid.p;
    let q = a.reduce(p);
    let inv_step = 1.0 / grid.step();
    Ok(FqMatrix::from_fn(s.l, s.n, p, |l, t| {
        let xi: Complex64 = (0..s.k)
            .map(|k| (alpha[l] * h[(l, k)] - a[(l, k)].to_complex()) * x[(k, t)])
            .sum::<Complex64>()
            + alpha[l] * noise[(l, t)];
        let zeta = mod_p_reduce(GaussianInt::round(xi * inv_step), p);
        (0..s.k).fold(zeta, |acc, k| acc + q.get(l, k) * codewords.get(k, t))
    }))
}

/// `[Q_Z(x)] mod p` as an element of `{0, …, p−1}`.
pub fn quantize_then_mod(x: f64, p: GaussianPrime) -> u64 {
    (x.round() as i64).rem_euclid(p.value() as i64) as u64
}

/// `Q_Z([x] mod pZ)` reduced into `{0, …, p−1}`, with the centered modulo.
pub fn mod_then_quantize(x: f64, p: GaussianPrime) -> u64 {
    let pf = p.value() as f64;
    let folded = x - pf * (x / pf).round();
    (folded.round() as i64).rem_euclid(p.value() as i64) as u64
}

/// Entry-wise map `FqElem → complex` used by diagnostics.
pub fn lift_complex(e: FqElem) -> Complex64 {
    e.lift().to_complex()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p7() -> GaussianPrime {
        GaussianPrime::new(7).unwrap()
    }

    #[test]
    fn pmf_limits() {
        let tight = pmf_from_sigma(p7(), 1e-3, DEFAULT_M_MAX);
        assert!((tight.probs[0] - 1.0).abs() < 1e-12);
        let flat = pmf_from_sigma(p7(), 50.0, DEFAULT_M_MAX);
        for x in &flat.probs {
            assert!((x - 1.0 / 7.0).abs() < 1e-6);
        }
        assert!(flat.m_terms > DEFAULT_M_MAX);
    }

    #[test]
    fn pmf_symmetric_and_normalized() {
        for &s in &[0.3, 1.0, 3.0, 10.0] {
            let pmf = pmf_from_sigma(p7(), s, DEFAULT_M_MAX);
            assert!((pmf.probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            for b in 1..7 {
                assert!((pmf.probs[b] - pmf.probs[7 - b]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn entropy_examples() {
        let mk = |probs: Vec<f64>| NoisePmf { p: p7(), probs, sigma_eps: 1.0, renormalized_mass: 0.0, m_terms: 2 };
        assert_eq!(noise_entropy(&mk(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])), 0.0);
        assert!((noise_entropy(&mk(vec![1.0 / 7.0; 7])) - 2.0 * 7f64.log2()).abs() < 1e-12);
        let want = 2.0 * (0.9 * (1.0f64 / 0.9).log2() + 2.0 * 0.05 * 20f64.log2());
        let got = noise_entropy(&mk(vec![0.9, 0.05, 0.0, 0.0, 0.0, 0.0, 0.05]));
        assert!((got - want).abs() < 1e-12);
        assert!((got - 1.138).abs() < 1e-3);
    }

    #[test]
    fn lqf_requires_backhaul() {
        let err = lqf_sum_rate(&CMatrix::identity(2, 2), 10.0, p7(), 1.0).unwrap_err();
        assert!(matches!(err, Error::BackhaulTooSmall { .. }));
    }

    #[test]
    fn sawtooth_orders_agree_on_grid() {
        for i in -200..200 {
            let x = i as f64 * 0.3711 + 0.0123;
            assert_eq!(quantize_then_mod(x, p7()), mod_then_quantize(x, p7()));
        }
    }
}
