use num_complex::Complex64;

use dascof::baselines::{dpc_sum_capacity, zfb_rate};
use dascof::gfield::IntMatrix;
use dascof::ifb::ifb_design;
use dascof::linalg::{inverse, CMatrix};

// Theorem-7 rate in closed form: with h = a the MMSE noise is
// ‖a‖²/(1 + s‖a‖²) per unit power, so R_ℓ = log2⁺(1/‖ã_ℓ‖² + s) at
// s = snr / max_i ‖b_i‖².
fn oracle_rate(hinv: &CMatrix, a: &[[Complex64; 2]; 2], snr: f64) -> f64 {
    let am = CMatrix::from_fn(2, 2, |i, j| a[i][j]);
    let b = hinv * &am;
    let worst = (0..2).map(|i| b.row(i).norm_squared()).fold(0.0, f64::max);
    let s = snr / worst;
    (0..2).map(|l| (1.0 / am.row(l).norm_squared() + s).log2().max(0.0)).sum()
}

fn exhaustive_best(hd: &CMatrix, snr: f64, r: i64) -> f64 {
    let hinv = inverse(hd).unwrap();
    let limit = hinv.norm_squared() * (1.0 + 1e-12);
    let vals: Vec<(i64, i64)> = (-r..=r).flat_map(|a| (-r..=r).map(move |b| (a, b))).collect();
    let z = |(a, b): (i64, i64)| Complex64::new(a as f64, b as f64);
    let mut best = f64::NEG_INFINITY;
    for &x in &vals {
        for &y in &vals {
            for &u in &vals {
                for &v in &vals {
                    // det = xv - yu must be a unit of Z[j].
                    let det = z(x) * z(v) - z(y) * z(u);
                    if (det.norm_sqr() - 1.0).abs() > 0.5 {
                        continue;
                    }
                    let a = [[z(x), z(y)], [z(u), z(v)]];
                    let am = CMatrix::from_fn(2, 2, |i, j| a[i][j]);
                    if (&hinv * am).norm_squared() > limit {
                        continue;
                    }
                    best = best.max(oracle_rate(&hinv, &a, snr));
                }
            }
        }
    }
    best
}

fn rate_of(hd: &CMatrix, snr: f64) -> (f64, IntMatrix) {
    let d = ifb_design(hd, snr).unwrap();
    (d.per_user_rates(snr).unwrap().iter().sum(), d.a_tilde)
}

#[test]
fn unitary_channel_matches_zfb_and_dpc() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let hd = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => Complex64::new(s, 0.0),
        (0, 1) => Complex64::new(0.0, s),
        (1, 0) => Complex64::new(0.0, s),
        _ => Complex64::new(s, 0.0),
    });
    for snr in [1.0, 100.0, 1e4] {
        let (ifb, _) = rate_of(&hd, snr);
        let want = 2.0 * (1.0 + snr).log2();
        assert!((ifb - want).abs() < 1e-9, "{ifb} vs {want}");
        assert!((zfb_rate(&hd, snr).unwrap() - want).abs() < 1e-9);
        assert!((dpc_sum_capacity(&hd, snr).unwrap() - want).abs() < 1e-5);
    }
}

#[test]
fn near_singular_2x2_matches_exhaustive_search() {
    let hd = CMatrix::from_fn(2, 2, |i, j| {
        Complex64::new([[1.0, 0.97], [1.0, 1.03]][i][j], [[0.0, 0.05], [0.02, 0.0]][i][j])
    });
    let mut inside = 0;
    for snr_db in [10.0, 20.0, 30.0, 40.0] {
        let snr = 10f64.powf(snr_db / 10.0);
        let (ifb, a) = rate_of(&hd, snr);
        let oracle = exhaustive_best(&hd, snr, 3);
        // Nothing in the box does better; a design inside the box is the box optimum.
        assert!(ifb >= oracle - 1e-9, "snr {snr_db}: {ifb} below exhaustive {oracle}");
        let reach = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].re.abs().max(a[(i, j)].im.abs())).max().unwrap();
        if reach <= 3 {
            inside += 1;
            assert!((ifb - oracle).abs() < 1e-9, "snr {snr_db}: {ifb} vs exhaustive {oracle}");
        }
        assert!(ifb >= zfb_rate(&hd, snr).unwrap() - 1e-9);
    }
    assert!(inside >= 2, "only {inside} designs fell inside the oracle box");
}

#[test]
fn design_is_integer_forcing() {
    let hd = CMatrix::from_fn(3, 3, |i, j| Complex64::new(1.0 / (1.0 + i as f64 + j as f64), 0.1 * (i as f64 - j as f64)));
    let d = ifb_design(&hd, 1e3).unwrap();
    let eff = &hd * &d.b;
    let a = d.a_tilde.to_complex();
    assert!((eff - a).norm() < 1e-9);
    assert!(d.a_tilde.det().unwrap().is_unit());
}
