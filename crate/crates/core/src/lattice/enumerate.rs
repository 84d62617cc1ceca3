//! Pohst sphere enumeration of Gaussian-integer lattice points.

use num_complex::Complex64;

use super::lll::ReducedBasis;
use crate::error::{Error, Result};
use crate::gfield::GaussianInt;
use crate::linalg::CMatrix;

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Upper-triangular factor `R` with `BᴴB = RᴴR`.
fn triangular_factor(basis: &CMatrix) -> Result<CMatrix> {
    let gram = basis.adjoint() * basis;
    let ch = gram.cholesky().ok_or(Error::RankDeficientBasis)?;
    Ok(ch.l().adjoint())
}

/// Gaussian-heuristic estimate of the number of lattice points in the ball.
fn predicted_count(r: &CMatrix, radius: f64) -> f64 {
    let k = r.nrows();
    let covolume: f64 = (0..k).map(|i| r[(i, i)].norm_sqr()).product();
    let mut ball = 1.0;
    for i in 1..=k {
        ball *= std::f64::consts::PI * radius * radius / i as f64;
    }
    ball / covolume
}

/// Representative of `z`'s orbit under the units `{±1, ±j}`: the first nonzero
/// entry lies in the first quadrant. Returns `None` for the zero vector.
pub fn canonicalize(z: &[GaussianInt]) -> Option<Vec<GaussianInt>> {
    let lead = *z.iter().find(|e| !e.is_zero())?;
    let unit = GaussianInt::UNITS
        .into_iter()
        .find(|u| (*u * lead).is_first_quadrant())
        .expect("one unit rotates any nonzero value into the first quadrant");
    Some(z.iter().map(|e| unit * *e).collect())
}

pub fn is_canonical(z: &[GaussianInt]) -> bool {
    z.iter().find(|e| !e.is_zero()).is_some_and(|e| e.is_first_quadrant())
}

/// Nonzero lattice points within `radius`, one per unit orbit.
///
/// Coefficients are returned in the coordinates of the *original* basis (the
/// reduced coordinates mapped through the recorded unimodular matrix); the
/// point itself is `original · z`. Uses the default cap on the predicted count.
pub fn enumerate_short_vectors(basis: &ReducedBasis, radius: f64) -> Result<Vec<Vec<GaussianInt>>> {
    enumerate_short_vectors_capped(basis, radius, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_short_vectors_capped(
    basis: &ReducedBasis,
    radius: f64,
    cap: usize,
) -> Result<Vec<Vec<GaussianInt>>> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param(format!("enumeration radius {radius}")));
    }
    let k = basis.dim();
    if k == 0 {
        return Ok(Vec::new());
    }
    let r = triangular_factor(&basis.basis)?;
    let predicted = predicted_count(&r, radius);
    if predicted > cap as f64 {
        return Err(Error::RadiusTooLarge { predicted, cap });
    }

    let r2 = radius * radius;
    let slack = r2 * (1.0 + 1e-12);
    let mut out = Vec::new();
    let mut z = vec![GaussianInt::ZERO; k];
    let mut visited = 0usize;
    descend(&r, k - 1, 0.0, slack, &mut z, &mut out, &mut visited, cap)?;

    let u = &basis.unimodular;
    let mut result = Vec::with_capacity(out.len());
    for zr in out {
        // Exact-radius filter on the recomputed norm.
        let norm2: f64 = (0..k)
            .map(|i| {
                let s: Complex64 = (i..k).map(|j| r[(i, j)] * zr[j].to_complex()).sum();
                s.norm_sqr()
            })
            .sum();
        if norm2 > r2 {
            continue;
        }
        let a: Vec<GaussianInt> = (0..k)
            .map(|i| (0..k).fold(GaussianInt::ZERO, |acc, j| acc + u[(i, j)] * zr[j]))
            .collect();
        if is_canonical(&a) {
            result.push(a);
        }
    }
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    r: &CMatrix,
    level: usize,
    partial: f64,
    bound: f64,
    z: &mut [GaussianInt],
    out: &mut Vec<Vec<GaussianInt>>,
    visited: &mut usize,
    cap: usize,
) -> Result<()> {
    let k = z.len();
    let rii = r[(level, level)];
    let tail: Complex64 = (level + 1..k).map(|j| r[(level, j)] * z[j].to_complex()).sum();
    let center = -tail / rii;
    let scale = rii.norm_sqr();
    let rem = (bound - partial) / scale;
    if rem < 0.0 {
        return Ok(());
    }
    let t = rem.sqrt();
    let re_lo = (center.re - t).ceil() as i64;
    let re_hi = (center.re + t).floor() as i64;
    for re in re_lo..=re_hi {
        let dre = re as f64 - center.re;
        let rem_im = rem - dre * dre;
        if rem_im < 0.0 {
            continue;
        }
        let ti = rem_im.sqrt();
        let im_lo = (center.im - ti).ceil() as i64;
        let im_hi = (center.im + ti).floor() as i64;
        for im in im_lo..=im_hi {
            z[level] = GaussianInt::new(re, im);
            let d = rii * z[level].to_complex() + tail;
            let p = partial + d.norm_sqr();
            if p > bound {
                continue;
            }
            if level == 0 {
                *visited += 1;
                if *visited > cap {
                    return Err(Error::RadiusTooLarge { predicted: *visited as f64, cap });
                }
                if z.iter().any(|e| !e.is_zero()) {
                    out.push(z.to_vec());
                }
            } else {
                descend(r, level - 1, p, bound, z, out, visited, cap)?;
            }
        }
    }
    z[level] = GaussianInt::ZERO;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::IntMatrix;

    fn identity_basis(k: usize) -> ReducedBasis {
        ReducedBasis { basis: CMatrix::identity(k, k), unimodular: IntMatrix::identity(k) }
    }

    #[test]
    fn unit_vectors_of_identity_lattice() {
        let got = enumerate_short_vectors(&identity_basis(2), 1.05).unwrap();
        // Exhaustive scan of the box |Re|,|Im| ≤ 2, reduced to unit-orbit representatives.
        let mut want = Vec::new();
        for a in -2..=2 {
            for b in -2..=2 {
                for c in -2..=2 {
                    for d in -2..=2 {
                        let z = vec![GaussianInt::new(a, b), GaussianInt::new(c, d)];
                        let n = z.iter().map(|e| e.norm_sqr()).sum::<i64>() as f64;
                        if n > 0.0 && n.sqrt() <= 1.05 && is_canonical(&z) {
                            want.push(z);
                        }
                    }
                }
            }
        }
        let mut got_sorted = got.clone();
        got_sorted.sort();
        want.sort();
        assert_eq!(got_sorted, want);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn small_radius_is_empty() {
        assert!(enumerate_short_vectors(&identity_basis(2), 0.5).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_short_vectors_capped(&identity_basis(3), 10.0, 1000).unwrap_err();
        assert!(matches!(err, Error::RadiusTooLarge { .. }));
    }

    #[test]
    fn canonical_form_is_unique_per_orbit() {
        let z = vec![GaussianInt::ZERO, GaussianInt::new(-2, 3), GaussianInt::new(1, 1)];
        let reps: Vec<_> = GaussianInt::UNITS
            .iter()
            .map(|u| canonicalize(&z.iter().map(|e| *u * *e).collect::<Vec<_>>()).unwrap())
            .collect();
        assert!(reps.windows(2).all(|w| w[0] == w[1]));
        assert!(is_canonical(&reps[0]));
        assert!(canonicalize(&[GaussianInt::ZERO]).is_none());
    }
}
