//! Complex LLL reduction over `Z[j]`.
//!
//! Size reduction rounds the Gram-Schmidt coefficients to the nearest Gaussian
//! integer, so no realification to a `2K`-dimensional real lattice is needed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gfield::{GaussianInt, IntMatrix};
use crate::linalg::CMatrix;

pub const DEFAULT_DELTA: f64 = 0.75;

/// A reduced lattice basis together with the unimodular change of basis.
#[derive(Clone, Debug)]
pub struct ReducedBasis {
    /// Reduced generators, one per column.
    pub basis: CMatrix,
    /// `original · unimodular = basis`.
    pub unimodular: IntMatrix,
}

impl ReducedBasis {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Index and Euclidean norm of the shortest column.
    pub fn shortest_column(&self) -> (usize, f64) {
        (0..self.dim())
            .map(|j| (j, self.basis.column(j).norm()))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    // <x, y> = yᴴ x
    x.iter().zip(y).map(|(a, b)| b.conj() * a).sum()
}

fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

struct Gso {
    mu: Vec<Vec<Complex64>>,
    bstar_sqr: Vec<f64>,
}

fn gram_schmidt(cols: &[Vec<Complex64>]) -> Gso {
    let k = cols.len();
    let mut bstar: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    let mut mu = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    let mut bstar_sqr = vec![0.0; k];
    for i in 0..k {
        let mut v = cols[i].clone();
        for j in 0..i {
            let m = if bstar_sqr[j] > 0.0 {
                inner(&cols[i], &bstar[j]) / bstar_sqr[j]
            } else {
                Complex64::new(0.0, 0.0)
            };
            mu[i][j] = m;
            for (x, b) in v.iter_mut().zip(&bstar[j]) {
                *x -= m * b;
            }
        }
        bstar_sqr[i] = norm_sqr(&v);
        bstar.push(v);
    }
    Gso { mu, bstar_sqr }
}

/// LLL-reduces the columns of `basis` with Lovász parameter `delta ∈ (0.25, 1]`.
pub fn lll_reduce(basis: &CMatrix, delta: f64) -> Result<ReducedBasis> {
    if !(delta > 0.25 && delta <= 1.0) {
        return Err(Error::param(format!("LLL delta {delta} outside (0.25, 1]")));
    }
    let k = basis.ncols();
    let mut cols: Vec<Vec<Complex64>> = (0..k).map(|j| basis.column(j).iter().copied().collect()).collect();
    let mut u = IntMatrix::identity(k);

    let scale = cols.iter().map(|c| norm_sqr(c)).fold(0.0, f64::max);
    let mut gso = gram_schmidt(&cols);
    if k > basis.nrows() || gso.bstar_sqr.iter().any(|&b| !(b > 1e-20 * scale.max(f64::MIN_POSITIVE))) {
        return Err(Error::RankDeficientBasis);
    }

    let mut i = 1;
    let mut swaps = 0usize;
    while i < k {
        for j in (0..i).rev() {
            let m = gso.mu[i][j];
            if m.re.abs() > 0.5 || m.im.abs() > 0.5 {
                let q = GaussianInt::round(m);
                let qc = q.to_complex();
                let (left, right) = cols.split_at_mut(i);
                for (x, b) in right[0].iter_mut().zip(&left[j]) {
                    *x -= qc * b;
                }
                for r in 0..k {
                    let v = u[(r, i)] - q * u[(r, j)];
                    u[(r, i)] = v;
                }
                for l in 0..j {
                    let t = gso.mu[j][l];
                    gso.mu[i][l] -= qc * t;
                }
                gso.mu[i][j] -= qc;
            }
        }
        let lhs = gso.bstar_sqr[i];
        let rhs = (delta - gso.mu[i][i - 1].norm_sqr()) * gso.bstar_sqr[i - 1];
        if lhs >= rhs {
            i += 1;
        } else {
            cols.swap(i, i - 1);
            for r in 0..k {
                let a = u[(r, i)];
                u[(r, i)] = u[(r, i - 1)];
                u[(r, i - 1)] = a;
            }
            gso = gram_schmidt(&cols);
            i = (i - 1).max(1);
            swaps += 1;
            if swaps > 100_000 {
                // Only reachable with non-finite input.
                return Err(Error::RankDeficientBasis);
            }
        }
    }

    let n = basis.nrows();
    let reduced = CMatrix::from_fn(n, k, |r, j| cols[j][r]);
    Ok(ReducedBasis { basis: reduced, unimodular: u })
}

/// Checks size reduction and the Lovász condition; used by tests and debug assertions.
pub fn is_lll_reduced(basis: &CMatrix, delta: f64) -> bool {
    let k = basis.ncols();
    let cols: Vec<Vec<Complex64>> = (0..k).map(|j| basis.column(j).iter().copied().collect()).collect();
    let gso = gram_schmidt(&cols);
    let tol = 1e-9;
    for i in 0..k {
        for j in 0..i {
            let m = gso.mu[i][j];
            if m.re.abs() > 0.5 + tol || m.im.abs() > 0.5 + tol {
                return false;
            }
        }
        if i > 0 {
            let rhs = (delta - gso.mu[i][i - 1].norm_sqr()) * gso.bstar_sqr[i - 1];
            if gso.bstar_sqr[i] < rhs * (1.0 - tol) {
                return false;
            }
        }
    }
    true
}
