//! Thin helpers over `nalgebra` complex matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a matrix from real entries given row by row.
pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let r = rows.len();
    let k = rows.first().map_or(0, |x| x.len());
    CMatrix::from_fn(r, k, |i, j| c(rows[i][j], 0.0))
}

pub fn real_vector(v: &[f64]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0)))
}

/// `log2 det(M)` for Hermitian positive-definite `M`.
pub fn log2det_hpd(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    match m.clone().cholesky() {
        Some(ch) => {
            let l = ch.l_dirty();
            2.0 * (0..m.nrows()).map(|i| l[(i, i)].re.log2()).sum::<f64>()
        }
        None => m.clone().lu().determinant().norm().log2(),
    }
}

/// `log2 det(I + s·A·Aᴴ)`, evaluated on the smaller of the two Gram matrices.
pub fn log2det_identity_plus(a: &CMatrix, s: f64) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let gram = if a.nrows() <= a.ncols() {
        a * a.adjoint()
    } else {
        a.adjoint() * a
    };
    let n = gram.nrows();
    let m = CMatrix::identity(n, n) + gram * c(s, 0.0);
    log2det_hpd(&m)
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::dims(format!("inverse of {}x{}", m.nrows(), m.ncols())));
    }
    let inv = m.clone().try_inverse().ok_or(Error::Singular)?;
    if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(inv)
}

pub fn row_norm_sqr(m: &CMatrix, i: usize) -> f64 {
    m.row(i).iter().map(|z| z.norm_sqr()).sum()
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
