//! Gaussian integers and the field `Z[j] / pZ[j]` for integer primes `p ≡ 3 (mod 4)`.
//!
//! For such `p` the quotient ring has `p²` elements and is a field, written `F_{p²}`
//! below. Elements are stored by their canonical representative `re + j·im` with
//! both components in `[0, p)`, which is exactly the image of the natural map
//! `g: F_{p²} → C`. Dense matrices over the field support rank, inversion and
//! linear solves by exact Gaussian elimination.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// A Gaussian integer `re + j·im`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const J: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    /// The four units `1, j, -1, -j`.
    pub const UNITS: [GaussianInt; 4] = [
        GaussianInt::new(1, 0),
        GaussianInt::new(0, 1),
        GaussianInt::new(-1, 0),
        GaussianInt::new(0, -1),
    ];

    pub fn conj(self) -> Self {
        GaussianInt::new(self.re, -self.im)
    }

    /// Squared modulus `re² + im²`.
    pub fn norm_sqr(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm_sqr() == 1
    }

    /// Lies in the closed-open first quadrant `Re > 0, Im ≥ 0`.
    pub fn is_first_quadrant(self) -> bool {
        self.re > 0 && self.im >= 0
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    /// Nearest Gaussian integer, component-wise rounding (ties away from zero).
    pub fn round(z: Complex64) -> Self {
        GaussianInt::new(z.re.round() as i64, z.im.round() as i64)
    }

    /// `self / d` when the division is exact in `Z[j]`.
    pub fn exact_div(self, d: GaussianInt) -> Option<GaussianInt> {
        let n = d.norm_sqr();
        if n == 0 {
            return None;
        }
        let num = self * d.conj();
        if num.re % n != 0 || num.im % n != 0 {
            return None;
        }
        Some(GaussianInt::new(num.re / n, num.im / n))
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}j"),
            (re, im) if im < 0 => write!(f, "{re}{im}j"),
            (re, im) => write!(f, "{re}+{im}j"),
        }
    }
}

impl From<i64> for GaussianInt {
    fn from(re: i64) -> Self {
        GaussianInt::new(re, 0)
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, o: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, o: GaussianInt) {
        *self = *self + o;
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, o: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, o: GaussianInt) -> GaussianInt {
        GaussianInt::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

/// An integer prime `p ≡ 3 (mod 4)`, which stays prime in `Z[j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussianPrime(u64);

impl GaussianPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidPrime { p, reason: "not an odd prime" });
        }
        if p % 4 != 3 {
            return Err(Error::InvalidPrime {
                p,
                reason: "p ≡ 1 (mod 4) splits in Z[j]; Z[j]/(p) is not a field",
            });
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidPrime { p, reason: "too large" });
        }
        Ok(GaussianPrime(p))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// `2 log2 p`, the number of bits carried by one field symbol.
    pub fn symbol_bits(self) -> f64 {
        2.0 * (self.0 as f64).log2()
    }
}

impl fmt::Display for GaussianPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `F_{p²}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FqElem {
    re: u64,
    im: u64,
    modulus: GaussianPrime,
}

impl FqElem {
    /// Builds an element from arbitrary integer components, reducing both mod `p`.
    pub fn new(re: i64, im: i64, modulus: GaussianPrime) -> Self {
        let p = modulus.value() as i64;
        FqElem {
            re: re.rem_euclid(p) as u64,
            im: im.rem_euclid(p) as u64,
            modulus,
        }
    }

    pub fn zero(modulus: GaussianPrime) -> Self {
        FqElem { re: 0, im: 0, modulus }
    }

    pub fn one(modulus: GaussianPrime) -> Self {
        FqElem { re: 1, im: 0, modulus }
    }

    pub fn re(self) -> u64 {
        self.re
    }

    pub fn im(self) -> u64 {
        self.im
    }

    pub fn modulus(self) -> GaussianPrime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// The natural map `g`: the Gaussian integer with components in `[0, p)`.
    pub fn lift(self) -> GaussianInt {
        GaussianInt::new(self.re as i64, self.im as i64)
    }

    /// Every element of the field, ordered by `(re, im)`.
    pub fn all(modulus: GaussianPrime) -> impl Iterator<Item = FqElem> {
        let p = modulus.value();
        (0..p).flat_map(move |re| (0..p).map(move |im| FqElem { re, im, modulus }))
    }

    pub fn inverse(self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // (a + jb)^{-1} = (a - jb) / (a² + b²); a² + b² ≠ 0 mod p since -1 is a non-residue.
        let p = self.modulus.value() as u128;
        let (a, b) = (self.re as u128, self.im as u128);
        let n = (a * a + b * b) % p;
        let n_inv = pow_mod(n, p - 2, p);
        Ok(FqElem {
            re: ((a * n_inv) % p) as u64,
            im: (((p - b) % p * n_inv) % p) as u64,
            modulus: self.modulus,
        })
    }
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.re, self.im)
    }
}

impl Add for FqElem {
    type Output = FqElem;
    fn add(self, o: FqElem) -> FqElem {
        debug_assert_eq!(self.modulus, o.modulus);
        let p = self.modulus.value();
        FqElem {
            re: (self.re + o.re) % p,
            im: (self.im + o.im) % p,
            modulus: self.modulus,
        }
    }
}

impl AddAssign for FqElem {
    fn add_assign(&mut self, o: FqElem) {
        *self = *self + o;
    }
}

impl Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        let p = self.modulus.value();
        FqElem {
            re: (p - self.re) % p,
            im: (p - self.im) % p,
            modulus: self.modulus,
        }
    }
}

impl Sub for FqElem {
    type Output = FqElem;
    fn sub(self, o: FqElem) -> FqElem {
        self + (-o)
    }
}

impl Mul for FqElem {
    type Output = FqElem;
    fn mul(self, o: FqElem) -> FqElem {
        debug_assert_eq!(self.modulus, o.modulus);
        let p = self.modulus.value() as u128;
        let (a, b, c, d) = (self.re as u128, self.im as u128, o.re as u128, o.im as u128);
        let re = (a * c + (p - b * d % p)) % p;
        let im = (a * d + b * c) % p;
        FqElem {
            re: re as u64,
            im: im as u64,
            modulus: self.modulus,
        }
    }
}

/// Reduces a Gaussian integer modulo `pZ[j]`.
pub fn mod_p_reduce(z: GaussianInt, p: GaussianPrime) -> FqElem {
    FqElem::new(z.re, z.im, p)
}

pub fn fq_inverse(x: FqElem) -> Result<FqElem> {
    x.inverse()
}

pub fn fq_rank(m: &FqMatrix) -> usize {
    m.rank()
}

pub fn fq_inverse_matrix(m: &FqMatrix) -> Result<FqMatrix> {
    m.inverse()
}

pub fn fq_solve(m: &FqMatrix, rhs: &FqMatrix) -> Result<FqMatrix> {
    m.solve(rhs)
}

/// Dense row-major matrix over `F_{p²}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    modulus: GaussianPrime,
    data: Vec<FqElem>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: GaussianPrime) -> Self {
        FqMatrix {
            rows,
            cols,
            modulus,
            data: vec![FqElem::zero(modulus); rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: GaussianPrime) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, FqElem::one(modulus));
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        modulus: GaussianPrime,
        mut f: impl FnMut(usize, usize) -> FqElem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                debug_assert_eq!(e.modulus, modulus);
                data.push(e);
            }
        }
        FqMatrix { rows, cols, modulus, data }
    }

    /// Entry-wise reduction `g^{-1}([A] mod pZ[j])`.
    pub fn from_gaussian(a: &IntMatrix, modulus: GaussianPrime) -> Self {
        Self::from_fn(a.rows(), a.cols(), modulus, |i, j| mod_p_reduce(a[(i, j)], modulus))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> GaussianPrime {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        debug_assert_eq!(v.modulus, self.modulus);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FqElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Lifts every entry through `g` to a Gaussian-integer matrix.
    pub fn lift(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).lift())
    }

    pub fn transpose(&self) -> FqMatrix {
        FqMatrix::from_fn(self.cols, self.rows, self.modulus, |i, j| self.get(j, i))
    }

    /// Submatrix with the given row and column index lists (in that order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> FqMatrix {
        FqMatrix::from_fn(rows.len(), cols.len(), self.modulus, |i, j| self.get(rows[i], cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> FqMatrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FqMatrix::zeros(self.rows, other.cols, self.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduces to row echelon form in place and returns the pivot columns.
    ///
    /// The pivot in each column is the first nonzero entry at or below the
    /// current row (lowest row index wins).
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.get(r, c).inverse().expect("pivot is nonzero");
            for i in r + 1..self.rows {
                let f = self.get(i, c) * inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j) - f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    pub fn inverse(&self) -> Result<FqMatrix> {
        if !self.is_square() {
            return Err(Error::dims(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        self.solve(&FqMatrix::identity(self.rows, self.modulus))
    }

    /// Solves `self · X = rhs` by Gauss-Jordan elimination on the augmented matrix.
    pub fn solve(&self, rhs: &FqMatrix) -> Result<FqMatrix> {
        let n = self.rows;
        if !self.is_square() || rhs.rows != n {
            return Err(Error::dims(format!(
                "solve {}x{} with rhs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let w = n + rhs.cols;
        let mut aug = FqMatrix::from_fn(n, w, self.modulus, |i, j| {
            if j < n {
                self.get(i, j)
            } else {
                rhs.get(i, j - n)
            }
        });
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !aug.get(i, c).is_zero()) else {
                return Err(Error::Singular);
            };
            aug.swap_rows(c, pr);
            let inv = aug.get(c, c).inverse()?;
            for j in c..w {
                let v = aug.get(c, j) * inv;
                aug.set(c, j, v);
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = aug.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..w {
                    let v = aug.get(i, j) - f * aug.get(c, j);
                    aug.set(i, j, v);
                }
            }
        }
        Ok(FqMatrix::from_fn(n, rhs.cols, self.modulus, |i, j| aug.get(i, n + j)))
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Incrementally maintained row space over `F_{p²}`, used for the greedy rank test.
#[derive(Clone, Debug)]
pub struct RowBasis {
    modulus: GaussianPrime,
    cols: usize,
    // Normalised rows (pivot entry = 1) with their pivot column.
    rows: Vec<(usize, Vec<FqElem>)>,
}

impl RowBasis {
    pub fn new(cols: usize, modulus: GaussianPrime) -> Self {
        RowBasis { modulus, cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row` if it is independent of the rows already held; returns whether it was added.
    pub fn insert(&mut self, row: &[FqElem]) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut v = row.to_vec();
        for (pc, basis_row) in &self.rows {
            let f = v[*pc];
            if f.is_zero() {
                continue;
            }
            for (x, b) in v.iter_mut().zip(basis_row) {
                *x = *x - f * *b;
            }
        }
        let Some(pc) = v.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = v[pc].inverse().expect("nonzero");
        for x in v.iter_mut() {
            *x = *x * inv;
        }
        // Keep earlier rows reduced at the new pivot so later reductions stay one pass.
        for (_, basis_row) in self.rows.iter_mut() {
            let f = basis_row[pc];
            if f.is_zero() {
                continue;
            }
            for (x, b) in basis_row.iter_mut().zip(&v) {
                *x = *x - f * *b;
            }
        }
        debug_assert!(v.iter().all(|e| e.modulus == self.modulus));
        self.rows.push((pc, v));
        true
    }
}

/// Dense row-major matrix of Gaussian integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![GaussianInt::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianInt::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussianInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<GaussianInt>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[GaussianInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<GaussianInt> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(GaussianInt::ZERO, |acc, k| acc + self[(i, k)] * other[(k, j)])
        }))
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_complex())
    }

    pub fn reduce(&self, modulus: GaussianPrime) -> FqMatrix {
        FqMatrix::from_gaussian(self, modulus)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination over `Z[j]`.
    pub fn det(&self) -> Result<GaussianInt> {
        if self.rows != self.cols {
            return Err(Error::dims(format!("det of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(GaussianInt::ONE);
        }
        let mut m = self.clone();
        let mut sign = GaussianInt::ONE;
        let mut prev = GaussianInt::ONE;
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(pr) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Ok(GaussianInt::ZERO);
                };
                for j in 0..n {
                    m.data.swap(k * n + j, pr * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(k, k)] * m[(i, j)] - m[(i, k)] * m[(k, j)];
                    m[(i, j)] = num.exact_div(prev).expect("Bareiss division is exact");
                }
                m[(i, k)] = GaussianInt::ZERO;
            }
            prev = m[(k, k)];
        }
        Ok(sign * m[(n - 1, n - 1)])
    }

    /// True when `|det| = 1`, i.e. the matrix is invertible over `Z[j]`.
    pub fn is_unimodular(&self) -> bool {
        self.det().map(|d| d.is_unit()).unwrap_or(false)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = GaussianInt;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p7() -> GaussianPrime {
        GaussianPrime::new(7).unwrap()
    }

    fn e(re: i64, im: i64) -> FqElem {
        FqElem::new(re, im, p7())
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(GaussianPrime::new(2).is_err());
        assert!(GaussianPrime::new(5).is_err());
        assert!(GaussianPrime::new(17).is_err());
        assert!(GaussianPrime::new(9).is_err());
        for p in [3, 7, 11, 19, 251] {
            assert!(GaussianPrime::new(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(mod_p_reduce(GaussianInt::new(0, 0), p7()), e(0, 0));
        let r = mod_p_reduce(GaussianInt::new(-1, 8), p7());
        assert_eq!((r.re(), r.im()), (6, 1));
        let r = mod_p_reduce(GaussianInt::new(3, -4), p7());
        assert_eq!((r.re(), r.im()), (3, 3));
        // (3,3) lifts back to (3,-4) up to multiples of 7 in each component.
        let hits: Vec<(i64, i64)> = (-2..=2)
            .flat_map(|m| (-2..=2).map(move |n| (3 + 7 * m, 3 + 7 * n)))
            .filter(|&(a, b)| (a, b) == (3, -4))
            .collect();
        assert_eq!(hits.len(), 1);
    }

    #[test]
    fn element_inverse_examples() {
        assert_eq!(e(1, 0).inverse().unwrap(), e(1, 0));
        let brute = FqElem::all(p7())
            .find(|y| e(1, 1) * *y == e(1, 0))
            .unwrap();
        assert_eq!(brute, e(4, 3));
        assert_eq!(e(1, 1).inverse().unwrap(), e(4, 3));
        assert_eq!(e(0, 0).inverse(), Err(Error::ZeroInverse));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FqMatrix::identity(4, p7()).rank(), 4);
        assert_eq!(FqMatrix::zeros(3, 5, p7()).rank(), 0);
    }

    #[test]
    fn diagonal_inverse() {
        let p = p7();
        let m = FqMatrix::from_fn(3, 3, p, |i, j| if i == j { e(2, 0) } else { FqElem::zero(p) });
        let inv = m.inverse().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { e(4, 0) } else { FqElem::zero(p) };
                assert_eq!(inv.get(i, j), want);
            }
        }
        assert_eq!(FqMatrix::identity(3, p).inverse().unwrap(), FqMatrix::identity(3, p));
    }

    #[test]
    fn singular_solve_fails() {
        let p = p7();
        let m = FqMatrix::from_fn(2, 2, p, |i, _| if i == 0 { e(1, 2) } else { e(2, 4) });
        let b = FqMatrix::identity(2, p);
        assert_eq!(m.solve(&b), Err(Error::Singular));
        assert_eq!(m.inverse(), Err(Error::Singular));
    }

    #[test]
    fn row_basis_rejects_dependent_rows() {
        let p = p7();
        let mut rb = RowBasis::new(3, p);
        assert!(rb.insert(&[e(1, 0), e(0, 0), e(0, 0)]));
        assert!(!rb.insert(&[e(3, 2), e(0, 0), e(0, 0)]));
        assert!(rb.insert(&[e(1, 1), e(2, 0), e(0, 0)]));
        assert!(!rb.insert(&[e(0, 0), e(0, 0), e(0, 0)]));
        assert!(rb.insert(&[e(5, 5), e(1, 0), e(0, 3)]));
        assert_eq!(rb.rank(), 3);
        assert!(!rb.insert(&[e(6, 1), e(2, 2), e(3, 3)]));
    }

    #[test]
    fn bareiss_determinant() {
        let g = GaussianInt::new;
        let m = IntMatrix::from_rows(&[vec![g(1, 1), g(2, 0)], vec![g(0, 1), g(1, -1)]]);
        // (1+j)(1-j) - 2j = 2 - 2j
        assert_eq!(m.det().unwrap(), g(2, -2));
        let u = IntMatrix::from_rows(&[
            vec![g(1, 0), g(2, 1), g(0, 0)],
            vec![g(0, 0), g(1, 0), g(0, 0)],
            vec![g(3, -1), g(0, 0), g(0, 1)],
        ]);
        assert_eq!(u.det().unwrap(), g(0, 1));
        assert!(u.is_unimodular());
        let z = IntMatrix::from_rows(&[vec![g(0, 0), g(1, 0)], vec![g(0, 0), g(2, 0)]]);
        assert_eq!(z.det().unwrap(), GaussianInt::ZERO);
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianInt::new(3, -4).to_string(), "3-4j");
        assert_eq!(GaussianInt::new(0, 2).to_string(), "2j");
        assert_eq!(e(3, 3).to_string(), "(3,3)");
    }
}
