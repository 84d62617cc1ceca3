//! Infinite-precision CoF uplink and RCoF downlink sum rates.

use std::collections::VecDeque;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfield::{FqMatrix, GaussianInt, GaussianPrime, IntMatrix};
use crate::lattice::{find_best_coefficients, CofSolution};
use crate::linalg::CMatrix;

/// Per-receiver Algorithm-1 output stacked into the system matrix.
#[derive(Clone, Debug)]
pub struct SystemMatrix {
    pub q: FqMatrix,
    pub a: IntMatrix,
    pub per_row_rate: Vec<f64>,
    pub alpha: Vec<Complex64>,
    pub sigma2: Vec<f64>,
    /// False where `q_ℓ` reduced to the zero vector.
    pub usable: Vec<bool>,
}

impl SystemMatrix {
    pub fn rows(&self) -> usize {
        self.q.rows()
    }

    pub fn cols(&self) -> usize {
        self.q.cols()
    }

    pub fn usable_rows(&self) -> Vec<usize> {
        (0..self.rows()).filter(|&i| self.usable[i]).collect()
    }

    /// Restriction to the given receivers, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> SystemMatrix {
        let k = self.cols();
        SystemMatrix {
            q: self.q.select_rows(rows),
            a: IntMatrix::from_fn(rows.len(), k, |i, j| self.a[(rows[i], j)]),
            per_row_rate: rows.iter().map(|&i| self.per_row_rate[i]).collect(),
            alpha: rows.iter().map(|&i| self.alpha[i]).collect(),
            sigma2: rows.iter().map(|&i| self.sigma2[i]).collect(),
            usable: rows.iter().map(|&i| self.usable[i]).collect(),
        }
    }
}

/// Connected components of the bipartite row/column graph of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkDecomposition {
    pub blocks: Vec<Block>,
}

impl NetworkDecomposition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateReport {
    pub sum_rate: f64,
    /// Rate delivered to each user terminal.
    pub per_user: Vec<f64>,
    pub blocks: usize,
}

pub(crate) fn channel_row(h: &CMatrix, i: usize) -> Vec<Complex64> {
    h.row(i).iter().copied().collect()
}

fn check_channel(h: &CMatrix) -> Result<()> {
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::param("channel matrix has non-finite entries"));
    }
    Ok(())
}

/// Runs Algorithm 1 independently on every row of `h`.
pub fn build_system_matrix(h: &CMatrix, snr: f64, p: GaussianPrime) -> Result<SystemMatrix> {
    check_channel(h)?;
    let (l, k) = h.shape();
    let sols: Vec<CofSolution> = (0..l)
        .into_par_iter()
        .map(|i| find_best_coefficients(&channel_row(h, i), snr))
        .collect::<Result<_>>()?;
    let a = IntMatrix::from_fn(l, k, |i, j| sols[i].a[j]);
    let q = a.reduce(p);
    let usable = (0..l).map(|i| !q.is_zero_row(i)).collect();
    Ok(SystemMatrix {
        per_row_rate: sols.iter().map(|s| s.rate).collect(),
        alpha: sols.iter().map(|s| s.alpha).collect(),
        sigma2: sols.iter().map(|s| s.sigma2).collect(),
        q,
        a,
        usable,
    })
}

/// Breadth-first search over the bipartite graph with an edge `(ℓ, k)` for each
/// nonzero `Q[ℓ, k]`. Isolated rows and columns form singleton blocks.
pub fn network_decompose(q: &FqMatrix) -> NetworkDecomposition {
    let (l, k) = (q.rows(), q.cols());
    let mut row_seen = vec![false; l];
    let mut col_seen = vec![false; k];
    let mut blocks = Vec::new();

    // Nodes 0..l are rows, l..l+k are columns.
    let visit = |start: usize, row_seen: &mut Vec<bool>, col_seen: &mut Vec<bool>| {
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        let mut queue = VecDeque::from([start]);
        if start < l {
            row_seen[start] = true;
        } else {
            col_seen[start - l] = true;
        }
        while let Some(node) = queue.pop_front() {
            if node < l {
                rows.push(node);
                for j in 0..k {
                    if !col_seen[j] && !q.get(node, j).is_zero() {
                        col_seen[j] = true;
                        queue.push_back(l + j);
                    }
                }
            } else {
                let j = node - l;
                cols.push(j);
                for i in 0..l {
                    if !row_seen[i] && !q.get(i, j).is_zero() {
                        row_seen[i] = true;
                        queue.push_back(i);
                    }
                }
            }
        }
        rows.sort_unstable();
        cols.sort_unstable();
        Block { rows, cols }
    };

    for i in 0..l {
        if !row_seen[i] {
            blocks.push(visit(i, &mut row_seen, &mut col_seen));
        }
    }
    for j in 0..k {
        if !col_seen[j] {
            blocks.push(visit(l + j, &mut row_seen, &mut col_seen));
        }
    }
    NetworkDecomposition { blocks }
}

/// Sum rate `Σ_s |U_s| · min{r0, min_{ℓ∈A_s} rate_ℓ}` over the decomposition of
/// the usable rows of `q`. Requires the usable rows to have full column rank.
pub fn decomposed_sum_rate(q: &FqMatrix, rates: &[f64], usable: &[bool], r0: f64) -> Result<RateReport> {
    if rates.len() != q.rows() || usable.len() != q.rows() {
        return Err(Error::dims("rate vector length differs from the number of rows"));
    }
    check_backhaul(r0)?;
    let k = q.cols();
    let rows: Vec<usize> = (0..q.rows()).filter(|&i| usable[i] && !q.is_zero_row(i)).collect();
    let sub = q.select_rows(&rows);
    let rank = sub.rank();
    if rank < k {
        return Err(Error::RankDeficient { rank, needed: k });
    }
    let dec = network_decompose(&sub);
    let mut per_user = vec![0.0; k];
    for b in &dec.blocks {
        if b.cols.is_empty() {
            continue;
        }
        let block_min = b.rows.iter().map(|&i| rates[rows[i]]).fold(f64::INFINITY, f64::min);
        let r = r0.min(block_min).max(0.0);
        for &j in &b.cols {
            per_user[j] = r;
        }
    }
    Ok(RateReport { sum_rate: per_user.iter().sum(), per_user, blocks: dec.len() })
}

pub(crate) fn check_backhaul(r0: f64) -> Result<()> {
    if !(r0 >= 0.0) || r0.is_nan() {
        return Err(Error::param(format!("backhaul rate must be nonnegative, got {r0}")));
    }
    Ok(())
}

/// CoF uplink sum rate with network decomposition.
pub fn cof_sum_rate(sys: &SystemMatrix, r0: f64) -> Result<RateReport> {
    decomposed_sum_rate(&sys.q, &sys.per_row_rate, &sys.usable, r0)
}

/// RCoF downlink sum rate `Σ_ℓ min{r0, R(h̃_ℓ, ã_ℓ)}` for a square `Hd`.
pub fn rcof_sum_rate(hd: &CMatrix, snr: f64, p: GaussianPrime, r0: f64) -> Result<RateReport> {
    check_backhaul(r0)?;
    if !hd.is_square() {
        return Err(Error::dims(format!("downlink channel is {}x{}", hd.nrows(), hd.ncols())));
    }
    let sys = build_system_matrix(hd, snr, p)?;
    rcof_from_system(&sys, r0)
}

pub(crate) fn rcof_from_system(sys: &SystemMatrix, r0: f64) -> Result<RateReport> {
    let rank = sys.q.rank();
    if rank < sys.rows() {
        return Err(Error::RankDeficient { rank, needed: sys.rows() });
    }
    let per_user: Vec<f64> = sys.per_row_rate.iter().map(|&r| r0.min(r).max(0.0)).collect();
    Ok(RateReport { sum_rate: per_user.iter().sum(), per_user, blocks: 1 })
}

/// Finite-field precoding `Q̃⁻¹ · messages` performed at the central processor.
pub fn ff_precode(qd: &FqMatrix, messages: &FqMatrix) -> Result<FqMatrix> {
    if !qd.is_square() {
        return Err(Error::dims("precoding matrix must be square"));
    }
    qd.solve(messages)
}

/// `[Ã · g(Q̃⁻¹)] mod pZ[j]`; the identity whenever `Q̃` is invertible.
pub fn lemma2_product(a: &IntMatrix, p: GaussianPrime) -> Result<FqMatrix> {
    let q = a.reduce(p);
    let inv = q.inverse()?.lift();
    Ok(a.mul(&inv)?.reduce(p))
}

/// Entry-wise reduction helper for a coefficient vector.
pub fn reduce_vector(a: &[GaussianInt], p: GaussianPrime) -> Vec<crate::gfield::FqElem> {
    a.iter().map(|&x| crate::gfield::mod_p_reduce(x, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::FqElem;

    fn p7() -> GaussianPrime {
        GaussianPrime::new(7).unwrap()
    }

    fn fq_from_pattern(pattern: &[&[i64]]) -> FqMatrix {
        FqMatrix::from_fn(pattern.len(), pattern[0].len(), p7(), |i, j| FqElem::new(pattern[i][j], 0, p7()))
    }

    #[test]
    fn identity_channel_system() {
        let sys = build_system_matrix(&CMatrix::identity(3, 3), 10.0, p7()).unwrap();
        assert_eq!(sys.a, IntMatrix::identity(3));
        for r in &sys.per_row_rate {
            assert!((r - 11f64.log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_row_has_zero_rate() {
        let mut h = CMatrix::identity(2, 2);
        h[(1, 1)] = Complex64::new(0.0, 0.0);
        let sys = build_system_matrix(&h, 10.0, p7()).unwrap();
        assert_eq!(sys.per_row_rate[1], 0.0);
    }

    #[test]
    fn decomposition_of_block_diagonal() {
        let q = fq_from_pattern(&[
            &[1, 2, 0, 0, 0],
            &[3, 1, 0, 0, 0],
            &[0, 0, 1, 1, 0],
            &[0, 0, 0, 1, 1],
            &[0, 0, 1, 0, 1],
        ]);
        let d = network_decompose(&q);
        assert_eq!(d.blocks, vec![
            Block { rows: vec![0, 1], cols: vec![0, 1] },
            Block { rows: vec![2, 3, 4], cols: vec![2, 3, 4] },
        ]);
        let dense = fq_from_pattern(&[&[1, 1], &[1, 2]]);
        assert_eq!(network_decompose(&dense).len(), 1);
    }

    #[test]
    fn theorem1_arithmetic() {
        let id = FqMatrix::identity(4, p7());
        let dense = FqMatrix::from_fn(4, 4, p7(), |i, j| {
            if i == j { FqElem::new(2, 0, p7()) } else { FqElem::one(p7()) }
        });
        assert!(dense.rank() == 4);
        let r = decomposed_sum_rate(&dense, &[3.0; 4], &[true; 4], 2.0).unwrap();
        assert_eq!(r.sum_rate, 8.0);
        let q = fq_from_pattern(&[
            &[1, 2, 0, 0, 0],
            &[3, 1, 0, 0, 0],
            &[0, 0, 1, 1, 0],
            &[0, 0, 0, 1, 1],
            &[0, 0, 1, 0, 1],
        ]);
        let r = decomposed_sum_rate(&q, &[1.0, 1.5, 2.0, 2.5, 3.0], &[true; 5], 10.0).unwrap();
        assert_eq!(r.sum_rate, 8.0);
        let mut sing = id.clone();
        sing.set(3, 3, FqElem::zero(p7()));
        assert!(matches!(
            decomposed_sum_rate(&sing, &[1.0; 4], &[true; 4], 1.0),
            Err(Error::RankDeficient { rank: 3, needed: 4 })
        ));
    }

    #[test]
    fn rcof_identity_and_zero_backhaul() {
        let snr = 100.0;
        let r = rcof_sum_rate(&CMatrix::identity(3, 3), snr, p7(), 100.0).unwrap();
        assert!((r.sum_rate - 3.0 * (1.0 + snr).log2()).abs() < 1e-9);
        let r = rcof_sum_rate(&CMatrix::identity(3, 3), snr, p7(), 0.0).unwrap();
        assert_eq!(r.sum_rate, 0.0);
    }

    #[test]
    fn precode_identity() {
        let m = FqMatrix::from_fn(2, 3, p7(), |i, j| FqElem::new(i as i64 + 2 * j as i64, 1, p7()));
        assert_eq!(ff_precode(&FqMatrix::identity(2, p7()), &m).unwrap(), m);
    }
}
