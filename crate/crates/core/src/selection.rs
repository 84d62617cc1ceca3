//! Receiver selection so that the chosen rows of the system matrix form a basis.

use crate::error::{Error, Result};
use crate::gfield::{FqMatrix, RowBasis};
use crate::quantized::{quantized_rates, QuantGrid};
use crate::schemes::{decomposed_sum_rate, network_decompose, SystemMatrix};

pub const EXHAUSTIVE_LIMIT: u128 = 100_000;

/// How a chosen set of rows is scored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// `n · min_ℓ w_ℓ`, the rate of an undecomposed CoF system.
    MaxMin,
    /// `Σ_ℓ w_ℓ`.
    Linear,
    /// `Σ_s |U_s| · min_{ℓ∈A_s} w_ℓ` over the decomposition of the chosen rows.
    Decomposed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionResult {
    /// Chosen row indices, ascending.
    pub chosen: Vec<usize>,
    pub objective: f64,
    pub full_rank: bool,
    /// Set when a greedy block choice decomposes further and its value is not
    /// certified optimal by the linear upper bound.
    pub possibly_suboptimal: bool,
}

fn check_weights(q: &FqMatrix, weights: &[f64]) -> Result<()> {
    if weights.len() != q.rows() {
        return Err(Error::dims(format!("{} weights for {} rows", weights.len(), q.rows())));
    }
    if weights.iter().any(|w| w.is_nan()) {
        return Err(Error::param("selection weights contain NaN"));
    }
    Ok(())
}

/// Value of `objective` on the rows `chosen` of `q`.
pub fn evaluate(q: &FqMatrix, weights: &[f64], chosen: &[usize], objective: Objective) -> f64 {
    match objective {
        Objective::Linear => chosen.iter().map(|&i| weights[i]).sum(),
        Objective::MaxMin => {
            let m = chosen.iter().map(|&i| weights[i]).fold(f64::INFINITY, f64::min);
            if chosen.is_empty() { 0.0 } else { chosen.len() as f64 * m }
        }
        Objective::Decomposed => {
            let sub = q.select_rows(chosen);
            let w: Vec<f64> = chosen.iter().map(|&i| weights[i]).collect();
            decomposed_sum_rate(&sub, &w, &vec![true; chosen.len()], f64::INFINITY)
                .map(|r| r.sum_rate)
                .unwrap_or(0.0)
        }
    }
}

/// Indices sorted by decreasing weight; ties keep ascending index order.
fn weight_order(weights: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]));
    order
}

/// Algorithm 2: scan rows by decreasing weight and keep each row that
/// increases the rank, until `n = cols(Q)` rows are kept.
pub fn greedy_select(q: &FqMatrix, weights: &[f64], objective: Objective) -> Result<SelectionResult> {
    check_weights(q, weights)?;
    let n = q.cols();
    let mut basis = RowBasis::new(n, q.modulus());
    let mut chosen = Vec::with_capacity(n);
    for i in weight_order(weights) {
        if basis.rank() == n {
            break;
        }
        if basis.insert(q.row(i)) {
            chosen.push(i);
        }
    }
    if chosen.len() < n {
        return Err(Error::NoBasis { rank: chosen.len(), needed: n });
    }
    chosen.sort_unstable();
    let objective = evaluate(q, weights, &chosen, objective);
    Ok(SelectionResult { chosen, objective, full_rank: true, possibly_suboptimal: false })
}

fn binomial(m: usize, n: usize) -> u128 {
    let n = n.min(m - n);
    (0..n).fold(1u128, |acc, i| acc * (m - i) as u128 / (i as u128 + 1))
}

/// Global optimum over all full-rank `target`-subsets of rows.
pub fn exhaustive_select(
    q: &FqMatrix,
    weights: &[f64],
    objective: Objective,
    target: usize,
) -> Result<SelectionResult> {
    check_weights(q, weights)?;
    let m = q.rows();
    if target > m {
        return Err(Error::NoBasis { rank: m, needed: target });
    }
    let count = binomial(m, target);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { count });
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut idx: Vec<usize> = (0..target).collect();
    loop {
        if q.select_rows(&idx).rank() == target {
            let v = evaluate(q, weights, &idx, objective);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, idx.clone()));
            }
        }
        // Next combination in lexicographic order.
        let mut i = target;
        loop {
            if i == 0 {
                let (objective, chosen) = best.ok_or(Error::NoBasis { rank: q.rank(), needed: target })?;
                return Ok(SelectionResult { chosen, objective, full_rank: true, possibly_suboptimal: false });
            }
            i -= 1;
            if idx[i] < m - target + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..target {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Uplink AT selection for CoF: run Algorithm 2 inside every subnetwork of the
/// full system matrix and take the union of the block choices.
pub fn at_select_cof(sys: &SystemMatrix, r0: f64) -> Result<SelectionResult> {
    let k = sys.cols();
    let rows = sys.usable_rows();
    let sub = sys.q.select_rows(&rows);
    let rank = sub.rank();
    if rank < k {
        return Err(Error::NoBasis { rank, needed: k });
    }
    let weights: Vec<f64> = sys.per_row_rate.iter().map(|&r| r.min(r0).max(0.0)).collect();
    let dec = network_decompose(&sub);

    let mut chosen = Vec::with_capacity(k);
    let mut flagged = false;
    for block in dec.blocks.iter().filter(|b| !b.cols.is_empty()) {
        let global: Vec<usize> = block.rows.iter().map(|&i| rows[i]).collect();
        let qb = sys.q.select(&global, &block.cols);
        let wb: Vec<f64> = global.iter().map(|&i| weights[i]).collect();
        let pick = greedy_select(&qb, &wb, Objective::Decomposed)?;
        if network_decompose(&qb.select_rows(&pick.chosen)).len() > 1 {
            let bound = greedy_select(&qb, &wb, Objective::Linear)?.objective;
            flagged |= pick.objective < bound - 1e-12;
        }
        chosen.extend(pick.chosen.iter().map(|&i| global[i]));
    }
    chosen.sort_unstable();
    let objective = evaluate(&sys.q, &weights, &chosen, Objective::Decomposed);
    Ok(SelectionResult { chosen, objective, full_rank: true, possibly_suboptimal: flagged })
}

/// Uplink AT selection for LQF: matroid greedy on `min{r0, 2 log2 p − H(ζ_ℓ)}`.
pub fn at_select_lqf(sys: &SystemMatrix, grid: &QuantGrid, r0: f64) -> Result<SelectionResult> {
    let needed = grid.p.symbol_bits();
    if needed > r0 {
        return Err(Error::BackhaulTooSmall { r0, needed });
    }
    let weights: Vec<f64> = quantized_rates(sys, grid).into_iter().map(|r| r.min(r0)).collect();
    greedy_select(&sys.q, &weights, Objective::Linear)
}

/// Downlink UT selection: matroid greedy over the users' rows of `Q̃`.
pub fn ut_select_downlink(qd: &FqMatrix, weights: &[f64]) -> Result<SelectionResult> {
    greedy_select(qd, weights, Objective::Linear)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::{FqElem, GaussianPrime};

    fn p7() -> GaussianPrime {
        GaussianPrime::new(7).unwrap()
    }

    fn fq(rows: &[&[i64]]) -> FqMatrix {
        FqMatrix::from_fn(rows.len(), rows[0].len(), p7(), |i, j| FqElem::new(rows[i][j], 0, p7()))
    }

    #[test]
    fn square_full_rank_takes_all() {
        let q = fq(&[&[1, 2], &[0, 1]]);
        let r = greedy_select(&q, &[0.1, 5.0], Objective::Linear).unwrap();
        assert_eq!(r.chosen, vec![0, 1]);
    }

    #[test]
    fn dependent_row_is_skipped() {
        let q = fq(&[&[1, 0], &[1, 0], &[0, 1]]);
        let r = greedy_select(&q, &[3.0, 2.0, 1.0], Objective::Linear).unwrap();
        assert_eq!(r.chosen, vec![0, 2]);
        assert_eq!(r.objective, 4.0);
    }

    #[test]
    fn no_basis_is_reported() {
        let q = fq(&[&[1, 0], &[2, 0]]);
        assert!(matches!(greedy_select(&q, &[1.0, 1.0], Objective::Linear), Err(Error::NoBasis { .. })));
        assert!(matches!(exhaustive_select(&q, &[1.0, 1.0], Objective::Linear, 2), Err(Error::NoBasis { .. })));
    }

    #[test]
    fn exhaustive_limits() {
        let q = FqMatrix::identity(2, p7());
        let r = exhaustive_select(&q, &[1.0, 2.0], Objective::MaxMin, 2).unwrap();
        assert_eq!(r.chosen, vec![0, 1]);
        assert_eq!(r.objective, 2.0);
        assert_eq!(binomial(40, 20), 137_846_528_820);
        let big = FqMatrix::zeros(40, 20, p7());
        assert!(matches!(exhaustive_select(&big, &[0.0; 40], Objective::Linear, 20), Err(Error::TooLarge { .. })));
    }
}
