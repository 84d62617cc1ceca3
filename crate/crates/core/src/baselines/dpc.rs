//! Broadcast-channel sum capacity under per-antenna power constraints.
//!
//! Uses the minimax uplink-downlink duality
//!
//! ```text
//! C = min_{Λ diag ≥ 0, Σλ_i = n}  max_{D diag ≥ 0, tr D = n·P}  log det(Λ + HᴴDH) − log det Λ
//! ```
//!
//! with `H` the users × antennas channel. The inner problem is a sum-power MAC
//! solved by an active-set Newton method; the outer problem is a Newton method
//! on the simplex whose Hessian is the Schur complement through the inner
//! optimum. Both sides produce certified bounds on `C`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

const LN2: f64 = std::f64::consts::LN_2;
const MAX_OUTER: usize = 200;
const MAX_INNER: usize = 300;

/// Solver output; values in bits per channel use.
#[derive(Clone, Debug, PartialEq)]
pub struct DpcSolution {
    pub capacity: f64,
    pub lower: f64,
    pub upper: f64,
    /// Dual noise levels, one per retained antenna.
    pub lambda: Vec<f64>,
    /// Dual uplink powers, one per retained user.
    pub powers: Vec<f64>,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct DpcOptions {
    /// Required gap `upper − lower` in bits.
    pub tolerance: f64,
}

impl Default for DpcOptions {
    fn default() -> Self {
        DpcOptions { tolerance: 1e-6 }
    }
}

struct Problem {
    /// `u_k = Hᴴ e_k`, one per user.
    u: Vec<DVector<Complex64>>,
    n: usize,
    total: f64,
}

struct Eval {
    f: f64,
    w: DMatrix<Complex64>,
}

impl Problem {
    fn eval(&self, lambda: &[f64], d: &[f64]) -> Option<Eval> {
        let n = self.n;
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(lambda[i], 0.0);
        }
        for (uk, &dk) in self.u.iter().zip(d) {
            if dk > 0.0 {
                m += uk * uk.adjoint() * Complex64::new(dk, 0.0);
            }
        }
        let ch = m.cholesky()?;
        let l = ch.l_dirty();
        let logdet = 2.0 * (0..n).map(|i| l[(i, i)].re.ln()).sum::<f64>();
        let w = ch.inverse();
        let f = logdet - lambda.iter().map(|x| x.ln()).sum::<f64>();
        Some(Eval { f, w })
    }

    fn wu(&self, w: &DMatrix<Complex64>) -> Vec<DVector<Complex64>> {
        self.u.iter().map(|uk| w * uk).collect()
    }

    fn d_gradient(&self, wu: &[DVector<Complex64>]) -> Vec<f64> {
        self.u.iter().zip(wu).map(|(uk, wuk)| uk.dotc(wuk).re).collect()
    }

    fn d_hessian(&self, wu: &[DVector<Complex64>], idx: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(idx.len(), idx.len(), |a, b| -self.u[idx[a]].dotc(&wu[idx[b]]).norm_sqr())
    }
}

struct Inner {
    d: Vec<f64>,
    f: f64,
    w: DMatrix<Complex64>,
    gap: f64,
}

/// Solves `N_FF x_F + μ1 = c_F`, `Σ x_F = t` on the index set `free`.
fn face_solution(n_mat: &DMatrix<f64>, c: &[f64], free: &[usize], t: f64) -> Option<Vec<f64>> {
    let m = free.len();
    let mut nf = DMatrix::from_fn(m, m, |a, b| n_mat[(free[a], free[b])]);
    let scale = nf.diagonal().abs().max().max(1e-300);
    for i in 0..m {
        nf[(i, i)] += 1e-12 * scale;
    }
    let cf = DVector::from_iterator(m, free.iter().map(|&i| c[i]));
    let ones = DVector::from_element(m, 1.0);
    let lu = nf.lu();
    let (nc, n1) = (lu.solve(&cf)?, lu.solve(&ones)?);
    let mu = (nc.sum() - t) / n1.sum();
    Some((0..m).map(|a| nc[a] - mu * n1[a]).collect())
}

/// Maximizes the concave quadratic `cᵀx − ½xᵀNx` over `{x ≥ 0, Σx = t}` with a
/// primal active-set method started from the feasible point `start`.
fn simplex_qp(n_mat: &DMatrix<f64>, c: &[f64], start: &[f64], t: f64) -> Vec<f64> {
    let k = c.len();
    let mut x = start.to_vec();
    let mut free: Vec<usize> = (0..k).filter(|&i| x[i] > 0.0).collect();
    let scale = c.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-300);
    for _ in 0..4 * k + 20 {
        let Some(sol) = face_solution(n_mat, c, &free, t) else {
            return x;
        };
        if sol.iter().all(|&v| v >= 0.0) {
            for i in 0..k {
                x[i] = 0.0;
            }
            for (&i, &v) in free.iter().zip(&sol) {
                x[i] = v;
            }
            let nx = n_mat * DVector::from_column_slice(&x);
            let q: Vec<f64> = (0..k).map(|i| c[i] - nx[i]).collect();
            let mu = free.iter().map(|&i| q[i]).sum::<f64>() / free.len() as f64;
            let entering = (0..k)
                .filter(|i| !free.contains(i))
                .map(|i| (i, q[i]))
                .fold(None, |b: Option<(usize, f64)>, cur| match b {
                    Some(b) if b.1 >= cur.1 => Some(b),
                    _ => Some(cur),
                });
            match entering {
                Some((i, qi)) if qi > mu + 1e-13 * scale => {
                    free.push(i);
                    free.sort_unstable();
                }
                _ => return x,
            }
        } else {
            // Move towards the face optimum until a coordinate hits zero.
            let mut tau = 1.0;
            let mut blocking = None;
            for (&i, &v) in free.iter().zip(&sol) {
                let p = v - x[i];
                if v < 0.0 && p < 0.0 {
                    let s = x[i] / -p;
                    if s < tau {
                        tau = s;
                        blocking = Some(i);
                    }
                }
            }
            for (&i, &v) in free.iter().zip(&sol) {
                x[i] = (x[i] + tau * (v - x[i])).max(0.0);
            }
            if let Some(b) = blocking {
                x[b] = 0.0;
                free.retain(|&i| i != b);
            }
            if free.is_empty() {
                return start.to_vec();
            }
        }
    }
    x
}

fn solve_inner(prob: &Problem, lambda: &[f64], start: &[f64], tol: f64) -> Option<Inner> {
    let k = prob.u.len();
    let t = prob.total;
    let mut d = start.to_vec();
    let s: f64 = d.iter().sum();
    if !(s > 0.0) {
        d = vec![t / k as f64; k];
    } else {
        d.iter_mut().for_each(|x| *x *= t / s);
    }
    let all: Vec<usize> = (0..k).collect();

    let mut e = prob.eval(lambda, &d)?;
    for _ in 0..MAX_INNER {
        let wu = prob.wu(&e.w);
        let g = prob.d_gradient(&wu);
        let gmax = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let gap = t * gmax - d.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>();
        if gap <= tol {
            return Some(Inner { d, f: e.f, w: e.w, gap: gap.max(0.0) });
        }
        let n_mat = -prob.d_hessian(&wu, &all);
        let nd = &n_mat * DVector::from_column_slice(&d);
        let c: Vec<f64> = (0..k).map(|i| g[i] + nd[i]).collect();
        let x = simplex_qp(&n_mat, &c, &d, t);
        let delta: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a - b).collect();
        let slope: f64 = delta.iter().zip(&g).map(|(a, b)| a * b).sum();
        let mut moved = false;
        if slope > 0.0 {
            let mut alpha = 1.0;
            for _ in 0..40 {
                let trial: Vec<f64> = d.iter().zip(&delta).map(|(a, b)| (a + alpha * b).max(0.0)).collect();
                if let Some(te) = prob.eval(lambda, &trial) {
                    if te.f >= e.f + 1e-4 * alpha * slope {
                        d = trial;
                        e = te;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
        }
        if !moved {
            // Progress is below double precision.
            return Some(Inner { d, f: e.f, w: e.w, gap: gap.max(0.0) });
        }
    }
    let g = prob.d_gradient(&prob.wu(&e.w));
    let gmax = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gap = (t * gmax - d.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>()).max(0.0);
    Some(Inner { d, f: e.f, w: e.w, gap })
}

/// Null-space basis `[I; −1ᵀ]` of `1ᵀ` in dimension `m`.
fn simplex_basis(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m - 1, |i, j| if i == j { 1.0 } else if i == m - 1 { -1.0 } else { 0.0 })
}

fn outer_hessian(prob: &Problem, lambda: &[f64], inner: &Inner) -> DMatrix<f64> {
    let n = prob.n;
    let w = &inner.w;
    let mut h = DMatrix::from_fn(n, n, |i, j| -w[(i, j)].norm_sqr());
    for i in 0..n {
        h[(i, i)] += 1.0 / (lambda[i] * lambda[i]);
    }
    let free: Vec<usize> = (0..prob.u.len()).filter(|&k| inner.d[k] > 0.0).collect();
    if free.len() < 2 {
        return h;
    }
    let wu = prob.wu(w);
    let hyy = prob.d_hessian(&wu, &free);
    let hxy = DMatrix::from_fn(n, free.len(), |i, a| -wu[free[a]][i].norm_sqr());
    let z = simplex_basis(free.len());
    let mut inner_red = -(z.transpose() * hyy * &z);
    let scale = inner_red.diagonal().abs().max().max(1e-300);
    for i in 0..inner_red.nrows() {
        inner_red[(i, i)] += 1e-12 * scale;
    }
    let coupling = &hxy * &z;
    if let Some(sol) = inner_red.lu().solve(&coupling.transpose()) {
        h += coupling * sol;
    }
    h
}

fn build_problem(h: &CMatrix, per_antenna_power: f64) -> Result<Option<Problem>> {
    if !(per_antenna_power >= 0.0) || !per_antenna_power.is_finite() {
        return Err(Error::param(format!("per-antenna power {per_antenna_power}")));
    }
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::param("channel has non-finite entries"));
    }
    let tiny = 1e-300;
    let antennas: Vec<usize> = (0..h.ncols()).filter(|&j| h.column(j).norm_squared() > tiny).collect();
    let users: Vec<usize> = (0..h.nrows()).filter(|&i| h.row(i).norm_squared() > tiny).collect();
    if antennas.is_empty() || users.is_empty() || per_antenna_power == 0.0 {
        return Ok(None);
    }
    let n = antennas.len();
    let u = users
        .iter()
        .map(|&k| DVector::from_iterator(n, antennas.iter().map(|&j| h[(k, j)].conj())))
        .collect();
    Ok(Some(Problem { u, n, total: n as f64 * per_antenna_power }))
}

/// Sum capacity of the broadcast channel `y = Hx + z` (users × antennas) with
/// `E|x_i|² ≤ per_antenna_power` and unit noise at every user.
pub fn per_antenna_dpc(h: &CMatrix, per_antenna_power: f64, opts: &DpcOptions) -> Result<DpcSolution> {
    let Some(prob) = build_problem(h, per_antenna_power)? else {
        return Ok(DpcSolution { capacity: 0.0, lower: 0.0, upper: 0.0, lambda: vec![], powers: vec![], iterations: 0 });
    };
    let n = prob.n;
    let k = prob.u.len();
    let tol_nats = opts.tolerance * LN2;
    let inner_tol = (tol_nats * 1e-3).max(1e-14);

    let mut lambda = vec![1.0; n];
    let mut d = vec![prob.total / k as f64; k];
    let mut best_upper = f64::INFINITY;
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_point = (lambda.clone(), d.clone(), 0.0);

    for iter in 0..MAX_OUTER {
        let inner = solve_inner(&prob, &lambda, &d, inner_tol).ok_or(Error::Singular)?;
        d = inner.d.clone();
        let grad = outer_gradient(&inner, &lambda);
        let (upper, lower) = bounds(&inner, &lambda);
        if upper < best_upper {
            best_upper = upper;
            best_point = (lambda.clone(), d.clone(), inner.f);
        }
        best_lower = best_lower.max(lower);
        if best_upper - best_lower <= tol_nats {
            return Ok(finish(best_lower, best_upper, best_point, iter + 1));
        }

        // Newton direction on {Σλ = n}.
        let hess = outer_hessian(&prob, &lambda, &inner);
        let z = simplex_basis(n);
        let mut red = z.transpose() * &hess * &z;
        let scale = red.diagonal().abs().max().max(1e-300);
        for i in 0..red.nrows() {
            red[(i, i)] += 1e-12 * scale;
        }
        let rg = z.transpose() * DVector::from_column_slice(&grad);
        let mut dir: Vec<f64> = match red.lu().solve(&(-rg)) {
            Some(s) => (&z * s).iter().copied().collect(),
            None => vec![0.0; n],
        };
        let mut slope: f64 = dir.iter().zip(&grad).map(|(a, b)| a * b).sum();
        if !(slope < 0.0) {
            let mean = grad.iter().sum::<f64>() / n as f64;
            dir = grad.iter().map(|g| mean - g).collect();
            slope = dir.iter().zip(&grad).map(|(a, b)| a * b).sum();
        }
        let alpha_max = dir
            .iter()
            .zip(&lambda)
            .filter(|(s, _)| **s < 0.0)
            .map(|(s, l)| 0.95 * l / -s)
            .fold(f64::INFINITY, f64::min);
        let mut alpha = alpha_max.min(1.0);
        let mut moved = false;
        for _ in 0..50 {
            let trial: Vec<f64> = lambda.iter().zip(&dir).map(|(l, s)| l + alpha * s).collect();
            if let Some(ti) = solve_inner(&prob, &trial, &d, inner_tol) {
                // Near the optimum the decrease drops below rounding noise in
                // `f`; a shrinking certified gap is then the better test.
                let (tu, tl) = bounds(&ti, &trial);
                if tu <= upper + 1e-4 * alpha * slope || tu - tl < 0.5 * (upper - lower) {
                    lambda = trial;
                    d = ti.d;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if best_upper - best_lower <= tol_nats {
        Ok(finish(best_lower, best_upper, best_point, MAX_OUTER))
    } else {
        Err(Error::NonConvergence { lower: best_lower / LN2, upper: best_upper / LN2 })
    }
}

fn outer_gradient(inner: &Inner, lambda: &[f64]) -> Vec<f64> {
    (0..lambda.len()).map(|i| inner.w[(i, i)].re - 1.0 / lambda[i]).collect()
}

/// Certified `(upper, lower)` bounds in nats from an inner solution at `lambda`.
fn bounds(inner: &Inner, lambda: &[f64]) -> (f64, f64) {
    let grad = outer_gradient(inner, lambda);
    let gmin = grad.iter().copied().fold(f64::INFINITY, f64::min);
    let lower = inner.f + lambda.len() as f64 * gmin - grad.iter().zip(lambda).map(|(a, b)| a * b).sum::<f64>();
    (inner.f + inner.gap, lower)
}

fn finish(lower: f64, upper: f64, point: (Vec<f64>, Vec<f64>, f64), iterations: usize) -> DpcSolution {
    let (lambda, powers, f) = point;
    DpcSolution {
        capacity: f.clamp(lower, upper) / LN2,
        lower: lower / LN2,
        upper: upper / LN2,
        lambda,
        powers,
        iterations,
    }
}

/// Broadcast sum capacity under a total power constraint, via the dual
/// sum-power MAC with identity noise.
pub fn sum_power_dpc(h: &CMatrix, total_power: f64) -> Result<f64> {
    let Some(mut prob) = build_problem(h, 1.0)? else {
        return Ok(0.0);
    };
    if !(total_power > 0.0) {
        return Ok(0.0);
    }
    prob.total = total_power;
    let lambda = vec![1.0; prob.n];
    let start = vec![total_power / prob.u.len() as f64; prob.u.len()];
    let inner = solve_inner(&prob, &lambda, &start, 1e-13).ok_or(Error::Singular)?;
    Ok(inner.f / LN2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real_matrix};

    #[test]
    fn identity_channel() {
        let snr = 10.0;
        let s = per_antenna_dpc(&CMatrix::identity(3, 3), snr, &DpcOptions::default()).unwrap();
        assert!((s.capacity - 3.0 * (1.0 + snr).log2()).abs() < 1e-6);
        assert!(s.upper - s.lower <= 1e-6);
    }

    #[test]
    fn diagonal_channel_matches_power_grid() {
        let h = real_matrix(&[&[2.0, 0.0], &[0.0, 1.0]]);
        let p = 3.0;
        let s = per_antenna_dpc(&h, p, &DpcOptions::default()).unwrap();
        // Each antenna serves its own user at full power.
        let mut best: f64 = 0.0;
        for a in 0..=100 {
            for b in 0..=100 {
                let (pa, pb) = (p * a as f64 / 100.0, p * b as f64 / 100.0);
                best = best.max((1.0 + 4.0 * pa).log2() + (1.0 + pb).log2());
            }
        }
        assert!((s.capacity - best).abs() < 1e-6);
    }

    #[test]
    fn scalar_channel() {
        let h = CMatrix::from_element(1, 1, c(0.3, -1.1));
        let s = per_antenna_dpc(&h, 5.0, &DpcOptions::default()).unwrap();
        assert!((s.capacity - (1.0 + 5.0 * h[(0, 0)].norm_sqr()).log2()).abs() < 1e-9);
    }

    #[test]
    fn zero_channel_has_zero_capacity() {
        let s = per_antenna_dpc(&CMatrix::zeros(2, 2), 5.0, &DpcOptions::default()).unwrap();
        assert_eq!(s.capacity, 0.0);
        assert_eq!(sum_power_dpc(&CMatrix::zeros(2, 2), 5.0).unwrap(), 0.0);
    }
}
