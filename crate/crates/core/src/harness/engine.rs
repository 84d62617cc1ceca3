//! Monte Carlo engine: one channel draw per trial, every scheme on every grid
//! point, one row per evaluation.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rayon::prelude::*;

use super::config::{Scheme, Selection, SimConfig};
use super::model::{draw_downlink, draw_uplink, trial_rng, StreamTag};
use crate::baselines::{
    cdpc_rate, cooperative_bound, czfb_rate, dpc_sum_capacity, greedy_qf_selection, greedy_zf_user_selection, qf_rate,
    qmf_rate, zfb_rate,
};
use crate::error::{Error, Result};
use crate::gfield::GaussianPrime;
use crate::ifb::ifb_rate;
use crate::linalg::{db_to_linear, CMatrix};
use crate::quantized::{lqf_from_system, qcof_from_system, quantized_rates, rqcof_from_system, QuantGrid};
use crate::schemes::{build_system_matrix, cof_sum_rate, rcof_from_system, RateReport, SystemMatrix};
use crate::selection::{at_select_cof, at_select_lqf, ut_select_downlink};

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub r0: f64,
    pub trial: u64,
    /// Bits per channel use; 0 on outage, NaN when `error` is set.
    pub sum_rate: f64,
    /// The instantaneous sum rate is zero (rank deficiency or a zero-rate block).
    pub outage: bool,
    /// Active antenna terminals (uplink) or served users (downlink), ascending.
    pub selected: Vec<usize>,
    pub per_receiver: Vec<f64>,
    pub error: Option<String>,
}

impl ResultRow {
    fn new(scheme: Scheme, snr_db: f64, r0: f64, trial: u64, outcome: Result<(Vec<usize>, RateReport)>) -> Self {
        let (sum_rate, outage, selected, per_receiver, error) = match outcome {
            Ok((selected, report)) => {
                let outage = !(report.sum_rate > 0.0);
                let rate = if outage { 0.0 } else { report.sum_rate };
                (rate, outage, selected, report.per_user, None)
            }
            Err(e) if e.is_outage() => (0.0, true, Vec::new(), Vec::new(), None),
            Err(e) => (f64::NAN, false, Vec::new(), Vec::new(), Some(e.to_string())),
        };
        ResultRow { scheme, snr_db, r0, trial, sum_rate, outage, selected, per_receiver, error }
    }
}

/// Ergodic statistics of one `(scheme, snr, r0)` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub r0: f64,
    /// Mean sum rate over the rows without errors; outages count as zero.
    pub mean_sum_rate: f64,
    pub outage_fraction: f64,
    pub samples: usize,
    pub errors: usize,
}

fn sum_only(rate: f64) -> RateReport {
    RateReport { sum_rate: rate, per_user: Vec::new(), blocks: 1 }
}

fn all(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Random index sets of one trial, drawn from their own streams.
#[derive(Clone, Debug, Default)]
pub struct RandomPicks {
    antennas: Option<Vec<usize>>,
    users: Option<Vec<usize>>,
}

impl RandomPicks {
    pub fn new(cfg: &SimConfig, trial: u64) -> Self {
        let Selection::Random { count } = cfg.selection else {
            return RandomPicks { antennas: None, users: None };
        };
        let pick = |n: usize, tag: StreamTag| {
            (count <= n).then(|| {
                let mut rng = trial_rng(cfg.seed, trial, tag);
                let mut v = sample(&mut rng, n, count).into_vec();
                v.sort_unstable();
                v
            })
        };
        RandomPicks {
            antennas: pick(cfg.model.antennas(), StreamTag::RandomAntennas),
            users: pick(cfg.model.users(), StreamTag::RandomUsers),
        }
    }
}

struct Uplink<'a> {
    h: &'a CMatrix,
    sys: &'a SystemMatrix,
    grid: &'a QuantGrid,
    snr: f64,
    users: usize,
}

fn eval_uplink(up: &Uplink, scheme: Scheme, selection: Selection, picks: &RandomPicks, r0: f64) -> Result<(Vec<usize>, RateReport)> {
    let fixed = |greedy: &dyn Fn() -> Result<Vec<usize>>| -> Result<Vec<usize>> {
        match selection {
            Selection::Greedy => greedy(),
            Selection::Random { .. } => picks.antennas.clone().ok_or_else(|| Error::param("no random antenna set")),
            Selection::None => Ok(all(up.h.nrows())),
        }
    };
    match scheme {
        Scheme::Cof => {
            let rows = fixed(&|| Ok(at_select_cof(up.sys, r0)?.chosen))?;
            let report = cof_sum_rate(&up.sys.select_rows(&rows), r0)?;
            Ok((rows, report))
        }
        Scheme::Qcof => {
            let rows = fixed(&|| {
                let mut quantized = up.sys.clone();
                quantized.per_row_rate = quantized_rates(up.sys, up.grid);
                Ok(at_select_cof(&quantized, r0)?.chosen)
            })?;
            let report = qcof_from_system(&up.sys.select_rows(&rows), up.grid, r0)?;
            Ok((rows, report))
        }
        Scheme::Lqf => {
            let rows = fixed(&|| Ok(at_select_lqf(up.sys, up.grid, r0)?.chosen))?;
            let report = lqf_from_system(&up.sys.select_rows(&rows), up.grid, r0)?;
            Ok((rows, report))
        }
        Scheme::Qmf | Scheme::Qf => {
            let rows = fixed(&|| Ok(greedy_qf_selection(up.h, up.snr, r0, up.users)?.0))?;
            let h = up.h.select_rows(&rows);
            let rate = if scheme == Scheme::Qmf { qmf_rate(&h, up.snr, r0)? } else { qf_rate(&h, up.snr, r0)? };
            Ok((rows, sum_only(rate)))
        }
        _ => unreachable!("downlink scheme in the uplink evaluator"),
    }
}

struct Downlink<'a> {
    h: &'a CMatrix,
    snr: f64,
    p: GaussianPrime,
    grid: &'a QuantGrid,
    /// Algorithm-1 system of all users, built on first use.
    sys: std::cell::OnceCell<Result<SystemMatrix>>,
}

impl Downlink<'_> {
    fn system(&self) -> Result<&SystemMatrix> {
        self.sys.get_or_init(|| build_system_matrix(self.h, self.snr, self.p)).as_ref().map_err(Clone::clone)
    }
}

fn eval_downlink(
    dn: &Downlink,
    scheme: Scheme,
    selection: Selection,
    picks: &RandomPicks,
    r0: f64,
) -> Result<(Vec<usize>, RateReport)> {
    let l = dn.h.ncols();
    let users = match (selection, scheme) {
        (Selection::None, _) => all(dn.h.nrows()),
        (Selection::Random { .. }, _) => picks.users.clone().ok_or_else(|| Error::param("no random user set"))?,
        (Selection::Greedy, Scheme::Rcof | Scheme::Rqcof) => {
            let sys = dn.system()?;
            let rates =
                if scheme == Scheme::Rcof { sys.per_row_rate.clone() } else { quantized_rates(sys, dn.grid) };
            let weights: Vec<f64> = rates.iter().map(|&r| r.min(r0).max(0.0)).collect();
            ut_select_downlink(&sys.q, &weights)?.chosen
        }
        (Selection::Greedy, Scheme::Cdpc | Scheme::Czfb) => greedy_zf_user_selection(dn.h, dn.snr, r0, l, false)?.0,
        (Selection::Greedy, _) => greedy_zf_user_selection(dn.h, dn.snr, f64::INFINITY, l, false)?.0,
    };
    let hd = dn.h.select_rows(&users);
    let report = match scheme {
        Scheme::Rcof | Scheme::Rqcof => {
            let sys = dn.system()?.select_rows(&users);
            if scheme == Scheme::Rcof { rcof_from_system(&sys, r0)? } else { rqcof_from_system(&sys, dn.grid, r0)? }
        }
        Scheme::Cdpc => sum_only(cdpc_rate(&hd, dn.snr, r0)?),
        Scheme::Czfb => sum_only(czfb_rate(&hd, dn.snr, r0)?),
        Scheme::Zfb => sum_only(zfb_rate(&hd, dn.snr)?),
        Scheme::Dpc => sum_only(dpc_sum_capacity(&hd, dn.snr)?),
        Scheme::Ifb => ifb_rate(&hd, dn.snr, dn.p)?.1,
        Scheme::Coop => sum_only(cooperative_bound(&hd, dn.snr)?),
        _ => unreachable!("uplink scheme in the downlink evaluator"),
    };
    Ok((users, report))
}

/// Schemes whose value does not depend on the backhaul rate.
fn backhaul_free(scheme: Scheme) -> bool {
    matches!(scheme, Scheme::Zfb | Scheme::Dpc | Scheme::Ifb | Scheme::Coop)
}

/// Inputs shared by every grid point of one channel realization.
pub struct Realization<'a> {
    /// Uplink channel, `L × K`.
    pub uplink: Option<&'a CMatrix>,
    /// Downlink channel, `K × L`.
    pub downlink: Option<&'a CMatrix>,
    pub trial: u64,
}

/// Evaluates `schemes` on the `snr_db × r0` grid for one realization.
pub fn evaluate_realization(
    real: &Realization,
    schemes: &[Scheme],
    snr_grid: &[f64],
    r0_grid: &[f64],
    p: GaussianPrime,
    selection: Selection,
    picks: &RandomPicks,
) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for &snr_db in snr_grid {
        let snr = db_to_linear(snr_db);
        let grid = QuantGrid::new(p, snr);
        let sys_up = real.uplink.map(|h| build_system_matrix(h, snr, p));
        let dn = real.downlink.zip(grid.as_ref().ok()).map(|(h, g)| Downlink {
            h,
            snr,
            p,
            grid: g,
            sys: std::cell::OnceCell::new(),
        });
        let mut cached: BTreeMap<Scheme, ResultRow> = BTreeMap::new();
        for &r0 in r0_grid {
            for &scheme in schemes {
                if let Some(row) = cached.get(&scheme) {
                    rows.push(ResultRow { r0, ..row.clone() });
                    continue;
                }
                let outcome = match (&grid, scheme.is_uplink()) {
                    (Err(e), _) => Err(e.clone()),
                    (Ok(g), true) => match (real.uplink, sys_up.as_ref()) {
                        (Some(h), Some(Ok(sys))) => {
                            let up = Uplink { h, sys, grid: g, snr, users: h.ncols() };
                            eval_uplink(&up, scheme, selection, picks, r0)
                        }
                        (_, Some(Err(e))) => Err(e.clone()),
                        _ => Err(Error::param("no uplink channel")),
                    },
                    (Ok(_), false) => match dn.as_ref() {
                        Some(dn) => eval_downlink(dn, scheme, selection, picks, r0),
                        None => Err(Error::param("no downlink channel")),
                    },
                };
                let row = ResultRow::new(scheme, snr_db, r0, real.trial, outcome);
                if backhaul_free(scheme) {
                    cached.insert(scheme, row.clone());
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// All rows of one trial.
pub fn evaluate_trial(cfg: &SimConfig, trial: u64) -> Result<Vec<ResultRow>> {
    let p = cfg.prime()?;
    let picks = RandomPicks::new(cfg, trial);
    let need_up = cfg.schemes.iter().any(|s| s.is_uplink());
    let need_dn = cfg.schemes.iter().any(|s| !s.is_uplink());
    let h_up = need_up.then(|| draw_uplink(&cfg.model, cfg.seed, trial));
    let h_dn = need_dn.then(|| draw_downlink(&cfg.model, cfg.seed, trial));
    let real = Realization { uplink: h_up.as_ref(), downlink: h_dn.as_ref(), trial };
    Ok(evaluate_realization(&real, &cfg.schemes, &cfg.snr_db, &cfg.r0, p, cfg.selection, &picks))
}

/// Row order of the output: `(snr, r0, trial, scheme)`.
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        a.snr_db
            .total_cmp(&b.snr_db)
            .then(a.r0.total_cmp(&b.r0))
            .then(a.trial.cmp(&b.trial))
            .then(a.scheme.name().cmp(b.scheme.name()))
    });
}

/// Runs every trial in parallel; the result does not depend on the thread count.
pub fn run_montecarlo(cfg: &SimConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let per_trial: Vec<Vec<ResultRow>> =
        (0..cfg.trials).into_par_iter().map(|t| evaluate_trial(cfg, t)).collect::<Result<_>>()?;
    let mut rows: Vec<ResultRow> = per_trial.into_iter().flatten().collect();
    sort_rows(&mut rows);
    Ok(rows)
}

/// Serial reference implementation of [`run_montecarlo`].
pub fn run_montecarlo_serial(cfg: &SimConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for t in 0..cfg.trials {
        rows.extend(evaluate_trial(cfg, t)?);
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Ergodic means per `(scheme, snr, r0)`, ordered like the rows.
pub fn summarize(rows: &[ResultRow]) -> Vec<Summary> {
    let mut cells: Vec<Summary> = Vec::new();
    let mut index: BTreeMap<(String, u64, u64), usize> = BTreeMap::new();
    for row in rows {
        let key = (row.scheme.name().to_string(), row.snr_db.to_bits(), row.r0.to_bits());
        let i = *index.entry(key).or_insert_with(|| {
            cells.push(Summary {
                scheme: row.scheme,
                snr_db: row.snr_db,
                r0: row.r0,
                mean_sum_rate: 0.0,
                outage_fraction: 0.0,
                samples: 0,
                errors: 0,
            });
            cells.len() - 1
        });
        let cell = &mut cells[i];
        if row.error.is_some() {
            cell.errors += 1;
            continue;
        }
        cell.samples += 1;
        cell.mean_sum_rate += row.sum_rate;
        cell.outage_fraction += if row.outage { 1.0 } else { 0.0 };
    }
    for cell in &mut cells {
        if cell.samples > 0 {
            cell.mean_sum_rate /= cell.samples as f64;
            cell.outage_fraction /= cell.samples as f64;
        } else {
            cell.mean_sum_rate = f64::NAN;
            cell.outage_fraction = f64::NAN;
        }
    }
    cells.sort_by(|a, b| {
        a.scheme
            .name()
            .cmp(b.scheme.name())
            .then(a.snr_db.total_cmp(&b.snr_db))
            .then(a.r0.total_cmp(&b.r0))
    });
    cells
}
