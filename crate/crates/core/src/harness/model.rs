//! Channel ensembles and the per-trial random streams.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::baselines::wyner_channel;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Purpose tags for the per-trial streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamTag {
    Uplink = 0,
    Downlink = 1,
    RandomAntennas = 2,
    RandomUsers = 3,
}

const TAGS_PER_TRIAL: u64 = 16;

/// Independent stream for `(seed, trial, tag)`; adding schemes or grid points
/// never shifts the draws of another stream.
pub fn trial_rng(seed: u64, trial: u64, tag: StreamTag) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial * TAGS_PER_TRIAL + tag as u64);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelModel {
    /// `h·γ` with `h ~ CN(0, 1)` and `P(γ = 1) = q`.
    BernoulliGaussian { q: f64, k: usize, l: usize },
    Rayleigh { k: usize, l: usize },
    /// Deterministic `L × L` Wyner matrix; `K = L`.
    Wyner { gamma: f64, l: usize },
}

impl ChannelModel {
    /// Number of user terminals.
    pub fn users(&self) -> usize {
        match *self {
            ChannelModel::BernoulliGaussian { k, .. } | ChannelModel::Rayleigh { k, .. } => k,
            ChannelModel::Wyner { l, .. } => l,
        }
    }

    /// Number of antenna terminals.
    pub fn antennas(&self) -> usize {
        match *self {
            ChannelModel::BernoulliGaussian { l, .. } | ChannelModel::Rayleigh { l, .. } | ChannelModel::Wyner { l, .. } => l,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, message: String| Err(Error::Config { field: format!("model.{field}"), message });
        if self.users() == 0 || self.antennas() == 0 {
            return bad("k", "terminal counts must be positive".into());
        }
        match *self {
            ChannelModel::BernoulliGaussian { q, .. } if !(0.0..=1.0).contains(&q) => {
                bad("q", format!("blocking probability {q} outside [0, 1]"))
            }
            ChannelModel::Wyner { gamma, .. } if !(gamma > 0.0 && gamma <= 1.0) => {
                bad("gamma", format!("gamma {gamma} outside (0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

fn cn01(rng: &mut ChaCha12Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// A `rows × cols` draw from the model using `rng`.
pub fn draw_matrix(model: &ChannelModel, rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> CMatrix {
    match *model {
        ChannelModel::Wyner { gamma, l } => wyner_channel(gamma, l),
        ChannelModel::Rayleigh { .. } => CMatrix::from_fn(rows, cols, |_, _| cn01(rng)),
        ChannelModel::BernoulliGaussian { q, .. } => CMatrix::from_fn(rows, cols, |_, _| {
            // Draw the fading value even when blocked so the stream layout
            // does not depend on q.
            let h = cn01(rng);
            if rng.random::<f64>() < q { h } else { Complex64::new(0.0, 0.0) }
        }),
    }
}

/// Uplink channel of a trial: `L × K`, rows are antenna terminals.
pub fn draw_uplink(model: &ChannelModel, seed: u64, trial: u64) -> CMatrix {
    let mut rng = trial_rng(seed, trial, StreamTag::Uplink);
    draw_matrix(model, model.antennas(), model.users(), &mut rng)
}

/// Downlink channel of a trial: `K × L`, rows are user terminals.
pub fn draw_downlink(model: &ChannelModel, seed: u64, trial: u64) -> CMatrix {
    let mut rng = trial_rng(seed, trial, StreamTag::Downlink);
    draw_matrix(model, model.users(), model.antennas(), &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocked_model_is_zero() {
        let m = ChannelModel::BernoulliGaussian { q: 0.0, k: 3, l: 4 };
        assert!(draw_uplink(&m, 9, 0).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn draws_are_reproducible_and_distinct() {
        let m = ChannelModel::Rayleigh { k: 2, l: 2 };
        assert_eq!(draw_uplink(&m, 5, 3), draw_uplink(&m, 5, 3));
        assert_ne!(draw_uplink(&m, 5, 3), draw_uplink(&m, 5, 4));
        assert_ne!(draw_uplink(&m, 5, 3), draw_downlink(&m, 5, 3));
    }

    #[test]
    fn wyner_is_deterministic() {
        let m = ChannelModel::Wyner { gamma: 0.7, l: 4 };
        assert_eq!(draw_uplink(&m, 1, 0), wyner_channel(0.7, 4));
        assert_eq!(draw_downlink(&m, 2, 7), wyner_channel(0.7, 4));
    }
}
