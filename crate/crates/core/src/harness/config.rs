//! Experiment configuration: JSON on disk, validated before any work starts.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::model::ChannelModel;
use crate::error::{Error, Result};
use crate::gfield::GaussianPrime;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Cof,
    Qcof,
    Lqf,
    Qmf,
    Qf,
    Rcof,
    Rqcof,
    Cdpc,
    Czfb,
    Zfb,
    Dpc,
    Ifb,
    /// Full-cooperation sum-power bound.
    Coop,
}

impl Scheme {
    pub const ALL: [Scheme; 13] = [
        Scheme::Cof,
        Scheme::Qcof,
        Scheme::Lqf,
        Scheme::Qmf,
        Scheme::Qf,
        Scheme::Rcof,
        Scheme::Rqcof,
        Scheme::Cdpc,
        Scheme::Czfb,
        Scheme::Zfb,
        Scheme::Dpc,
        Scheme::Ifb,
        Scheme::Coop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Cof => "cof",
            Scheme::Qcof => "qcof",
            Scheme::Lqf => "lqf",
            Scheme::Qmf => "qmf",
            Scheme::Qf => "qf",
            Scheme::Rcof => "rcof",
            Scheme::Rqcof => "rqcof",
            Scheme::Cdpc => "cdpc",
            Scheme::Czfb => "czfb",
            Scheme::Zfb => "zfb",
            Scheme::Dpc => "dpc",
            Scheme::Ifb => "ifb",
            Scheme::Coop => "coop",
        }
    }

    pub fn is_uplink(self) -> bool {
        matches!(self, Scheme::Cof | Scheme::Qcof | Scheme::Lqf | Scheme::Qmf | Scheme::Qf)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Scheme::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config { field: "schemes".into(), message: format!("unknown scheme `{s}`") })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Selection {
    Greedy,
    /// `count` terminals drawn uniformly, independent of the channel.
    Random { count: usize },
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub schema_version: u32,
    pub model: ChannelModel,
    pub snr_db: Vec<f64>,
    pub r0: Vec<f64>,
    pub p: u64,
    pub schemes: Vec<Scheme>,
    pub trials: u64,
    pub selection: Selection,
    pub seed: u64,
}

fn field_err(field: &str, message: impl Into<String>) -> Error {
    Error::Config { field: field.into(), message: message.into() }
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_str(text)
            .map_err(|e| field_err(&format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| field_err("config", format!("cannot read {}: {e}", path.display())))?;
        SimConfig::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn prime(&self) -> Result<GaussianPrime> {
        GaussianPrime::new(self.p).map_err(|e| field_err("p", e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(field_err(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        self.model.validate()?;
        self.prime()?;
        if self.trials == 0 {
            return Err(field_err("trials", "need at least one trial"));
        }
        if self.schemes.is_empty() {
            return Err(field_err("schemes", "no scheme requested"));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|x| !x.is_finite()) {
            return Err(field_err("snr_db", "need a nonempty list of finite values"));
        }
        if self.r0.is_empty() || self.r0.iter().any(|x| x.is_nan() || *x < 0.0) {
            return Err(field_err("r0", "need a nonempty list of nonnegative values"));
        }
        let (k, l) = (self.model.users(), self.model.antennas());
        match self.selection {
            Selection::Random { count } => {
                if self.schemes.iter().any(|s| s.is_uplink()) && !(k..=l).contains(&count) {
                    return Err(field_err("selection.count", format!("uplink needs {k} ≤ count ≤ {l}, got {count}")));
                }
                if self.schemes.iter().any(|s| !s.is_uplink()) && count != l {
                    return Err(field_err("selection.count", format!("downlink serves exactly L = {l} users, got {count}")));
                }
                if count > k.max(l) {
                    return Err(field_err("selection.count", format!("{count} exceeds the terminal count")));
                }
            }
            Selection::None => {
                if self.schemes.iter().any(|s| !s.is_uplink()) && k != l {
                    return Err(field_err("selection", format!("downlink without selection needs K = L, got {k} and {l}")));
                }
            }
            Selection::Greedy => {
                if self.schemes.iter().any(|s| !s.is_uplink()) && k < l {
                    return Err(field_err("selection", format!("downlink selection needs K ≥ L, got {k} < {l}")));
                }
            }
        }
        if self.schemes.iter().any(|s| s.is_uplink()) && k > l {
            return Err(field_err("model", format!("uplink needs L ≥ K, got L = {l} < K = {k}")));
        }
        Ok(())
    }
}

/// Comma-separated list parser shared by the CLI flags.
pub fn parse_list<T: FromStr>(field: &str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<T>().map_err(|_| field_err(field, format!("cannot parse `{}`", s.trim()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SimConfig {
        SimConfig {
            schema_version: SCHEMA_VERSION,
            model: ChannelModel::Rayleigh { k: 2, l: 2 },
            snr_db: vec![10.0],
            r0: vec![4.0],
            p: 7,
            schemes: vec![Scheme::Cof, Scheme::Rcof],
            trials: 3,
            selection: Selection::None,
            seed: 1,
        }
    }

    #[test]
    fn round_trip() {
        let cfg = base();
        assert_eq!(SimConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn field_diagnostics() {
        let mut cfg = base();
        cfg.p = 17;
        assert!(matches!(cfg.validate(), Err(Error::Config { field, .. }) if field == "p"));
        let mut cfg = base();
        cfg.trials = 0;
        assert!(matches!(cfg.validate(), Err(Error::Config { field, .. }) if field == "trials"));
        let text = base().to_json().replace("\"cof\"", "\"bogus\"");
        assert!(matches!(SimConfig::from_json(&text), Err(Error::Config { field, .. }) if field.starts_with("line")));
    }

    #[test]
    fn scheme_names_parse() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert_eq!(parse_list::<f64>("r0", "1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
    }
}
