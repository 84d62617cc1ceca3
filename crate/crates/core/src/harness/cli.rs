//! `dascof` command line: `rate`, `sweep`, `wyner`, `ifb` and `selftest`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;

use super::config::{parse_list, Scheme, Selection, SimConfig, SCHEMA_VERSION};
use super::engine::{evaluate_realization, run_montecarlo, summarize, RandomPicks, Realization, ResultRow, Summary};
use super::model::{draw_downlink, draw_uplink, ChannelModel};
use super::output::{write_csv, write_plot, write_records, CsvRecord};
use super::selftest::run_selftest;
use crate::baselines::{
    df_wyner_rate, qmf_wyner_per_user, wyner_power_allocation, wyner_rate_at, PaScheme, WynerParams,
};
use crate::error::{Error, Result};
use crate::gfield::GaussianPrime;
use crate::linalg::{db_to_linear, CMatrix};

#[derive(Parser, Debug)]
#[command(name = "dascof", version, about = "Sum-rate evaluation for distributed antenna systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (CSV or plot data); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated scheme names.
    #[arg(long, global = true)]
    schemes: Option<String>,
    /// Comma-separated SNR values in dB.
    #[arg(long = "snr-db", global = true, allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Comma-separated backhaul rates in bits.
    #[arg(long, global = true)]
    r0: Option<String>,
    /// Prime p ≡ 3 (mod 4) of the finite field.
    #[arg(long, global = true)]
    p: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Write ergodic means as gnuplot data blocks instead of per-trial CSV.
    #[arg(long = "plot-layout", global = true)]
    plot_layout: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate schemes on one channel (from a JSON file or the configured model).
    Rate {
        /// JSON file with `re` (and optionally `im`) row-major matrices.
        #[arg(long)]
        channel: Option<PathBuf>,
    },
    /// Monte Carlo sweep over the configured grid.
    Sweep,
    /// Per-user rates in the symmetric Wyner model.
    Wyner {
        #[arg(long, default_value_t = 0.7)]
        gamma: f64,
    },
    /// IFB against ZFB and DPC on 5 x 5 Rayleigh channels.
    Ifb,
    /// Quick oracle checks.
    Selftest,
}

fn cfg_err(field: &str, message: impl Into<String>) -> Error {
    Error::Config { field: field.into(), message: message.into() }
}

fn prime(p: u64) -> Result<GaussianPrime> {
    GaussianPrime::new(p).map_err(|e| cfg_err("p", e.to_string()))
}

impl Cli {
    fn snr_list(&self, default: &[f64]) -> Result<Vec<f64>> {
        self.snr_db.as_deref().map_or(Ok(default.to_vec()), |s| parse_list("snr-db", s))
    }

    fn r0_list(&self, default: &[f64]) -> Result<Vec<f64>> {
        self.r0.as_deref().map_or(Ok(default.to_vec()), |s| parse_list("r0", s))
    }

    fn scheme_list(&self, default: &[Scheme]) -> Result<Vec<Scheme>> {
        self.schemes.as_deref().map_or(Ok(default.to_vec()), |s| parse_list::<Scheme>("schemes", s))
    }

    /// Config file with the command-line overrides applied.
    fn load_config(&self) -> Result<SimConfig> {
        let path = self.config.as_deref().ok_or_else(|| cfg_err("config", "--config is required"))?;
        let mut cfg = SimConfig::load(path)?;
        self.apply_overrides(&mut cfg)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_overrides(&self, cfg: &mut SimConfig) -> Result<()> {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(p) = self.p {
            cfg.p = p;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        cfg.schemes = self.scheme_list(&cfg.schemes)?;
        cfg.snr_db = self.snr_list(&cfg.snr_db)?;
        cfg.r0 = self.r0_list(&cfg.r0)?;
        Ok(())
    }
}

fn with_output(path: Option<&Path>, out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

fn emit_rows(cli: &Cli, rows: &[ResultRow], out: &mut dyn Write) -> Result<()> {
    if cli.plot_layout {
        with_output(cli.out.as_deref(), out, |w| write_plot(&summarize(rows), w))
    } else {
        with_output(cli.out.as_deref(), out, |w| write_csv(rows, w))
    }
}

fn print_summary(summaries: &[Summary], err: &mut dyn Write) -> Result<()> {
    for s in summaries {
        writeln!(
            err,
            "{:>6} snr {:>5} dB r0 {:>4}: mean {:.4} bits, outage {:.4}, {} samples, {} errors",
            s.scheme, s.snr_db, s.r0, s.mean_sum_rate, s.outage_fraction, s.samples, s.errors
        )?;
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

fn load_channel(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| cfg_err("channel", format!("{}: {e}", path.display())))?;
    let f: ChannelFile = serde_json::from_str(&text)
        .map_err(|e| cfg_err(&format!("channel line {} column {}", e.line(), e.column()), e.to_string()))?;
    let rows = f.re.len();
    let cols = f.re.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || f.re.iter().any(|r| r.len() != cols) {
        return Err(cfg_err("channel.re", "need a nonempty rectangular matrix"));
    }
    if let Some(im) = &f.im {
        if im.len() != rows || im.iter().any(|r| r.len() != cols) {
            return Err(cfg_err("channel.im", "shape differs from `re`"));
        }
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| Complex64::new(f.re[i][j], f.im.as_ref().map_or(0.0, |m| m[i][j]))))
}

fn cmd_rate(cli: &Cli, channel: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let p = prime(cli.p.unwrap_or(251))?;
    let snr = cli.snr_list(&[20.0])?;
    let r0 = cli.r0_list(&[6.0])?;
    let (up, dn) = match channel {
        Some(path) => {
            let h = load_channel(path)?;
            (h.clone(), h)
        }
        None => {
            let cfg = cli.load_config()?;
            let seed = cfg.seed;
            (draw_uplink(&cfg.model, seed, 0), draw_downlink(&cfg.model, seed, 0))
        }
    };
    let schemes = match &cli.schemes {
        Some(_) => cli.scheme_list(&[])?,
        None => Scheme::ALL.to_vec(),
    };
    // A tall uplink or wide downlink needs selection down to a square system.
    let selection = if up.nrows() == up.ncols() { Selection::None } else { Selection::Greedy };
    let real = Realization { uplink: Some(&up), downlink: Some(&dn), trial: 0 };
    let rows = evaluate_realization(&real, &schemes, &snr, &r0, p, selection, &RandomPicks::default());
    for r in &rows {
        if let Some(e) = &r.error {
            writeln!(out, "# {} failed: {e}", r.scheme)?;
        }
    }
    emit_rows(cli, &rows, out)
}

fn cmd_sweep(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = cli.load_config()?;
    let rows = run_montecarlo(&cfg)?;
    emit_rows(cli, &rows, out)?;
    print_summary(&summarize(&rows), err)
}

/// Per-user Wyner rates: CoF without and with power allocation, RCoF, QCoF,
/// QMF (infinite model) and DF.
fn cmd_wyner(cli: &Cli, gamma: f64, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let p = prime(cli.p.unwrap_or(251))?;
    let snr_grid = cli.snr_list(&[25.0])?;
    let r0_grid = cli.r0_list(&(1..=10).map(f64::from).collect::<Vec<_>>())?;
    let mut table: Vec<(&'static str, f64, f64, f64)> = Vec::new();
    for &snr_db in &snr_grid {
        for &r0 in &r0_grid {
            let params = WynerParams::new(gamma, db_to_linear(snr_db), r0).map_err(|e| cfg_err("wyner", e.to_string()))?;
            let cof_pa = wyner_power_allocation(&params, PaScheme::Cof, None)?;
            let rcof_pa = wyner_power_allocation(&params, PaScheme::Rcof, None)?;
            let qcof_pa = wyner_power_allocation(&params, PaScheme::Cof, Some(p))?;
            writeln!(
                err,
                "snr {snr_db} dB r0 {r0}: beta cof {:.4} rcof {:.4} qcof {:.4}",
                cof_pa.beta, rcof_pa.beta, qcof_pa.beta
            )?;
            table.push(("cof", snr_db, r0, wyner_rate_at(&params, PaScheme::Cof, None, 1.0)?));
            table.push(("cof_pa", snr_db, r0, cof_pa.rate));
            table.push(("df", snr_db, r0, df_wyner_rate(&params)));
            table.push(("qcof_pa", snr_db, r0, qcof_pa.rate));
            table.push(("qmf", snr_db, r0, qmf_wyner_per_user(&params).rate));
            table.push(("rcof_pa", snr_db, r0, rcof_pa.rate));
        }
    }
    let records = table.iter().map(|&(scheme, snr_db, r0, rate)| CsvRecord {
        scheme,
        snr_db,
        r0,
        trial: 0,
        sum_rate: rate,
        outage: !(rate > 0.0),
        selected: &[],
        per_receiver: &[],
    });
    with_output(cli.out.as_deref(), out, |w| write_records(records, w))
}

fn cmd_ifb(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mut cfg = SimConfig {
        schema_version: SCHEMA_VERSION,
        model: ChannelModel::Rayleigh { k: 5, l: 5 },
        snr_db: (0..=6).map(|i| 5.0 * i as f64).collect(),
        r0: vec![f64::INFINITY],
        p: 251,
        schemes: vec![Scheme::Dpc, Scheme::Ifb, Scheme::Zfb],
        trials: 1000,
        selection: Selection::None,
        seed: 1,
    };
    if cli.config.is_some() {
        cfg = SimConfig::load(cli.config.as_deref().expect("checked"))?;
    }
    cli.apply_overrides(&mut cfg)?;
    cfg.validate()?;
    let rows = run_montecarlo(&cfg)?;
    emit_rows(cli, &rows, out)?;
    print_summary(&summarize(&rows), err)
}

fn cmd_selftest(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let report = run_selftest(cli.seed.unwrap_or(1));
    for (name, ok, detail) in &report.checks {
        writeln!(out, "{} {name} ({detail})", if *ok { "ok  " } else { "FAIL" })?;
    }
    Ok(report.passed())
}

fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::Rate { channel } => cmd_rate(cli, channel.as_deref(), out).map(|_| true),
        Command::Sweep => cmd_sweep(cli, out, err).map(|_| true),
        Command::Wyner { gamma } => cmd_wyner(cli, *gamma, out, err).map(|_| true),
        Command::Ifb => cmd_ifb(cli, out, err).map(|_| true),
        Command::Selftest => cmd_selftest(cli, out),
    }
}

/// Runs the command line and returns the process exit code: 0 on success, 2
/// for invalid arguments or configuration, 1 for runtime failures.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e @ Error::Config { .. }) => {
            let _ = writeln!(err, "dascof: {e}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "dascof: {e}");
            1
        }
    }
}
