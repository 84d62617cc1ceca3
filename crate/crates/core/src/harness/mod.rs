//! Channel ensembles, Monte Carlo engine, experiment configuration, CSV output
//! and the command-line front end.

mod cli;
mod config;
mod engine;
mod model;
mod output;
mod selftest;

pub use cli::cli_main;
pub use config::{parse_list, Scheme, Selection, SimConfig, SCHEMA_VERSION};
pub use engine::{
    evaluate_realization, evaluate_trial, run_montecarlo, run_montecarlo_serial, sort_rows, summarize, RandomPicks,
    Realization, ResultRow, Summary,
};
pub use model::{draw_downlink, draw_matrix, draw_uplink, trial_rng, ChannelModel, StreamTag};
pub use output::{write_csv, write_plot, write_records, CsvRecord, CSV_HEADER};
pub use selftest::{run_selftest, SelftestReport};
