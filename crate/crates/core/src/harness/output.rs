//! CSV rows and the gnuplot summary layout.

use std::io::Write;

use super::engine::{ResultRow, Summary};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 9] =
    ["scheme", "snr_db", "r0", "trial", "sum_rate", "outage", "n_selected", "selected_indices", "per_receiver_rates"];

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// One CSV line.
#[derive(Clone, Copy, Debug)]
pub struct CsvRecord<'a> {
    pub scheme: &'a str,
    pub snr_db: f64,
    pub r0: f64,
    pub trial: u64,
    pub sum_rate: f64,
    pub outage: bool,
    pub selected: &'a [usize],
    pub per_receiver: &'a [f64],
}

impl<'a> From<&'a ResultRow> for CsvRecord<'a> {
    fn from(r: &'a ResultRow) -> Self {
        CsvRecord {
            scheme: r.scheme.name(),
            snr_db: r.snr_db,
            r0: r.r0,
            trial: r.trial,
            sum_rate: r.sum_rate,
            outage: r.outage,
            selected: &r.selected,
            per_receiver: &r.per_receiver,
        }
    }
}

/// Header plus one line per record. Floats use the shortest representation
/// that round-trips, so equal rows give equal bytes.
pub fn write_records<'a, W: Write>(records: impl IntoIterator<Item = CsvRecord<'a>>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.scheme.to_string(),
            r.snr_db.to_string(),
            r.r0.to_string(),
            r.trial.to_string(),
            r.sum_rate.to_string(),
            r.outage.to_string(),
            r.selected.len().to_string(),
            join(r.selected),
            join(r.per_receiver),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    write_records(rows.iter().map(CsvRecord::from), out)
}

/// Whitespace-separated ergodic means, one gnuplot data block per scheme
/// (blocks separated by two blank lines so `index` selects a scheme).
pub fn write_plot<W: Write>(summaries: &[Summary], mut out: W) -> Result<()> {
    let mut current: Option<&str> = None;
    for s in summaries {
        if current != Some(s.scheme.name()) {
            if current.is_some() {
                writeln!(out, "\n")?;
            }
            writeln!(out, "# {}", s.scheme)?;
            writeln!(out, "# snr_db r0 mean_sum_rate outage_fraction samples errors")?;
            current = Some(s.scheme.name());
        }
        writeln!(out, "{} {} {} {} {} {}", s.snr_db, s.r0, s.mean_sum_rate, s.outage_fraction, s.samples, s.errors)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Scheme;

    #[test]
    fn csv_layout() {
        let row = ResultRow {
            scheme: Scheme::Cof,
            snr_db: 20.0,
            r0: 6.0,
            trial: 3,
            sum_rate: 1.5,
            outage: false,
            selected: vec![0, 4],
            per_receiver: vec![0.75, 0.75],
            error: None,
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "scheme,snr_db,r0,trial,sum_rate,outage,n_selected,selected_indices,per_receiver_rates\n\
             cof,20,6,3,1.5,false,2,0;4,0.75;0.75\n"
        );
    }
}
