//! Configuration files, CSV persistence, correlation tables and SVG plots.

mod config;
mod csv_io;
mod svg;

pub use config::{parse_experiment_config, parse_run_config, KeyValues, RunConfig};
pub use csv_io::{format_float, read_records, read_records_from, write_records, write_records_to, CSV_HEADER};
pub use svg::{render_svg, PlotSpec};

use std::fmt::Write as _;

use crate::sweep::TableRow;

/// Renders correlation rows as a fixed-width text table.
pub fn format_table(rows: &[TableRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{:<10} {:>7} {:>11} {:>6}", "Ind. var.", "tau", "p-value", "n").unwrap();
    for row in rows {
        match &row.result {
            Ok(r) => writeln!(
                out,
                "{:<10} {:>+7.2} {:>11.2e} {:>6}",
                row.label, r.tau, r.p_value, r.n
            )
            .unwrap(),
            Err(e) => writeln!(out, "{:<10} error ({}): {e}", row.label, row.experiment).unwrap(),
        }
    }
    out
}
