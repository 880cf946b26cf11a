//! Output formats shared by every subcommand.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned columns.
    Plain,
    Csv,
    /// One JSON document.
    Json,
}

/// A header plus rows of already formatted cells.
pub struct Grid {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Grid {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn write_plain(&self, out: &mut impl Write) -> io::Result<()> {
        let cols = self.header.len().max(self.rows.iter().map(Vec::len).max().unwrap_or(0));
        let mut width = vec![0; cols];
        for row in std::iter::once(&self.header).chain(&self.rows) {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        for row in std::iter::once(&self.header).chain(&self.rows) {
            // First column left-aligned, the rest right-aligned.
            let line: Vec<String> = row
                .iter()
                .zip(&width)
                .enumerate()
                .map(|(i, (c, &w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            writeln!(out, "{}", line.join("  ").trim_end())?;
        }
        Ok(())
    }

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }
}

pub fn write_json(out: &mut impl Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// Writes `grid` as plain or csv, or `value` as json.
pub fn emit(out: &mut impl Write, format: Format, grid: &Grid, value: &impl Serialize) -> io::Result<()> {
    match format {
        Format::Plain => grid.write_plain(out),
        Format::Csv => grid.write_csv(out),
        Format::Json => write_json(out, value),
    }
}

pub fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_columns_align_numbers_right() {
        let mut g = Grid::new(["n", "count"]);
        g.push(["1", "1"]);
        g.push(["10", "262144"]);
        let mut out = Vec::new();
        g.write_plain(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "n    count\n1        1\n10  262144\n");
    }

    #[test]
    fn csv_quotes_embedded_commas() {
        let mut g = Grid::new(["set"]);
        g.push(["1,2"]);
        let mut out = Vec::new();
        g.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "set\n\"1,2\"\n");
    }
}
