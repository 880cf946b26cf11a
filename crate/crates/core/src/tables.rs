//! The five appendix count tables: the printed values shipped as a fixture, and their
//! regeneration from brute force with each disagreement classified.
//!
//! Tables 1-4 hold `p^l_{n;<=s;k}` with `k = table − 1`, rows `(n, s)`.
//! Table 5 holds `p^l_{n,n+k;<=n+k}`, rows `(n, k)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumerate::Oracle;
use crate::error::{out_of_range, Error, Result};

const FIXTURE: &str = include_str!("../data/appendix_tables.csv");

/// Table 5 covers `n <= 5`, `k <= 3`; the others `n <= 7`.
pub const TABLE_IDS: [u8; 5] = [1, 2, 3, 4, 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    Lead(usize),
    Total,
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Lead(l) => write!(f, "{l}"),
            Column::Total => f.write_str("total"),
        }
    }
}

/// One printed cell; `note` marks a known misprint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedCell {
    pub table: u8,
    pub row: (usize, usize),
    pub column: Column,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub printed: BigUint,
    pub note: Option<String>,
}

fn bad_fixture(line: usize, what: &str) -> Error {
    Error::Parse(format!("appendix fixture line {line}: {what}"))
}

/// Parses the bundled fixture.
pub fn printed_cells() -> Result<Vec<PrintedCell>> {
    let mut out = Vec::new();
    for (i, line) in FIXTURE.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.splitn(6, ',').collect();
        if f.len() != 6 {
            return Err(bad_fixture(i + 1, "expected 6 fields"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad_fixture(i + 1, "bad integer"));
        let column = match f[3] {
            "total" => Column::Total,
            l => Column::Lead(num(l)?),
        };
        out.push(PrintedCell {
            table: num(f[0])? as u8,
            row: (num(f[1])?, num(f[2])?),
            column,
            printed: f[4].parse().map_err(|_| bad_fixture(i + 1, "bad count"))?,
            note: (!f[5].is_empty()).then(|| f[5].to_string()),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Match,
    /// Disagrees with a cell the fixture already marks as misprinted.
    KnownTypo,
    Mismatch,
    /// Marked as misprinted, yet agrees with brute force.
    StaleNote,
    NotPrinted,
}

impl CellStatus {
    pub fn is_ok(self) -> bool {
        matches!(self, Self::Match | Self::KnownTypo | Self::NotPrinted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub column: Column,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub count: BigUint,
    #[serde(serialize_with = "crate::decimal::serialize_option")]
    pub printed: Option<BigUint>,
    pub status: CellStatus,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub key: (usize, usize),
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub id: u8,
    /// Names of the two row coordinates.
    pub row_names: (&'static str, &'static str),
    pub rows: Vec<Row>,
}

impl Table {
    pub fn cells(&self) -> impl Iterator<Item = (&Row, &Cell)> {
        self.rows.iter().flat_map(|r| r.cells.iter().map(move |c| (r, c)))
    }

    pub fn passed(&self) -> bool {
        self.cells().all(|(_, c)| c.status.is_ok())
    }

    /// Cells whose status is anything but a plain match or an unprinted cell.
    pub fn annotations(&self) -> Vec<(&Row, &Cell)> {
        self.cells()
            .filter(|(_, c)| !matches!(c.status, CellStatus::Match | CellStatus::NotPrinted))
            .collect()
    }

    /// Widest lead column over all rows.
    pub fn max_lead(&self) -> usize {
        self.cells()
            .filter_map(|(_, c)| match c.column {
                Column::Lead(l) => Some(l),
                Column::Total => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Row keys of a table, for `n <= n_max`.
pub fn row_keys(id: u8, n_max: usize) -> Result<Vec<(usize, usize)>> {
    match id {
        1..=4 => {
            let k = id as usize - 1;
            Ok((k + 1..=n_max).flat_map(|n| (1..=n).map(move |s| (n, s))).collect())
        }
        5 => Ok((1..=n_max).flat_map(|n| (0..=3).map(move |k| (n, k))).collect()),
        _ => Err(out_of_range("table", format!("no table {id}; choose 1-5"))),
    }
}

/// Largest `n` the printed table covers.
pub fn printed_n_max(id: u8) -> usize {
    if id == 5 {
        5
    } else {
        7
    }
}

/// Regenerates table `id` for rows with `n <= n_max` and classifies each cell against the
/// printed fixture. Lead columns run to `s` (Table 5: `n + k`); every printed column beyond
/// that is compared against zero.
pub fn regenerate(id: u8, n_max: usize, oracle: &Oracle) -> Result<Table> {
    let keys = row_keys(id, n_max)?;
    let mut printed: BTreeMap<((usize, usize), Column), PrintedCell> = BTreeMap::new();
    for c in printed_cells()?.into_iter().filter(|c| c.table == id) {
        printed.insert((c.row, c.column), c);
    }
    let mut rows = Vec::with_capacity(keys.len());
    for key in keys {
        let (n, b) = key;
        let (m, s, k) = if id == 5 { (n + b, n + b, 0) } else { (n, b, id as usize - 1) };
        let hist = oracle.histogram(n, m, s)?;
        let mut width = s;
        width = width.max(
            printed
                .keys()
                .filter_map(|(r, c)| match c {
                    Column::Lead(l) if *r == key => Some(*l),
                    _ => None,
                })
                .max()
                .unwrap_or(0),
        );
        let columns = (1..=width).map(Column::Lead).chain([Column::Total]);
        let cells = columns
            .map(|column| {
                let count = BigUint::from(match column {
                    Column::Lead(l) => hist.cell(k, l),
                    Column::Total => hist.count(k, None),
                });
                classify(column, count, printed.get(&(key, column)))
            })
            .collect();
        rows.push(Row { key, cells });
    }
    Ok(Table {
        id,
        row_names: if id == 5 { ("n", "k") } else { ("n", "s") },
        rows,
    })
}

fn classify(column: Column, count: BigUint, printed: Option<&PrintedCell>) -> Cell {
    let Some(p) = printed else {
        return Cell {
            column,
            count,
            printed: None,
            status: CellStatus::NotPrinted,
            note: None,
        };
    };
    let status = match (p.printed == count, p.note.is_some()) {
        (true, false) => CellStatus::Match,
        (false, true) => CellStatus::KnownTypo,
        (false, false) => CellStatus::Mismatch,
        (true, true) => CellStatus::StaleNote,
    };
    Cell {
        column,
        count,
        printed: Some(p.printed.clone()),
        status,
        note: p.note.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses_with_one_note() {
        let cells = printed_cells().unwrap();
        assert_eq!(cells.len(), 633);
        let noted: Vec<_> = cells.iter().filter(|c| c.note.is_some()).collect();
        assert_eq!(noted.len(), 1);
        assert_eq!((noted[0].table, noted[0].row, noted[0].column), (2, (5, 3), Column::Lead(2)));
    }

    #[test]
    fn every_printed_row_is_regenerated() {
        let cells = printed_cells().unwrap();
        for id in TABLE_IDS {
            let keys = row_keys(id, printed_n_max(id)).unwrap();
            for c in cells.iter().filter(|c| c.table == id) {
                assert!(keys.contains(&c.row), "table {id} row {:?}", c.row);
            }
        }
    }

    #[test]
    fn small_tables_match() {
        let o = Oracle::default();
        let t = regenerate(5, 3, &o).unwrap();
        assert!(t.passed());
        let row = t.rows.iter().find(|r| r.key == (2, 3)).unwrap();
        let counts: Vec<u32> = row.cells.iter().map(|c| u32::try_from(&c.count).unwrap()).collect();
        assert_eq!(counts, [5, 5, 5, 5, 4, 24]);
        let t = regenerate(2, 5, &o).unwrap();
        let notes = t.annotations();
        assert_eq!(notes.len(), 1);
        assert_eq!(notes[0].1.status, CellStatus::KnownTypo);
        assert_eq!(notes[0].1.count, BigUint::from(16u32));
    }

    #[test]
    fn unknown_table_is_rejected() {
        assert!(regenerate(6, 3, &Oracle::default()).is_err());
    }
}
