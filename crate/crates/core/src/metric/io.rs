//! Text formats: point CSV and explicit distance matrices.

use std::io::{Read, Write};
use std::path::Path;

use super::{DistanceMatrix, MetricSpace, PointSet};
use crate::{Error, Result};

/// Reads numeric CSV rows; a first row that does not parse as numbers is
/// treated as a header. Row `i` (after the header) becomes point `i`.
pub fn parse_points_csv(reader: impl Read) -> Result<PointSet> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (line, record) in csv.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if line == 0 => continue,
            Err(_) => {
                return Err(Error::Parse(format!("non-numeric value on CSV line {}", line + 1)))
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse("CSV input has no data rows".into()));
    }
    PointSet::new(rows)
}

pub fn load_points_csv(path: impl AsRef<Path>) -> Result<PointSet> {
    parse_points_csv(std::fs::File::open(path)?)
}

/// Writes one point per line, no header, using the shortest exact decimal
/// representation so that re-reading yields identical coordinates.
pub fn write_points_csv(points: &PointSet, mut out: impl Write) -> Result<()> {
    for p in points.iter() {
        let line: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Parses a square matrix whose entries are separated by commas and/or
/// whitespace, one row per line.
pub fn parse_matrix(text: &str) -> Result<DistanceMatrix> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, line)| {
            line.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry `{t}` on row {i}")))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    DistanceMatrix::new(rows)
}

/// Loads and validates a matrix file (triangle check up to the exhaustive
/// limit, or always with `force_triangle_check`).
pub fn load_matrix(path: impl AsRef<Path>, force_triangle_check: bool) -> Result<MetricSpace> {
    let text = std::fs::read_to_string(path)?;
    MetricSpace::checked_matrix(parse_matrix(&text)?, force_triangle_check)
}
