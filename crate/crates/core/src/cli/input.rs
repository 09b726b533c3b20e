//! Delimited-text ingestion and grid parsing.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Delimiter {
    Comma,
    Whitespace,
}

impl Delimiter {
    fn detect(first_line: &str) -> Self {
        if first_line.contains(',') {
            Delimiter::Comma
        } else {
            Delimiter::Whitespace
        }
    }

    fn split(self, line: &str) -> Vec<&str> {
        match self {
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
        }
    }
}

/// Parsed table: optional header plus rows of cells tagged with their
/// 1-based line number.
struct Table {
    header: Option<Vec<String>>,
    rows: Vec<(usize, Vec<String>)>,
}

fn read_table(path: &Path) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let Some(&(_, first)) = lines.peek() else {
        return Ok(Table {
            header: None,
            rows: Vec::new(),
        });
    };
    let delimiter = Delimiter::detect(first);
    let first_cells = delimiter.split(first);
    let header = if first_cells.iter().all(|c| c.parse::<f64>().is_ok()) {
        None
    } else {
        lines.next();
        Some(first_cells.iter().map(|c| c.to_string()).collect())
    };
    let rows = lines
        .map(|(no, l)| (no, delimiter.split(l).into_iter().map(String::from).collect()))
        .collect();
    Ok(Table { header, rows })
}

fn parse_cell(cell: &str, line: usize) -> Result<f64> {
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(v) => Err(Error::Data {
            line: Some(line),
            detail: format!("value {v} is not finite"),
        }),
        Err(_) => Err(Error::Data {
            line: Some(line),
            detail: format!("cannot parse {cell:?} as a number"),
        }),
    }
}

fn resolve_column(header: Option<&[String]>, column: Option<&str>) -> Result<usize> {
    let Some(sel) = column else { return Ok(0) };
    if let Some(pos) = header.and_then(|h| h.iter().position(|name| name == sel)) {
        return Ok(pos);
    }
    sel.parse::<usize>().map_err(|_| {
        Error::Usage(match header {
            Some(h) => format!("no column named {sel:?}; header is {h:?}"),
            None => format!("column {sel:?} is neither a header name nor a 0-based index"),
        })
    })
}

/// One numeric column of a CSV or whitespace-delimited file, in file order.
pub fn load_series(path: &Path, column: Option<&str>) -> Result<Vec<f64>> {
    let table = read_table(path)?;
    let col = resolve_column(table.header.as_deref(), column)?;
    let values = table
        .rows
        .iter()
        .map(|(line, cells)| {
            let cell = cells.get(col).ok_or_else(|| Error::Data {
                line: Some(*line),
                detail: format!("missing column {col}"),
            })?;
            parse_cell(cell, *line)
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() < 2 {
        return Err(Error::Size {
            needed: 2,
            got: values.len(),
        });
    }
    Ok(values)
}

/// Every column of a numeric table, as rows.
pub fn load_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let table = read_table(path)?;
    let rows = table
        .rows
        .iter()
        .map(|(line, cells)| cells.iter().map(|c| parse_cell(c, *line)).collect::<Result<Vec<f64>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.len() < 2 {
        return Err(Error::Size {
            needed: 2,
            got: rows.len(),
        });
    }
    Ok(rows)
}

/// Parses `start:stop:step` (stop included when within half a step) or a
/// comma-separated list of points.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::Usage(format!("invalid grid {spec:?}: {why}"));
    let number = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    let grid: Vec<f64> = if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|p| number(p).ok_or_else(|| bad("expected start:stop:step")))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step"));
        };
        if step <= 0.0 {
            return Err(bad("step must be positive"));
        }
        if stop < start {
            return Err(bad("stop must not precede start"));
        }
        let count = ((stop - start) / step + 0.5).floor() as usize;
        if count > 1_000_000 {
            return Err(bad("too many points"));
        }
        (0..=count).map(|k| start + k as f64 * step).collect()
    } else {
        spec.split(',')
            .map(|p| number(p).ok_or_else(|| bad("expected comma-separated numbers")))
            .collect::<Result<_>>()?
    };
    if grid.is_empty() || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(bad("points must be ascending"));
    }
    Ok(grid)
}
