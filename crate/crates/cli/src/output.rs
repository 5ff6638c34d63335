//! Artifact writers. CSV: one header line, `%.12e` floats, LF endings.
//! JSON: struct field order, pretty-printed, trailing newline.

use std::fs;
use std::path::{Path, PathBuf};

use fracnoether_core::grid::fmt_sci;
use serde::Serialize;

use crate::CliError;

/// One CSV cell.
#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Float(f64),
    Int(usize),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Float(x) => fmt_sci(x),
            Cell::Int(n) => n.to_string(),
        }
    }
}

pub fn csv(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|c| c.render()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::config(format!("cannot create output directory {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
