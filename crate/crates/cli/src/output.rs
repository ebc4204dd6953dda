//! Result files. Every file is written to a temporary sibling and renamed into place,
//! and every file is recorded for the manifest index.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// One CSV cell. Floats use 17 significant digits so files round-trip exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn push_cell(out: &mut String, c: Cell) {
    match c {
        Cell::Int(i) => write!(out, "{i}").unwrap(),
        Cell::Float(v) => out.push_str(&format_float(v)),
    }
}

pub fn render_csv(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (i, &c) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            push_cell(&mut out, c);
        }
        out.push('\n');
    }
    out
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileEntry {
    /// Path relative to the output directory.
    pub path: String,
    pub description: String,
    pub bytes: u64,
}

/// Sole writer of an output directory.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileEntry>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    pub fn write_bytes(&mut self, rel: &str, description: &str, bytes: &[u8]) -> Result<(), CliError> {
        write_atomic(&self.root.join(rel), bytes)?;
        self.files.push(FileEntry {
            path: rel.to_string(),
            description: description.to_string(),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    pub fn write_csv(
        &mut self,
        rel: &str,
        description: &str,
        header: &[&str],
        rows: &[Vec<Cell>],
    ) -> Result<(), CliError> {
        self.write_bytes(rel, description, render_csv(header, rows).as_bytes())
    }

    /// `(x, value)` series.
    pub fn write_series(
        &mut self,
        rel: &str,
        description: &str,
        header: [&str; 2],
        x: &[f64],
        v: &[f64],
    ) -> Result<(), CliError> {
        let rows: Vec<Vec<Cell>> = x.iter().zip(v).map(|(&a, &b)| vec![a.into(), b.into()]).collect();
        self.write_csv(rel, description, &header, &rows)
    }
}
