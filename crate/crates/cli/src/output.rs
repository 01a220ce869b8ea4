use std::fs::File;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use csv::{Terminator, Writer, WriterBuilder};
use serde::Serialize;

/// Fixed 17-significant-digit scientific notation; `-0` prints as `0`.
pub fn num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

pub fn csv_writer(path: &Path) -> Result<Writer<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(file))
}

pub struct Table {
    w: Writer<File>,
    path: String,
}

impl Table {
    pub fn create<S: AsRef<str>>(path: &Path, header: &[S]) -> Result<Self> {
        let mut w = csv_writer(path)?;
        w.write_record(header.iter().map(|h| h.as_ref()))?;
        Ok(Self { w, path: path.display().to_string() })
    }

    pub fn row(&mut self, lead: &[String], values: impl IntoIterator<Item = f64>) -> Result<()> {
        let rec: Vec<String> = lead.iter().cloned().chain(values.into_iter().map(num)).collect();
        self.w.write_record(&rec).with_context(|| format!("cannot write {}", self.path))
    }

    pub fn finish(mut self) -> Result<()> {
        self.w.flush().with_context(|| format!("cannot write {}", self.path))
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    let mut f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    f.write_all(text.as_bytes()).with_context(|| format!("cannot write {}", path.display()))
}
