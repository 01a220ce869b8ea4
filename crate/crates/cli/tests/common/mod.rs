#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn docs(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs").join(name)
}

pub fn modukin<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_modukin")).args(args).output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Every file under `dir`, keyed by path relative to it.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Csv {
    pub fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
    }
}

/// Parses a CSV written by the tool, enforcing its fixed formatting:
/// LF endings, a header, and every field either an integer `dof` or a
/// 17-significant-digit scientific number.
pub fn read_csv(path: &Path) -> Result<Csv, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if text.contains('\r') {
        return Err(format!("{}: CR line ending", path.display()));
    }
    if !text.ends_with('\n') {
        return Err(format!("{}: missing final newline", path.display()));
    }
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().ok_or("empty file")?.split(',').map(String::from).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(format!("{}: row {} has {} fields", path.display(), i + 2, fields.len()));
        }
        let mut row = Vec::with_capacity(fields.len());
        for (h, f) in header.iter().zip(&fields) {
            let ok = if h == "dof" { f.chars().all(|c| c.is_ascii_digit()) } else { is_fixed_format(f) };
            if !ok {
                return Err(format!("{}: row {} column {h}: bad number {f:?}", path.display(), i + 2));
            }
            row.push(f.parse::<f64>().map_err(|e| e.to_string())?);
        }
        rows.push(row);
    }
    Ok(Csv { header, rows })
}

fn is_fixed_format(f: &str) -> bool {
    let f = f.strip_prefix('-').unwrap_or(f);
    let Some((mant, exp)) = f.split_once('e') else { return false };
    let exp = exp.strip_prefix('-').unwrap_or(exp);
    let b = mant.as_bytes();
    b.len() == 18
        && b[0].is_ascii_digit()
        && b[1] == b'.'
        && b[2..].iter().all(u8::is_ascii_digit)
        && !exp.is_empty()
        && exp.bytes().all(|c| c.is_ascii_digit())
}

/// Expected header of each CSV output, from the shipped column layout.
pub fn expected_header(file: &str) -> Vec<String> {
    let layout: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(docs("csv_columns.json")).unwrap()).unwrap();
    layout[file].as_array().unwrap_or_else(|| panic!("{file} not in layout")).iter().map(|v| v.as_str().unwrap().to_string()).collect()
}

pub fn schema_errors(schema_file: &str, value: &serde_json::Value) -> Vec<String> {
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(docs(schema_file)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator.iter_errors(value).map(|e| e.to_string()).collect()
}

pub fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))).unwrap()
}
