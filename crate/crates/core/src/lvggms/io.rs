//! Plain-text instance files and reference-objective sidecars.
//!
//! ```text
//! lvggms-instance v1
//! n 3
//! nu 5e-3
//! mu 5e-2
//! seed 7
//! C
//! <row 0, space separated>
//! ...
//! ```
//!
//! Values are written in shortest round-trip scientific notation, so a
//! written instance reads back bit-for-bit. `seed` is `none` for instances
//! that did not come from the generator.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use thiserror::Error;

use super::{LvggmsError, LvggmsInstance};

pub const INSTANCE_TAG: &str = "lvggms-instance v1";
const REFERENCE_TAG: &str = "lvggms-reference v1";

#[derive(Debug, Error)]
pub enum InstanceFileError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Instance(#[from] LvggmsError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> InstanceFileError + '_ {
    move |source| InstanceFileError::Io { path: path.to_path_buf(), source }
}

pub fn format_instance(instance: &LvggmsInstance) -> String {
    let n = instance.n();
    let mut out = String::new();
    writeln!(out, "{INSTANCE_TAG}").unwrap();
    writeln!(out, "n {n}").unwrap();
    writeln!(out, "nu {:e}", instance.nu()).unwrap();
    writeln!(out, "mu {:e}", instance.mu()).unwrap();
    match instance.seed {
        Some(seed) => writeln!(out, "seed {seed}").unwrap(),
        None => writeln!(out, "seed none").unwrap(),
    }
    writeln!(out, "C").unwrap();
    let c = instance.covariance();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:e}", c[(i, j)])).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn write_instance(instance: &LvggmsInstance, path: &Path) -> Result<(), InstanceFileError> {
    fs::write(path, format_instance(instance)).map_err(io_err(path))
}

fn parse_err(line: usize, message: impl Into<String>) -> InstanceFileError {
    InstanceFileError::Parse { line, message: message.into() }
}

fn keyed<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, key: &str) -> Result<(usize, &'a str), InstanceFileError> {
    let (no, line) = lines.next().ok_or_else(|| parse_err(0, format!("missing `{key}`")))?;
    let mut parts = line.splitn(2, ' ');
    match (parts.next(), parts.next()) {
        (Some(k), Some(v)) if k == key => Ok((no, v.trim())),
        _ => Err(parse_err(no, format!("expected `{key} <value>`"))),
    }
}

fn number<T: std::str::FromStr>(no: usize, v: &str) -> Result<T, InstanceFileError> {
    v.parse().map_err(|_| parse_err(no, format!("cannot parse `{v}`")))
}

pub fn parse_instance(text: &str) -> Result<LvggmsInstance, InstanceFileError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    match lines.next() {
        Some((_, tag)) if tag == INSTANCE_TAG => {}
        Some((no, other)) => return Err(parse_err(no, format!("unknown header `{other}`"))),
        None => return Err(parse_err(0, "empty file")),
    }
    let (no, v) = keyed(&mut lines, "n")?;
    let n: usize = number(no, v)?;
    let (no, v) = keyed(&mut lines, "nu")?;
    let nu: f64 = number(no, v)?;
    let (no, v) = keyed(&mut lines, "mu")?;
    let mu: f64 = number(no, v)?;
    let (no, v) = keyed(&mut lines, "seed")?;
    let seed = if v == "none" { None } else { Some(number::<u64>(no, v)?) };
    match lines.next() {
        Some((_, "C")) => {}
        Some((no, _)) => return Err(parse_err(no, "expected `C`")),
        None => return Err(parse_err(0, "missing matrix")),
    }
    let mut values = Vec::with_capacity(n * n);
    for row in 0..n {
        let (no, line) = lines.next().ok_or_else(|| parse_err(0, format!("missing row {row}")))?;
        let before = values.len();
        for tok in line.split_whitespace() {
            values.push(number::<f64>(no, tok)?);
        }
        if values.len() - before != n {
            return Err(parse_err(no, format!("row {row} has {} entries, expected {n}", values.len() - before)));
        }
    }
    if let Some((no, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_err(no, format!("trailing content `{extra}`")));
    }
    let c = DMatrix::from_row_slice(n, n, &values);
    let mut instance = LvggmsInstance::new(c, nu, mu)?;
    instance.seed = seed;
    Ok(instance)
}

pub fn read_instance(path: &Path) -> Result<LvggmsInstance, InstanceFileError> {
    parse_instance(&fs::read_to_string(path).map_err(io_err(path))?)
}

/// Cached reference objective `F*` and the run length that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRecord {
    pub objective: f64,
    pub iterations: usize,
}

/// Sidecar path next to an instance file: `<instance>.fstar`.
pub fn reference_path(instance_path: &Path) -> PathBuf {
    let mut os = instance_path.as_os_str().to_owned();
    os.push(".fstar");
    PathBuf::from(os)
}

pub fn write_reference(record: &ReferenceRecord, path: &Path) -> Result<(), InstanceFileError> {
    let text = format!(
        "{REFERENCE_TAG}\nobjective {:e}\niterations {}\n",
        record.objective, record.iterations
    );
    fs::write(path, text).map_err(io_err(path))
}

pub fn read_reference(path: &Path) -> Result<ReferenceRecord, InstanceFileError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    match lines.next() {
        Some((_, tag)) if tag == REFERENCE_TAG => {}
        _ => return Err(parse_err(1, "not a reference file")),
    }
    let (no, v) = keyed(&mut lines, "objective")?;
    let objective = number(no, v)?;
    let (no, v) = keyed(&mut lines, "iterations")?;
    let iterations = number(no, v)?;
    Ok(ReferenceRecord { objective, iterations })
}
