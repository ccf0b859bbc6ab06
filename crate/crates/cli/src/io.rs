//! File formats, error plumbing and exit codes.

use std::fmt;
use std::path::Path;

use ge_core::polymat::polymat_from_json;
use ge_core::{GeError, PolyMat, Scalar};
use serde::Serialize;
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PSD_FAILS: i32 = 2;
pub const EXIT_KERNEL_FAILS: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;
pub const EXIT_NUMERICAL: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(GeError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<GeError> for CliError {
    fn from(e: GeError) -> Self {
        CliError::Core(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                GeError::PsdConditionViolated { .. } | GeError::NotPsdOnInterval => EXIT_PSD_FAILS,
                GeError::KernelConditionViolated { .. } => EXIT_KERNEL_FAILS,
                GeError::Infeasible => EXIT_INFEASIBLE,
                GeError::Unbounded | GeError::NumericalFailure(_) => EXIT_NUMERICAL,
                _ => EXIT_USAGE,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn read_polymat<S: Scalar>(path: &Path) -> CliResult<PolyMat<S>> {
    Ok(polymat_from_json(&read_text(path)?)?)
}

/// Numeric CSV with a header row; every record must have the same width.
pub fn read_csv(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| CliError::Usage(format!("{}: not a number: {f:?}", path.display()))))
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Usage(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}

/// `"1,0,-2.5"` into numbers.
pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|f| f.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("not a number: {f:?}"))))
        .collect()
}

pub fn print_json<T: Serialize>(v: &T, pretty: bool) -> CliResult<()> {
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) }
        .map_err(|e| CliError::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Core(GeError::Infeasible).exit_code(), 4);
        assert_eq!(CliError::Core(GeError::NumericalFailure("x".into())).exit_code(), 5);
        assert_eq!(CliError::Core(GeError::NotPsdOnInterval).exit_code(), 2);
        assert_eq!(CliError::Core(GeError::KernelConditionViolated { vector: vec![] }).exit_code(), 3);
        assert_eq!(CliError::Usage("bad".into()).exit_code(), 64);
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("1, 0,-2.5").unwrap(), vec![1.0, 0.0, -2.5]);
        assert!(parse_list("1,,2").is_err());
    }
}
