//! Output formatting and atomic artifact writing.
//!
//! Data files carry shortest round-trip float text (Rust's `Display`);
//! human-readable table renderings use 4-significant-digit scientific
//! notation like `2.202e+02`. Artifacts are written to a temp file and
//! renamed into place; the index over them is written last.

use crate::error::{Error, Result};
use crate::numerics::C64;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// 4-significant-digit scientific notation, `d.ddde[+-]dd`.
pub fn sci4(x: f64) -> String {
    if x == 0.0 {
        return "0.000e+00".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let formatted = format!("{x:.3e}");
    // Rust renders the exponent bare ("2.202e2"); pad to e[+-]dd.
    match formatted.split_once('e') {
        Some((mantissa, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            format!("{mantissa}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
        }
        None => formatted,
    }
}

/// Complex rendering `a+bi` in sci4, for table output.
pub fn sci4_complex(z: C64) -> String {
    let im = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("-{}i", sci4(-z.im))
    } else {
        format!("+{}i", sci4(z.im))
    };
    format!("{}{im}", sci4(z.re))
}

/// Shortest round-trip float text for data files.
pub fn data_f64(x: f64) -> String {
    format!("{x}")
}

/// A CSV table with a header row; UTF-8, LF line endings.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len(), "csv row width");
        self.rows.push(cells);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out.into_bytes()
    }
}

/// Writes bytes atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let tmp: PathBuf = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "artifact".into())
    ));
    {
        let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        f.write_all(bytes).map_err(|e| io_err(&tmp, e))?;
        f.sync_all().map_err(|e| io_err(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}
