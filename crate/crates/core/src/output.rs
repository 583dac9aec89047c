//! Machine-readable output: fixed-precision numbers, CSV tables and run
//! manifests.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::infocurves::InfoCurvePoint;

/// Significant digits of every number written by the CLI.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats like C's `%.12g`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= SIGNIFICANT_DIGITS as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

/// Serializes `value` to JSON with every float rounded to
/// [`SIGNIFICANT_DIGITS`] significant digits.
pub fn to_rounded_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_floats(&mut v);
    Ok(serde_json::to_string_pretty(&v)?)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .map(round_sig)
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// `D,i_ab,i_ae` table.
pub fn write_curves_csv<W: Write>(w: W, points: &[InfoCurvePoint]) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(["D", "i_ab", "i_ae"])?;
    for p in points {
        out.write_record([
            format_sig(p.disturbance),
            format_sig(p.i_ab),
            format_sig(p.i_ae),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `d,i_ae` table.
pub fn write_dimscan_csv<W: Write>(w: W, rows: &[(usize, f64)]) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(["d", "i_ae"])?;
    for (d, v) in rows {
        out.write_record([d.to_string(), format_sig(*v)])?;
    }
    out.flush()?;
    Ok(())
}

/// Record written next to every file the CLI produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub timestamp: String,
    pub output_paths: Vec<String>,
}

impl RunManifest {
    /// Stamps the manifest with `SOURCE_DATE_EPOCH` when set, else the
    /// current time.
    pub fn new(
        command: &str,
        parameters: BTreeMap<String, String>,
        output_paths: Vec<String>,
    ) -> Self {
        let time = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.trim().parse::<i64>().ok())
            .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
            .unwrap_or_else(Utc::now);
        Self {
            command: command.to_string(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: time.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            output_paths,
        }
    }

    /// `<artifact>.manifest.json`.
    pub fn path_for(artifact: &Path) -> PathBuf {
        let mut name = artifact.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        artifact.with_file_name(name)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
