//! CSV emission with a fixed column schema and 6-significant-digit values.

use std::io::Write;
use std::path::Path;

use crate::error::{CliError, Result};
use crate::sweep::ResultRow;

pub const CSV_HEADER: &str = "scheme,mu,seed,gamma,eps_H,eps_rho0,b_undet,b_det,cost,energy0";

/// Formats to `sig` significant digits, plain notation for moderate
/// magnitudes and scientific otherwise. Parses back to within 1e-6
/// relative of the original.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if exponent < -4 || exponent >= sig as i32 + 3 {
        format!("{:.*e}", sig - 1, x)
    } else {
        let decimals = (sig as i32 - 1 - exponent).max(0) as usize;
        format!("{:.*}", decimals, x)
    }
}

fn fmt_mu(mu: f64) -> String {
    // mu values are config inputs; plain display keeps them exact.
    format!("{mu}")
}

pub fn render_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.scheme,
            fmt_mu(r.mu),
            r.seed,
            fmt_sig(r.gamma, 6),
            fmt_sig(r.eps_h, 6),
            fmt_sig(r.eps_rho0, 6),
            fmt_sig(r.b_undet, 6),
            fmt_sig(r.b_det, 6),
            fmt_sig(r.cost, 6),
            fmt_sig(r.energy0, 6),
        ));
    }
    out
}

/// Writes UTF-8 CSV with LF line endings.
pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(CliError::InsufficientData);
    }
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(render_csv(rows).as_bytes())?;
    Ok(())
}

/// Parses a document produced by [`render_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Config(format!("csv: {e}")))?;
        let field = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| CliError::Config(format!("csv field {i} malformed")))
        };
        rows.push(ResultRow {
            scheme: record.get(0).unwrap_or_default().to_string(),
            mu: field(1)?,
            seed: record
                .get(2)
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| CliError::Config("csv seed malformed".into()))?,
            gamma: field(3)?,
            eps_h: field(4)?,
            eps_rho0: field(5)?,
            b_undet: field(6)?,
            b_det: field(7)?,
            cost: field(8)?,
            energy0: field(9)?,
        });
    }
    Ok(rows)
}
