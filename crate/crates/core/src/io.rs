//! Plain-text output helpers shared by the CSV writers.

use std::io::Write;

use crate::error::Result;

/// Round-trip formatting with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.16e}")
}

/// Writes a header row followed by numeric rows.
pub fn write_rows<W: Write>(
    out: &mut W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_f64).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}
