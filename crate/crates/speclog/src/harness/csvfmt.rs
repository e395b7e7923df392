//! Byte-stable CSV emission: '.' decimal, no separators, 17 significant
//! digits so every f64 round-trips exactly.

use super::{io_err, HarnessError};
use std::io::Write;
use std::path::Path;

/// Render with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_f64(v),
        None => "nan".into(),
    }
}

/// Write a header line and rows with LF endings.
pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<(), HarnessError> {
    let mut buf = String::with_capacity(rows.len() * 64 + header.len() + 1);
    buf.push_str(header);
    buf.push('\n');
    for row in rows {
        buf.push_str(row);
        buf.push('\n');
    }
    let mut file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    file.write_all(buf.as_bytes()).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for &x in &[
            0.0,
            -1.5,
            std::f64::consts::PI,
            1.0e-300,
            -2.2250738585072014e-308,
            9.887651234e17,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(x, back, "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(fmt_f64(f64::NAN), "nan");
        assert_eq!(fmt_opt(None), "nan");
    }
}
