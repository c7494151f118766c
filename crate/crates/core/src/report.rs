//! Deterministic text output: CSV curves, JSON summaries, fixed-precision floats.
//!
//! Floats are always written with 10 significant digits and integers in
//! plain decimal, so output files diff cleanly across runs.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

use crate::spectrum::SpectrumCurve;

pub const SIGNIFICANT_DIGITS: usize = 10;

/// `x` with 10 significant digits in positional notation, e.g. `2.000000000`.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    // Round in scientific form first so a carry (9.99...95 -> 10.0) moves the exponent.
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `x` rounded to 10 significant digits, as a JSON number.
pub fn json_sig(x: f64) -> Value {
    format_sig(x).parse::<f64>().map(Value::from).unwrap_or(Value::Null)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

/// `m,exponent,ratio` header plus one row per period in ascending order.
pub fn curve_csv(curve: &SpectrumCurve) -> String {
    let mut out = String::from("m,exponent,ratio\n");
    for row in &curve.rows {
        out.push_str(&format!("{},{},{}\n", row.m, row.exponent, format_sig(row.ratio)));
    }
    out
}

/// Summary object `{n, k, m_lo, m_hi, running_max, argmax_m}` with the rows attached.
pub fn curve_json(curve: &SpectrumCurve) -> Value {
    let rows: Vec<Value> = curve
        .rows
        .iter()
        .map(|r| json!({"m": r.m, "exponent": r.exponent, "ratio": json_sig(r.ratio)}))
        .collect();
    json!({
        "n": curve.n,
        "k": curve.k,
        "m_lo": curve.m_lo,
        "m_hi": curve.m_hi,
        "running_max": curve.running_max.map(json_sig),
        "argmax_m": curve.argmax_m,
        "rows": rows,
    })
}

pub fn emit_curve(curve: &SpectrumCurve, format: Format, sink: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Csv => sink.write_all(curve_csv(curve).as_bytes()),
        Format::Json => writeln!(sink, "{}", curve_json(curve)),
    }
}

/// Serializes any value as compact JSON followed by a newline.
pub fn emit_json<T: Serialize>(value: &T, sink: &mut impl Write) -> io::Result<()> {
    let text = serde_json::to_string(value).map_err(io::Error::other)?;
    writeln!(sink, "{text}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::CurveRow;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(format_sig(2.0), "2.000000000");
        assert_eq!(format_sig(5f64.sqrt()), "2.236067977");
        assert_eq!(format_sig(0.05), "0.05000000000");
        assert_eq!(format_sig(1234.5), "1234.500000");
        assert_eq!(format_sig(9.9999999999), "10.00000000");
        assert_eq!(format_sig(0.0), "0.000000000");
        assert_eq!(format_sig(-1.5), "-1.500000000");
        assert_eq!(format_sig(12345678901.0), "12345678901");
    }

    #[test]
    fn single_row_csv() {
        let curve = SpectrumCurve::from_rows(
            1,
            10,
            1,
            1,
            vec![CurveRow {
                m: 1,
                exponent: 2,
                ratio: 2.0,
            }],
        );
        assert_eq!(curve_csv(&curve), "m,exponent,ratio\n1,2,2.000000000\n");
    }

    #[test]
    fn empty_curve() {
        let curve = SpectrumCurve::from_rows(1, 10, 3, 2, vec![]);
        assert_eq!(curve_csv(&curve), "m,exponent,ratio\n");
        let json = curve_json(&curve);
        assert_eq!(json["rows"], json!([]));
        assert_eq!(json["running_max"], Value::Null);
    }

    #[test]
    fn json_summary_fields() {
        let curve = SpectrumCurve::from_rows(
            2,
            100,
            4,
            5,
            vec![
                CurveRow {
                    m: 4,
                    exponent: 9,
                    ratio: 2.25,
                },
                CurveRow {
                    m: 5,
                    exponent: 7,
                    ratio: 1.4,
                },
            ],
        );
        let mut buf = Vec::new();
        emit_curve(&curve, Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["n"], 100);
        assert_eq!(v["k"], 2);
        assert_eq!(v["running_max"], 2.25);
        assert_eq!(v["argmax_m"], 4);
    }
}
