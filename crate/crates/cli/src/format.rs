//! Number formatting and the three output encodings.

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

use twistor_spectra::exact::{evaluate_numeric, ExactError, GammaQuotient, NumericValue, Phase};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Table,
}

/// `%.15g`.
pub fn g15(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return "POLE".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (14 - exp) as usize))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A numeric value with its phase, e.g. `-2.5` or `0.75*i`.
pub fn numeric(v: NumericValue) -> String {
    let (x, phase) = v.parts();
    if phase == Phase::ONE {
        g15(x)
    } else {
        format!("{}*i", g15(x))
    }
}

/// Floating-point value of a gamma quotient, or `POLE`.
pub fn numeric_of(g: &GammaQuotient) -> String {
    match evaluate_numeric(g) {
        Ok(v) => numeric(v),
        Err(ExactError::PoleAt { .. }) => "POLE".into(),
        Err(e) => e.to_string(),
    }
}

/// JSON document carrying the schema version.
pub fn json<T: Serialize>(body: &T) -> Result<String> {
    let mut value = serde_json::to_value(body)?;
    if let serde_json::Value::Object(map) = &mut value {
        let mut versioned = serde_json::Map::new();
        versioned.insert("schema_version".into(), 1.into());
        versioned.extend(std::mem::take(map));
        value = serde_json::Value::Object(versioned);
    }
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

pub fn csv<T: Serialize>(rows: &[T], headers: &[&str]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(headers)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Left-aligned columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(g15(-0.25), "-0.25");
        assert_eq!(g15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(g15(2.0), "2");
        assert_eq!(g15(1.5e20), "1.5e+20");
        assert_eq!(g15(-1.25e-7), "-1.25e-07");
        assert_eq!(g15(123456.0), "123456");
        assert_eq!(g15(f64::INFINITY), "POLE");
    }

    #[test]
    fn versioned_json() {
        let s = json(&serde_json::json!({ "rows": [] })).unwrap();
        assert!(s.starts_with("{\n  \"schema_version\": 1,"));
    }
}
