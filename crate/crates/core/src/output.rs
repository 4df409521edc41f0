//! Deterministic CSV, JSON and text renderings of spectra and reports.
//!
//! Every floating-point value is written with 12 significant digits, so equal
//! inputs give byte-identical files.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::entanglement::{CalibrationReport, EntropyReport};
use crate::error::{Error, Result};
use crate::lens::PovValidation;
use crate::spectrum::{global_maxima, secondary_maxima, spectrum_width, Maximum, SpectrumGrid};

/// `x` in scientific notation with 12 significant digits.
pub fn sig12(x: f64) -> String {
    // Fold -0.0 into 0.0.
    format!("{:.11e}", x + 0.0)
}

/// `x` rounded to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if x.is_finite() {
        sig12(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig12(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Serialize(e.to_string()))?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Full square window, `l_s,l_i,probability`, row-major in `l_s` then `l_i`.
pub fn spectrum_csv(grid: &SpectrumGrid) -> String {
    let mut out = String::from("l_s,l_i,probability\n");
    for (l_s, l_i, p) in grid.full_grid() {
        let _ = writeln!(out, "{l_s},{l_i},{}", sig12(p));
    }
    out
}

#[derive(Serialize)]
struct SpectrumJsonEntry {
    l_s: i32,
    l_i: i32,
    probability: f64,
    amplitude: [f64; 2],
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    scenario: String,
    pump: &'a crate::modes::ModeSpec,
    l_p: i32,
    l_window: u32,
    normalize_modes: bool,
    width: f64,
    tail_mass: f64,
    global_maxima: Vec<Maximum>,
    secondary_maxima: Vec<Maximum>,
    /// Conserving anti-diagonal only; every other cell of the window is zero.
    entries: Vec<SpectrumJsonEntry>,
}

pub fn spectrum_json(grid: &SpectrumGrid) -> Result<String> {
    to_json(&SpectrumJson {
        scenario: grid.scenario.label(),
        pump: &grid.scenario.pump,
        l_p: grid.l_p(),
        l_window: grid.l_window,
        normalize_modes: grid.scenario.normalize_modes,
        width: spectrum_width(grid),
        tail_mass: grid.tail_mass,
        global_maxima: global_maxima(grid),
        secondary_maxima: secondary_maxima(grid),
        entries: grid
            .entries
            .iter()
            .map(|e| SpectrumJsonEntry {
                l_s: e.l_s,
                l_i: e.l_i,
                probability: e.probability,
                amplitude: [e.amplitude.re, e.amplitude.im],
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct EntropyJson<'a> {
    scenarios: Vec<&'static str>,
    l_p: &'a [i32],
    tables: Vec<EntropyTableJson<'a>>,
}

#[derive(Serialize)]
struct EntropyTableJson<'a> {
    convention: &'a crate::entanglement::EntropyConvention,
    label: String,
    /// Rows by `l_p`, columns by scenario.
    entropy: Vec<Vec<f64>>,
    rank: Vec<Vec<usize>>,
    width: Vec<Vec<f64>>,
    l_window: Vec<Vec<u32>>,
}

/// Entropy tables sharing the same rows and columns.
pub fn entropy_json(reports: &[EntropyReport]) -> Result<String> {
    let first = reports
        .first()
        .ok_or_else(|| Error::Serialize("no entropy table to write".into()))?;
    let grab = |r: &EntropyReport,
                f: &dyn Fn(&crate::entanglement::EntropyCell) -> f64|
     -> Vec<Vec<f64>> {
        r.cells
            .iter()
            .map(|row| row.iter().map(f).collect())
            .collect()
    };
    to_json(&EntropyJson {
        scenarios: first.scenarios.iter().map(|s| s.label()).collect(),
        l_p: &first.l_p_values,
        tables: reports
            .iter()
            .map(|r| EntropyTableJson {
                convention: &r.convention,
                label: r.convention.label(),
                entropy: grab(r, &|c| c.entropy),
                rank: r
                    .cells
                    .iter()
                    .map(|row| row.iter().map(|c| c.rank).collect())
                    .collect(),
                width: grab(r, &|c| c.width),
                l_window: r
                    .cells
                    .iter()
                    .map(|row| row.iter().map(|c| c.l_window).collect())
                    .collect(),
            })
            .collect(),
    })
}

/// Long-form CSV, one row per (convention, `l_p`, scenario).
pub fn entropy_csv(reports: &[EntropyReport]) -> String {
    let mut out = String::from("convention,l_p,scenario,entropy,rank,width,l_window\n");
    for r in reports {
        let label = r.convention.label();
        for (l_p, row) in r.l_p_values.iter().zip(&r.cells) {
            for (s, c) in r.scenarios.iter().zip(row) {
                let _ = writeln!(
                    out,
                    "{label},{l_p},{},{},{},{},{}",
                    s.label(),
                    sig12(c.entropy),
                    c.rank,
                    sig12(c.width),
                    c.l_window
                );
            }
        }
    }
    out
}

pub fn entropy_text(reports: &[EntropyReport]) -> String {
    reports
        .iter()
        .map(|r| r.to_text())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Radial error profile, `l,r,oracle_magnitude,closed_form_magnitude,abs_error`.
pub fn validation_csv(profiles: &[PovValidation]) -> String {
    let mut out = String::from("l,r,oracle_magnitude,closed_form_magnitude,abs_error\n");
    for v in profiles {
        for ((r, a), b) in v
            .radii
            .iter()
            .zip(&v.oracle_magnitude)
            .zip(&v.closed_form_magnitude)
        {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                v.l,
                sig12(*r),
                sig12(*a),
                sig12(*b),
                sig12((a - b).abs())
            );
        }
    }
    out
}

pub fn validation_json(profiles: &[PovValidation]) -> Result<String> {
    to_json(&profiles)
}

pub fn calibration_json(report: &CalibrationReport) -> Result<String> {
    to_json(report)
}

/// Conventions ranked best first.
pub fn calibration_csv(report: &CalibrationReport) -> String {
    let mut out = String::from("rank,convention,max_relative_deviation,lg_column_deviation\n");
    for (k, e) in report.entries.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            k + 1,
            e.convention.label(),
            sig12(e.max_relative_deviation),
            sig12(e.lg_column_deviation)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.25), "2.50000000000e-1");
        assert_eq!(sig12(-0.0), "0.00000000000e0");
        assert_eq!(sig12(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(round_sig12(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn json_floats_are_rounded() {
        let s =
            to_json(&serde_json::json!({"a": 1.0 / 3.0, "b": [2.0f64.sqrt()], "n": 3})).unwrap();
        assert!(s.contains("0.333333333333"), "{s}");
        assert!(s.contains("1.41421356237"), "{s}");
        assert!(s.contains("\"n\": 3"), "{s}");
    }
}
