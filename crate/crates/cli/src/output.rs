//! CSV and JSON emission. Floats in CSV carry 17 significant digits so that
//! every value re-parses to the same double; nothing time-dependent is
//! written, so identical command lines give identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV document with `#` metadata lines ahead of the header.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(meta: &[(&str, String)], header: &[&str]) -> Self {
        let mut text = format!("# unimodal {}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in meta {
            let _ = writeln!(text, "# {k}={v}");
        }
        text.push_str(&header.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Report JSON with keys command, inputs, result and diagnostics.
#[derive(Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub diagnostics: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, inputs: Map<String, Value>, result: impl Serialize) -> Self {
        let mut diagnostics = Map::new();
        diagnostics.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        Self {
            command,
            inputs,
            result: to_value(result),
            diagnostics,
        }
    }

    pub fn note(mut self, key: &str, value: impl Serialize) -> Self {
        self.diagnostics.insert(key.into(), to_value(value));
        self
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports are plain data");
        s.push('\n');
        s
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports are plain data")
}

/// Writes to `out`, or to standard output when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&[("t", "1".into())], &["x", "p"]);
        csv.row(&[float(0.0), float(1.0)]);
        let s = csv.into_string();
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# unimodal "));
        assert_eq!(lines[1], "# t=1");
        assert_eq!(lines[2], "x,p");
        assert_eq!(lines[3], "0.0000000000000000e0,1.0000000000000000e0");
        assert!(s.ends_with('\n') && !s.contains('\r'));
    }
}
