use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::RunReport;
use crate::error::{Error, Result};

/// Significant digits kept for every float in emitted reports.
pub const REPORT_SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Usage(format!("unknown report format '{other}'"))),
        }
    }
}

/// `x` rounded to [`REPORT_SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", REPORT_SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// JSON value of `value` with every float rounded.
pub(crate) fn rounded_json<T: Serialize>(value: &T) -> Result<Value> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))?;
    round_floats(&mut v);
    Ok(v)
}

pub(crate) fn to_pretty(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn csv_number(x: Option<f64>) -> String {
    x.map(|v| round_sig(v).to_string()).unwrap_or_default()
}

/// Pretty JSON of any report value with floats rounded.
pub fn emit_json<T: Serialize>(value: &T) -> Result<String> {
    to_pretty(&rounded_json(value)?)
}

/// Serializes `r`. JSON keeps field declaration order; CSV has a header
/// and one row per iteration.
pub fn emit_report(r: &RunReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => to_pretty(&rounded_json(r)?),
        ReportFormat::Csv => {
            let mut out = String::from("instance,iteration,best_length,bound_mu,closed_form_ratio\n");
            for (i, &len) in r.iteration_lengths.iter().enumerate() {
                let mu = r.bound.as_ref().and_then(|b| b.states.get(i)).map(|s| s.mu);
                let ratio = r.bound.as_ref().and_then(|b| b.closed_form.get(i)).copied();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_field(&r.instance),
                    i + 1,
                    csv_number(Some(len)),
                    csv_number(mu),
                    csv_number(ratio)
                ));
            }
            Ok(out)
        }
    }
}

/// Reads a JSON report back.
pub fn parse_report(text: &str) -> Result<RunReport> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.line(), None, e.to_string()))
}

/// One CSV report row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub instance: String,
    pub iteration: usize,
    pub best_length: f64,
    pub bound_mu: Option<f64>,
    pub closed_form_ratio: Option<f64>,
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

/// Reads the rows of a CSV report.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "instance,iteration,best_length,bound_mu,closed_form_ratio")) => {}
        _ => return Err(Error::parse(1, None, "missing CSV header")),
    }
    let num = |line: usize, s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            return Ok(None);
        }
        s.parse().map(Some).map_err(|_| Error::parse(line, None, format!("bad number '{s}'")))
    };
    lines
        .map(|(i, l)| {
            let line = i + 1;
            let f = split_csv_line(l);
            if f.len() != 5 {
                return Err(Error::parse(line, None, format!("expected 5 fields, got {}", f.len())));
            }
            Ok(CsvRow {
                instance: f[0].clone(),
                iteration: f[1].parse().map_err(|_| Error::parse(line, None, "bad iteration"))?,
                best_length: num(line, &f[2])?.ok_or_else(|| Error::parse(line, None, "missing length"))?,
                bound_mu: num(line, &f[3])?,
                closed_form_ratio: num(line, &f[4])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(123456.7890123456), 123456.789012);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(-2.5e-20), -2.5e-20);
        let x = round_sig(std::f64::consts::PI);
        assert_eq!(round_sig(x), x);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(split_csv_line("\"a,b\",2,\"x\"\"y\""), vec!["a,b", "2", "x\"y"]);
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }
}
