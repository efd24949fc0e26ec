//! Output formatting. Floats are rounded to 12 significant digits before
//! they are written, so repeated runs agree byte for byte.

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

use crate::{CliError, Result};

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `x` rounded to 12 significant digits, with `-0` mapped to `0`.
pub fn round(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Round every float in a JSON tree; integers are left alone.
pub fn round_value(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            Number::from_f64(round(x)).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), round_value(v))).collect::<Map<_, _>>()),
        other => other.clone(),
    }
}

pub fn number(x: f64) -> String {
    format!("{:?}", round(x))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => number(x),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(_) => out.push((prefix.to_string(), String::new())),
        x => out.push((prefix.to_string(), scalar(x))),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render a JSON value; csv and text are flattened `path, value` listings.
pub fn value(v: &Value, format: Format) -> Result<String> {
    let v = round_value(v);
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Input(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv | Format::Text => {
            let mut rows = Vec::new();
            flatten("", &v, &mut rows);
            let mut s = String::new();
            if format == Format::Csv {
                s.push_str("path,value\n");
            }
            for (p, x) in rows {
                match format {
                    Format::Csv => s.push_str(&format!("{},{}\n", csv_field(&p), csv_field(&x))),
                    _ => s.push_str(&format!("{p} = {x}\n")),
                }
            }
            s
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => number(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => Number::from_f64(round(*x)).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

pub fn table(t: &Table, format: Format) -> String {
    match format {
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { "\t" };
            let mut s = t.header.join(sep);
            s.push('\n');
            for row in &t.rows {
                s.push_str(&row.iter().map(Cell::text).collect::<Vec<_>>().join(sep));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| Value::Object(t.header.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
                .collect();
            let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("table serializes");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(round(1.0 / 3.0), 0.333333333333);
        assert_eq!(round(-1e-20), -1e-20);
        assert_eq!(round(123456789012345.0), 123456789012000.0);
        assert_eq!(number(0.1 + 0.2), "0.3");
        for x in [1.0 / 7.0, 2f64.sqrt() * 1e9, -3.5e-8] {
            assert_eq!(round(round(x)), round(x));
        }
    }

    #[test]
    fn flattening() {
        let v = serde_json::json!({"a": {"b": [1, 2.5]}, "c": "x,y", "d": []});
        let csv = value(&v, Format::Csv).unwrap();
        assert_eq!(csv, "path,value\na.b[0],1\na.b[1],2.5\nc,\"x,y\"\nd,\n");
    }

    #[test]
    fn empty_table_has_header_only() {
        let t = Table { header: vec!["a".into(), "b".into()], rows: vec![] };
        assert_eq!(table(&t, Format::Csv), "a,b\n");
        assert_eq!(table(&t, Format::Json), "[]\n");
    }
}
