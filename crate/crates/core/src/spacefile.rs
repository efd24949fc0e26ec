//! JSON space-definition files.
//!
//! ```json
//! {
//!   "dim": 3,
//!   "basis_labels": ["h", "u", "v"],
//!   "structure_constants": [[1, 2, 0, "-1"], [0, 1, 2, "1"], [0, 2, 1, "-1"]],
//!   "h_basis": [["1", "0", "0"]],
//!   "m_summands": [[1, 2]],
//!   "metric_scales": ["1"]
//! }
//! ```
//!
//! Values are JSON numbers or strings in a small grammar: decimal and
//! rational literals, `+ - * /`, parentheses and `sqrt(..)`. Saving writes
//! shortest round-trip decimals, so load, save, load is bit-exact.

use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{LieAlgebra, ReductiveSpace};
use crate::error::{Error, Result};

/// Parsed contents of a space file, before validation as a reductive space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceDefinition {
    pub labels: Vec<String>,
    pub triplets: Vec<(usize, usize, usize, f64)>,
    pub h_basis: Vec<Vec<f64>>,
    pub m_summands: Vec<Vec<usize>>,
    pub metric_scales: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawFile {
    dim: usize,
    basis_labels: Vec<String>,
    structure_constants: Vec<(usize, usize, usize, Value)>,
    h_basis: Vec<Vec<Value>>,
    m_summands: Vec<Vec<usize>>,
    metric_scales: Vec<Value>,
}

impl SpaceDefinition {
    pub fn from_space(space: &ReductiveSpace) -> Self {
        SpaceDefinition {
            labels: space.algebra().labels().to_vec(),
            triplets: space.algebra().triplets(),
            h_basis: space.h_basis().iter().map(|v| v.iter().copied().collect()).collect(),
            m_summands: space.m_summands().to_vec(),
            metric_scales: space.scales().to_vec(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        if raw.basis_labels.len() != raw.dim {
            return Err(Error::parse(
                "basis_labels",
                format!("{} labels for dimension {}", raw.basis_labels.len(), raw.dim),
            ));
        }
        let triplets = raw
            .structure_constants
            .iter()
            .enumerate()
            .map(|(n, (i, j, k, v))| {
                let loc = format!("structure_constants[{n}]");
                if *i >= raw.dim || *j >= raw.dim || *k >= raw.dim {
                    return Err(Error::parse(loc, format!("index out of range for dimension {}", raw.dim)));
                }
                Ok((*i, *j, *k, value(v, &format!("{loc}[3]"))?))
            })
            .collect::<Result<Vec<_>>>()?;
        let h_basis = raw
            .h_basis
            .iter()
            .enumerate()
            .map(|(n, row)| {
                if row.len() != raw.dim {
                    return Err(Error::parse(format!("h_basis[{n}]"), format!("expected {} entries", raw.dim)));
                }
                row.iter()
                    .enumerate()
                    .map(|(c, v)| value(v, &format!("h_basis[{n}][{c}]")))
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        let metric_scales = raw
            .metric_scales
            .iter()
            .enumerate()
            .map(|(n, v)| value(v, &format!("metric_scales[{n}]")))
            .collect::<Result<Vec<_>>>()?;
        for (n, s) in raw.m_summands.iter().enumerate() {
            if let Some(bad) = s.iter().find(|&&i| i >= raw.dim) {
                return Err(Error::parse(format!("m_summands[{n}]"), format!("index {bad} out of range")));
            }
        }
        Ok(SpaceDefinition {
            labels: raw.basis_labels,
            triplets,
            h_basis,
            m_summands: raw.m_summands,
            metric_scales,
        })
    }

    pub fn to_json(&self) -> String {
        let lit = |x: f64| Value::String(format!("{x:?}"));
        let raw = RawFile {
            dim: self.labels.len(),
            basis_labels: self.labels.clone(),
            structure_constants: self.triplets.iter().map(|&(i, j, k, v)| (i, j, k, lit(v))).collect(),
            h_basis: self.h_basis.iter().map(|r| r.iter().map(|&x| lit(x)).collect()).collect(),
            m_summands: self.m_summands.clone(),
            metric_scales: self.metric_scales.iter().map(|&x| lit(x)).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("space file serialization is infallible") + "\n"
    }

    pub fn algebra(&self) -> Result<LieAlgebra> {
        LieAlgebra::from_triplets(self.labels.clone(), &self.triplets)
    }

    pub fn build(&self, tol: f64) -> Result<ReductiveSpace> {
        let algebra = self.algebra()?;
        algebra.validate(tol)?;
        ReductiveSpace::build(
            algebra,
            self.h_basis.iter().map(|r| DVector::from_vec(r.clone())).collect(),
            self.m_summands.clone(),
            self.metric_scales.clone(),
            tol,
        )
    }
}

pub fn load(path: &Path) -> Result<SpaceDefinition> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    SpaceDefinition::parse(&text)
}

pub fn save(def: &SpaceDefinition, path: &Path) -> Result<()> {
    std::fs::write(path, def.to_json()).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn value(v: &Value, loc: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::parse(loc, "number out of range")),
        Value::String(s) => parse_value(s).map_err(|m| Error::parse(loc, m)),
        _ => Err(Error::parse(loc, "expected a number or a value string")),
    }
}

/// Evaluate a value string such as `-2/5*sqrt(5)` or `0.1`.
pub fn parse_value(s: &str) -> std::result::Result<f64, String> {
    let mut p = ValueParser { s: s.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(format!("unexpected `{}` at offset {} in `{s}`", p.s[p.pos] as char, p.pos));
    }
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

struct ValueParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ValueParser<'_> {
    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.term()?;
        loop {
            if self.eat(b'+') {
                v += self.term()?;
            } else if self.eat(b'-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.unary()?;
        loop {
            if self.eat(b'*') {
                v *= self.unary()?;
            } else if self.eat(b'/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<f64, String> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> std::result::Result<f64, String> {
        self.skip_ws();
        if self.eat(b'(') {
            let v = self.expr()?;
            return if self.eat(b')') { Ok(v) } else { Err("missing `)`".into()) };
        }
        if self.s[self.pos..].starts_with(b"sqrt") {
            self.pos += 4;
            if !self.eat(b'(') {
                return Err("expected `(` after sqrt".into());
            }
            let v = self.expr()?;
            if !self.eat(b')') {
                return Err("missing `)`".into());
            }
            if v < 0.0 {
                return Err(format!("sqrt of negative value {v}"));
            }
            return Ok(v.sqrt());
        }
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            let exp_sign = (c == b'-' || c == b'+') && self.pos > start && matches!(self.s[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        let lit = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or_default();
        if lit.is_empty() {
            return Err(match self.s.get(start) {
                Some(&c) => format!("unexpected `{}` at offset {start}", c as char),
                None => "unexpected end of value".into(),
            });
        }
        lit.parse::<f64>().map_err(|_| format!("bad number literal `{lit}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_grammar() {
        assert_eq!(parse_value("1/2").unwrap(), 0.5);
        assert_eq!(parse_value("sqrt(3)").unwrap(), 3f64.sqrt());
        assert_eq!(parse_value("-2/5*sqrt(5)").unwrap(), -2.0 / 5.0 * 5f64.sqrt());
        assert_eq!(parse_value(" 1e-3 ").unwrap(), 1e-3);
        assert_eq!(parse_value("0.1").unwrap(), 0.1);
        assert!(parse_value("sqrt(-1)").is_err());
        assert!(parse_value("1/0").is_err());
        assert!(parse_value("2x").is_err());
    }

    #[test]
    fn parse_error_location() {
        let text = r#"{"dim": 2, "basis_labels": ["a", "b"], "structure_constants": [[0, 1, 0, "sqrt(2"]],
            "h_basis": [], "m_summands": [[0, 1]], "metric_scales": [1]}"#;
        match SpaceDefinition::parse(text) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "structure_constants[0][3]"),
            other => panic!("{other:?}"),
        }
        match SpaceDefinition::parse("{\n\"dim\": }") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 2"), "{location}"),
            other => panic!("{other:?}"),
        }
    }
}
