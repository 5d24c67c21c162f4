//! Report tree shared by the text and structured renderers.

use serde_json::{json, Map, Value};

use quadric_a1::field::{fmt_rational, Q};
use quadric_a1::forms::QuadraticForm;
use quadric_a1::poly::{fmt_poly_q, Poly};

pub const SCHEMA: &str = "a1quad.report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub kind: &'static str,
    pub input: Value,
    pub verdict: String,
    /// Exit code 2 instead of 0.
    pub unknown: bool,
    /// Human-readable trace, one entry per line.
    pub trace: Vec<String>,
    pub evidence: Vec<Value>,
    pub certificates: Map<String, Value>,
}

impl Report {
    pub fn new(kind: &'static str, input: Value) -> Self {
        Report {
            kind,
            input,
            verdict: String::new(),
            unknown: false,
            trace: Vec::new(),
            evidence: Vec::new(),
            certificates: Map::new(),
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.trace.push(s.into());
    }

    pub fn fact(&mut self, name: &str, value: Value) {
        self.evidence.push(json!({ "name": name, "value": value }));
    }

    pub fn certificate(&mut self, name: &str, value: Value) {
        self.certificates.insert(name.to_string(), value);
    }

    pub fn exit_code(&self) -> i32 {
        if self.unknown {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "kind": self.kind,
            "input": self.input,
            "verdict": self.verdict,
            "decided": !self.unknown,
            "trace": self.trace,
            "evidence": self.evidence,
            "certificates": self.certificates,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => self.to_json().to_string(),
            Format::Text => {
                let mut s = format!("{}: {}", self.kind, self.verdict);
                for l in &self.trace {
                    s.push_str("\n  ");
                    s.push_str(l);
                }
                s
            }
        }
    }
}

pub fn error_json(message: &str) -> Value {
    json!({ "schema": SCHEMA, "kind": "error", "message": message })
}

pub fn rat(x: &Q) -> Value {
    Value::String(fmt_rational(x))
}

pub fn rats(v: &[Q]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn form(f: &QuadraticForm) -> Value {
    rats(f.coeffs())
}

pub fn poly(p: &Poly<Q>) -> Value {
    Value::String(fmt_poly_q(p))
}

/// Inverse of [`rat`] for certificate re-validation.
pub fn read_rat(v: &Value) -> Option<Q> {
    quadric_a1::field::parse_rational(v.as_str()?)
}

pub fn read_rats(v: &Value) -> Option<Vec<Q>> {
    v.as_array()?.iter().map(read_rat).collect()
}
