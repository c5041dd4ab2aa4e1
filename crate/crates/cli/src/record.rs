//! Machine-readable results. JSON is canonical: keys are emitted in sorted
//! order and every number is a decimal string, so identical inputs give
//! identical bytes.

use rug::{Complex, Float};
use serde_json::{json, Map, Value};

use crate::config::Format;

/// Significant decimal digits printed for a result computed at `prec_bits`.
pub fn digits_for(prec_bits: u32) -> usize {
    ((prec_bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

pub fn float_string(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits))
}

pub fn complex_json(z: &Complex, digits: usize) -> Value {
    json!({ "re": float_string(z.real(), digits), "im": float_string(z.imag(), digits) })
}

/// Error estimates and defects: three significant digits.
pub fn small_string(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.3e}")
    }
}

#[derive(Debug, Clone)]
pub enum RecordValue {
    Complex(Complex),
    Text(String),
    Grid(Vec<Vec<Complex>>),
}

#[derive(Debug, Clone)]
pub struct ResultRecord {
    pub operation: String,
    /// The definition or identity the value instantiates.
    pub anchor: String,
    pub inputs: Vec<(String, String)>,
    pub values: Vec<(String, RecordValue)>,
    pub est_error: Option<f64>,
    pub prec_bits: u32,
    /// Only reported when timings are requested.
    pub wall_ms: Option<u128>,
}

impl ResultRecord {
    pub fn to_json(&self) -> Value {
        let digits = digits_for(self.prec_bits);
        let mut inputs = Map::new();
        for (k, v) in &self.inputs {
            inputs.insert(k.clone(), Value::String(v.clone()));
        }
        let mut values = Map::new();
        for (k, v) in &self.values {
            let jv = match v {
                RecordValue::Complex(z) => complex_json(z, digits),
                RecordValue::Text(s) => Value::String(s.clone()),
                RecordValue::Grid(g) => {
                    Value::Array(g.iter().map(|row| Value::Array(row.iter().map(|z| complex_json(z, digits)).collect())).collect())
                }
            };
            values.insert(k.clone(), jv);
        }
        let mut obj = Map::new();
        obj.insert("operation".into(), Value::String(self.operation.clone()));
        obj.insert("anchor".into(), Value::String(self.anchor.clone()));
        obj.insert("inputs".into(), Value::Object(inputs));
        obj.insert("values".into(), Value::Object(values));
        obj.insert("est_error".into(), self.est_error.map_or(Value::Null, |e| Value::String(small_string(e))));
        obj.insert("prec_bits".into(), Value::from(self.prec_bits));
        if let Some(ms) = self.wall_ms {
            obj.insert("wall_ms".into(), Value::from(ms as u64));
        }
        Value::Object(obj)
    }

    /// `operation,key,re,im` rows; grid entries are keyed `name[a][b]`.
    pub fn to_csv(&self) -> String {
        let digits = digits_for(self.prec_bits);
        let mut out = String::from("operation,key,re,im\n");
        let mut row = |key: &str, z: &Complex| {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.operation,
                key,
                float_string(z.real(), digits),
                float_string(z.imag(), digits)
            ));
        };
        for (k, v) in &self.values {
            match v {
                RecordValue::Complex(z) => row(k, z),
                RecordValue::Grid(g) => {
                    for (a, r) in g.iter().enumerate() {
                        for (b, z) in r.iter().enumerate() {
                            row(&format!("{k}[{a}][{b}]"), z);
                        }
                    }
                }
                RecordValue::Text(_) => {}
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let digits = digits_for(self.prec_bits);
        let mut out = format!("{} — {}\n", self.operation, self.anchor);
        for (k, v) in &self.inputs {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        let cx = |z: &Complex| format!("{} + {}·i", float_string(z.real(), digits), float_string(z.imag(), digits));
        for (k, v) in &self.values {
            match v {
                RecordValue::Complex(z) => out.push_str(&format!("  {k}: {}\n", cx(z))),
                RecordValue::Text(s) => out.push_str(&format!("  {k}: {s}\n")),
                RecordValue::Grid(g) => {
                    for (a, r) in g.iter().enumerate() {
                        for (b, z) in r.iter().enumerate() {
                            out.push_str(&format!("  {k}[{a}][{b}]: {}\n", cx(z)));
                        }
                    }
                }
            }
        }
        if let Some(e) = self.est_error {
            out.push_str(&format!("  est_error: {}\n", small_string(e)));
        }
        out.push_str(&format!("  prec_bits: {}\n", self.prec_bits));
        if let Some(ms) = self.wall_ms {
            out.push_str(&format!("  wall_ms: {ms}\n"));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.to_json()).expect("json")),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }
}
