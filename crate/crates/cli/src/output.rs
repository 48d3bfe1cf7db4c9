use std::io;

use qorbit_core::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Boundary,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass | Status::Boundary => 0,
            Status::Fail => 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub params: Map<String, Value>,
    pub status: Status,
    pub details: Map<String, Value>,
    pub counterexample: Option<String>,
}

impl Report {
    pub fn new(command: &str, params: Map<String, Value>) -> Self {
        Report {
            schema: 1,
            command: command.into(),
            params,
            status: Status::Pass,
            details: Map::new(),
            counterexample: None,
        }
    }

    pub fn detail(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.details.insert(key.into(), v.into());
        self
    }

    /// A failing status always comes with a counterexample.
    pub fn fail(&mut self, counterexample: impl Into<String>) {
        self.status = Status::Fail;
        self.counterexample = Some(counterexample.into());
    }

    pub fn check(&mut self, counterexample: Option<String>) {
        if let Some(c) = counterexample {
            self.fail(c);
        }
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
        self.serialize(&mut ser).expect("report serializes");
        let mut s = String::from_utf8(buf).expect("JSON is UTF-8");
        s.push('\n');
        s
    }

    /// Rows of `details.table` if present, otherwise the scalar details as key,value.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        match self.details.get("table").and_then(Value::as_array) {
            Some(rows) if !rows.is_empty() => {
                let header: Vec<String> = rows[0].as_object().map(|o| o.keys().cloned().collect()).unwrap_or_default();
                w.write_record(&header).expect("in-memory write");
                for row in rows {
                    let rec: Vec<String> = header.iter().map(|h| cell(row.get(h).unwrap_or(&Value::Null))).collect();
                    w.write_record(&rec).expect("in-memory write");
                }
            }
            _ => {
                w.write_record(["key", "value"]).expect("in-memory write");
                for (k, v) in &self.details {
                    w.write_record([k.as_str(), &cell(v)]).expect("in-memory write");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("CSV is UTF-8")
    }
}

fn num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => num(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

/// Compact JSON with every float written to 17 significant digits.
struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(num(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![real(z.re), real(z.im)])
}

pub fn real(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}
