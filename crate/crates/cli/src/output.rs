//! CSV and JSON rendering with fixed 17-significant-digit numbers.

use serde_json::{Map, Number, Value};
use std::str::FromStr;

pub fn number(v: f64) -> Value {
    if v == 0.0 {
        return Value::Number(Number::from(0));
    }
    // finite values only reach here; the library rejects the rest
    Value::Number(Number::from_str(&format!("{v:.16e}")).expect("finite float"))
}

pub fn fmt(v: f64) -> String {
    if v == 0.0 {
        "0".to_owned()
    } else {
        format!("{v:.16e}")
    }
}

/// Ordered named values.
#[derive(Clone, Debug, Default)]
pub struct Record {
    pub fields: Vec<(String, Field)>,
}

#[derive(Clone, Debug)]
pub enum Field {
    Num(f64),
    Text(String),
    Int(u64),
}

impl Record {
    pub fn num(mut self, name: &str, v: f64) -> Self {
        self.fields.push((name.to_owned(), Field::Num(v)));
        self
    }

    pub fn text(mut self, name: &str, v: &str) -> Self {
        self.fields
            .push((name.to_owned(), Field::Text(v.to_owned())));
        self
    }

    pub fn int(mut self, name: &str, v: u64) -> Self {
        self.fields.push((name.to_owned(), Field::Int(v)));
        self
    }

    /// A value followed by `<name>_error_estimate`.
    pub fn with_error(self, name: &str, v: f64, err: f64) -> Self {
        self.num(name, v)
            .num(&format!("{name}_error_estimate"), err)
    }

    pub fn extend(mut self, other: Record) -> Self {
        self.fields.extend(other.fields);
        self
    }

    pub fn to_json(&self) -> Map<String, Value> {
        self.fields
            .iter()
            .map(|(k, f)| {
                let v = match f {
                    Field::Num(x) => number(*x),
                    Field::Text(s) => Value::String(s.clone()),
                    Field::Int(i) => Value::Number(Number::from(*i)),
                };
                (k.clone(), v)
            })
            .collect()
    }

    fn header(&self) -> Vec<&str> {
        self.fields.iter().map(|(k, _)| k.as_str()).collect()
    }

    fn cells(&self) -> Vec<String> {
        self.fields
            .iter()
            .map(|(_, f)| match f {
                Field::Num(x) => fmt(*x),
                Field::Text(s) => s.clone(),
                Field::Int(i) => i.to_string(),
            })
            .collect()
    }
}

/// What a command produces.
pub enum Report {
    /// One flat object.
    Single(Record),
    /// Rows sharing metadata; CSV carries only the rows.
    Profile { metadata: Record, rows: Vec<Record> },
    /// Self-describing rows.
    Scan(Vec<Record>),
}

pub fn to_csv(rows: &[Record]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    if let Some(first) = rows.first() {
        w.write_record(first.header())?;
    }
    for r in rows {
        w.write_record(r.cells())?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

impl Report {
    pub fn csv(&self) -> Result<Vec<u8>, csv::Error> {
        match self {
            Report::Single(r) => to_csv(std::slice::from_ref(r)),
            Report::Profile { rows, .. } | Report::Scan(rows) => to_csv(rows),
        }
    }

    pub fn json(&self) -> Vec<u8> {
        let value = match self {
            Report::Single(r) => Value::Object(r.to_json()),
            Report::Profile { metadata, rows } => {
                let mut obj = metadata.to_json();
                obj.insert(
                    "rows".to_owned(),
                    Value::Array(rows.iter().map(|r| Value::Object(r.to_json())).collect()),
                );
                Value::Object(obj)
            }
            Report::Scan(rows) => {
                Value::Array(rows.iter().map(|r| Value::Object(r.to_json())).collect())
            }
        };
        let mut out = serde_json::to_vec_pretty(&value).expect("in-memory JSON");
        out.push(b'\n');
        out
    }
}
