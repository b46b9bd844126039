//! Number formatting and the CSV/JSON writers shared by all commands.

use std::io::Write;

use serde_json::{Map, Value};

/// 17 significant digits, positional for moderate magnitudes.
pub fn fmt_f64(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..17).contains(&exp) {
        format!("{v:.prec$}", prec = (16 - exp) as usize)
    } else {
        sci
    }
}

/// A command result: CSV rows with a header, or one JSON document
/// `{command, params, rows, pass?}`.
pub struct Table {
    pub command: &'static str,
    pub params: Map<String, Value>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub pass: Option<bool>,
    /// Extra lines after the CSV body, written as `# ...` comments.
    pub trailer: Vec<String>,
    /// Extra top-level JSON fields.
    pub extra: Map<String, Value>,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Float(f64),
    Int(u64),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Float(v) => fmt_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

impl Table {
    pub fn new(command: &'static str, header: Vec<&'static str>) -> Self {
        Table {
            command,
            params: Map::new(),
            header,
            rows: Vec::new(),
            pass: None,
            trailer: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        let mut out = w.into_inner().map_err(|e| e.into_error())?;
        for line in &self.trailer {
            writeln!(out, "# {line}")?;
        }
        out.flush()
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| (h.to_string(), c.json()))
                    .collect();
                Value::Object(m)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::from(self.command));
        doc.insert("params".into(), Value::Object(self.params.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        if let Some(p) = self.pass {
            doc.insert("pass".into(), Value::Bool(p));
        }
        doc.extend(self.extra.clone());
        Value::Object(doc)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)?;
        out.flush()
    }

    pub fn write<W: Write>(&self, out: W, json: bool) -> std::io::Result<()> {
        if json {
            self.write_json(out)
        } else {
            self.write_csv(out)
        }
    }
}
