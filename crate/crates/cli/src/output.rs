//! Schema-tagged CSV and JSON tables.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => number(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Num(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e15)`.
fn number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

pub struct Table {
    pub command: &'static str,
    /// `key=value` pairs written as CSV comments and as JSON fields.
    pub meta: Vec<(&'static str, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self {
            command,
            meta: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.meta.push((key, value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# schema={SCHEMA}\n");
        for (k, v) in &self.meta {
            let v = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            writeln!(s, "# {k}={v}").unwrap();
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("schema".into(), json!(SCHEMA));
        top.insert("command".into(), json!(self.command));
        for (k, v) in &self.meta {
            top.insert((*k).into(), v.clone());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().zip(row).map(|(c, v)| ((*c).to_string(), v.json())).collect();
                Value::Object(obj)
            })
            .collect();
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn to_json(&self) -> String {
        pretty(&self.to_json_value())
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when `None`. A reader closing the pipe
/// early (`rabi ... | head`) is not an error.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["index", "x", "label"]).meta("omega", 1.0);
        t.push(vec![Cell::Int(0), Cell::Num(-0.25), "a".into()]);
        t.push(vec![Cell::Int(1), Cell::Empty, Cell::Bool(true)]);
        t
    }

    #[test]
    fn csv_layout() {
        assert_eq!(sample().to_csv(), "# schema=1\n# omega=1.0\nindex,x,label\n0,-0.25,a\n1,,true\n");
    }

    #[test]
    fn json_layout() {
        let v = sample().to_json_value();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], "demo");
        assert_eq!(v["rows"][0]["x"], -0.25);
        assert!(v["rows"][1]["x"].is_null());
    }

    #[test]
    fn numbers_round_trip_through_csv() {
        for x in [0.1 + 0.2, -1.4589628357461962e-16, 3e20, 0.0, -0.7078050640984868] {
            assert_eq!(Cell::Num(x).csv().parse::<f64>().unwrap(), x);
        }
        assert_eq!(number(1.5e-16), "1.5e-16");
        assert_eq!(number(0.91), "0.91");
    }
}
