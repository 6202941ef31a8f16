use serde_json::Value;

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// Shortest round-trip form, switching to exponent notation for very small or large values.
fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Two-column `field, value` table.
    pub fn record(fields: Vec<(&str, Cell)>) -> Self {
        let mut t = Self::new(&["field", "value"]);
        for (k, v) in fields {
            t.rows.push(vec![Cell::Text(k.to_owned()), v]);
        }
        t
    }

    /// Array of row objects keyed by column name.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.columns
                            .iter()
                            .cloned()
                            .zip(r.iter().map(Cell::json))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Everything a command prints: a JSON document for `--format json` and a table for the
/// other formats. `trailer` lines are appended as `#` comments to CSV and tables.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub table: Table,
    pub trailer: Vec<String>,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Table => self.pretty(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.table.columns)
            .expect("in-memory write");
        for r in &self.table.rows {
            w.write_record(r.iter().map(Cell::text))
                .expect("in-memory write");
        }
        let mut s = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
        self.push_trailer(&mut s);
        s
    }

    fn pretty(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .table
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::text).collect())
            .collect();
        let mut width: Vec<usize> = self.table.columns.iter().map(|c| c.len()).collect();
        for r in &cells {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let line = |r: &[String]| {
            let parts: Vec<String> = r
                .iter()
                .zip(&width)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            parts.join("  ").trim_end().to_owned() + "\n"
        };
        let mut s = line(&self.table.columns);
        s += &(width
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("  ")
            + "\n");
        for r in &cells {
            s += &line(r);
        }
        self.push_trailer(&mut s);
        s
    }

    fn push_trailer(&self, s: &mut String) {
        for t in &self.trailer {
            s.push_str("# ");
            s.push_str(t);
            s.push('\n');
        }
    }
}
