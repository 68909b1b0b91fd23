//! Tabular document model rendered as CSV, JSON, or aligned text.
//!
//! Every subcommand builds one [`Doc`] and the renderer guarantees the same
//! bytes for the same rows, so output never depends on the worker count.

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Comma-separated values with a header row and LF line endings.
    Csv,
    /// One object per row under "rows", plus "columns" and "notes".
    Json,
    /// Aligned plain text for reading in a terminal.
    Table,
}

/// One table cell. Integer cells cover every numeric column in the tool;
/// floats appear only in density estimates.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Str(String),
    Bool(bool),
    Empty,
}

macro_rules! int_cells {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Cell {
                Cell::Int(v as i128)
            }
        }
    )*};
}

int_cells!(i8, i16, i32, i64, i128, u8, u16, u32, u64);

impl From<u128> for Cell {
    fn from(v: u128) -> Cell {
        Cell::Int(i128::try_from(v).expect("cell value fits in 127 bits"))
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Cell {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Str(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Str(v.to_owned())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Cell {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    /// Unquoted text form, shared by the CSV and table renderers. Booleans
    /// render as 0/1 so CSV columns stay decimal.
    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.9}"),
            Cell::Str(s) => s.clone(),
            Cell::Bool(b) => if *b { "1" } else { "0" }.to_owned(),
            Cell::Empty => String::new(),
        }
    }

    fn csv(&self) -> String {
        let plain = self.plain();
        if plain.contains([',', '"', '\n']) {
            format!("\"{}\"", plain.replace('"', "\"\""))
        } else {
            plain
        }
    }

    fn json(&self) -> Value {
        match self {
            // every integer column is bounded well inside i64 by the flag
            // ranges, so JSON numbers are exact
            Cell::Int(v) => Value::from(i64::try_from(*v).expect("cell value fits in i64")),
            Cell::Float(v) => json!(v),
            Cell::Str(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

/// A finished result table: fixed columns, rows in their final order, and
/// free-form notes that accompany the data without polluting it.
#[derive(Debug, Clone)]
pub struct Doc {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    notes: Vec<String>,
}

impl Doc {
    pub fn new(columns: &[&'static str]) -> Doc {
        Doc {
            columns: columns.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width matches header");
        self.rows.push(row);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
            Format::Table => self.render_table(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let fields: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| (name.to_string(), cell.json()))
                    .collect();
                Value::Object(fields)
            })
            .collect();
        let doc = json!({
            "columns": self.columns,
            "rows": rows,
            "notes": self.notes,
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        out.push('\n');
        out
    }

    fn render_table(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(Cell::plain).collect())
            .collect();
        for row in &rows {
            for (w, field) in widths.iter_mut().zip(row) {
                *w = (*w).max(field.len());
            }
        }
        let mut out = String::new();
        let emit = |fields: Vec<String>, out: &mut String| {
            let padded: Vec<String> = fields
                .into_iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:>w$}"))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        };
        emit(self.columns.iter().map(|c| c.to_string()).collect(), &mut out);
        for row in rows {
            emit(row, &mut out);
        }
        for note in &self.notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}
