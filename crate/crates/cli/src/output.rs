use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use rug::Float;
use serde_json::{json, Number, Value};

use pochzeta_core::hiprec::sci;

use crate::config::Format;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    /// Already formatted in scientific notation.
    Num(String),
    Int(u64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn num(x: &Float, digits: u32) -> Cell {
        if x.is_finite() {
            Cell::Num(sci(x, digits as usize))
        } else {
            Cell::Missing
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(s) | Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Missing => "nan".into(),
        }
    }

    fn json(&self) -> anyhow::Result<Value> {
        Ok(match self {
            Cell::Num(s) => Value::Number(s.parse::<Number>()?),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        })
    }
}

/// Rows in output order plus an optional run summary.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Option<Value>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> anyhow::Result<Value> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::json).collect::<anyhow::Result<Vec<_>>>())
            .collect::<anyhow::Result<Vec<_>>>()?;
        let mut v = json!({ "columns": self.columns, "rows": rows });
        if let Some(s) = &self.summary {
            v["summary"] = s.clone();
        }
        Ok(v)
    }
}

/// `fig5.csv` -> `fig5.summary.json`.
pub fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("summary.json")
}

/// Writes the table to `out` or stdout. With CSV output the summary goes
/// to a sidecar JSON file next to `out`, or to stderr.
pub fn emit(table: &Table, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match format {
        Format::Csv => {
            table.write_csv(&mut w)?;
            if let Some(s) = &table.summary {
                let text = serde_json::to_string_pretty(s)?;
                match out {
                    Some(p) => {
                        let sp = summary_path(p);
                        std::fs::write(&sp, text + "\n")
                            .with_context(|| format!("writing {}", sp.display()))?;
                    }
                    None => eprintln!("{text}"),
                }
            }
        }
        Format::Json => {
            serde_json::to_writer(&mut w, &table.to_json()?)?;
            writeln!(w)?;
            w.flush()?;
        }
    }
    Ok(())
}
