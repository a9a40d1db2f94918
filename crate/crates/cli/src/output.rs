//! Rendering of command results as JSON, aligned text or CSV.

use std::fmt::Display;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub title: Option<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: Option<&str>, headers: &[&str]) -> Self {
        Table { title: title.map(String::from), headers: headers.iter().map(|h| h.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn render_text(&self, out: &mut String) {
        if let Some(t) = &self.title {
            out.push_str(&format!("# {t}\n"));
        }
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(&self.headers));
        for row in &self.rows {
            out.push_str(&line(row));
        }
    }
}

/// A command result in both shapes: structured JSON and flat tables.
pub struct Output {
    pub json: Value,
    pub tables: Vec<Table>,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("JSON value serializes") + "\n",
            Format::Table => {
                let mut out = String::new();
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    t.render_text(&mut out);
                }
                out
            }
            Format::Csv => {
                let mut out = String::new();
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    let mut w = csv::Writer::from_writer(vec![]);
                    w.write_record(&t.headers).expect("write to memory");
                    for row in &t.rows {
                        w.write_record(row).expect("write to memory");
                    }
                    out.push_str(&String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input"));
                }
                out
            }
        }
    }
}

/// `(a,b,c)`.
pub fn tuple<T: Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn opt<T: Display>(x: Option<T>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}
