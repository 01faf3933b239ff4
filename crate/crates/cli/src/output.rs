use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;

use crate::args::Format;

/// A command's result in every output form.
pub struct Report {
    pub json: Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Extra lines printed before the table in text form.
    pub preamble: Vec<String>,
}

impl Report {
    pub fn new(json: Value, headers: &[&str]) -> Self {
        Report {
            json,
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            preamble: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> io::Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.json)?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.into_inner().map_err(|e| e.into_error())
            }
            Format::Text => Ok(self.text().into_bytes()),
        }
    }

    fn text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(String::len).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out: String = self.preamble.iter().map(|l| format!("{l}\n")).collect();
        out += &line(&self.headers);
        for row in &self.rows {
            out += &line(row);
        }
        out
    }
}

pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> io::Result<()> {
    let bytes = report.render(format)?;
    match path {
        Some(p) => File::create(p)?.write_all(&bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()
        }
    }
}
