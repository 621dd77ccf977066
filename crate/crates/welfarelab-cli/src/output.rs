//! Output assembly and emission.
//!
//! Every command builds one [`Emission`] — the complete text, CSV, and JSON
//! renderings of its result — and hands it to [`emit`], which writes the
//! requested format to standard output or to `--output PATH` in a single
//! write. Assembling the full document before writing keeps reruns
//! byte-identical.
//!
//! Numeric conventions:
//!
//! * text — shortest round-trip decimal (`{}`), human-oriented;
//! * CSV — `'.'` decimal separator, no grouping, 17 significant digits via
//!   `{:.16e}`, so every double survives a parse round trip;
//! * JSON — `serde_json` defaults (also round-trip exact).

use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;

use crate::CliError;

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable lines.
    Text,
    /// `record,key,value` rows, 17-significant-digit floats.
    Csv,
    /// Pretty-printed JSON document.
    Json,
}

/// A fully rendered command result in all three formats.
#[derive(Debug)]
pub struct Emission {
    /// Human-readable rendering.
    pub text: String,
    /// CSV rendering (`record,key,value` rows including a header).
    pub csv: String,
    /// Structured rendering.
    pub json: serde_json::Value,
}

/// Writes the requested rendering to stdout or to a file, in one piece.
pub fn emit(emission: &Emission, format: Format, output: Option<&Path>) -> Result<(), CliError> {
    let body = match format {
        Format::Text => emission.text.clone(),
        Format::Csv => emission.csv.clone(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&emission.json)
                .map_err(|e| CliError::input(format!("cannot render JSON: {e}")))?;
            s.push('\n');
            s
        }
    };
    match output {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| CliError::input(format!("cannot write to stdout: {e}")))
        }
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
    }
}

/// 17-significant-digit scientific rendering for CSV cells.
pub fn csv_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Shortest round-trip rendering for text output.
pub fn text_f64(x: f64) -> String {
    format!("{x}")
}

/// Escapes one CSV field: quotes it when it contains a comma, quote, or
/// newline.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Incremental builder for `record,key,value` CSV documents.
#[derive(Debug, Default)]
pub struct CsvRows {
    body: String,
}

impl CsvRows {
    /// A builder primed with the header row.
    pub fn new() -> Self {
        CsvRows {
            body: "record,key,value\n".to_string(),
        }
    }

    /// Appends one row with a string value.
    pub fn push(&mut self, record: &str, key: &str, value: &str) {
        self.body.push_str(&csv_field(record));
        self.body.push(',');
        self.body.push_str(&csv_field(key));
        self.body.push(',');
        self.body.push_str(&csv_field(value));
        self.body.push('\n');
    }

    /// Appends one row with a float value in CSV precision.
    pub fn push_f64(&mut self, record: &str, key: &str, value: f64) {
        let rendered = csv_f64(value);
        self.push(record, key, &rendered);
    }

    /// The finished document.
    pub fn finish(self) -> String {
        self.body
    }
}
