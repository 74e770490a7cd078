//! Report rendering. Every report carries the tool version, the run
//! configuration and SHA-256 digests of the files read and written, so a
//! rerun with the echoed settings can be compared byte for byte.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::args::Format;
use crate::error::{CliError, CliResult};

pub const TOOL: &str = "umetric";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileDigest {
    pub fn of_bytes(path: &Path, data: &[u8]) -> Self {
        FileDigest { path: path.display().to_string(), sha256: sha256_hex(data), bytes: data.len() as u64 }
    }

    pub fn of_file(path: &Path) -> CliResult<Self> {
        let data = read_bytes(path)?;
        Ok(Self::of_bytes(path, &data))
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    format!("{:x}", Sha256::digest(data))
}

pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &Path, data: &[u8]) -> CliResult<()> {
    fs::write(path, data).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Clone)]
pub struct Report {
    command: String,
    config: Map<String, Value>,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    summary: Map<String, Value>,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
    delimiter: &'static str,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            config: Map::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            summary: Map::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            delimiter: "\t",
        }
    }

    pub fn config(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.config.insert(key.to_string(), value.into());
        self
    }

    pub fn input(&mut self, digest: FileDigest) -> &mut Self {
        self.inputs.push(digest);
        self
    }

    pub fn output(&mut self, digest: FileDigest) -> &mut Self {
        self.outputs.push(digest);
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }

    pub fn columns(&mut self, columns: &[&str]) -> &mut Self {
        self.columns = columns.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, values: Vec<Value>) -> &mut Self {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
        self
    }

    /// Column separator of the text form (tab by default).
    pub fn delimiter(&mut self, delimiter: &'static str) -> &mut Self {
        self.delimiter = delimiter;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => self.render_text(),
            Format::Record => self.render_record(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let mut meta = |key: &str, value: String| {
            out.push_str(&format!("# {key}\t{value}\n"));
        };
        meta("tool", format!("{TOOL} {VERSION}"));
        meta("command", self.command.clone());
        for (k, v) in &self.config {
            meta(&format!("config.{k}"), cell(v));
        }
        for d in &self.inputs {
            meta("input", format!("{}\t{}\t{}", d.path, d.bytes, d.sha256));
        }
        for d in &self.outputs {
            meta("output", format!("{}\t{}\t{}", d.path, d.bytes, d.sha256));
        }
        for (k, v) in &self.summary {
            meta(&format!("summary.{k}"), cell(v));
        }
        if !self.columns.is_empty() {
            if self.delimiter == "\t" {
                out.push_str(&self.columns.join("\t"));
            } else {
                out.push_str("# ");
                out.push_str(&self.columns.join(self.delimiter));
            }
            out.push('\n');
            for row in &self.rows {
                let cells: Vec<String> = row.iter().map(cell).collect();
                out.push_str(&cells.join(self.delimiter));
                out.push('\n');
            }
        }
        out
    }

    fn render_record(&self) -> String {
        let files = |list: &[FileDigest]| -> Vec<Value> {
            list.iter().map(|d| json!({"path": d.path, "bytes": d.bytes, "sha256": d.sha256})).collect()
        };
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
            .collect();
        let record = json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "config": self.config,
            "inputs": files(&self.inputs),
            "outputs": files(&self.outputs),
            "summary": self.summary,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&record).expect("report values serialize");
        s.push('\n');
        s
    }

    /// Write to `path`, or standard output when `None`.
    pub fn emit(&self, format: Format, path: Option<&PathBuf>) -> CliResult<()> {
        let text = self.render(format);
        match path {
            Some(p) => write_file(p, text.as_bytes()),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::Data(format!("cannot write report: {e}")))
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "NA".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// JSON number for a float; non-finite values become null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_has_metadata_then_table() {
        let mut r = Report::new("demo");
        r.config("seed", 7).columns(&["a", "b"]).row(vec![num(1.0), num(0.25)]);
        let text = r.render(Format::Tsv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# tool\t{TOOL} {VERSION}"));
        assert_eq!(lines[1], "# command\tdemo");
        assert_eq!(lines[2], "# config.seed\t7");
        assert_eq!(lines[3], "a\tb");
        assert_eq!(lines[4], "1.0\t0.25");
    }

    #[test]
    fn space_delimited_rows_keep_float_spelling() {
        let mut r = Report::new("shape");
        r.delimiter(" ").columns(&["x", "y"]).row(vec![num(0.8), num(0.6)]);
        assert!(r.render(Format::Tsv).ends_with("# x y\n0.8 0.6\n"));
    }

    #[test]
    fn record_form_is_json() {
        let mut r = Report::new("demo");
        r.summary("n", 3).columns(&["w"]).row(vec!["x".into()]);
        let v: Value = serde_json::from_str(&r.render(Format::Record)).unwrap();
        assert_eq!(v["summary"]["n"], 3);
        assert_eq!(v["rows"][0]["w"], "x");
        assert_eq!(v["version"], VERSION);
    }

    #[test]
    fn arrays_join_with_commas() {
        assert_eq!(cell(&json!([0.5, 1.0])), "0.5,1.0");
        assert_eq!(cell(&Value::Null), "NA");
    }

    #[test]
    fn digest_of_known_bytes() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
