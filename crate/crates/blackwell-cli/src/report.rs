//! Report assembly.
//!
//! Every command builds one [`Report`] and renders it either as labeled
//! text lines for reading or as a single JSON object for parsing. A field
//! added with [`Report::show`] or [`Report::num`] appears in both views;
//! exit codes stay the only contract scripts must rely on.

use std::fmt::Display;
use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// Labeled lines for humans.
    #[default]
    Text,
    /// One JSON object.
    Machine,
}

pub struct Report {
    text: Vec<String>,
    machine: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut machine = Map::new();
        machine.insert("command".into(), Value::String(command.into()));
        Report { text: Vec::new(), machine }
    }

    /// Field visible in both views.
    pub fn show(&mut self, key: &str, shown: impl Display, value: Value) {
        self.text.push(format!("{key}: {shown}"));
        self.machine.insert(key.into(), value);
    }

    pub fn num(&mut self, key: &str, v: f64) {
        let v = v + 0.0; // drop the sign of a negative zero
        self.show(key, v, Value::from(v));
    }

    pub fn str(&mut self, key: &str, v: impl Into<String> + Display) {
        let line = v.to_string();
        self.show(key, &line, Value::String(v.into()));
    }

    /// Text-only line (tables, notes).
    pub fn note(&mut self, line: impl Into<String>) {
        self.text.push(line.into());
    }

    /// Machine-only payload (full matrices, embedded documents).
    pub fn set(&mut self, key: &str, value: Value) {
        self.machine.insert(key.into(), value);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.join("\n") + "\n",
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(&Value::Object(self.machine.clone()))
                    .expect("report serializes");
                s.push('\n');
                s
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), Failure> {
        let body = self.render(format);
        match out {
            Some(path) => fs::write(path, body)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}
