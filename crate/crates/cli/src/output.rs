use serde::Serialize;
use serde_json::Value;

use crate::args::Format;

/// Writes either human-readable lines or one JSON record per report.
#[derive(Debug, Clone, Copy)]
pub struct Printer {
    format: Format,
    /// Send reports to stderr, because stdout carries data.
    to_stderr: bool,
}

impl Printer {
    pub fn new(format: Format) -> Self {
        Self {
            format,
            to_stderr: false,
        }
    }

    pub fn on_stderr(self) -> Self {
        Self {
            to_stderr: true,
            ..self
        }
    }

    /// Emits `text` in text mode, `record` as a single JSON line otherwise.
    pub fn emit<T: Serialize>(&self, text: &str, record: &T) {
        let out = match self.format {
            Format::Text => text.trim_end().to_string(),
            Format::Json => serde_json::to_string(record).expect("reports serialize"),
        };
        if self.to_stderr {
            eprintln!("{out}");
        } else {
            println!("{out}");
        }
    }
}

/// Builds a JSON object tagged with the command that produced it.
pub fn record(command: &str, body: impl Serialize) -> Value {
    let mut value = serde_json::to_value(body).expect("reports serialize");
    if let Value::Object(map) = &mut value {
        map.insert("command".into(), Value::String(command.into()));
    }
    value
}
