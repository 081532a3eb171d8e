//! Deterministic run reports: header, body, a single RESULT line and a
//! content digest. Identical command lines over identical inputs produce
//! byte-identical reports.

use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: &str = "1";

pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(argv: &[String]) -> Self {
        let mut lines = Vec::new();
        lines.push(format!("profinite report format={FORMAT_VERSION}"));
        lines.push(format!("command: {}", argv.join(" ")));
        Report { lines }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// Appends a multi-line block verbatim (without a trailing newline).
    pub fn block(&mut self, text: &str) {
        for line in text.lines() {
            self.lines.push(line.to_string());
        }
    }

    pub fn result(&mut self, text: impl AsRef<str>) {
        self.lines.push(format!("RESULT {}", text.as_ref()));
    }

    /// The full report with its digest line.
    pub fn render(&self) -> String {
        let mut body = self.lines.join("\n");
        body.push('\n');
        let digest = Sha256::digest(body.as_bytes());
        body.push_str(&format!("digest: sha256:{}\n", hex::encode(digest)));
        body
    }
}
