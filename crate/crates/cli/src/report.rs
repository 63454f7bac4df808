//! Certificate reports: one line per check, then `PASS` or `FAIL`.

use std::fmt::Display;

#[derive(Default)]
pub struct Report {
    body: String,
    failed: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: impl Display) {
        self.body.push_str(&format!("{name} {detail} {}\n", if ok { "OK" } else { "FAIL" }));
        self.failed |= !ok;
    }

    pub fn note(&mut self, text: impl Display) {
        for l in text.to_string().lines() {
            self.body.push_str(&format!("# {l}\n"));
        }
    }

    /// Lines already carrying their own verdicts.
    pub fn raw(&mut self, text: &str, ok: bool) {
        self.body.push_str(text);
        if !text.ends_with('\n') && !text.is_empty() {
            self.body.push('\n');
        }
        self.failed |= !ok;
    }

    pub fn passed(&self) -> bool {
        !self.failed
    }

    pub fn finish(mut self) -> (String, bool) {
        let ok = !self.failed;
        self.body.push_str(if ok { "PASS\n" } else { "FAIL\n" });
        (self.body, ok)
    }
}
