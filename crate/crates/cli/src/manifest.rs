//! Flat `key = value` run records.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

#[derive(Default)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        let mut m = Self::default();
        m.set("command", command);
        m
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string().replace('\n', " ");
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    /// Records the SHA-256 digest of an input file under `input.<role>`.
    pub fn input(&mut self, role: &str, path: &Path, contents: &str) {
        self.set(&format!("input.{role}"), path.display());
        self.set(&format!("input.{role}.sha256"), digest(contents));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

pub fn digest(contents: &str) -> String {
    let hash = Sha256::digest(contents.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}
