use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;

/// Flat key-value machine report. Keys are kept sorted so identical runs
/// serialize identically.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    entries: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.set("command", command);
        r
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        let v = value.into();
        // Non-finite floats have no JSON form.
        let v = match v {
            Value::Null => Value::String("none".into()),
            other => other,
        };
        self.entries.insert(key.into(), v);
    }

    pub fn set_f64(&mut self, key: impl Into<String>, x: f64) {
        if x.is_finite() {
            self.set(key, x);
        } else {
            self.set(key, format!("{x}"));
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.entries).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())
            .with_context(|| format!("cannot write {}", path.display()))
    }
}

/// Plain-text report builder.
#[derive(Default)]
pub struct Text(String);

impl Text {
    pub fn line(&mut self, s: impl AsRef<str>) {
        self.0.push_str(s.as_ref());
        self.0.push('\n');
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.0, "{key:<22}{value}");
    }

    pub fn into_string(self) -> String {
        self.0
    }
}
