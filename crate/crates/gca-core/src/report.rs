use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub passed: bool,
    /// Rendered residual for failures (or a note for passes).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    pub residual_terms: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.entries.push(Entry { name: name.into(), passed: true, residual: None, residual_terms: 0 });
    }

    pub fn fail(&mut self, name: impl Into<String>, residual: impl Into<String>, terms: usize) {
        self.entries.push(Entry { name: name.into(), passed: false, residual: Some(residual.into()), residual_terms: terms });
    }

    pub fn record(&mut self, name: impl Into<String>, ok: bool, residual: impl Into<String>) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, residual, 1);
        }
    }

    /// Record `residual == 0`.
    pub fn zero(&mut self, name: impl Into<String>, residual: &crate::Elem) {
        if residual.is_zero() {
            self.pass(name);
        } else {
            self.fail(name, residual.to_string(), residual.len());
        }
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for mut e in other.entries {
            e.name = format!("{prefix}{}", e.name);
            self.entries.push(e);
        }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }
}
