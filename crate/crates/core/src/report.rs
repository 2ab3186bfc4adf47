//! Pass/fail records produced by the verification routines.

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckItem {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

/// A named group of checks. `passed()` is true iff every item passed.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), items: Vec::new() }
    }

    pub fn record(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.items.push(CheckItem { label: label.into(), passed, detail: detail.into() });
    }

    pub fn extend(&mut self, other: CheckReport) {
        for mut item in other.items {
            item.label = format!("{}: {}", other.name, item.label);
            self.items.push(item);
        }
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }

    pub fn count(&self) -> usize {
        self.items.len()
    }
}
