use serde::Serialize;

/// Outcome of an exhaustive or sampled verification sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Count one item, recording `violation` when it is `Some`.
    pub fn record(&mut self, violation: Option<String>) {
        self.checked += 1;
        if let Some(v) = violation {
            self.violations.push(v);
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}
