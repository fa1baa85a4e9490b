//! Pass/fail checks and the JSON report written by the command line.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into() }
    }

    /// Passes iff `failures` is empty; the detail lists the first few.
    pub fn from_failures(name: &str, failures: &[String], ok_detail: impl Into<String>) -> Self {
        if failures.is_empty() {
            Check::new(name, true, ok_detail)
        } else {
            let mut d = failures.iter().take(5).cloned().collect::<Vec<_>>().join("; ");
            if failures.len() > 5 {
                d.push_str(&format!("; … {} in total", failures.len()));
            }
            Check::new(name, false, d)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub horizon: Option<u64>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}
