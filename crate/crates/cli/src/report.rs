//! The verification report: one entry per check, sorted by name.

use serde::{Deserialize, Serialize};

use crate::CliError;

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
    pub claimed: String,
    pub computed: String,
    /// The statement the check reproduces.
    pub reference: String,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u64,
    pub status: Status,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(seed: u64, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let status = if checks.iter().all(|c| c.status == Status::Pass) { Status::Pass } else { Status::Fail };
        VerificationReport { schema: selfext_core::json::SCHEMA, status, seed, checks }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let report: Self = serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad report: {e}")))?;
        if report.schema != selfext_core::json::SCHEMA {
            return Err(CliError::Input(format!("unsupported report schema {}", report.schema)));
        }
        Ok(report)
    }

    pub fn table(&self) -> String {
        let mut rows = vec![["status", "check", "claimed", "computed", "ms"].map(String::from)];
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            rows.push([status.into(), c.name.clone(), c.claimed.clone(), c.computed.clone(), c.runtime_ms.to_string()]);
        }
        let mut out = crate::output::align(&rows);
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        out.push_str(&format!(
            "\n{}: {} of {} checks passed (seed {})\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len() - failed,
            self.checks.len(),
            self.seed
        ));
        out
    }
}
