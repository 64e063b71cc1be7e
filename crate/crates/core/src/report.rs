//! Pass/fail records shared by the certificate suites and the `verify` command.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ExactPass,
    NumericPass,
    Fail,
}

impl Status {
    pub fn passed(self) -> bool {
        self != Status::Fail
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::ExactPass => "exact-pass",
            Status::NumericPass => "numeric-pass",
            Status::Fail => "FAIL",
        }
    }
}

/// One verified identity.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub module: String,
    /// Where the identity comes from, e.g. "S^7 frame: orthogonality of brackets".
    pub location: String,
    pub identity: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn exact(module: &str, location: &str, identity: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            module: module.into(),
            location: location.into(),
            identity: identity.into(),
            status: if ok { Status::ExactPass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    pub fn numeric(module: &str, location: &str, identity: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            module: module.into(),
            location: location.into(),
            identity: identity.into(),
            status: if ok { Status::NumericPass } else { Status::Fail },
            detail: detail.into(),
        }
    }
}

/// Renders a fixed-width table of checks.
pub fn render_table(checks: &[Check]) -> String {
    let w_loc = checks.iter().map(|c| c.location.len()).max().unwrap_or(8).max(8);
    let w_id = checks.iter().map(|c| c.identity.len()).max().unwrap_or(8).max(8);
    let mut out = format!("{:<12} {:<w_loc$} {:<w_id$} {:<13} detail\n", "module", "location", "identity", "status");
    for c in checks {
        out.push_str(&format!(
            "{:<12} {:<w_loc$} {:<w_id$} {:<13} {}\n",
            c.module,
            c.location,
            c.identity,
            c.status.label(),
            c.detail
        ));
    }
    out
}
