use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one machine check, with a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    /// Passes when `failures` is empty, otherwise reports the first few.
    pub fn from_failures(name: impl Into<String>, failures: &[String]) -> Self {
        if failures.is_empty() {
            Self::pass(name)
        } else {
            let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
            let more = if failures.len() > 3 {
                format!(" (+{} more)", failures.len() - 3)
            } else {
                String::new()
            };
            Self::fail(name, format!("{}{}", shown.join("; "), more))
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, witness())
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn all_passed(checks: &[CheckResult]) -> bool {
    checks.iter().all(CheckResult::passed)
}
