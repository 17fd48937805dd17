//! Structured outcomes for verification tasks.
//!
//! Every checking operation in this crate reports through [`VerificationReport`]
//! so that callers (library users, the job-file executor, the CLI) see the same
//! fields: what was checked, how many checks ran, and the first witness when
//! something fails. Reports serialize to JSON with stable field names.

use serde::Serialize;
use std::fmt;

/// Outcome of a verification task.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Every check passed.
    Pass,
    /// At least one check failed; `first_violation` carries the witness.
    Fail,
    /// The task could not run (bad input, unbound name, precision shortfall).
    Error,
}

/// First failing check: which index failed and the value seen there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub value: String,
}

/// One row of an attached cusp-order table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderRow {
    pub denominator: u64,
    pub multiplicity: u64,
    pub order: String,
}

/// One row of an attached valuation table; `valuation` is absent for a zero row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationRow {
    pub index: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuation: Option<u64>,
}

/// Named certification conditions and whether each held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionRow {
    pub name: String,
    pub holds: bool,
}

/// Optional structured attachments for a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReportTables {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<OrderRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuations: Option<Vec<ValuationRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<Vec<ConditionRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
}

impl ReportTables {
    pub fn is_empty(&self) -> bool {
        self.orders.is_none()
            && self.valuations.is_none()
            && self.conditions.is_none()
            && self.constant.is_none()
    }
}

/// Result of one verification task.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// Task label, e.g. `"identity"`, `"congruence base 3 alpha 2"`.
    pub task: String,
    pub status: Status,
    /// Number of individual checks that ran before stopping.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<ReportTables>,
    /// Human-readable explanation, present when `status` is `Error`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl VerificationReport {
    pub fn pass(task: impl Into<String>, checked: u64) -> Self {
        VerificationReport {
            task: task.into(),
            status: Status::Pass,
            checked,
            first_violation: None,
            tables: None,
            message: None,
        }
    }

    pub fn fail(task: impl Into<String>, checked: u64, index: u64, value: impl Into<String>) -> Self {
        VerificationReport {
            task: task.into(),
            status: Status::Fail,
            checked,
            first_violation: Some(Violation { index, value: value.into() }),
            tables: None,
            message: None,
        }
    }

    pub fn error(task: impl Into<String>, message: impl Into<String>) -> Self {
        VerificationReport {
            task: task.into(),
            status: Status::Error,
            checked: 0,
            first_violation: None,
            tables: None,
            message: Some(message.into()),
        }
    }

    pub fn with_tables(mut self, tables: ReportTables) -> Self {
        if !tables.is_empty() {
            self.tables = Some(tables);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            Status::Pass => write!(f, "PASS {} (checked {})", self.task, self.checked),
            Status::Fail => {
                write!(f, "FAIL {} (checked {})", self.task, self.checked)?;
                if let Some(v) = &self.first_violation {
                    write!(f, " first violation at index {}: {}", v.index, v.value)?;
                }
                Ok(())
            }
            Status::Error => {
                write!(f, "ERROR {}", self.task)?;
                if let Some(m) = &self.message {
                    write!(f, ": {m}")?;
                }
                Ok(())
            }
        }
    }
}
