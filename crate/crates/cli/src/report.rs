use serde::Serialize;
use serde_json::Value;

use halftree::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One comparison between two computations of the same quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Check {
    /// Passes iff `lhs == rhs`; on failure `context` becomes the counterexample.
    pub fn compare(name: &str, lhs: &Rational, rhs: &Rational, context: Value) -> Check {
        let ok = lhs == rhs;
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs: Some(rational::format(lhs)),
            rhs: Some(rational::format(rhs)),
            detail: ok.then(|| context.clone()).filter(|c| !c.is_null()),
            counterexample: (!ok).then_some(context),
        }
    }

    pub fn outcome(name: &str, ok: bool, detail: Value) -> Check {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs: None,
            rhs: None,
            detail: ok.then(|| detail.clone()),
            counterexample: (!ok).then_some(detail),
        }
    }

    pub fn failure(name: &str, counterexample: Value) -> Check {
        Check::outcome(name, false, counterexample)
    }

    pub fn skipped(name: &str, reason: &str) -> Check {
        Check {
            name: name.into(),
            status: Status::Skipped,
            lhs: None,
            rhs: None,
            detail: Some(Value::String(reason.into())),
            counterexample: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub instance: Value,
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
}
