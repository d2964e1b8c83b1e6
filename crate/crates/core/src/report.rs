//! Identity-check bookkeeping: every numerical claim carries the number of
//! agreeing p-adic digits and the threshold it was tested against.

use serde::Serialize;

use crate::padic::Agreement;

/// Outcome of one checked identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Digits required.
    pub threshold: i64,
    /// Digits of agreement observed; `None` means the difference is exactly 0.
    pub agreement: Option<i64>,
    /// Whether both sides agree modulo p^threshold.
    pub pass: bool,
    /// Set when the working precision cannot certify the identity either way
    /// (the difference is a zero flag of absolute precision below the
    /// threshold): not a failure, a call for more digits.
    pub insufficient_precision: bool,
}

impl IdentityCheck {
    pub fn from_agreement(name: impl Into<String>, agreement: Agreement, threshold: i64) -> Self {
        let (digits, pass, insufficient) = match agreement {
            Agreement::Exact => (None, true, false),
            Agreement::ZeroTo(t) => (Some(t), t >= threshold, t < threshold),
            Agreement::NonzeroAt(v) => (Some(v), v >= threshold, false),
        };
        IdentityCheck {
            name: name.into(),
            threshold,
            agreement: digits,
            pass,
            insufficient_precision: insufficient,
        }
    }

    pub fn boolean(name: impl Into<String>, pass: bool) -> Self {
        IdentityCheck {
            name: name.into(),
            threshold: 0,
            agreement: None,
            pass,
            insufficient_precision: false,
        }
    }
}

/// A named batch of identity checks.
#[derive(Clone, Debug, Serialize)]
pub struct CheckSet {
    pub name: String,
    pub checks: Vec<IdentityCheck>,
}

impl CheckSet {
    pub fn new(name: impl Into<String>) -> Self {
        CheckSet {
            name: name.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: IdentityCheck) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn any_insufficient(&self) -> bool {
        self.checks.iter().any(|c| c.insufficient_precision)
    }

    /// The weakest agreement over all checks (None when every one is exact).
    pub fn min_agreement(&self) -> Option<i64> {
        self.checks.iter().filter_map(|c| c.agreement).min()
    }
}
