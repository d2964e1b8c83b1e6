//! JSON rendering helpers: every p-adic number appears both as its digit
//! array (machine form) and as a truncated sum string (human form).

use serde_json::{json, Value};

use wt1::padic::Padic;
use wt1::report::CheckSet;
use wt1::PadicSeries;

pub fn padic_entry(x: &Padic) -> Value {
    json!({
        "value": x,
        "display": x.digit_string(8),
    })
}

pub fn series_entry(s: &PadicSeries) -> Value {
    json!({
        "coefficients": s.coeffs().iter().map(padic_entry).collect::<Vec<_>>(),
        "display": s.to_string(),
    })
}

pub fn checkset_summary(set: &CheckSet) -> String {
    let passed = set.checks.iter().filter(|c| c.pass).count();
    let verdict = if set.all_pass() {
        "PASS"
    } else if set.any_insufficient() {
        "INSUFFICIENT PRECISION"
    } else {
        "FAIL"
    };
    let min = set
        .min_agreement()
        .map(|d| format!(", min agreement {} digits", d))
        .unwrap_or_default();
    format!(
        "[{}] {}: {}/{} checks{}",
        set.name,
        verdict,
        passed,
        set.checks.len(),
        min
    )
}
