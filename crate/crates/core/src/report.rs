//! Deterministic number formatting for exported reports.

use crate::exact::{fmt_q, Coefficient};
use crate::{PiQ, Q};
use serde::Serialize;

/// Rounds to 15 significant digits.
///
/// Every 15-digit decimal survives the round trip through `f64`, so the
/// shortest representation printed by serde or `Display` has at most 15
/// significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.14e}", x).parse().unwrap_or(x)
}

/// Exact value printed as a string, together with its floating point value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactValue {
    pub exact: String,
    pub value: f64,
}

impl ExactValue {
    pub fn from_pi(e: &PiQ) -> Self {
        Self {
            exact: e.to_string(),
            value: round15(e.to_f64()),
        }
    }

    pub fn from_q(r: &Q) -> Self {
        Self {
            exact: fmt_q(r),
            value: round15(r.approx().0),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<S: Serialize>(value: &S) -> crate::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
