//! Report document shared by every subcommand.
//!
//! One JSON document per run, stable field order, no timestamps or other
//! nondeterministic content: identical configuration must produce
//! byte-identical output regardless of worker count.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// One contracted assertion: `pass` states whether `value` met `threshold`
/// in the direction implied by the name.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    pub fn ge(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            threshold,
            pass: value >= threshold,
        }
    }

    pub fn flag(name: &str, ok: bool) -> Self {
        Self {
            name: name.to_string(),
            value: if ok { 1.0 } else { 0.0 },
            threshold: 1.0,
            pass: ok,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Document<C: Serialize, R: Serialize> {
    pub schema_version: u32,
    pub command: String,
    pub config: C,
    pub results: R,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl<C: Serialize, R: Serialize> Document<C, R> {
    pub fn new(command: &str, config: C, results: R, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config,
            results,
            checks,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}
