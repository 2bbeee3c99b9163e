use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// JSON schema for one report line.
pub const REPORT_SCHEMA: &str = include_str!("../report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointEntry {
    pub label: String,
    pub x: Option<String>,
    pub y: Option<String>,
    pub order: u32,
    pub halved_from: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub command: String,
    pub genus: usize,
    pub level: Option<u32>,
    pub expected: Value,
    pub computed: Value,
    pub passed: bool,
    pub elapsed_ms: u64,
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointEntry>>,
}

impl VerificationReport {
    pub fn new(command: &str, genus: usize, level: Option<u32>, expected: Value, computed: Value) -> Self {
        let passed = expected == computed;
        VerificationReport {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            genus,
            level,
            expected,
            computed,
            passed,
            elapsed_ms: 0,
            details: Vec::new(),
            seed: None,
            points: None,
        }
    }

    pub fn with_details(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Extra pass conditions beyond `expected == computed`.
    pub fn require(mut self, ok: bool) -> Self {
        self.passed &= ok;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Integers as JSON numbers when they fit in `u64`, as decimal strings otherwise.
pub fn int_value(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} g={}", self.command, self.genus)?;
        if let Some(n) = self.level {
            write!(f, " n={n}")?;
        }
        write!(f, ": expected {}, computed {} ({} ms)", self.expected, self.computed, self.elapsed_ms)?;
        if let Some(seed) = self.seed {
            write!(f, " seed={seed}")?;
        }
        for d in &self.details {
            write!(f, "\n    {d}")?;
        }
        if let Some(points) = &self.points {
            for p in points {
                match (&p.x, &p.y) {
                    (Some(x), Some(y)) => write!(f, "\n    {} (order {}): x = {x}, y = {y}", p.label, p.order)?,
                    _ => write!(f, "\n    {} (order {}): point at infinity", p.label, p.order)?,
                }
            }
        }
        Ok(())
    }
}
