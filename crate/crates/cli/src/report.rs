use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verification {
    Skipped,
    Ok,
    Mismatch,
}

impl From<bool> for Verification {
    fn from(agrees: bool) -> Self {
        if agrees {
            Verification::Ok
        } else {
            Verification::Mismatch
        }
    }
}

/// One run, serialized as a single JSON object. Field order is fixed.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub algorithm: &'static str,
    pub n: usize,
    pub answer: Value,
    pub passes_used: usize,
    pub words_peak: usize,
    pub budget: usize,
    pub within_budget: bool,
    pub wall_ms: f64,
    pub verification: Verification,
}

impl RunReport {
    pub fn to_json(&self, pretty: bool) -> serde_json::Result<String> {
        if pretty {
            serde_json::to_string_pretty(self)
        } else {
            serde_json::to_string(self)
        }
    }
}
