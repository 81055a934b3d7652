use serde::Serialize;
use serde_json::Value;

/// One named pass/fail line with its margin. Serialized into experiment
/// reports as-is.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, holds: bool, margin: f64) -> Self {
        Check {
            name: name.into(),
            holds,
            margin: finite(margin),
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Serialize) -> Self {
        self.witness = serde_json::to_value(witness).ok();
        self
    }
}

/// JSON has no infinities; saturate so reports stay valid and byte-stable.
pub fn finite(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(-f64::MAX, f64::MAX)
    }
}
