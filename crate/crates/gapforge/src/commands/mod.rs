pub mod concentration;
pub mod construct;
pub mod cover;
pub mod rho;
pub mod verify;
pub mod weights;

use serde_json::Value;

/// JSON number, or null for a non-finite value.
pub(crate) fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::Null
    }
}
