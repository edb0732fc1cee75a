//! Run reports: config echo, version and psi stamps, payload, timings.

use std::time::Instant;

use gapforge_core::weights::PSI_VARIANT;
use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub payload: Value,
    /// Run facts that legitimately vary between runs (cache hits).
    pub environment: Map<String, Value>,
    pub timings: Vec<(String, f64)>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let timings: Map<String, Value> = self.timings.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "command": self.command,
            "version": VERSION,
            "psi_variant": PSI_VARIANT,
            "config": self.config,
            "payload": self.payload,
            "environment": self.environment,
            "timings_ms": timings,
        })
    }
}

/// Wall-clock stage timer.
#[derive(Debug, Default)]
pub struct Stages {
    pub timings: Vec<(String, f64)>,
}

impl Stages {
    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.timings.push((name.to_string(), t0.elapsed().as_secs_f64() * 1e3));
        out
    }
}
