use std::path::PathBuf;

use clap::Args;
use gapforge_core::gap::verify_certificate;
use serde_json::{json, Map};

use crate::certjson;
use crate::report::Stages;
use crate::{CliError, CliResult, Env, Outcome};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Certificate JSON file.
    pub cert: PathBuf,
}

pub fn run(a: &VerifyArgs, env: &mut Env) -> CliResult<Outcome> {
    env.knobs().note("cert", a.cert.display().to_string());
    env.freeze()?;
    let text = std::fs::read_to_string(&a.cert).map_err(|e| CliError::io(&a.cert, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", a.cert.display())))?;
    let cert = certjson::from_json(&value).map_err(|e| CliError::config(format!("{}: {e}", a.cert.display())))?;
    let mut st = Stages::default();
    let verdict = st.time("verify", || verify_certificate(&cert));
    let diagnostic = verdict.as_ref().err().map(|e| e.to_string());
    let payload = json!({
        "valid": verdict.is_ok(),
        "q0": cert.q0.to_string(),
        "k": cert.k,
        "gap_length": cert.gap_length.to_string(),
        "transcript_len": cert.transcript.len(),
        "diagnostic": diagnostic,
    });
    let summary = match &diagnostic {
        None => format!("certificate OK: gap ({}, {}) around {}^{}", cert.left_prime, cert.right_prime, cert.q0, cert.k),
        Some(d) => format!("certificate REJECTED: {d}"),
    };
    if let Some(d) = &diagnostic {
        eprintln!("gapforge: {d}");
    }
    Ok(Outcome {
        payload,
        environment: Map::new(),
        timings: st.timings,
        passed: verdict.is_ok(),
        summary,
    })
}
