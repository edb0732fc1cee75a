use clap::Args;
use gapforge_core::arith::{dickman_rho, smooth_count_exact};
use serde_json::{json, Map, Value};

use super::num;
use crate::config::{parse_list, require};
use crate::report::Stages;
use crate::{CliError, CliResult, Env, Outcome};

#[derive(Debug, Args)]
pub struct RhoArgs {
    /// Comma list of arguments `u`.
    #[arg(long)]
    pub u: Option<String>,
    /// Exact smooth count `Psi(y, z)` (set both, or `--no-count`).
    #[arg(long)]
    pub y: Option<u64>,
    #[arg(long)]
    pub z: Option<u64>,
    #[arg(long = "no-count")]
    pub no_count: bool,
}

pub fn run(a: &RhoArgs, env: &mut Env) -> CliResult<Outcome> {
    let kn = env.knobs();
    let us: Vec<f64> = parse_list(&kn.get("u", a.u.clone(), "1,2,3".to_string())?)?;
    let y = kn.get("y", a.y, 1_000_000u64)?;
    let z = kn.get("z", a.z, 100u64)?;
    let count = !kn.get("no-count", a.no_count.then_some(true), false)?;
    require(us.iter().all(|&u| u >= 0.0 && u.is_finite()), || "u must be finite and non-negative".into())?;
    require(!count || (y >= 2 && z >= 2), || "y and z must be at least 2".into())?;
    env.freeze()?;
    let mut st = Stages::default();
    let rho: Vec<Value> = st.time("rho", || {
        us.iter().map(|&u| json!({ "u": num(u), "rho": num(dickman_rho(u)) })).collect()
    });
    let mut payload = json!({ "rho": rho });
    let mut summary = us
        .iter()
        .map(|&u| format!("rho({u}) = {:.10}", dickman_rho(u)))
        .collect::<Vec<_>>()
        .join(", ");
    if count {
        let exact = st.time("smooth_count", || smooth_count_exact(y, z)).map_err(|e| CliError::config(e.to_string()))?;
        let u = (y as f64).ln() / (z as f64).ln();
        let estimate = y as f64 * dickman_rho(u);
        payload["smooth"] = json!({
            "y": y, "z": z, "exact": exact, "u": num(u), "estimate": num(estimate),
            "ratio": num(exact as f64 / estimate),
        });
        summary.push_str(&format!("; Psi({y}, {z}) = {exact}, y rho(u) = {estimate:.1}"));
    }
    Ok(Outcome {
        payload,
        environment: Map::new(),
        timings: st.timings,
        passed: true,
        summary,
    })
}
