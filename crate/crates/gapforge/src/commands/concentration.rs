use clap::Args;
use gapforge_core::arith::prime_range;
use gapforge_core::concentration::{
    binomial_estimate, exact_membership, first_good, in_g, membership_trial, sigma, GoodSetParams, Tolerance,
};
use serde_json::{json, Map};

use super::num;
use crate::config::{parse_list, require};
use crate::parallel::{chunks, ordered};
use crate::report::Stages;
use crate::{CliError, CliResult, Env, Outcome};

#[derive(Debug, Args)]
pub struct ConcentrationArgs {
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long)]
    pub y: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    /// Sieving primes are those in `(s-lo, s-hi]`.
    #[arg(long = "s-lo")]
    pub s_lo: Option<u64>,
    #[arg(long = "s-hi")]
    pub s_hi: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Number of good integers tested jointly.
    #[arg(long)]
    pub t: Option<usize>,
    /// Absolute deviation bound; absent means `(log x)^{-exponent}`.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long = "tolerance-exponent")]
    pub tolerance_exponent: Option<f64>,
    /// Take the first `t` good integers from here.
    #[arg(long)]
    pub start: Option<u64>,
    /// Explicit integers instead of the first good ones.
    #[arg(long)]
    pub ns: Option<String>,
}

const TRIAL_CHUNK: u64 = 4096;

pub fn run(a: &ConcentrationArgs, env: &mut Env) -> CliResult<Outcome> {
    let kn = env.knobs();
    let x = kn.get("x", a.x, 1_000_000u64)?;
    let y = kn.get("y", a.y, 1_060_000u64)?;
    let k = kn.get("k", a.k, 2u64)?;
    let s_lo = kn.get("s-lo", a.s_lo, 7u64)?;
    let s_hi = kn.get("s-hi", a.s_hi, 300u64)?;
    let trials = kn.get("trials", a.trials, 100_000u64)?;
    let t = kn.get("t", a.t, 2usize)?;
    let abs = kn.optional("tolerance", a.tolerance)?;
    let expo = kn.get("tolerance-exponent", a.tolerance_exponent, 1.0 / 40.0)?;
    let start = kn.get("start", a.start, x)?;
    let ns_spec = kn.optional("ns", a.ns.clone())?;
    require(x <= y, || "window [x, y] is empty".into())?;
    require(k >= 1, || "k must be positive".into())?;
    let tolerance = abs.map_or(Tolerance::Exponent(expo), Tolerance::Absolute);
    let s = prime_range(s_lo, s_hi).map_err(|e| CliError::config(e.to_string()))?;
    let params = GoodSetParams::new(x, y, k, s, tolerance);
    let ns: Vec<u64> = match ns_spec {
        Some(list) => {
            let ns: Vec<u64> = parse_list(&list)?;
            for &n in &ns {
                require(in_g(n, &params).map_err(|e| CliError::config(e.to_string()))?, || {
                    format!("{n} is not a good integer")
                })?;
            }
            ns
        }
        None => {
            let ns = first_good(&params, start, t);
            require(ns.len() == t, || format!("only {} good integers in [{start}, {y}]", ns.len()))?;
            ns
        }
    };
    env.freeze()?;

    let mut st = Stages::default();
    let seed = env.seed;
    let parts = chunks(0, trials, TRIAL_CHUNK);
    let hits: u64 = st.time("trials", || {
        env.install(|| ordered(parts.len() as u64, |i| {
            let (a, b) = parts[i as usize];
            (a..b).filter(|&tr| membership_trial(&ns, &params, seed, tr)).count() as u64
        }))
        .into_iter()
        .sum()
    });
    let (estimate, stderr) = if ns.is_empty() { (1.0, 0.0) } else { binomial_estimate(hits, trials) };
    let sig = sigma(&params);
    let sigma_t = sig.sigma.powi(ns.len() as i32);
    let exact = exact_membership(&ns, &params);
    let allowed = (3.0 * stderr).max(0.01 * sigma_t);
    let deviation = (estimate - sigma_t).abs();
    let payload = json!({
        "ns": ns,
        "t": ns.len(),
        "trials": trials,
        "hits": hits,
        "estimate": num(estimate),
        "stderr": num(stderr),
        "sigma": num(sig.sigma),
        "sigma_terms": sig.terms,
        "sigma_t": num(sigma_t),
        "exact": num(exact),
        "deviation": num(deviation),
        "allowed": num(allowed),
        "within_sigma_band": deviation <= allowed,
        "mc_vs_exact_sigmas": num(if stderr > 0.0 { (estimate - exact).abs() / stderr } else { 0.0 }),
    });
    let summary = format!(
        "t = {}: estimate {estimate:.6} +- {stderr:.6}, sigma^t = {sigma_t:.6}, exact {exact:.6}",
        ns.len()
    );
    Ok(Outcome {
        payload,
        environment: Map::new(),
        timings: st.timings,
        passed: true,
        summary,
    })
}
