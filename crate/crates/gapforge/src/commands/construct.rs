use std::path::PathBuf;

use clap::Args;
use gapforge_core::gap::{
    build_context, prepare, verify_certificate, Certifier, Overrides, RowResult, Strategy, SurvivorTag,
};
use serde_json::{json, Map, Value};

use super::num;
use crate::cache::load_or_build;
use crate::certjson;
use crate::config::require;
use crate::parallel::{chunks, ordered};
use crate::report::Stages;
use crate::{CliError, CliResult, Env, Outcome};

/// Rows per work item and work items per wave of the row scan.
const ROW_CHUNK: u64 = 500;
const WAVE: usize = 32;

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long = "C0")]
    pub c0: Option<f64>,
    #[arg(long)]
    pub y: Option<u64>,
    #[arg(long)]
    pub z: Option<u64>,
    #[arg(long = "s-floor")]
    pub s_floor: Option<u64>,
    /// greedy or random.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Rows `1..=rmax` are scanned.
    #[arg(long)]
    pub rmax: Option<u64>,
    #[arg(long = "max-certs")]
    pub max_certs: Option<u64>,
    /// Certificate file (the first certificate found).
    #[arg(long)]
    pub out: Option<String>,
}

pub fn parse_strategy(s: &str) -> CliResult<Strategy> {
    match s {
        "greedy" => Ok(Strategy::Greedy),
        "random" => Ok(Strategy::Random),
        _ => Err(CliError::config(format!("strategy {s}: expected greedy or random"))),
    }
}

fn row_json(row: &RowResult) -> Value {
    json!({ "r": row.r, "q0": row.q0.to_string() })
}

pub fn run(a: &ConstructArgs, env: &mut Env) -> CliResult<Outcome> {
    let kn = env.knobs();
    let x = kn
        .optional("x", a.x)?
        .ok_or_else(|| CliError::config("construct needs --x"))?;
    let k = kn.get("k", a.k, 2u64)?;
    let c = kn.get("c", a.c, 1.0)?;
    let c0 = kn.get("C0", a.c0, 2.0)?;
    let overrides = Overrides {
        y: kn.optional("y", a.y)?,
        z: kn.optional("z", a.z)?,
        s_floor: kn.optional("s-floor", a.s_floor)?,
    };
    let strategy = parse_strategy(&kn.get("strategy", a.strategy.clone(), "greedy".to_string())?)?;
    let rmax = kn.get("rmax", a.rmax, 100_000u64)?;
    let max_certs = kn.get("max-certs", a.max_certs, 1u64)?;
    let out = kn.optional("out", a.out.clone())?.map(PathBuf::from);
    require(max_certs >= 1, || "max-certs must be at least 1".into())?;
    let ctx = build_context(x, k, c, c0, overrides).map_err(|e| CliError::config(e.to_string()))?;
    env.freeze()?;

    let mut st = Stages::default();
    let limit = ctx.y.max(ctx.c0x());
    let (table, cache) = st.time("prime_table", || load_or_build(env.cache_dir.as_deref(), limit))?;
    if table.range(ctx.x, ctx.y) != ctx.q.as_slice() {
        return Err(CliError::Verification("cached prime table disagrees with Q".into()));
    }
    let cons = st.time("prepare", || prepare(&ctx, strategy, env.seed))?;
    let certifier = Certifier::default();

    let work = chunks(1, rmax + 1, ROW_CHUNK);
    let mut prime_rows = 0u64;
    let mut scanned = 0u64;
    let mut clean: Vec<RowResult> = Vec::new();
    let mut dirty_sample: Vec<Value> = Vec::new();
    st.time("scan", || -> CliResult<()> {
        for wave in work.chunks(WAVE) {
            let results = env.install(|| ordered(wave.len() as u64, |i| {
                let (r0, r1) = wave[i as usize];
                cons.plan.scan_range(r0, r1)
            }));
            for (res, &(r0, r1)) in results.into_iter().zip(wave) {
                let rows = res?;
                scanned += r1 - r0;
                prime_rows += rows.len() as u64;
                for row in rows {
                    if row.status.is_clean() {
                        clean.push(row);
                    } else if dirty_sample.len() < 5 {
                        dirty_sample.push(row_json(&row));
                    }
                }
            }
            if clean.len() as u64 >= max_certs {
                break;
            }
        }
        Ok(())
    })?;
    clean.truncate(max_certs as usize);

    let certs = st.time("certify", || {
        env.install(|| ordered(clean.len() as u64, |i| cons.certify_row(&ctx, &certifier, &clean[i as usize])))
    });
    let certs = certs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let verdicts: Vec<Result<(), String>> = st.time("verify", || {
        env.install(|| ordered(certs.len() as u64, |i| verify_certificate(&certs[i as usize]).map_err(|e| e.to_string())))
    });
    if let (Some(path), Some(first)) = (&out, certs.first()) {
        let text = serde_json::to_string_pretty(&certjson::to_json(first)).expect("certificate serializes");
        std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::io(path, e))?;
    }

    let cert_json: Vec<Value> = certs
        .iter()
        .zip(&verdicts)
        .map(|(c, v)| {
            json!({
                "r": c.r,
                "q0": c.q0.to_string(),
                "left_prime": c.left_prime.to_string(),
                "right_prime": c.right_prime.to_string(),
                "gap_length": c.gap_length.to_string(),
                "window_length": (&c.window.hi - &c.window.lo + 1u32).to_string(),
                "ratio": c.ratio.map_or(Value::Null, num),
                "transcript_len": c.transcript.len(),
                "verified": v.is_ok(),
                "diagnostic": v.as_ref().err(),
            })
        })
        .collect();
    let all_ok = !certs.is_empty() && verdicts.iter().all(|v| v.is_ok());
    let sifted = &cons.sifted;
    let payload = json!({
        "context": {
            "x": ctx.x, "k": ctx.k, "y": ctx.y, "z": ctx.z, "s_floor": ctx.s_floor, "c0x": ctx.c0x(),
            "s": ctx.s.len(), "p": ctx.p.len(), "q": ctx.q.len(), "ptilde": ctx.ptilde.len(),
        },
        "modulus_bits": cons.modulus.bits(),
        "m0": cons.m0.to_string(),
        "sifted": {
            "size": sifted.len(),
            "smooth": sifted.count(SurvivorTag::Smooth),
            "q_prime": sifted.count(SurvivorTag::QPrime),
            "other": sifted.count(SurvivorTag::Other),
        },
        "pairing": { "paired": cons.pairing.pairs.len(), "exceptional": cons.pairing.exceptional.len() },
        "uncovered_positions": cons.plan.uncovered.len(),
        "scan": {
            "rows_scanned": scanned,
            "prime_q0_rows": prime_rows,
            "r0_density": num(prime_rows as f64 / scanned.max(1) as f64),
            "clean_rows": clean.len(),
            "dirty_examples": dirty_sample,
        },
        "certificates": cert_json,
    });
    let summary = match certs.first() {
        Some(c) => format!(
            "certified gap ({}, {}) of length {} around q0^{} with q0 = {} (r = {}){}",
            c.left_prime,
            c.right_prime,
            c.gap_length,
            ctx.k,
            c.q0,
            c.r,
            if all_ok { "" } else { "; re-verification FAILED" }
        ),
        None => format!("no clean row among {scanned} rows ({prime_rows} with prime q0)"),
    };
    let mut environment = Map::new();
    environment.insert("prime_cache".into(), json!(cache.as_str()));
    Ok(Outcome {
        payload,
        environment,
        timings: st.timings,
        passed: all_ok,
        summary,
    })
}
