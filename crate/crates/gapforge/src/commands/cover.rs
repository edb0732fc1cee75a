use clap::Args;
use gapforge_core::cover::{
    audit, calibrated_instance, constant_degree_instance, default_rounds, degree_profile, simulate_replicate,
    uniform_covering_report, weighted_edge_sampler, AuditConfig, CoverInstance, CoverMode, CoverStats,
    WeightedConfig,
};
use gapforge_core::gap::{build_context, choose_vectors, Overrides};
use serde_json::{json, Map, Value};

use super::construct::parse_strategy;
use super::num;
use crate::config::{parse_list, require};
use crate::parallel::ordered;
use crate::report::Stages;
use crate::{CliError, CliResult, Env, Outcome};

#[derive(Debug, Args)]
pub struct CoverArgs {
    /// synthetic or weighted.
    #[arg(long)]
    pub mode: Option<String>,
    /// Rounds simulated.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub replicates: Option<u64>,
    /// semi-random or independent edges.
    #[arg(long)]
    pub process: Option<String>,
    /// Synthetic: number of vertices.
    #[arg(long = "vertices")]
    pub vertices: Option<usize>,
    /// Synthetic: edge size.
    #[arg(long)]
    pub r: Option<usize>,
    /// Synthetic: per-round degree; absent means the calibrated schedule.
    #[arg(long)]
    pub degree: Option<f64>,
    /// Weighted: context.
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
    #[arg(long)]
    pub strategy: Option<String>,
    /// Weighted: shifts `h_1, ..., h_r`.
    #[arg(long)]
    pub tuple: Option<String>,
    /// Weighted: sieve level.
    #[arg(long = "R")]
    pub level: Option<u64>,
    /// Relative band for the covering-sum report.
    #[arg(long)]
    pub band: Option<f64>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long = "codegree-pairs")]
    pub codegree_pairs: Option<u64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
}

struct Built {
    inst: CoverInstance,
    x: Option<u64>,
    extra: Value,
    calibrated: bool,
}

pub fn run(a: &CoverArgs, env: &mut Env) -> CliResult<Outcome> {
    let seed = env.seed;
    let kn = env.knobs();
    let mode = kn.get("mode", a.mode.clone(), "synthetic".to_string())?;
    let process = match kn.get("process", a.process.clone(), "semi-random".to_string())?.as_str() {
        "semi-random" => CoverMode::SemiRandom,
        "independent" => CoverMode::Independent,
        other => return Err(CliError::config(format!("process {other}: expected semi-random or independent"))),
    };
    let replicates = kn.get("replicates", a.replicates, 20u64)?;
    let band = kn.get("band", a.band, 0.5)?;
    let bins = kn.get("bins", a.bins, 10usize)?;
    let acfg = AuditConfig {
        kappa: kn.get("kappa", a.kappa, AuditConfig::default().kappa)?,
        delta: kn.get("delta", a.delta, AuditConfig::default().delta)?,
        codegree_pairs: kn.get("codegree-pairs", a.codegree_pairs, AuditConfig::default().codegree_pairs)?,
        ..AuditConfig::default()
    };
    require(replicates >= 1, || "replicates must be at least 1".into())?;
    let built = match mode.as_str() {
        "synthetic" => {
            let m = kn.get("m", a.m, 3usize)?;
            let n = kn.get("vertices", a.vertices, 10_000usize)?;
            let r = kn.get("r", a.r, 2usize)?;
            let degree = kn.optional("degree", a.degree)?;
            require(m >= 1, || "m must be at least 1".into())?;
            let inst = match degree {
                None => calibrated_instance(n, r, m),
                Some(d) => constant_degree_instance(n, r, d, m),
            }
            .map_err(|e| CliError::config(e.to_string()))?;
            Built {
                inst,
                x: None,
                extra: Value::Null,
                calibrated: degree.is_none(),
            }
        }
        "weighted" => {
            let x = kn
                .optional("x", a.x)?
                .ok_or_else(|| CliError::config("weighted mode needs --x"))?;
            let k = kn.get("k", a.k, 2u64)?;
            let c = kn.get("c", a.c, 1.0)?;
            let c0 = kn.get("C0", a.c0, 2.0)?;
            let overrides = Overrides {
                y: kn.optional("y", a.y)?,
                z: kn.optional("z", a.z)?,
                s_floor: kn.optional("s-floor", a.s_floor)?,
            };
            let strategy = parse_strategy(&kn.get("strategy", a.strategy.clone(), "greedy".to_string())?)?;
            let tuple: Vec<u64> = parse_list(&kn.get("tuple", a.tuple.clone(), "0,2".to_string())?)?;
            let level = kn.get("R", a.level, 100u64)?;
            let m = kn.get("m", a.m, default_rounds(x as f64))?;
            require(m >= 1, || "m must be at least 1".into())?;
            require(!tuple.is_empty(), || "tuple is empty".into())?;
            let ctx = build_context(x, k, c, c0, overrides).map_err(|e| CliError::config(e.to_string()))?;
            let system = choose_vectors(&ctx, strategy, seed);
            let cfg = WeightedConfig {
                r: level,
                rounds: m,
                ..WeightedConfig::default()
            };
            let ws = weighted_edge_sampler(&ctx, &system, &tuple, &cfg)?;
            let rep = &ws.report;
            let extra = json!({
                "vertices": ws.vertices.len(),
                "primes": rep.primes.len(),
                "excluded": rep.excluded,
                "sparsity_max": num(rep.sparsity_max),
                "sparsity_cap": num(rep.sparsity_cap),
                "pairs": rep.pairs,
                "codegree_conflicts": rep.codegree_conflicts,
            });
            Built {
                inst: ws.instance,
                x: Some(x),
                extra,
                calibrated: false,
            }
        }
        other => return Err(CliError::config(format!("mode {other}: expected synthetic or weighted"))),
    };
    env.freeze()?;

    let mut st = Stages::default();
    let inst = &built.inst;
    let m = inst.m();
    let counts = st.time("simulate", || {
        env.install(|| ordered(replicates, |rep| simulate_replicate(inst, m, process, seed, rep)))
    });
    let stats = CoverStats::from_counts(inst.n_vertices, m, counts);
    let prof = st.time("profile", || degree_profile(inst, 0, seed));
    let au = st.time("audit", || audit(inst, &prof, &acfg, seed));
    let cov = st.time("covering", || uniform_covering_report(inst, band, bins, built.x));

    let residual: Vec<Value> = (0..=m)
        .map(|j| {
            let mut row = json!({
                "round": j,
                "mean": num(stats.mean[j]),
                "sd": num(stats.sd[j]),
                "stderr": num(stats.stderr(j)),
                "heuristic": num(prof.mean_p(j)),
            });
            if built.calibrated {
                let target = 5f64.powi(-(j as i32));
                row["target"] = num(target);
                row["ratio"] = num(stats.mean[j] / target);
            }
            row
        })
        .collect();
    let fractions: Vec<Vec<Value>> = stats
        .counts
        .iter()
        .map(|c| c.iter().map(|&v| num(v as f64 / inst.n_vertices.max(1) as f64)).collect())
        .collect();
    let payload = json!({
        "mode": mode,
        "vertices": inst.n_vertices,
        "m": m,
        "round_sizes": (0..m).map(|j| inst.round_size(j)).collect::<Vec<_>>(),
        "residual": residual,
        "replicate_fractions": fractions,
        "audit": {
            "max_edge_size": au.max_edge_size,
            "sparsity_delta": au.sparsity_delta.iter().copied().map(num).collect::<Vec<_>>(),
            "max_codegree": au.max_codegree.iter().copied().map(num).collect::<Vec<_>>(),
            "degree_ratio": num(au.degree_ratio),
            "min_p": num(au.min_p),
            "warnings": au.warnings,
        },
        "covering": {
            "mean": num(cov.mean), "sd": num(cov.sd), "min": num(cov.min), "max": num(cov.max),
            "band": num(cov.band), "fraction_outside": num(cov.fraction_outside),
            "allowed_fraction": cov.allowed_fraction.map_or(Value::Null, num),
            "histogram": cov.histogram,
        },
        "weighted": built.extra,
    });
    let last = stats.mean[m];
    let summary = format!(
        "cover-sim {mode}: |V| = {}, m = {m}, mean residual {last:.6} (heuristic {:.6}), {} audit warnings",
        inst.n_vertices,
        prof.mean_p(m),
        au.warnings.len()
    );
    Ok(Outcome {
        payload,
        environment: Map::new(),
        timings: st.timings,
        passed: true,
        summary,
    })
}
