use clap::Args;
use gapforge_core::arith::{is_prime_u64, prime_range};
use gapforge_core::concentration::{GoodSetParams, Tolerance};
use gapforge_core::weights::table::RANGE_LIMIT;
use gapforge_core::weights::{
    character_restricted_sum_check, concentration_moment_check, find_admissible_tuple, gate_check, theorem77_check,
    theorem78_check, Integral, Lattice, LatticeConfig, LinearSystem, WeightTable,
};
use serde_json::{json, Map, Value};

use super::num;
use crate::config::{parse_list, parse_range, require};
use crate::parallel::{chunks, ordered};
use crate::report::Stages;
use crate::{CliError, CliResult, Env, Outcome};

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub g: Option<usize>,
    /// `auto` or a comma list of shifts.
    #[arg(long = "r-tuple")]
    pub r_tuple: Option<String>,
    #[arg(long = "R")]
    pub r: Option<u64>,
    /// Window `lo:hi`, half open.
    #[arg(long)]
    pub range: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    /// 77, 78, 711, 713, moments, gate or none.
    #[arg(long)]
    pub check: Option<String>,
    #[arg(long = "B")]
    pub b: Option<u64>,
    /// Form index for prime-indicator sums.
    #[arg(long)]
    pub form: Option<usize>,
    /// Unit class for the moment check.
    #[arg(long)]
    pub u: Option<u64>,
    /// Translate indices `i,l` for the moment check.
    #[arg(long)]
    pub il: Option<String>,
    /// Restrict the moment check to `L_form(n)` prime.
    #[arg(long = "prime-form")]
    pub prime_form: Option<usize>,
    /// Good-set window and sieving primes `(s-lo, s-hi]` (moments, gate).
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long)]
    pub y: Option<u64>,
    #[arg(long = "s-lo")]
    pub s_lo: Option<u64>,
    #[arg(long = "s-hi")]
    pub s_hi: Option<u64>,
    /// Absolute deviation bound of the good set.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long = "series-cutoff")]
    pub series_cutoff: Option<u64>,
}

fn integral(i: &Integral) -> Value {
    json!({ "value": num(i.value), "error": num(i.error) })
}

/// `weight_table`, with the window split across the pool.
pub fn parallel_table(env: &Env, sys: &LinearSystem, lo: u64, hi: u64, cfg: LatticeConfig) -> CliResult<WeightTable> {
    require(hi - lo <= RANGE_LIMIT, || format!("window of {} exceeds {RANGE_LIMIT}", hi - lo))?;
    let lattice = Lattice::build(sys, cfg)?;
    let parts = chunks(lo, hi, 100_000);
    let pieces = env.install(|| ordered(parts.len() as u64, |i| {
        let (a, b) = parts[i as usize];
        lattice.weights(a, b)
    }));
    Ok(WeightTable {
        lattice,
        lo,
        w: pieces.concat(),
    })
}

pub fn run(a: &WeightsArgs, env: &mut Env) -> CliResult<Outcome> {
    let kn = env.knobs();
    let spec = kn.get("r-tuple", a.r_tuple.clone(), "auto".to_string())?;
    let g = kn.optional("g", a.g)?;
    let tuple: Vec<u64> = if spec == "auto" {
        let g = g.unwrap_or(1);
        require((1..=12).contains(&g), || format!("g = {g} outside 1..=12"))?;
        find_admissible_tuple(g).map_err(|e| CliError::config(format!("no admissible tuple for g = {g}: {e}")))?
    } else {
        let t = parse_list(&spec)?;
        if let Some(g) = g {
            require(g == t.len(), || format!("g = {g} but the tuple has {} shifts", t.len()))?;
        }
        t
    };
    let r = kn.get("R", a.r, 1000u64)?;
    let (lo, hi) = parse_range(&kn.get("range", a.range.clone(), "1:1000001".to_string())?)?;
    let b = kn.get("B", a.b, 1u64)?;
    let check = kn.get("check", a.check.clone(), "77".to_string())?;
    let k = kn.get("k", a.k, 2u64)?;
    let p = kn.optional("p", a.p)?;
    let form = kn.get("form", a.form, 0usize)?;
    let series_cutoff = kn.get("series-cutoff", a.series_cutoff, LatticeConfig::default().series_cutoff)?;
    require(r >= 2, || "R must be at least 2".into())?;
    require(b >= 1, || "B must be positive".into())?;
    require(k >= 1, || "k must be positive".into())?;
    require(form < tuple.len(), || format!("form {form} outside the tuple"))?;
    let needs_p = matches!(check.as_str(), "711" | "713" | "moments" | "gate");
    require(
        matches!(check.as_str(), "77" | "78" | "none") || needs_p,
        || format!("check {check}: expected 77, 78, 711, 713, moments, gate or none"),
    )?;
    let p = if needs_p {
        let p = p.ok_or_else(|| CliError::config(format!("check {check} needs --p")))?;
        require(is_prime_u64(p), || format!("p = {p} is not prime"))?;
        Some(p)
    } else {
        p
    };
    let needs_good = matches!(check.as_str(), "moments" | "gate");
    let good = if needs_good {
        let x = kn.get("x", a.x, lo)?;
        let y = kn.get("y", a.y, hi - 1)?;
        let s_lo = kn.get("s-lo", a.s_lo, 7u64)?;
        let s_hi = kn.get("s-hi", a.s_hi, 300u64)?;
        let tol = kn.get("tolerance", a.tolerance, 0.01)?;
        require(x <= y, || "good-set window is empty".into())?;
        let s = prime_range(s_lo, s_hi)?;
        Some(GoodSetParams::new(x, y, k, s, Tolerance::Absolute(tol)))
    } else {
        None
    };
    let (u, il, prime_form) = if check == "moments" {
        let u = kn.get("u", a.u, 1u64)?;
        let il: Vec<usize> = parse_list(&kn.get("il", a.il.clone(), "1,0".to_string())?)?;
        require(il.len() == 2, || "il must be two indices".into())?;
        (u, (il[0], il[1]), kn.optional("prime-form", a.prime_form)?)
    } else {
        (1, (0, 0), None)
    };
    let sys = LinearSystem::from_tuple(&tuple, b, r).map_err(|e| CliError::config(e.to_string()))?;
    let cfg = LatticeConfig {
        series_cutoff,
        ..LatticeConfig::default()
    };
    env.freeze()?;

    let mut st = Stages::default();
    let table = st.time("weight_table", || parallel_table(env, &sys, lo, hi, cfg))?;
    let lat = &table.lattice;
    let sum_w = table.sum();
    let mut payload = json!({
        "tuple": tuple,
        "g": tuple.len(),
        "R": r,
        "B": b,
        "range": [lo, hi],
        "lambda_terms": lat.lambda.len(),
        "support": lat.y.len(),
        "series": { "value": num(lat.series.value), "tail_bound": num(lat.series.tail_bound), "cutoff": lat.series.cutoff },
        "prefactor": num(lat.prefactor),
        "sum_w": num(sum_w),
        "support_violations": lat.support_violations(),
    });
    let signed: Vec<i64> = tuple.iter().map(|&h| h as i64).collect();
    let report = st.time("check", || -> CliResult<Value> {
        Ok(match check.as_str() {
            "77" => {
                let t = theorem77_check(&table)?;
                json!({
                    "sum_w": num(t.sum_w), "count": t.count_a, "log_R": num(t.log_r), "b_factor": num(t.b_factor),
                    "series": num(t.series), "integral": integral(&t.integral), "predicted": num(t.predicted),
                    "ratio": num(t.ratio),
                })
            }
            "78" => {
                let t = theorem78_check(&table, form)?;
                json!({
                    "form": t.form, "sum_prime_w": num(t.sum_prime_w), "count_prime": t.count_prime,
                    "log_R": num(t.log_r), "b_factor": num(t.b_factor), "series": num(t.series),
                    "a_factor": num(t.a_factor), "integral": integral(&t.integral), "predicted": num(t.predicted),
                    "ratio": num(t.ratio),
                })
            }
            "711" | "713" => {
                let t = character_restricted_sum_check(&table, p.unwrap(), k, form)?;
                json!({
                    "p": t.p, "k": t.k, "D": t.d, "form": t.form,
                    "sum_w": num(t.sum_w), "sum_w_star": num(t.sum_w_star), "ratio": num(t.ratio),
                    "sum_prime_w": num(t.sum_prime_w), "sum_prime_w_star": num(t.sum_prime_w_star),
                    "prime_ratio": num(t.prime_ratio), "stratum_one": num(t.stratum_one),
                    "focus": if check == "711" { "ratio" } else { "prime_ratio" },
                })
            }
            "moments" => {
                let gp = good.as_ref().unwrap();
                let t = concentration_moment_check(&table, &signed, p.unwrap(), il, u, gp, prime_form)?;
                json!({
                    "p": t.p, "u": t.u, "shift": t.shift, "r_star": num(t.r_star),
                    "moments": t.moments.map(num), "predicted": t.predicted.map(num),
                    "centered": num(t.centered), "centered_direct": num(t.centered_direct),
                    "centered_ratio": num(t.centered_ratio),
                })
            }
            "gate" => {
                let t = gate_check(&table, p.unwrap(), k, &signed, good.as_ref().unwrap())?;
                json!({
                    "sum_w": num(t.sum_w), "sum_w_star": num(t.sum_w_star),
                    "sum_w_final": num(t.sum_w_final), "ratio": num(t.ratio),
                })
            }
            _ => Value::Null,
        })
    })?;
    payload["check"] = json!({ "kind": check, "report": report });
    let summary = match report.get("ratio").and_then(Value::as_f64) {
        Some(x) => format!("weights g = {} R = {r} on [{lo}, {hi}): sum w = {sum_w:.6e}, check {check} ratio {x:.6}", tuple.len()),
        None => format!("weights g = {} R = {r} on [{lo}, {hi}): sum w = {sum_w:.6e}", tuple.len()),
    };
    Ok(Outcome {
        payload,
        environment: Map::new(),
        timings: st.timings,
        passed: lat.support_violations() == 0,
        summary,
    })
}
