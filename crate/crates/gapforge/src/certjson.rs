//! Certificate JSON: big integers as decimal strings, witnesses as
//! `{"divisor": str}` or `{"prp_rounds": int}`.

use gapforge_core::gap::{GapCertificate, TranscriptEntry, Window, Witness};
use gapforge_core::BigUint;
use serde_json::{json, Map, Value};

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, Value::from)
}

pub fn to_json(c: &GapCertificate) -> Value {
    let transcript: Vec<Value> = c
        .transcript
        .iter()
        .map(|e| {
            let witness = match &e.witness {
                Witness::Divisor(d) => json!({ "divisor": d.to_string() }),
                Witness::PrpRounds(r) => json!({ "prp_rounds": r }),
            };
            json!({ "n": e.n.to_string(), "witness": witness })
        })
        .collect();
    json!({
        "x": c.x,
        "k": c.k,
        "c": c.c,
        "c0": c.c0,
        "m0": c.m0.to_string(),
        "p_x": c.p_x.to_string(),
        "r": c.r,
        "q0": c.q0.to_string(),
        "window": { "lo": c.window.lo.to_string(), "hi": c.window.hi.to_string() },
        "left_prime": c.left_prime.to_string(),
        "right_prime": c.right_prime.to_string(),
        "gap_length": c.gap_length.to_string(),
        "g2_value": opt(c.g2_value),
        "ratio": opt(c.ratio),
        "transcript": transcript,
    })
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, String> {
    obj.get(key).ok_or_else(|| format!("missing field {key}"))
}

fn big(obj: &Map<String, Value>, key: &str) -> Result<BigUint, String> {
    let s = field(obj, key)?.as_str().ok_or_else(|| format!("{key} must be a decimal string"))?;
    s.parse().map_err(|_| format!("{key} = {s:?} is not a decimal integer"))
}

fn uint(obj: &Map<String, Value>, key: &str) -> Result<u64, String> {
    field(obj, key)?.as_u64().ok_or_else(|| format!("{key} must be a non-negative integer"))
}

fn real(obj: &Map<String, Value>, key: &str) -> Result<f64, String> {
    field(obj, key)?.as_f64().ok_or_else(|| format!("{key} must be a number"))
}

fn opt_real(obj: &Map<String, Value>, key: &str) -> Result<Option<f64>, String> {
    match field(obj, key)? {
        Value::Null => Ok(None),
        v => v.as_f64().map(Some).ok_or_else(|| format!("{key} must be a number or null")),
    }
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, String> {
    v.as_object().ok_or_else(|| format!("{what} must be an object"))
}

pub fn from_json(v: &Value) -> Result<GapCertificate, String> {
    let o = object(v, "certificate")?;
    let w = object(field(o, "window")?, "window")?;
    let entries = field(o, "transcript")?.as_array().ok_or("transcript must be an array")?;
    let mut transcript = Vec::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        let e = object(e, "transcript entry")?;
        let wit = object(field(e, "witness")?, "witness")?;
        let witness = match (wit.get("divisor"), wit.get("prp_rounds")) {
            (Some(_), None) => Witness::Divisor(big(wit, "divisor")?),
            (None, Some(r)) => Witness::PrpRounds(
                r.as_u64()
                    .and_then(|r| u32::try_from(r).ok())
                    .ok_or_else(|| format!("entry {i}: prp_rounds must be a small integer"))?,
            ),
            _ => return Err(format!("entry {i}: witness needs exactly one of divisor, prp_rounds")),
        };
        transcript.push(TranscriptEntry {
            n: big(e, "n")?,
            witness,
        });
    }
    Ok(GapCertificate {
        x: uint(o, "x")?,
        k: uint(o, "k")?,
        c: real(o, "c")?,
        c0: real(o, "c0")?,
        m0: big(o, "m0")?,
        p_x: big(o, "p_x")?,
        r: uint(o, "r")?,
        q0: big(o, "q0")?,
        window: Window {
            lo: big(w, "lo")?,
            hi: big(w, "hi")?,
        },
        left_prime: big(o, "left_prime")?,
        right_prime: big(o, "right_prime")?,
        gap_length: big(o, "gap_length")?,
        g2_value: opt_real(o, "g2_value")?,
        ratio: opt_real(o, "ratio")?,
        transcript,
    })
}
