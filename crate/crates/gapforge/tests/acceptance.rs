//! One PASS/FAIL line per acceptance criterion.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use gapforge_core::arith::{dickman_rho, primes_up_to, smooth_count_exact};
use gapforge_core::residues::indicator_via_characters;
use gapforge_core::weights::{f_eval, find_admissible_tuple, weight_table, Form, LatticeConfig, LinearSystem};
use num_bigint::BigUint;
use serde_json::Value;

fn gapforge(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_gapforge"))
        .args(args)
        .arg("--json")
        .env_remove("GAPFORGE_CACHE")
        .output()
        .expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    if v.is_null() {
        eprintln!("stderr of {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    (code, v)
}

struct Line {
    id: u32,
    pass: bool,
    detail: String,
}

fn report(lines: &mut Vec<Line>, id: u32, pass: bool, detail: String) {
    println!("criterion {id}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    lines.push(Line { id, pass, detail });
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn criterion1() -> (bool, String) {
    let t0 = Instant::now();
    let mut checked = 0u64;
    let mut failures = 0u64;
    for p in primes_up_to(300) {
        for k in 1..=6u64 {
            for n in 0..p {
                let target = (1 + p - n) % p;
                let brute = (1..p).any(|c| pow_mod(c, k, p) == target);
                if (indicator_via_characters(n as i64, p, k) == 1) != brute {
                    failures += 1;
                }
                checked += 1;
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    (failures == 0 && secs < 30.0, format!("{checked} triples, {failures} mismatches, {secs:.2} s"))
}

fn strong_probable_prime(n: &BigUint) -> bool {
    let one = BigUint::from(1u32);
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p) == BigUint::from(0u32) {
            return false;
        }
    }
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn big(v: &Value) -> BigUint {
    v.as_str().unwrap().parse().unwrap()
}

fn criterion2(dir: &Path) -> (bool, String) {
    let t0 = Instant::now();
    let cert_path = dir.join("cert.json");
    let cert_s = cert_path.to_str().unwrap();
    let y = 100u64;
    let (code, rep) = gapforge(&[
        "construct", "--x", "20", "--k", "2", "--C0", "2.4", "--y", "100", "--z", "7", "--s-floor", "2", "--rmax",
        "100000", "--out", cert_s,
    ]);
    if code != 0 {
        return (false, format!("construct exited {code}"));
    }
    let c0x = rep["payload"]["context"]["c0x"].as_u64().unwrap();
    let (vcode, _) = gapforge(&["verify", cert_s]);
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    let q0 = big(&cert["q0"]);
    let k = cert["k"].as_u64().unwrap() as u32;
    let lo = q0.pow(k);
    let left = big(&cert["left_prime"]);
    let right = big(&cert["right_prime"]);
    let hi = big(&cert["window"]["hi"]);
    let mut ok = c0x < 50 && vcode == 0 && big(&cert["window"]["lo"]) == lo;
    ok &= strong_probable_prime(&q0) && strong_probable_prime(&left) && strong_probable_prime(&right);
    ok &= left < lo && hi < right && &hi - &lo + 1u32 >= BigUint::from(y);
    ok &= &right - &left >= BigUint::from(y) && big(&cert["gap_length"]) == &right - &left;
    let mut expect = &left + 1u32;
    let mut divisors = 0;
    let mut prp = 0;
    for e in cert["transcript"].as_array().unwrap() {
        let n = big(&e["n"]);
        ok &= n == expect;
        if let Some(d) = e["witness"].get("divisor") {
            let d = big(d);
            ok &= d > BigUint::from(1u32) && d < n && (&n % &d) == BigUint::from(0u32);
            divisors += 1;
        } else {
            ok &= !strong_probable_prime(&n);
            prp += 1;
        }
        expect += 1u32;
    }
    ok &= expect == right;
    let secs = t0.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    (
        ok,
        format!(
            "q0 = {q0}, gap {} ({divisors} divisor and {prp} prp witnesses re-derived), c0x = {c0x}, {secs:.1} s",
            &right - &left
        ),
    )
}

fn criterion3() -> (bool, String) {
    let t0 = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for k in ["2", "3"] {
        for t in ["1", "2", "3"] {
            let (code, rep) = gapforge(&[
                "concentration", "--x", "1000000", "--y", "1060000", "--k", k, "--s-lo", "7", "--s-hi", "300", "--t",
                t, "--trials", "100000", "--tolerance", "0.01", "--seed", "1",
            ]);
            let p = &rep["payload"];
            let est = p["estimate"].as_f64().unwrap_or(f64::NAN);
            let se = p["stderr"].as_f64().unwrap_or(f64::NAN);
            let st = p["sigma_t"].as_f64().unwrap_or(f64::NAN);
            let pass = code == 0 && (est - st).abs() <= (3.0 * se).max(0.01 * st);
            ok &= pass;
            parts.push(format!("k={k} t={t}: {est:.4}/{st:.4}{}", if pass { "" } else { "!" }));
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    (ok && secs < 120.0, format!("{} ({secs:.1} s)", parts.join(", ")))
}

fn criterion4() -> (bool, String) {
    let t0 = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for m in 1..=3 {
        let ms = m.to_string();
        let (code, rep) = gapforge(&[
            "cover-sim", "--mode", "synthetic", "--vertices", "10000", "--m", &ms, "--replicates", "20", "--seed", "7",
        ]);
        let mean = rep["payload"]["residual"][m]["mean"].as_f64().unwrap_or(f64::NAN);
        let ratio = mean / 5f64.powi(-(m as i32));
        ok &= code == 0 && (0.5..=2.0).contains(&ratio);
        parts.push(format!("m={m}: {mean:.5} ({ratio:.3} x 5^-m)"));
    }
    let secs = t0.elapsed().as_secs_f64();
    (ok && secs < 120.0, format!("{} ({secs:.1} s)", parts.join(", ")))
}

fn factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn vanishes(f: &Form, n: u64, p: u64) -> bool {
    (f.a as u128 * n as u128 + f.b as u128) % p as u128 == 0
}

/// Weights straight from the definitions, for systems with B = 1.
fn naive_weights(forms: &[Form], r: u64, prefactor: f64, ns: std::ops::Range<u64>) -> (BTreeMap<Vec<u64>, f64>, Vec<f64>) {
    let g = forms.len();
    let w_primes: Vec<u64> = (2..=2 * (g * g) as u64).filter(|&p| factor(p) == [p]).collect();
    let omega = |p: u64| (0..p).filter(|&n| forms.iter().any(|f| vanishes(f, n, p))).count() as u64;
    let allowed = |p: u64, j: usize| (0..p).any(|n| forms.iter().position(|f| vanishes(f, n, p)) == Some(j));
    let in_support = |t: &[u64]| {
        let fs = factor(t.iter().product());
        let mut d = fs.clone();
        d.dedup();
        d.len() == fs.len()
            && fs.iter().all(|p| !w_primes.contains(p))
            && t.iter().enumerate().all(|(j, &tj)| factor(tj).into_iter().all(|p| allowed(p, j)))
    };
    let mut tuples = vec![vec![]];
    for _ in 0..g {
        let mut next = Vec::new();
        for t in &tuples {
            let prod: u64 = t.iter().product();
            for x in 1..r {
                if prod * x >= r {
                    break;
                }
                let mut u = t.clone();
                u.push(x);
                next.push(u);
            }
        }
        tuples = next;
    }
    let support: Vec<Vec<u64>> = tuples.into_iter().filter(|t| in_support(t)).collect();
    let log_r = (r as f64).ln();
    let share: Vec<f64> = support
        .iter()
        .map(|t| {
            let coords: Vec<f64> = t.iter().map(|&x| (x as f64).ln() / log_r).collect();
            let phi: f64 = factor(t.iter().product()).into_iter().map(|p| (p - omega(p)) as f64).product();
            prefactor * f_eval(&coords) / phi
        })
        .collect();
    let mut lambda = BTreeMap::new();
    for d in &support {
        let acc: f64 = support
            .iter()
            .zip(&share)
            .filter(|(rr, _)| d.iter().zip(rr.iter()).all(|(di, ri)| ri % di == 0))
            .map(|(_, s)| s)
            .sum();
        let prod: u64 = d.iter().product();
        let mu = if factor(prod).len() % 2 == 0 { 1.0 } else { -1.0 };
        if acc != 0.0 {
            lambda.insert(d.clone(), mu * prod as f64 * acc);
        }
    }
    let w = ns
        .map(|n| {
            if w_primes.iter().any(|&p| forms.iter().any(|f| vanishes(f, n, p))) {
                return 0.0;
            }
            let s: f64 = lambda
                .iter()
                .filter(|(d, _)| d.iter().zip(forms).all(|(&di, f)| vanishes(f, n, di)))
                .map(|(_, v)| v)
                .sum();
            s * s
        })
        .collect();
    (lambda, w)
}

fn criterion5() -> (bool, String) {
    let mut ok = true;
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for g in 1..=3 {
        let tuple = find_admissible_tuple(g).unwrap();
        let forms: Vec<Form> = tuple.iter().map(|&h| Form::new(1, h)).collect();
        for r in [10u64, 30, 50] {
            let sys = LinearSystem::new(forms.clone(), 1, r).unwrap();
            let lo = 100_000;
            let table = weight_table(&sys, lo, lo + 1000, LatticeConfig::default()).unwrap();
            violations += table.lattice.support_violations();
            for e in &table.lattice.lambda {
                let prod: u64 = e.d.iter().product();
                let fs = factor(prod);
                let mut d = fs.clone();
                d.dedup();
                if d.len() != fs.len() || prod >= r {
                    violations += 1;
                }
            }
            let (lambda, w) = naive_weights(&forms, r, table.lattice.prefactor, lo..lo + 1000);
            let stored: Vec<&Vec<u64>> = table.lattice.lambda.iter().map(|e| &e.d).collect();
            ok &= stored == lambda.keys().collect::<Vec<_>>();
            for (a, b) in table.w.iter().zip(&w) {
                let err = (a - b).abs() / b.abs().max(1e-300);
                if *b != 0.0 {
                    worst = worst.max(err);
                }
                ok &= (a - b).abs() <= 1e-9 * b.abs() || (*a == 0.0 && *b == 0.0);
                compared += 1;
            }
        }
    }
    (
        ok && violations == 0,
        format!("{compared} weights, worst relative error {worst:.2e}, {violations} support violations"),
    )
}

fn criterion6() -> (bool, String) {
    let t0 = Instant::now();
    let (code, rep) = gapforge(&["weights", "--g", "1", "--R", "1000", "--range", "1:1000001", "--B", "1", "--check", "77"]);
    let ratio = rep["payload"]["check"]["report"]["ratio"].as_f64().unwrap_or(f64::NAN);
    let secs = t0.elapsed().as_secs_f64();
    (
        code == 0 && (0.5..=2.0).contains(&ratio) && secs < 180.0,
        format!("sum w / main term = {ratio:.4} ({secs:.1} s)"),
    )
}

fn criterion7() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in ["101", "211"] {
        for k in ["1", "2", "3"] {
            let (code, rep) = gapforge(&[
                "weights", "--r-tuple", "0,2", "--R", "1000", "--range", "1000000:1100000", "--p", p, "--k", k,
                "--check", "711",
            ]);
            let r = &rep["payload"]["check"]["report"];
            let ratio = r["ratio"].as_f64().unwrap_or(f64::NAN);
            let pass = if k == "1" {
                let sw = r["sum_w"].as_f64().unwrap_or(f64::NAN);
                let ss = r["sum_w_star"].as_f64().unwrap_or(f64::NAN);
                let s1 = r["stratum_one"].as_f64().unwrap_or(f64::NAN);
                ((sw - ss) - s1).abs() <= 1e-9 * sw
            } else {
                (ratio - 1.0).abs() <= 0.25
            };
            ok &= code == 0 && pass;
            parts.push(format!("p={p} k={k}: {ratio:.4}"));
        }
    }
    (ok, parts.join(", "))
}

fn criterion8() -> (bool, String) {
    let t0 = Instant::now();
    let exact = smooth_count_exact(1_000_000, 100).unwrap();
    let est = 1e6 * dickman_rho(3.0);
    let ratio = exact as f64 / est;
    let rho2 = (dickman_rho(2.0) - (1.0 - 2f64.ln())).abs();
    let secs = t0.elapsed().as_secs_f64();
    let first = (ratio - 1.0).abs() <= 0.25;
    let second = rho2 <= 1e-6;
    (
        first && second && secs < 60.0,
        format!(
            "Psi(10^6, 100) = {exact} vs 10^6 rho(3) = {est:.1} (ratio {ratio:.3}, {}), |rho(2) - (1 - ln 2)| = {rho2:.1e} ({})",
            if first { "ok" } else { "outside 25%" },
            if second { "ok" } else { "too large" }
        ),
    )
}

fn criterion9(dir: &Path) -> (bool, String) {
    let runs: Vec<Vec<String>> = vec![
        vec!["construct", "--x", "20", "--k", "2", "--C0", "2.4", "--y", "100", "--z", "7", "--s-floor", "2", "--rmax", "20000", "--strategy", "random", "--seed", "5"],
        vec!["concentration", "--t", "2", "--trials", "20000", "--tolerance", "0.01", "--seed", "9"],
        vec!["cover-sim", "--mode", "synthetic", "--vertices", "5000", "--m", "3", "--replicates", "12", "--seed", "3"],
        vec!["cover-sim", "--mode", "weighted", "--x", "2000", "--y", "6000", "--z", "40", "--s-floor", "7", "--R", "30", "--replicates", "6", "--seed", "2"],
        vec!["weights", "--r-tuple", "0,2", "--R", "500", "--range", "100000:400000", "--p", "101", "--k", "3", "--check", "711"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for args in &runs {
        let mut payloads = Vec::new();
        for threads in ["1", "4", "8"] {
            let cache = dir.join(format!("cache{threads}"));
            let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
            a.extend(["--threads", threads, "--cache-dir", cache.to_str().unwrap()]);
            let (code, rep) = gapforge(&a);
            ok &= code == 0 && !rep["payload"].is_null();
            payloads.push(serde_json::to_string(&rep["payload"]).unwrap());
        }
        let same = payloads.windows(2).all(|w| w[0] == w[1]);
        ok &= same;
        parts.push(format!("{}{}", args[0], if same { "" } else { " DIFFERS" }));
    }
    (ok, format!("identical payloads at 1/4/8 threads: {}", parts.join(", ")))
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let mut lines = Vec::new();
    let (p, d) = criterion1();
    report(&mut lines, 1, p, d);
    let (p, d) = criterion2(dir.path());
    report(&mut lines, 2, p, d);
    let (p, d) = criterion3();
    report(&mut lines, 3, p, d);
    let (p, d) = criterion4();
    report(&mut lines, 4, p, d);
    let (p, d) = criterion5();
    report(&mut lines, 5, p, d);
    let (p, d) = criterion6();
    report(&mut lines, 6, p, d);
    let (p, d) = criterion7();
    report(&mut lines, 7, p, d);
    let (p, d) = criterion8();
    report(&mut lines, 8, p, d);
    let (p, d) = criterion9(dir.path());
    report(&mut lines, 9, p, d);
    let failed: Vec<String> = lines.iter().filter(|l| !l.pass).map(|l| format!("{}: {}", l.id, l.detail)).collect();
    assert!(failed.is_empty(), "failing criteria:\n{}", failed.join("\n"));
}
