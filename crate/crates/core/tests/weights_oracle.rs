use std::collections::BTreeMap;

use gapforge_core::arith::primes_up_to;
use gapforge_core::weights::{
    f_eval, find_admissible_tuple, theorem77_check, weight_table, Form, LatticeConfig, LinearSystem, WeightTable,
};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            n /= p;
        } else {
            p += 1;
        }
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn vanishes(f: &Form, n: u64, p: u64) -> bool {
    (f.a as u128 * n as u128 + f.b as u128) % p as u128 == 0
}

/// Straight from the definitions: enumerate every tuple with product below R.
struct Naive {
    forms: Vec<Form>,
    w_primes: Vec<u64>,
    lambda: BTreeMap<Vec<u64>, f64>,
}

impl Naive {
    fn new(forms: &[Form], b: u64, r: u64, prefactor: f64) -> Self {
        let g = forms.len();
        let w_primes: Vec<u64> = (2..=2 * (g * g) as u64)
            .filter(|&p| factor(p).len() == 1 && factor(p)[0] == p && b % p != 0)
            .collect();
        let wb: u64 = w_primes.iter().product::<u64>() * b;
        let omega = |p: u64| (1..=p).filter(|&n| forms.iter().any(|f| vanishes(f, n, p))).count() as u64;
        let allowed = |p: u64, j: usize| {
            (1..=p).any(|n| forms.iter().position(|f| vanishes(f, n, p)) == Some(j))
        };
        let in_d = |t: &[u64]| {
            let prod: u64 = t.iter().product();
            let fs = factor(prod);
            let mut dedup = fs.clone();
            dedup.dedup();
            if dedup.len() != fs.len() || gcd(prod, wb) != 1 {
                return false;
            }
            t.iter().enumerate().all(|(j, &tj)| factor(tj).into_iter().all(|p| allowed(p, j)))
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
        let support: Vec<Vec<u64>> = tuples.into_iter().filter(|t| in_d(t)).collect();
        let log_r = (r as f64).ln();
        let share: Vec<f64> = support
            .iter()
            .map(|t| {
                let coords: Vec<f64> = t.iter().map(|&x| (x as f64).ln() / log_r).collect();
                let y = prefactor * f_eval(&coords);
                let prod: u64 = t.iter().product();
                let phi: f64 = factor(prod).into_iter().map(|p| (p - omega(p)) as f64).product();
                y / phi
            })
            .collect();
        let mut lambda = BTreeMap::new();
        for d in &support {
            let mut acc = 0.0;
            for (rr, s) in support.iter().zip(&share) {
                if d.iter().zip(rr).all(|(di, ri)| ri % di == 0) {
                    acc += s;
                }
            }
            let prod: u64 = d.iter().product();
            let mu = if factor(prod).len() % 2 == 0 { 1.0 } else { -1.0 };
            if acc != 0.0 {
                lambda.insert(d.clone(), mu * prod as f64 * acc);
            }
        }
        Self { forms: forms.to_vec(), w_primes, lambda }
    }

    fn w(&self, n: u64) -> f64 {
        if self.w_primes.iter().any(|&p| self.forms.iter().any(|f| vanishes(f, n, p))) {
            return 0.0;
        }
        let s: f64 = self
            .lambda
            .iter()
            .filter(|(d, _)| d.iter().zip(&self.forms).all(|(&di, f)| vanishes(f, n, di)))
            .map(|(_, v)| v)
            .sum();
        s * s
    }
}

fn systems() -> Vec<Vec<Form>> {
    let mut out = Vec::new();
    for g in 1..=3 {
        let t = find_admissible_tuple(g).unwrap();
        out.push(t.iter().map(|&h| Form::new(1, h)).collect());
    }
    out.push(vec![Form::new(1, 1), Form::new(3, 5)]);
    out.push(vec![Form::new(2, 1), Form::new(1, 4), Form::new(6, 1)]);
    out
}

#[test]
fn weight_table_matches_naive_oracle() {
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    for forms in systems() {
        for r in [10, 30, 50] {
            let sys = LinearSystem::new(forms.clone(), 1, r).unwrap();
            let lo = 100_000;
            let table = weight_table(&sys, lo, lo + 1000, LatticeConfig::default()).unwrap();
            let naive = Naive::new(&forms, 1, r, table.lattice.prefactor);
            let stored: BTreeMap<Vec<u64>, f64> =
                table.lattice.lambda.iter().map(|e| (e.d.clone(), e.value)).collect();
            assert_eq!(
                stored.keys().collect::<Vec<_>>(),
                naive.lambda.keys().collect::<Vec<_>>(),
                "support, forms {forms:?} R {r}"
            );
            for (d, v) in &stored {
                let o = naive.lambda[d];
                assert!((v - o).abs() <= 1e-9 * o.abs(), "lambda {d:?}: {v} vs {o}");
            }
            let scale = table.w.iter().cloned().fold(0.0, f64::max);
            for (n, w) in table.iter() {
                let o = naive.w(n);
                let err = (w - o).abs() / o.abs().max(1e-300);
                if o != 0.0 {
                    worst = worst.max(err);
                }
                assert!(
                    (w - o).abs() <= 1e-9 * o.abs().max(1e-6 * scale),
                    "forms {forms:?} R {r} n {n}: {w} vs {o}"
                );
                assert!(w >= 0.0);
                compared += 1;
            }
        }
    }
    println!("compared {compared} weights, worst relative error {worst:.3e}");
}

fn support_violations(table: &WeightTable) -> usize {
    let sys = &table.lattice.system;
    let wb: u64 = sys.w().unwrap() * sys.b;
    table
        .lattice
        .lambda
        .iter()
        .filter(|e| {
            let prod: u64 = e.d.iter().product();
            let fs = factor(prod);
            let mut dedup = fs.clone();
            dedup.dedup();
            let slot_ok = e.d.iter().enumerate().all(|(j, &dj)| {
                factor(dj).into_iter().all(|p| {
                    (1..=p).any(|n| sys.forms.iter().position(|f| vanishes(f, n, p)) == Some(j))
                })
            });
            dedup.len() != fs.len() || prod > sys.r || gcd(prod, wb) != 1 || !slot_ok
        })
        .count()
}

#[test]
fn lambda_support_conditions() {
    for forms in systems() {
        for r in [50, 2_000] {
            let sys = LinearSystem::new(forms.clone(), 1, r).unwrap();
            let table = weight_table(&sys, 1, 10, LatticeConfig::default()).unwrap();
            assert_eq!(support_violations(&table), 0);
            assert_eq!(table.lattice.support_violations(), 0);
        }
    }
}

#[test]
fn theorem77_scale_consistency() {
    let sys = LinearSystem::from_tuple(&[0, 2], 1, 500).unwrap();
    let table = weight_table(&sys, 50_000, 60_000, LatticeConfig::default()).unwrap();
    let base = theorem77_check(&table).unwrap();
    let kappa = 3.5;
    let mut scaled = table.lattice.clone();
    for e in &mut scaled.lambda {
        e.value *= kappa;
    }
    let w = scaled.weights(50_000, 60_000);
    let sum: f64 = w.iter().sum();
    let ratio = sum / (base.predicted * kappa * kappa);
    assert!((ratio - base.ratio).abs() <= 1e-12 * base.ratio);
}

#[test]
fn doubling_r_moves_prediction_by_log_slope() {
    for tuple in [&[0u64][..], &[0, 2]] {
        let g = tuple.len() as i32;
        let a = LinearSystem::from_tuple(tuple, 1, 1000).unwrap();
        let b = LinearSystem::from_tuple(tuple, 1, 2000).unwrap();
        let ta = weight_table(&a, 10_000, 20_000, LatticeConfig::default()).unwrap();
        let tb = weight_table(&b, 10_000, 20_000, LatticeConfig::default()).unwrap();
        let pa = theorem77_check(&ta).unwrap().predicted;
        let pb = theorem77_check(&tb).unwrap().predicted;
        let exact = (2000f64.ln() / 1000f64.ln()).powi(g);
        assert!((pb / pa - exact).abs() < 1e-12);
        let slope = (pb / pa - 1.0) / (2f64.ln() / 1000f64.ln());
        println!("g = {g}: relative move {:.4}, first-order slope {slope:.3}", pb / pa - 1.0);
        assert!((slope - g as f64).abs() < 0.25 * g as f64);
    }
}

#[test]
fn w_primes_are_primes() {
    for g in 1..=4 {
        let t = find_admissible_tuple(g).unwrap();
        let sys = LinearSystem::from_tuple(&t, 1, 10).unwrap();
        let expect: Vec<u64> = primes_up_to(2 * (g * g) as u64);
        assert_eq!(sys.w_primes, expect);
    }
}
