//! Golden files and independent oracles shared by the integration tests.
//!
//! Oracles work on raw `u128` fixed-point values or plain `f64` and never call
//! the library's search code. Set `TORUS_AP_BLESS=1` to recompute every
//! oracle and rewrite `tests/golden/*.json`; otherwise the stored values are used.

#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::Value;

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

pub fn blessing() -> bool {
    std::env::var("TORUS_AP_BLESS").is_ok_and(|v| v == "1")
}

/// Stored golden value, or the freshly computed oracle value when blessing
/// (or when no file exists yet).
pub fn golden(name: &str, oracle: impl FnOnce() -> Value) -> Value {
    let path = golden_path(name);
    if !blessing() {
        if let Ok(text) = std::fs::read_to_string(&path) {
            return serde_json::from_str(&text).expect("golden file is valid JSON");
        }
    }
    let value = oracle();
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap() + "\n").unwrap();
    value
}

pub const TWO_POW_128: f64 = 340282366920938463463374607431768211456.0;

/// Circle distance of raw fixed-point angles.
pub fn raw_dist(a: u128, b: u128) -> u128 {
    let d = a.wrapping_sub(b);
    d.min(d.wrapping_neg())
}

pub fn raw_to_f64(r: u128) -> f64 {
    (r >> 75) as f64 * (2f64).powi(-53)
}

pub fn f64_to_raw(v: f64) -> u128 {
    let v = v.rem_euclid(1.0);
    (v * TWO_POW_128) as u128
}

pub fn raw_cos(r: u128) -> f64 {
    (std::f64::consts::TAU * raw_to_f64(r)).cos()
}

/// Brute force for the Weyl counterexample: multiplies `a(n) alpha` and
/// `a(2n) alpha` out afresh at every `n`. Returns the first `n` meeting every
/// bound, else the first minimizer of the max distance.
pub fn counterexample_oracle(alpha: u128, y: u128, eps_raw_bound: u128, n_max: u64) -> (bool, u64, u128) {
    let mut best = (u128::MAX, 0u64);
    for n in 1..=n_max {
        let n = n as u128;
        let a1 = n * (n - 1) / 2;
        let a2 = (2 * n) * (2 * n - 1) / 2;
        let r = raw_dist(alpha.wrapping_mul(n), 0)
            .max(raw_dist(alpha.wrapping_mul(2 * n), 0))
            .max(raw_dist(y, alpha.wrapping_mul(a1)))
            .max(raw_dist(y, alpha.wrapping_mul(a2)));
        if r < eps_raw_bound {
            return (true, n as u64, r);
        }
        if r < best.0 {
            best = (r, n as u64);
        }
    }
    (false, best.1, best.0)
}

/// `ceil(eps 2^128)` for eps a dyadic-exact decimal like 0.01 (via f64, as the
/// strict-bound convention in the library); kept separate so the oracle owns it.
pub fn eps_bound(eps: f64) -> u128 {
    let scaled = eps * TWO_POW_128;
    let floor = scaled as u128;
    if (floor as f64) < scaled {
        floor + 1
    } else {
        floor
    }
}

/// Lebesgue measure of the intersection of the arcs `[s_j, s_j + len)` on the circle.
pub fn arc_intersection(starts: &[f64], len: f64) -> f64 {
    // walk the first arc and intersect the rest, each as up to two intervals in [0, 2)
    let mut pieces = vec![(starts[0], starts[0] + len)];
    for &s in &starts[1..] {
        let mut next = Vec::new();
        for &(a, b) in &pieces {
            for shift in [-1.0, 0.0, 1.0] {
                let lo = a.max(s + shift);
                let hi = b.min(s + shift + len);
                if hi > lo {
                    next.push((lo, hi));
                }
            }
        }
        pieces = next;
    }
    pieces.iter().map(|(a, b)| b - a).sum()
}

/// Running average over `n < n_max` of `mu(A ∩ (A - n alpha) ∩ ... ∩ (A - k n alpha))`
/// for `A = [lo, lo + len)`, computed exactly with arcs.
pub fn recurrence_oracle(alpha: u128, lo: f64, len: f64, k: usize, n_max: u64) -> f64 {
    let mut total = 0.0;
    for n in 0..n_max {
        let starts: Vec<f64> = (0..=k as u128)
            .map(|j| (lo - raw_to_f64(alpha.wrapping_mul(j * n as u128))).rem_euclid(1.0))
            .collect();
        total += arc_intersection(&starts, len);
    }
    total / n_max as f64
}

/// The library's reporting convention for raw distances (round to nearest).
pub fn reported(r: u128) -> f64 {
    r as f64 / TWO_POW_128
}

pub fn hex(r: u128) -> String {
    format!("{r:#034x}")
}

pub fn unhex(v: &Value) -> u128 {
    u128::from_str_radix(v.as_str().unwrap().trim_start_matches("0x"), 16).unwrap()
}

/// `H(theta) = 2 sum_k (1/k) cos(2 pi n_k theta)` with the phase formed on raw values.
pub fn primitive_oracle(freqs: &[u64], theta: u128) -> f64 {
    freqs
        .iter()
        .enumerate()
        .map(|(i, &f)| 2.0 / (i + 1) as f64 * raw_cos(theta.wrapping_mul(f as u128)))
        .sum()
}

/// `sup_{1 <= n <= n_max} lambda (H(x + n alpha) - H(x))`, first maximizer.
pub fn telescoped_sup(freqs: &[u64], alpha: u128, lambda: f64, x: u128, n_max: u64) -> (f64, u64) {
    let h0 = primitive_oracle(freqs, x);
    let mut best = (f64::NEG_INFINITY, 0);
    let mut p = x;
    for n in 1..=n_max {
        p = p.wrapping_add(alpha);
        let s = lambda * (primitive_oracle(freqs, p) - h0);
        if s > best.0 {
            best = (s, n);
        }
    }
    best
}
