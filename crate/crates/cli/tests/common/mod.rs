#![allow(dead_code)]

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub elapsed: Duration,
}

impl Run {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}", self.stdout))
    }
}

pub fn bisym(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_bisym"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        elapsed: start.elapsed(),
    }
}

pub fn core_fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn write_map(dir: &Path, name: &str, source: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, source).unwrap();
    path.display().to_string()
}

/// Names of every built-in in the catalog.
pub fn catalog_names() -> Vec<String> {
    bisym_core::Builtin::catalog()
        .iter()
        .map(|b| b.to_string())
        .collect()
}

/// Deterministic corpus of map sources on [1, 2].
///
/// Every entry evaluates to a finite value on the whole square: logs and
/// roots only see positive arguments and there are no divisions by
/// expressions that can vanish. Weights stay in [0.2, 0.8], so slopes
/// are bounded away from zero.
pub fn random_dsl_corpus(count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_map(&mut rng)).collect()
}

fn weight(rng: &mut ChaCha8Rng) -> f64 {
    (rng.gen_range(20..=80) as f64) / 100.0
}

/// A weighted quasi-arithmetic mean of x and y: reflexive and strictly
/// increasing, symmetric only for weight 1/2.
fn weighted_mean(rng: &mut ChaCha8Rng) -> String {
    let a = weight(rng);
    let b = ((1.0 - a) * 100.0).round() / 100.0;
    match rng.gen_range(0..5) {
        0 => {
            let p = *[-2.0, -1.0, 0.5, 2.0, 3.0].choose(rng).unwrap();
            let p = if p < 0.0 {
                format!("({p})")
            } else {
                p.to_string()
            };
            format!("({a}*x^{p} + {b}*y^{p})^(1/{p})")
        }
        1 => format!("exp({a}*log(x) + {b}*log(y))"),
        2 => format!("log({a}*exp(x) + {b}*exp(y))"),
        3 => format!("{a}*x + {b}*y"),
        _ => format!("sqrt({a}*x^2 + {b}*y^2)"),
    }
}

fn random_map(rng: &mut ChaCha8Rng) -> String {
    match rng.gen_range(0..7) {
        0 | 1 => weighted_mean(rng),
        2 => {
            let a = weight(rng);
            let b = weight(rng);
            let c = (rng.gen_range(-20..=20) as f64) / 100.0;
            format!("{a}*x + {b}*y + {c}")
        }
        3 => format!(
            "piecewise {{ if x < y: {}; else: {} }}",
            weighted_mean(rng),
            weighted_mean(rng)
        ),
        4 => {
            let m = 1.0 + (rng.gen_range(20..=80) as f64) / 100.0;
            format!(
                "piecewise {{ if x in [1, {m}) and y in [1, {m}): {}; else: {} }}",
                weighted_mean(rng),
                weighted_mean(rng)
            )
        }
        5 => {
            let a = weight(rng);
            format!(
                "{a}*min(x, y) + {}*max(x, y)",
                ((1.0 - a) * 100.0).round() / 100.0
            )
        }
        _ => format!("sqrt(({}) * ({}))", weighted_mean(rng), weighted_mean(rng)),
    }
}
