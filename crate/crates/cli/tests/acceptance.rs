//! One line per acceptance criterion, from `modcoh suite full --seed 7`.
//!
//! Two criteria fail on a correct build (see README, "Known failures"). For
//! those the run is accepted only if the failing checks and their values are
//! exactly the recorded ones; any other outcome fails the target.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;

struct Expect {
    id: &'static str,
    limit: Duration,
    /// Failing checks as (name, value); empty means the criterion passes.
    failures: Vec<(String, String)>,
}

fn binom3(n: u32) -> u32 {
    n * (n - 1) * (n - 2) / 6
}

fn cohen_failures() -> Vec<(String, String)> {
    // mu = C(k-2,3); the listed set has the size of a basis, Σ C(j-2,3)
    let mut out = Vec::new();
    for p in [2, 3] {
        for k in 6..=10 {
            let dim: u32 = (5..=k).map(|j| binom3(j - 2)).sum();
            out.push((format!("k = {k}, p = {p}"), format!("mu={} generators={dim} dim={dim}", binom3(k - 2))));
        }
    }
    out
}

fn witt_failures() -> Vec<(String, String)> {
    let three_quarters: Vec<String> = (0..6).map(|i| format!("4t^({}/4)", 3 + 4 * i)).collect();
    let mut halves = Vec::new();
    for d in (2..=12).step_by(2) {
        // 2 t1^(a/2) t2^(b/2), a, b odd, a + b = d
        for a in (1..d).step_by(2) {
            halves.push(format!("2t1^({a}/2)*t2^({}/2)", d - a));
        }
    }
    let v = |m: &[String]| format!("hom=true injective=true generation=false missing {}", m.join(", "));
    vec![
        ("eta p = 2, n = 3, k = 1, window 6".into(), v(&three_quarters)),
        ("eta p = 2, n = 2, k = 2, window 6".into(), v(&halves)),
    ]
}

fn expectations() -> Vec<Expect> {
    let s = Duration::from_secs;
    vec![
        Expect { id: "picard", limit: s(10), failures: vec![] },
        Expect { id: "cohen", limit: s(300), failures: cohen_failures() },
        Expect { id: "ann", limit: s(300), failures: vec![] },
        Expect { id: "tensor", limit: s(60), failures: vec![] },
        Expect { id: "growth", limit: s(600), failures: vec![] },
        Expect { id: "witt", limit: s(60), failures: witt_failures() },
        Expect { id: "functor", limit: s(300), failures: vec![] },
        Expect { id: "products", limit: s(300), failures: vec![] },
        Expect { id: "flatness", limit: s(60), failures: vec![] },
        Expect { id: "chains", limit: s(60), failures: vec![] },
    ]
}

fn run(id: &str) -> (Value, Duration) {
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_modcoh"))
        .args(["suite", "full", "--seed", "7", "--json", "--only", id])
        .env_remove("MODCOH_CACHE_DIR")
        .output()
        .expect("modcoh runs");
    let took = start.elapsed();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{id}: bad report ({e}): {}", String::from_utf8_lossy(&o.stderr)));
    (v, took)
}

fn main() -> ExitCode {
    let mut surprises = 0;
    for e in expectations() {
        let (v, took) = run(e.id);
        let c = &v["suite"]["criteria"][0];
        let checks = c["checks"].as_array().unwrap();
        let failed: Vec<(String, String)> = checks
            .iter()
            .filter(|k| k["passed"] == false)
            .map(|k| (k["name"].as_str().unwrap().to_string(), k["value"].as_str().unwrap().to_string()))
            .collect();
        let in_time = took <= e.limit;
        let passed = c["passed"] == true && in_time;
        let detail = if failed.is_empty() {
            format!("{} checks", checks.len())
        } else {
            let names: Vec<&str> = failed.iter().map(|f| f.0.as_str()).collect();
            format!("{} of {} checks fail: {}", failed.len(), checks.len(), names.join("; "))
        };
        let timing = format!("{:.1} s, limit {} s", took.as_secs_f64(), e.limit.as_secs());
        println!("{} {}: {} ({detail}; {timing})", if passed { "PASS" } else { "FAIL" }, e.id, c["title"].as_str().unwrap());
        let as_recorded = in_time && failed == e.failures;
        if !as_recorded {
            surprises += 1;
            for (n, v) in failed.iter().filter(|f| !e.failures.contains(f)) {
                println!("  unexpected failure {n}: {v}");
            }
            for (n, v) in e.failures.iter().filter(|f| !failed.contains(f)) {
                println!("  recorded failure did not occur {n}: {v}");
            }
            if !in_time {
                println!("  over the time limit");
            }
        }
    }
    if surprises == 0 {
        println!("acceptance: every outcome matches the record (cohen and witt fail as analysed)");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {surprises} criteria differ from the record");
        ExitCode::FAILURE
    }
}
