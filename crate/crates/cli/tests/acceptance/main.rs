//! Acceptance criteria 1-11. Each criterion prints one PASS/FAIL line; the
//! process exits nonzero if any fails.

mod oracles;
mod scenarios;
mod trivial;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

/// `Ok(detail)` on pass, `Err(detail)` on failure.
pub type Outcome = Result<String, String>;

#[macro_export]
macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Criterion {
    id: u8,
    name: &'static str,
    run: fn() -> Outcome,
}

const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, name: "CC/SD union-find vs DFS", run: oracles::cc_sd },
    Criterion { id: 2, name: "CD index vs brute force", run: oracles::cd_index },
    Criterion { id: 3, name: "OLS vs normal equations", run: oracles::ols },
    Criterion { id: 4, name: "interaction recovery", run: scenarios::interaction },
    Criterion { id: 5, name: "main effect and null coverage", run: scenarios::main_effect },
    Criterion { id: 6, name: "PSM balance, ATT, deciles", run: scenarios::psm },
    Criterion { id: 7, name: "mediation", run: scenarios::mediation },
    Criterion { id: 8, name: "pre-post report", run: scenarios::prepost },
    Criterion { id: 9, name: "binned-fit R^2 ordering", run: scenarios::binned },
    Criterion { id: 10, name: "metric unit suite", run: trivial::suite },
    Criterion { id: 11, name: "pipeline determinism", run: scenarios::determinism },
];

fn main() -> ExitCode {
    let filter: Option<u8> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = Vec::new();
    for c in CRITERIA.iter().filter(|c| filter.is_none_or(|f| f == c.id)) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {tag} [{secs:6.1}s] {}: {detail}", c.id, c.name);
        if outcome.is_err() {
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
