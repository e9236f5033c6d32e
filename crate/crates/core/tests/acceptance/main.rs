//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails. Every tolerance is a named constant
//! in the criterion's module.

// reference constants carry every digit they were computed with
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

mod buckets;
mod common;
mod dedup;
mod determinism;
mod dsir;
mod filters;
mod keepers;
mod lm;
mod mixture;
mod weights;

type Check = fn() -> Result<String, String>;

const CRITERIA: [(u32, &str, Check); 10] = [
    (1, "dedup correctness", dedup::run),
    (2, "source-priority keeper law", keepers::run),
    (3, "filter fidelity", filters::run),
    (4, "n-gram LM", lm::run),
    (5, "DSIR distribution matching", dsir::run),
    (6, "weight-method oracles", weights::run),
    (7, "bucket laws", buckets::run),
    (8, "mixture accounting", mixture::run),
    (9, "analysis oracles", analysis::run),
    (10, "end-to-end determinism", determinism::run),
];

fn main() -> ExitCode {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, name, check) in CRITERIA {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .map_or_else(|| "panicked".to_string(), |m| format!("panicked: {m}"))),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {n:>2} {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {n:>2} {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
