//! Runs the twelve acceptance criteria at full size and prints one line per
//! criterion. `cargo test --release --test acceptance -- --nocapture` shows
//! the lines on success too. `ACCEPTANCE_ONLY=1,riesz` restricts the run to
//! the listed criteria.

use std::time::Instant;

use levy_mart::verify::{run_criterion, Criterion, VerifyOptions};

#[test]
fn acceptance_suite() {
    let opts = VerifyOptions::default();
    let only: Option<Vec<Criterion>> = std::env::var("ACCEPTANCE_ONLY").ok().map(|v| {
        v.split(',')
            .map(|s| s.trim().parse().expect("unknown criterion in ACCEPTANCE_ONLY"))
            .collect()
    });
    let mut failed = Vec::new();
    println!();
    for c in Criterion::ALL {
        if only.as_ref().is_some_and(|o| !o.contains(&c)) {
            continue;
        }
        let start = Instant::now();
        match run_criterion(c, &opts) {
            Ok(out) => {
                println!("{} ({:.1}s)", out.line(), start.elapsed().as_secs_f64());
                if !out.passed {
                    failed.push(c);
                }
            }
            Err(e) => {
                println!("[FAIL] {:>2} {}: error: {e}", c.id(), c.name());
                failed.push(c);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
