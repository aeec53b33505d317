//! Reporting helpers for the acceptance suite in `tests/acceptance.rs`.

use std::time::Instant;

/// Outcome of one criterion: pass flag and a one-line summary.
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
}

impl Outcome {
    pub fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome {
            pass,
            summary: summary.into(),
        }
    }
}

/// A numbered criterion.
pub type Criterion = (u32, fn() -> Result<Outcome, String>);

/// Runs each criterion, prints `criterion N: PASS|FAIL <summary> (<secs>)` and
/// returns how many failed. A criterion that errors or panics counts as failed.
pub fn run_all(criteria: &[Criterion]) -> usize {
    let mut failed = 0;
    for &(id, f) in criteria {
        let start = Instant::now();
        let outcome = match std::panic::catch_unwind(f) {
            Ok(Ok(o)) => o,
            Ok(Err(e)) => Outcome::new(false, format!("error: {e}")),
            Err(_) => Outcome::new(false, "panicked"),
        };
        let label = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id}: {label} {} ({:.1}s)",
            outcome.summary,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!outcome.pass);
    }
    failed
}
