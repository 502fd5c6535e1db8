//! Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any failed.

use lhom::checks::{run_all, Scale};

fn main() {
    let outcomes = run_all(2024, Scale::Full);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.criterion).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
