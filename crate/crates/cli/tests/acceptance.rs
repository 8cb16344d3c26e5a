//! Runs all twelve acceptance criteria and prints one line per criterion.
//! `ACCEPTANCE_SEED` overrides the default seed.

use debranges_cli::acceptance::{run_all, DEFAULT_SEED};

fn main() {
    let seed = std::env::var("ACCEPTANCE_SEED")
        .ok()
        .map(|s| s.parse().expect("ACCEPTANCE_SEED must be an integer"))
        .unwrap_or(DEFAULT_SEED);
    println!("acceptance suite, seed {seed}");
    let results = run_all(seed);
    for r in &results {
        println!("{}", r.line());
    }
    assert_eq!(results.len(), 12);
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: all 12 criteria passed");
    } else {
        println!("acceptance: criteria {failed:?} failed");
        std::process::exit(1);
    }
}
