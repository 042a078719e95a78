//! One line per acceptance criterion; exits nonzero if any fails.
//! Set `BENDLAB_SEED` to change the seed of the randomized criteria.

use bendlab::lab::acceptance::{run_all, DEFAULT_SEED};

fn main() {
    let seed = std::env::var("BENDLAB_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    println!("acceptance suite, seed {seed}");
    let results = run_all(seed);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
