//! Runs the acceptance suite and prints one line per criterion.

use bendlab::lab::acceptance::{run_all, DEFAULT_SEED};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    for r in run_all(seed) {
        println!("{r}");
    }
}
