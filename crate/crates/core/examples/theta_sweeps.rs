//! Rates as the bending goes to zero, the diagonal limit and divergence,
//! with the sweep written as CSV to stdout.

use bendlab::lab::sweep::{
    default_theta_grid, diagonal_sweep, divergence_sweep, fit_slope, integer_log_grid, sweep_theta,
};
use bendlab::lab::table::write_sweep_csv;
use bendlab::minima::Weights;

fn main() -> bendlab::Result<()> {
    let w = Weights::new(1.0, 2.0)?;
    let recs = sweep_theta(w, &default_theta_grid())?;
    let th: Vec<f64> = recs.iter().map(|r| r.theta).collect();
    let col =
        |f: fn(&bendlab::lab::sweep::SweepRecord) -> f64| recs.iter().map(f).collect::<Vec<_>>();
    for (name, ys) in [
        ("d", col(|r| r.d)),
        ("gap_alpha", col(|r| r.gap_alpha)),
        ("gap_beta", col(|r| r.gap_beta)),
        ("dist_to_minimum", col(|r| r.dist_to_minimum)),
    ] {
        let f = fit_slope(&th, &ys)?;
        eprintln!("{name:>16}: slope {:.4}, r2 {:.6}", f.slope, f.r_squared);
    }

    let diag = diagonal_sweep(w, &integer_log_grid(100, 10_000, 5))?;
    for r in &diag {
        eprintln!(
            "theta_n {:.1e}: distance to minimum {:.3e}",
            r.theta, r.dist_to_minimum
        );
    }
    for k in [1.5, 2.0] {
        let s = divergence_sweep(&default_theta_grid(), k)?;
        eprintln!("k = {k}: sinh(l_beta*/2) slope {:.4}", s.fit.slope);
    }

    write_sweep_csv(std::io::stdout().lock(), &recs)
}
