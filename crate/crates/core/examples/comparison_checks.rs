//! Randomized checks of the triangle, quadrilateral and polyline inequalities.

use bendlab::lab::comparison::{check_polylines, check_quadrilaterals, check_triangles};

fn main() -> bendlab::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let (chord, height) = check_polylines(seed, 500)?;
    for r in [
        check_triangles(seed, 5_000)?,
        check_quadrilaterals(seed, 5_000)?,
        chord,
        height,
    ] {
        println!(
            "{:>16}: {} cases, {} violations, worst margin {:.3e}",
            r.name, r.cases, r.violations, r.worst_margin
        );
    }
    Ok(())
}
