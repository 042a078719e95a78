//! Renders the limit sets of a Fuchsian and a bent group and measures how
//! far each is from a single circle. Pass a directory to keep the images.

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use bendlab::bendsolve::{group_from_bending, BendingAngles};
use bendlab::lab::render::{fit_circline, render_limit_set, ImageSpec};
use bendlab::ptorus::{group_from_triple, TraceTriple};

fn main() -> bendlab::Result<()> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let spec = ImageSpec::default();
    let groups = [
        (
            "fuchsian",
            group_from_triple(&TraceTriple::real(3.0, 3.0, 3.0)?)?,
        ),
        (
            "bent",
            group_from_bending(BendingAngles::equal(FRAC_PI_4)?)?,
        ),
    ];
    for (name, g) in groups {
        let path = dir.join(format!("{name}.ppm"));
        let r = render_limit_set(&g, &spec, &path)?;
        let fit = fit_circline(&r.points)?;
        println!(
            "{}: {} points in window, circline residual {:.2e}",
            path.display(),
            r.points.len(),
            fit.residual
        );
    }
    Ok(())
}
