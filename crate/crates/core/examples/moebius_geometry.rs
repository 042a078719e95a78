//! Complex lengths, axes and complex distances in upper half-space.

use bendlab::h3geom::{complex_distance, GeodesicLine, H3Point, Ideal, MoebiusMap};
use num_complex::Complex64;

fn main() -> bendlab::Result<()> {
    let loxo = MoebiusMap::diagonal(Complex64::new(0.5, 0.3).exp());
    let twist = MoebiusMap::new(
        Complex64::new(1.0, 0.2),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, -0.3),
        Complex64::new(1.0, 0.0),
    )?;
    let m = loxo.conjugate_by(&twist);
    println!(
        "complex length of diag(e^(0.5+0.3i)): {}",
        loxo.complex_length()?
    );
    println!(
        "same after conjugation:             {}",
        m.complex_length()?
    );
    let axis = m.axis()?;
    println!("axis from {:?}\n      to   {:?}", axis.start, axis.end);

    let vertical = GeodesicLine::new(Ideal::real(0.0), Ideal::Infinity)?;
    let s: f64 = 0.8;
    let ring = GeodesicLine::new(Ideal::real(-1.0), Ideal::real(1.0))?;
    let outer = GeodesicLine::new(Ideal::real(-s.exp()), Ideal::real(s.exp()))?;
    println!(
        "concentric semicircles: {:?}",
        complex_distance(&ring, &outer)?
    );
    println!(
        "vertical line vs semicircle: {:?}",
        complex_distance(&vertical, &outer)?
    );

    let p = H3Point::from_parts(1.0, 0.0, 1.0)?;
    println!(
        "distance from (1, 1) to the vertical axis: {:.6}",
        bendlab::h3geom::dist_point_geodesic(&p, &vertical)
    );
    Ok(())
}
