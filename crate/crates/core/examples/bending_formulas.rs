//! From bending angles to core lengths, boundary metrics and the bent group.

use std::f64::consts::FRAC_PI_2;

use bendlab::bendsolve::{
    angles_from_lengths, bent_triple, boundary_metrics, group_from_bending, lengths_from_angles,
    BendingAngles,
};
use bendlab::h3geom::complex_distance;

fn main() -> bendlab::Result<()> {
    for (ta, tb) in [(FRAC_PI_2, FRAC_PI_2), (0.3, 2.5), (1e-3, 2e-3)] {
        let a = BendingAngles::new(ta, tb)?;
        let g = lengths_from_angles(a)?;
        let m = boundary_metrics(&g, a)?;
        let back = angles_from_lengths(g.l_alpha_star, g.l_beta_star)?;
        let group = group_from_bending(a)?;
        let delta = complex_distance(&group.a.axis()?, &group.b.axis()?)?;
        println!("angles ({ta}, {tb})");
        println!(
            "  l_alpha* {:.12}  l_beta* {:.12}  d {:.12}",
            g.l_alpha_star, g.l_beta_star, g.d
        );
        println!(
            "  l_beta+ {:.12}  l_alpha- {:.12}  gaps {:.3e} {:.3e}",
            m.l_beta_plus, m.l_alpha_minus, m.gap_alpha, m.gap_beta
        );
        println!(
            "  axes at complex distance ({:.12}, {:.12})",
            delta.rho, delta.phi
        );
        println!(
            "  angles recovered ({:.15}, {:.15})",
            back.theta_alpha, back.theta_beta
        );
        println!("  traces {:?}", bent_triple(a)?);
    }
    Ok(())
}
