//! Earthquakes, pure bends, unbending and length derivatives.

use bendlab::bendsolve::BendingAngles;
use bendlab::ptorus::{Branch, FuchsianPoint};
use bendlab::quakebend::{
    earthquake, length_derivative, quakebend_alpha, unbend_check, unbend_residual, Curve,
    QuakebendParam, DEFAULT_STEP,
};

fn main() -> bendlab::Result<()> {
    let p = FuchsianPoint::new(3.0, 3.0, Branch::Plus)?;
    println!("earthquake along alpha, l_beta(t):");
    for i in -4..=4 {
        let t = 0.5 * i as f64;
        println!(
            "  t = {t:+.1}  l_beta = {:.9}",
            earthquake(&p, Curve::Alpha, t)?.l_beta()
        );
    }
    let ba = length_derivative(&p, Curve::Alpha, Curve::Beta, DEFAULT_STEP)?;
    let ab = length_derivative(&p, Curve::Beta, Curve::Alpha, DEFAULT_STEP)?;
    println!("dl_beta/dt_alpha = {ba:.9}, dl_alpha/dt_beta = {ab:.9}");

    let bent = quakebend_alpha(&p.group()?, QuakebendParam::bend(0.4)?)?;
    println!(
        "after a pure bend of 0.4: traces {:?}",
        bent.triple().normalized()
    );

    let a = BendingAngles::new(0.8, 1.1)?;
    let u = unbend_check(a)?;
    println!(
        "unbending (0.8, 1.1) by {:+.3}i: imaginary residual {:.1e}, l_beta error {:.1e}",
        u.bend,
        u.imag_residual,
        unbend_residual(a)?
    );
    Ok(())
}
