//! Minima of a·l_alpha + b·l_beta and the line of minima.

use bendlab::lab::sweep::log_grid;
use bendlab::minima::{closed_form_minimum, kerckhoff_minimum, line_of_minima, Weights};

fn main() -> bendlab::Result<()> {
    let w = Weights::new(1.0, 2.0)?;
    let m = kerckhoff_minimum(w)?;
    let (ca, cb) = closed_form_minimum(w);
    println!(
        "(1, 2): l_alpha {:.12} (closed form {ca:.12}), l_beta {:.12} (closed form {cb:.12})",
        m.l_alpha, m.l_beta
    );
    println!(
        "criticality {:.2e} after {} iterations",
        m.criticality, m.iterations
    );

    let base = Weights::new(1.0, 1.0)?;
    let ts = log_grid(0.1, 10.0, 9);
    for (t, m) in ts.iter().zip(line_of_minima(base, &ts)?) {
        println!(
            "b = {t:8.4}: l_alpha {:.6}, l_beta {:.6}",
            m.l_alpha, m.l_beta
        );
    }
    Ok(())
}
