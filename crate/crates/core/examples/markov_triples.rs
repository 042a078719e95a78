//! Trace triples, Markov roots and the marked groups they determine.

use bendlab::ptorus::{group_from_triple, Branch, FuchsianPoint, TraceTriple};

fn main() -> bendlab::Result<()> {
    let t = TraceTriple::real(3.0, 3.0, 3.0)?;
    let g = group_from_triple(&t)?;
    println!("(3,3,3): Markov residual {:.1e}", t.markov_residual());
    println!("commutator trace {}", g.commutator_trace());
    println!("recovered triple {:?}", g.triple().normalized());

    for branch in [Branch::Plus, Branch::Minus] {
        let p = FuchsianPoint::new(3.0, 4.0, branch)?;
        println!(
            "x = 3, y = 4, {branch:?} root: z = {:.9}, l_alpha = {:.9}, l_beta = {:.9}",
            p.z(),
            p.l_alpha(),
            p.l_beta()
        );
    }
    Ok(())
}
