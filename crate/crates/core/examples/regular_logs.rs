//! Frobenius solutions with logarithms and their Jordan structure.

use holodist::formal::{analyze, FormalConfig};
use holodist::parse::parse_operator;
use holodist::term::SymbolicTerm;
use holodist::laurent::Var;

fn main() -> holodist::Result<()> {
    let p = parse_operator("T^2*(T - 1/2)")?;
    let a = analyze(&p, &FormalConfig { truncation: 6, ..Default::default() })?;
    for (phi, r) in &a.model.parts {
        println!("phi = {phi}, rank {}", r.rank);
        for e in &r.exponents {
            println!("  beta = {}  logDepth = {}  jordan = {:?}", e.beta, e.log_depth, e.jordan);
        }
    }
    for s in &a.solutions {
        let terms: Vec<SymbolicTerm> = s.to_terms(Var::Y);
        println!("solution at {} with log degree {}: {} terms", s.exponent, s.log_degree(), terms.len());
    }
    Ok(())
}
