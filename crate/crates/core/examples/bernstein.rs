//! Bracket of the functional equation for each exponential part.

use holodist::exponential::ExponentialPart;
use holodist::formal::{analyze, FormalConfig};
use holodist::parse::parse_operator;
use holodist::skeleton::bernstein_equation;

fn main() -> holodist::Result<()> {
    let p = parse_operator("T^2*(T - 1/2)")?;
    let a = analyze(&p, &FormalConfig { truncation: 12, ..Default::default() })?;
    for j in 0..3 {
        let eq = bernstein_equation(&a, &ExponentialPart::zero(), j);
        println!("j = {j}: k(j) = {}  bracket = {}  certified = {}", eq.k_j, eq.operator(), eq.certified);
    }
    Ok(())
}
