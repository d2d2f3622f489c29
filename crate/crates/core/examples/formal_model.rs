//! Exponential parts, exponents and certificates of an irregular operator.

use holodist::formal::{analyze, FormalConfig};
use holodist::parse::parse_operator;

fn main() -> holodist::Result<()> {
    // annihilates e^{±1/sqrt(x)}
    let p = parse_operator("4*x^3*D^2 + 6*x^2*D - 1")?;
    let cfg = FormalConfig { truncation: 20, ..Default::default() };
    let a = analyze(&p, &cfg)?;
    println!("ramified operator: {}", a.ramified);
    println!("{}", serde_json::to_string_pretty(&a.model.to_json()).unwrap());
    for c in &a.certificates {
        println!("phi = {}  exponent = {}  certified = {}", c.phi, c.exponent, c.ok);
    }
    Ok(())
}
