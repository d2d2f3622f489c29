//! Text forms of operators and distributions.

use holodist::parse::{parse_distribution, parse_operator, print_distribution, print_operator};

fn main() -> holodist::Result<()> {
    for text in ["x^2*D + 1", "(T - 1/2)^2*(T + i)", "4*x^3*D^2 + 6*x^2*D - 1"] {
        let p = parse_operator(text)?;
        println!("{text}  ->  {}", print_operator(&p));
    }
    let v = parse_distribution("gauss(y)*exp(1/y - 1/conj(y))*abs(y)^(-1/2)*L + polar(1,3)")?;
    let printed = print_distribution(&v);
    println!("{printed}");
    println!("reparses identically: {}", parse_distribution(&printed)? == v);
    Ok(())
}
