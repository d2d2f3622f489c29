//! Descent of elementary models along `x = y^q`.

use holodist::formal::{analyze, descend_model, lift_model, FormalConfig};
use holodist::parse::parse_operator;

fn main() -> holodist::Result<()> {
    // trivial lift followed by descent
    let p = parse_operator("(T + 1/3)^2*(x^2*D + 1)")?;
    let m = analyze(&p, &FormalConfig::default())?.model;
    let up = lift_model(&m, 3);
    println!("lifted: {}", up.to_json());
    println!("descends back: {}", descend_model(&up, 3)? == m);

    // a Galois orbit {1/y, -1/y} descends to one part of rank 2
    let p = parse_operator("4*x^3*D^2 + 6*x^2*D - 1")?;
    let a = analyze(&p, &FormalConfig::default())?;
    println!("descended: {}", descend_model(&a.model, a.model.q)?.to_json());
    Ok(())
}
