//! Expansion skeleton from a holomorphic and an antiholomorphic operator.

use holodist::formal::FormalConfig;
use holodist::parse::parse_operator;
use holodist::scalar::ExactScalar;
use holodist::skeleton::{combine_betas, l1loc_test, skeleton_from_operators};

fn main() -> holodist::Result<()> {
    let t2 = parse_operator("T^2")?;
    let (_, _, s) = skeleton_from_operators(&t2, &t2, &FormalConfig::default())?;
    println!("{}", serde_json::to_string_pretty(&s.to_json()).unwrap());
    println!("locally integrable: {}", l1loc_test(&s));

    let b1 = [ExactScalar::from_frac(1, 3), ExactScalar::from_int(0)];
    let b2 = [ExactScalar::from_frac(4, 3)];
    let b: Vec<String> = combine_betas(&b1, &b2).iter().map(|x| x.to_string()).collect();
    println!("combined exponents: {b:?}");
    Ok(())
}
