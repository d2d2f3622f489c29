//! Checking a distribution against a skeleton, and a failing control.

use holodist::formal::FormalConfig;
use holodist::mellin::{verify_skeleton, MellinConfig, RadialCutoff};
use holodist::mellin::verify::VerifyOptions;
use holodist::parse::{parse_distribution, parse_operator};
use holodist::skeleton::{skeleton_from_operators, ExpansionSkeleton};

fn main() -> holodist::Result<()> {
    let t2 = parse_operator("T^2")?;
    let (_, _, s) = skeleton_from_operators(&t2, &t2, &FormalConfig::default())?;
    let chi = RadialCutoff::default();
    let cfg = MellinConfig::default();
    let opts = VerifyOptions::default();

    let good = parse_distribution("(1 + y + conj(y)) + (1 + y*conj(y))*L")?;
    let r = verify_skeleton(&good, &s, &chi, &cfg, &opts);
    println!("consistent: {}", r.passed());

    let empty = ExpansionSkeleton { phis: vec![], entries: vec![], staircase: vec![] };
    let bad = parse_distribution("abs(y)^(0.6)")?;
    let r = verify_skeleton(&bad, &empty, &chi, &cfg, &opts);
    println!("consistent: {}", r.passed());
    for a in r.assertions.iter().filter(|a| !a.pass) {
        println!("  {}: {}", a.name, a.detail);
    }
    Ok(())
}
