//! Poles of the Mellin pairing of `|y|^{2β} L^ℓ` with a cutoff.

use holodist::mellin::{pole_scan, MellinConfig, ModelDistribution, PoleLattice, RadialCutoff, Window};
use holodist::scalar::ExactScalar;

fn main() -> holodist::Result<()> {
    let v = ModelDistribution::power_log(ExactScalar::from_frac(-2, 5), 2);
    let window = Window::new(-2.6, 1.4, -0.5, 0.5)?;
    let chi = RadialCutoff::default();
    let lattice = PoleLattice::from_distribution(&v);
    let report = pole_scan(&v, &window, 0, 0, &chi, &MellinConfig::default(), Some(&lattice))?;
    print!("{}", report.to_csv());
    for p in &report.poles {
        println!("pole at {:.6} of order {}, leading coefficient {:.6}", p.location.re, p.order, p.leading().re);
    }
    Ok(())
}
