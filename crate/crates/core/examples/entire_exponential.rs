//! `e^{1/y - 1/ȳ}` has an entire Mellin pairing: the scan finds nothing.

use holodist::exponential::ExponentialPart;
use holodist::mellin::{mellin_continue, pole_scan, MellinConfig, ModelDistribution, ModelTerm, RadialCutoff, Window};
use holodist::scalar::ExactScalar;
use num_complex::Complex64;

fn main() -> holodist::Result<()> {
    let phi = ExponentialPart::monomial(1, ExactScalar::one());
    let v = ModelDistribution::single(ModelTerm::new(phi, ExactScalar::zero(), 0));
    let cfg = MellinConfig::default();
    let window = Window::new(-2.0, 0.0, -0.5, 0.5)?;
    for chi in [RadialCutoff::smoothstep(0.5, 1.0)?, RadialCutoff::smoothstep(0.4, 0.8)?] {
        let report = pole_scan(&v, &window, 0, 0, &chi, &cfg, None)?;
        let sample = mellin_continue(&v, Complex64::new(-1.5, 0.2), 0, 0, &chi, &cfg)?;
        println!("cutoff ({}, {}): {} poles, M(-1.5+0.2i) = {sample:.8}", chi.a, chi.b, report.poles.len());
    }
    Ok(())
}
