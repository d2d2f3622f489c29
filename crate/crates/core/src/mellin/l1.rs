//! Local integrability from masses `∫_{r/2<|y|<r} |v|` of shrinking annuli.

use std::f64::consts::PI;

use super::distribution::ModelDistribution;
use super::quadrature::Rule;

/// `∫_{r/2 < |y| < r} |v| (1/π) ρ dρ dθ`.
pub fn annulus_mass(v: &ModelDistribution, r: f64) -> f64 {
    let rule = Rule::panels(&[r / 2.0, r], 32);
    let n_theta = 256;
    rule.integrate(|rho| {
        let ring: f64 = (0..n_theta)
            .map(|k| {
                let y = num_complex::Complex64::from_polar(rho, 2.0 * PI * k as f64 / n_theta as f64);
                v.eval(y).norm()
            })
            .sum::<f64>()
            * (2.0 / n_theta as f64);
        ring * rho
    })
}

/// Masses of the annuli at `r0, r0/2, r0/4, …`.
pub fn l1_profile(v: &ModelDistribution, r0: f64, halvings: u32) -> Vec<f64> {
    (0..halvings).map(|k| annulus_mass(v, r0 * 0.5f64.powi(k as i32))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L1Verdict {
    /// Successive masses shrink by at least the factor.
    Integrable,
    /// Successive masses grow by at least the factor.
    Divergent,
    Inconclusive,
}

pub fn l1_verdict(profile: &[f64], factor: f64) -> L1Verdict {
    let pairs: Vec<(f64, f64)> = profile.windows(2).map(|w| (w[0], w[1])).collect();
    if pairs.iter().all(|&(a, b)| a >= factor * b) {
        L1Verdict::Integrable
    } else if pairs.iter().all(|&(a, b)| b >= factor * a) {
        L1Verdict::Divergent
    } else {
        L1Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    #[test]
    fn threshold() {
        let good = ModelDistribution::power_log(ExactScalar::from_frac(-2, 5), 1);
        let bad = ModelDistribution::power_log(ExactScalar::from_frac(-6, 5), 0);
        assert_eq!(l1_verdict(&l1_profile(&good, 0.5, 8), 1.2), L1Verdict::Integrable);
        assert_eq!(l1_verdict(&l1_profile(&bad, 0.5, 8), 1.2), L1Verdict::Divergent);
        // |y|^{-0.8}: mass 2∫ρ^{0.2} = (r^{1.2} - (r/2)^{1.2}) / 0.6
        let m = annulus_mass(&ModelDistribution::power_log(ExactScalar::from_frac(-2, 5), 0), 0.5);
        let exact = (0.5f64.powf(1.2) - 0.25f64.powf(1.2)) / 0.6;
        assert!((m - exact).abs() < 1e-12 * exact);
    }
}
