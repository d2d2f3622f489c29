#![allow(dead_code)]

use std::collections::BTreeMap;

use holodist::exponential::ExponentialPart;
use holodist::formal::{ElementaryModel, ExponentEntry, RegularPartData};
use holodist::scalar::ExactScalar;
use num_complex::Complex64;
use rand::Rng;

pub fn frac<R: Rng>(rng: &mut R, max_num: i64, den: i64) -> ExactScalar {
    ExactScalar::from_frac(rng.gen_range(-max_num..=max_num), den)
}

/// Random `φ ∈ y⁻¹ℂ[y⁻¹]` of pole order at most `max_order`, never zero.
pub fn random_phi<R: Rng>(rng: &mut R, max_order: u32) -> ExponentialPart {
    let order = rng.gen_range(1..=max_order) as i64;
    let mut terms = vec![(-order, ExactScalar::from_frac(rng.gen_range(1..=4) * if rng.gen() { 1 } else { -1 }, rng.gen_range(1..=3)))];
    for e in 1..order {
        if rng.gen_bool(0.5) {
            terms.push((-e, ExactScalar::new(frac(rng, 3, 2).re, frac(rng, 2, 3).re)));
        }
    }
    ExponentialPart::from_terms(terms).unwrap()
}

/// Random partition of `n` into Jordan blocks, decreasing.
fn partition<R: Rng>(rng: &mut R, mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while n > 0 {
        let b = rng.gen_range(1..=n);
        out.push(b);
        n -= b;
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Elementary model with total rank in `1..=max_rank` and `q ≤ max_q`.
pub fn random_model<R: Rng>(rng: &mut R, max_rank: u32, max_q: u32) -> ElementaryModel {
    let q = rng.gen_range(1..=max_q);
    let total = rng.gen_range(1..=max_rank);
    let mut parts: BTreeMap<ExponentialPart, RegularPartData> = BTreeMap::new();
    let mut slots: BTreeMap<ExponentialPart, Vec<i64>> = BTreeMap::new();
    let mut left = total;
    while left > 0 {
        let rank = rng.gen_range(1..=left);
        left -= rank;
        let phi = if parts.is_empty() && rng.gen_bool(0.5) { ExponentialPart::zero() } else { random_phi(rng, 3) };
        let used = slots.entry(phi.clone()).or_default();
        let entry = parts.entry(phi).or_default();
        // cosets get distinct fractional parts k/12
        let mut rest = rank;
        while rest > 0 && used.len() < 12 {
            let dim = rng.gen_range(1..=rest);
            rest -= dim;
            let slot = (0..12).filter(|s| !used.contains(s)).nth(rng.gen_range(0..12 - used.len())).unwrap();
            used.push(slot);
            let shift = rng.gen_range(-2..=1);
            let im = if rng.gen_bool(0.2) { frac(rng, 2, 3).re } else { holodist::scalar::rat(0, 1) };
            let beta = ExactScalar::new(ExactScalar::from_frac(slot + 12 * shift, 12).re, im);
            let jordan = partition(rng, dim);
            entry.exponents.push(ExponentEntry { beta, log_depth: jordan[0], dim, jordan });
        }
        entry.exponents.sort_by(|a, b| a.beta.cmp(&b.beta));
        entry.rank += rank as usize;
    }
    ElementaryModel { q, parts }
}

/// `c y^β' ȳ^β'' (log y)^j (log ȳ)^k e^{φ-φ̄}` on the principal branch,
/// written out from scratch.
pub fn term_value(
    y: Complex64,
    phi: Complex64,
    beta_hol: Complex64,
    beta_anti: Complex64,
    j: u32,
    k: u32,
    c: Complex64,
) -> Complex64 {
    let (rho, theta) = (y.norm(), y.im.atan2(y.re));
    let log_y = Complex64::new(rho.ln(), theta);
    let log_yb = Complex64::new(rho.ln(), -theta);
    c * (phi - phi.conj()).exp() * (beta_hol * log_y).exp() * (beta_anti * log_yb).exp() * log_y.powu(j) * log_yb.powu(k)
}

/// Principal part of `∫ χ(ρ) ρ^{2s+2β+1} L^ℓ 2dρ` at `s = -β-1` for any
/// cutoff with `χ = 1` near 0: substituting `u = -log ρ` the plateau gives
/// `2^{ℓ+1} ∫ u^ℓ e^{-tu} du` with `t = 2(s+β+1)`, whose only singular part
/// is `2^{ℓ+1} ℓ!/t^{ℓ+1} = ℓ!/(s+β+1)^{ℓ+1}`.
pub fn power_log_principal_part(l: u32) -> Vec<f64> {
    let fact: f64 = (1..=l).map(f64::from).product();
    let mut out = vec![0.0; l as usize + 1];
    out[l as usize] = fact;
    out
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * (h / 3.0)
}
