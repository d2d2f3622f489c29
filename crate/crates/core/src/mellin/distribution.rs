//! Model distributions `Σ g(y) e^{φ-φ̄} |y|^{2β} L^ℓ` with `L = -log|y|²`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::blowup::FourierTaylor;
use crate::exponential::ExponentialPart;
use crate::scalar::ExactScalar;
use crate::skeleton::{ExpansionSkeleton, Staircase};

#[derive(Clone, Debug, PartialEq)]
pub struct ModelTerm {
    /// Smooth coefficient as `Σ g_{m,n} ρ^m e^{inθ}`.
    pub g: FourierTaylor,
    /// Extra factor `e^{-|y|²}`.
    pub gauss: bool,
    pub phi: ExponentialPart,
    pub beta: ExactScalar,
    pub l: u32,
}

/// `c ρ^m e^{inθ} e^{φ-φ̄} |y|^{2β} L^ℓ` (times `e^{-ρ²}` when `gauss`).
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub c: Complex64,
    pub m: u32,
    pub n: i32,
    pub phi: ExponentialPart,
    pub beta: Complex64,
    pub l: u32,
    pub gauss: bool,
}

/// `g = Σ c y^a ȳ^b` as Fourier–Taylor data.
pub fn monomials(terms: impl IntoIterator<Item = ((u32, u32), Complex64)>) -> FourierTaylor {
    let mut out: BTreeMap<(u32, i32), Complex64> = BTreeMap::new();
    for ((a, b), c) in terms {
        *out.entry((a + b, a as i32 - b as i32)).or_default() += c;
    }
    FourierTaylor::new(out)
}

pub fn one() -> FourierTaylor {
    monomials([((0, 0), Complex64::new(1.0, 0.0))])
}

impl ModelTerm {
    pub fn new(phi: ExponentialPart, beta: ExactScalar, l: u32) -> Self {
        Self {
            g: one(),
            gauss: false,
            phi,
            beta,
            l,
        }
    }

    pub fn with_g(mut self, g: FourierTaylor) -> Self {
        self.g = g;
        self
    }

    pub fn with_gauss(mut self) -> Self {
        self.gauss = true;
        self
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        let (rho, theta) = y.to_polar();
        let phi = self.phi.eval(y);
        let gauss = if self.gauss { (-rho * rho).exp() } else { 1.0 };
        self.g.eval(rho, theta)
            * gauss
            * (phi - phi.conj()).exp()
            * (2.0 * self.beta.to_c64() * rho.ln()).exp()
            * (-2.0 * rho.ln()).powi(self.l as i32)
    }

    pub fn conj(&self) -> Self {
        let g = FourierTaylor::new(self.g.coefficients.iter().map(|(&(m, n), c)| ((m, -n), c.conj())));
        Self {
            g,
            gauss: self.gauss,
            phi: self.phi.neg(),
            beta: self.beta.conj(),
            l: self.l,
        }
    }

    /// Monomials `y^a ȳ^b` of `g` that are smooth.
    pub fn smooth_monomials(&self) -> Vec<(u32, u32)> {
        self.g
            .coefficients
            .keys()
            .filter(|&&(m, n)| m as i32 >= n.abs() && (m as i32 - n) % 2 == 0)
            .map(|&(m, n)| (((m as i32 + n) / 2) as u32, ((m as i32 - n) / 2) as u32))
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelDistribution {
    pub terms: Vec<ModelTerm>,
}

impl ModelDistribution {
    pub fn new(terms: Vec<ModelTerm>) -> Self {
        Self { terms }
    }

    pub fn single(t: ModelTerm) -> Self {
        Self { terms: vec![t] }
    }

    /// `|y|^{2β} L^ℓ` with `g = 1` and no exponential factor.
    pub fn power_log(beta: ExactScalar, l: u32) -> Self {
        Self::single(ModelTerm::new(ExponentialPart::zero(), beta, l))
    }

    /// Order bound `⌈2 max(0, -min Re β)⌉` on the cutoff support.
    pub fn order(&self) -> u32 {
        let worst = self.terms.iter().map(|t| -t.beta.to_c64().re).fold(0.0, f64::max);
        (2.0 * worst - 1e-12).ceil().max(0.0) as u32
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(y)).sum()
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(ModelTerm::conj).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let g = FourierTaylor::new(t.g.coefficients.iter().map(|(&k, v)| (k, v * c)));
                ModelTerm { g, ..t.clone() }
            })
            .collect();
        Self { terms }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        self.terms
            .iter()
            .flat_map(|t| {
                t.g.coefficients.iter().map(move |(&(m, n), &c)| Atom {
                    c,
                    m,
                    n,
                    phi: t.phi.clone(),
                    beta: t.beta.to_c64(),
                    l: t.l,
                    gauss: t.gauss,
                })
            })
            .collect()
    }

    /// Exponential parts present, `0` first.
    pub fn phis(&self) -> Vec<ExponentialPart> {
        let mut out: Vec<_> = self.terms.iter().map(|t| t.phi.clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Staircase of smooth monomials per `(φ, β)`.
    pub fn staircases(&self) -> BTreeMap<(ExponentialPart, ExactScalar), Staircase> {
        let mut pts: BTreeMap<(ExponentialPart, ExactScalar), Vec<(u32, u32)>> = BTreeMap::new();
        for t in &self.terms {
            pts.entry((t.phi.clone(), t.beta.clone()))
                .or_default()
                .extend(t.smooth_monomials());
        }
        pts.into_iter().map(|(k, v)| (k, Staircase::new(v))).collect()
    }

    /// `Σ g e^{φ-φ̄} |y|^{2β} L^{lMax}` over the skeleton entries.
    pub fn from_skeleton(s: &ExpansionSkeleton, g: &FourierTaylor) -> Self {
        let terms = s
            .entries
            .iter()
            .map(|e| ModelTerm::new(e.phi.clone(), e.beta.clone(), e.l_max).with_g(g.clone()))
            .collect();
        Self { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conj_is_pointwise_conjugate() {
        let phi = ExponentialPart::monomial(1, ExactScalar::new(crate::scalar::rat(1, 2), crate::scalar::rat(1, 3)));
        let t = ModelTerm::new(phi, ExactScalar::new(crate::scalar::rat(3, 10), crate::scalar::rat(1, 5)), 2)
            .with_g(monomials([((1, 0), Complex64::new(1.0, 2.0)), ((0, 2), Complex64::new(-0.5, 0.0))]))
            .with_gauss();
        let y = Complex64::new(0.3, -0.2);
        assert!((t.conj().eval(y) - t.eval(y).conj()).norm() < 1e-12);
    }

    #[test]
    fn order_and_staircase() {
        let v = ModelDistribution::power_log(ExactScalar::from_frac(-2, 5), 1)
            .add(&ModelDistribution::single(
                ModelTerm::new(ExponentialPart::zero(), ExactScalar::zero(), 2)
                    .with_g(monomials([((1, 0), Complex64::new(1.0, 0.0)), ((0, 1), Complex64::new(1.0, 0.0))])),
            ));
        assert_eq!(v.order(), 1);
        let st = &v.staircases()[&(ExponentialPart::zero(), ExactScalar::zero())];
        assert_eq!(st.points, vec![(0, 1), (1, 0)]);
    }
}
