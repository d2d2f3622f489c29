//! Rewriting `e^{φ-φ̄} y^{β'} ȳ^{β''} (log y)^j (log ȳ)^k` as a sum of
//! `|y|^{2β} L^ℓ` times functions of the angle, with `L = -log|y|²`.
//!
//! On `0 < |y| < 1` with `y = ρe^{iθ}`, `θ ∈ (-π, π]`:
//! `log y = -L/2 + iθ`, `log ȳ = -L/2 - iθ` and
//! `y^{β'} ȳ^{β''} = |y|^{2β} e^{i(β'-β'')θ}` with `β = (β'+β'')/2`.

use num_complex::Complex64;

use crate::exponential::ExponentialPart;
use crate::scalar::ExactScalar;
use crate::term::SymbolicTerm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarTerm {
    pub phi: ExponentialPart,
    pub beta: ExactScalar,
    pub l: u32,
    /// Frequency `β' - β''` of the factor `e^{i(β'-β'')θ}`.
    pub frequency: ExactScalar,
    /// Coefficients of the polynomial in `θ`, constant first.
    pub angular: Vec<ExactScalar>,
}

impl PolarTerm {
    pub fn eval(&self, y: Complex64) -> Complex64 {
        let (rho, theta) = y.to_polar();
        let big_l = -2.0 * rho.ln();
        let phi = self.phi.eval(y);
        let poly: Complex64 = self
            .angular
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * theta + c.to_c64());
        (phi - phi.conj()).exp()
            * (2.0 * self.beta.to_c64() * rho.ln()).exp()
            * big_l.powi(self.l as i32)
            * (Complex64::i() * self.frequency.to_c64() * theta).exp()
            * poly
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// One output term per power of `L`, ordered by `ℓ`.
pub fn rewrite_polar_term(t: &SymbolicTerm) -> Vec<PolarTerm> {
    let beta = &(&t.beta_hol + &t.beta_anti) * &ExactScalar::from_frac(1, 2);
    let frequency = &t.beta_hol - &t.beta_anti;
    let (j, k) = (t.j_log, t.k_log);
    let max_l = (j + k) as usize;
    let mut by_l: Vec<Vec<ExactScalar>> = vec![vec![ExactScalar::zero(); max_l + 1]; max_l + 1];
    let i = ExactScalar::i();
    let minus_i = -ExactScalar::i();
    let minus_half = ExactScalar::from_frac(-1, 2);
    for a in 0..=j {
        for b in 0..=k {
            let l = (j - a + k - b) as usize;
            let c = &(&ExactScalar::from_int(binomial(j, a) * binomial(k, b)) * &minus_half.pow(l as u32))
                * &(&i.pow(a) * &minus_i.pow(b));
            by_l[l][(a + b) as usize] += &(&c * &t.coeff);
        }
    }
    by_l.into_iter()
        .enumerate()
        .filter_map(|(l, mut angular)| {
            while angular.last().is_some_and(|c| c.is_zero()) {
                angular.pop();
            }
            (!angular.is_empty()).then(|| PolarTerm {
                phi: t.phi.clone(),
                beta: beta.clone(),
                l: l as u32,
                frequency: frequency.clone(),
                angular,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Var;

    fn term(bh: ExactScalar, ba: ExactScalar, j: u32, k: u32) -> SymbolicTerm {
        SymbolicTerm {
            var: Var::Y,
            phi: ExponentialPart::zero(),
            beta_hol: bh,
            beta_anti: ba,
            j_log: j,
            k_log: k,
            coeff: ExactScalar::one(),
        }
    }

    #[test]
    fn plain_power() {
        let out = rewrite_polar_term(&term(ExactScalar::one(), ExactScalar::zero(), 0, 0));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].beta, ExactScalar::from_frac(1, 2));
        assert_eq!(out[0].l, 0);
        assert_eq!(out[0].frequency, ExactScalar::one());
        assert_eq!(out[0].angular, vec![ExactScalar::one()]);
    }

    #[test]
    fn product_of_logs() {
        let out = rewrite_polar_term(&term(ExactScalar::zero(), ExactScalar::zero(), 1, 1));
        assert_eq!(out.len(), 2);
        let z = ExactScalar::zero();
        assert_eq!((out[0].l, out[0].angular.clone()), (0, vec![z.clone(), z, ExactScalar::one()]));
        assert_eq!((out[1].l, out[1].angular.clone()), (2, vec![ExactScalar::from_frac(1, 4)]));
    }

    #[test]
    fn single_log() {
        let out = rewrite_polar_term(&term(ExactScalar::zero(), ExactScalar::zero(), 1, 0));
        assert_eq!(out[0].angular, vec![ExactScalar::zero(), ExactScalar::i()]);
        assert_eq!((out[1].l, out[1].angular.clone()), (1, vec![ExactScalar::from_frac(-1, 2)]));
    }
}
