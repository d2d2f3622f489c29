//! Laurent polynomials over the Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::ExactScalar;

/// Coordinate tag. `x` is the base coordinate, `y` the ramified one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
        })
    }
}

/// Finite sum `Σ c_k v^k`, `k ∈ Z`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, ExactScalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: ExactScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, &c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, ExactScalar)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, &c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> ExactScalar {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactScalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&ExactScalar::from_int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a + b, &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k, v * c)))
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// `v · d/dv` applied to the polynomial.
    pub fn euler_derivative(&self) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * &ExactScalar::from_int(k))))
    }

    /// Substitution `v ↦ v^q`.
    pub fn substitute_power(&self, q: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * q, c.clone())).collect(),
        }
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|(k, c)| format!("({c})v^{k}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = LaurentPoly::monomial(2, ExactScalar::from_int(3));
        p.add_term(2, &ExactScalar::from_int(-3));
        assert!(p.is_zero());
        assert_eq!(p.valuation(), None);
    }

    #[test]
    fn product_and_valuation() {
        let a = LaurentPoly::from_terms([(-1, 1.into()), (1, 2.into())]);
        let b = LaurentPoly::from_terms([(-2, 1.into()), (0, ExactScalar::from_int(-1))]);
        let c = a.mul(&b);
        assert_eq!(c.valuation(), Some(-3));
        assert_eq!(c.coeff(-1), ExactScalar::from_int(1));
        assert_eq!(c.coeff(1), ExactScalar::from_int(-2));
    }
}
