//! Exponential parts `φ ∈ y⁻¹C[y⁻¹]`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::ExactScalar;

/// Polynomial in `y⁻¹` without constant term.
///
/// Ordering is lexicographic on the coefficient list, which is the canonical
/// order used whenever parts of a model are listed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExponentialPart {
    poly: LaurentPoly,
}

impl ExponentialPart {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(poly: LaurentPoly) -> Result<Self> {
        if let Some(d) = poly.degree() {
            if d >= 0 {
                return Err(Error::Invalid(format!(
                    "exponential part must only contain negative powers, found exponent {d}"
                )));
            }
        }
        Ok(Self { poly })
    }

    /// `c · y^{-order}`.
    pub fn monomial(order: u32, c: ExactScalar) -> Self {
        assert!(order >= 1, "exponential part needs a pole");
        Self {
            poly: LaurentPoly::monomial(-(order as i64), c),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, ExactScalar)>>(terms: I) -> Result<Self> {
        Self::new(LaurentPoly::from_terms(terms))
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    /// Pole order `-min exponent`; zero for `φ = 0`.
    pub fn pole_order(&self) -> u32 {
        self.poly.valuation().map_or(0, |v| (-v) as u32)
    }

    /// `y φ'(y)`.
    pub fn euler_derivative(&self) -> LaurentPoly {
        self.poly.euler_derivative()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            poly: self.poly.add(&o.poly),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            poly: self.poly.scale(&ExactScalar::from_int(-1)),
        }
    }

    /// Coefficientwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            poly: LaurentPoly::from_terms(self.poly.terms().map(|(k, c)| (k, c.conj()))),
        }
    }

    /// Substitution `y ↦ y^q`, used when a model is ramified further.
    pub fn ramify(&self, q: u32) -> Self {
        Self {
            poly: self.poly.substitute_power(q as i64),
        }
    }

    /// Pullback under the deck transformation `y ↦ ζ y`, `ζ = e^{2πi·k/q}`.
    ///
    /// Only defined when every `ζ^e` stays in `Q(i)`.
    pub fn galois(&self, k: u32, q: u32) -> Result<Self> {
        let mut terms = Vec::new();
        for (e, c) in self.poly.terms() {
            let turns = (k as i64 * e).rem_euclid(q as i64);
            // ζ^e = i^(4·turns/q)
            if (4 * turns) % q as i64 != 0 {
                return Err(Error::UnsupportedField(format!(
                    "deck transformation of order {q} acting on y^{e}"
                )));
            }
            let unit = match (4 * turns / q as i64) % 4 {
                0 => ExactScalar::one(),
                1 => ExactScalar::i(),
                2 => ExactScalar::from_int(-1),
                _ => -ExactScalar::i(),
            };
            terms.push((e, c * &unit));
        }
        Self::from_terms(terms)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactScalar)> {
        self.poly.terms()
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        self.poly
            .terms()
            .map(|(e, c)| c.to_c64() * y.powi(e as i32))
            .sum()
    }

    /// `(exponent, coefficient)` pairs when `φ = c y^{-r}` is a single monomial.
    pub fn as_monomial(&self) -> Option<(u32, Complex64)> {
        let mut it = self.poly.terms();
        let (e, c) = it.next()?;
        if it.next().is_some() {
            return None;
        }
        Some(((-e) as u32, c.to_c64()))
    }
}

impl fmt::Display for ExponentialPart {
    /// Written in the distribution grammar, e.g. `2/y^3 - i/y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .poly
            .terms()
            .map(|(e, c)| {
                let den = if e == -1 { "y".to_string() } else { format!("y^{}", -e) };
                format!("({c})/{den}")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for ExponentialPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_constant_term() {
        assert!(ExponentialPart::from_terms([(0, ExactScalar::one())]).is_err());
    }

    #[test]
    fn galois_action_of_order_two_flips_odd_poles() {
        let phi = ExponentialPart::from_terms([(-1, 1.into()), (-2, 3.into())]).unwrap();
        let g = phi.galois(1, 2).unwrap();
        assert_eq!(g.poly().coeff(-1), ExactScalar::from_int(-1));
        assert_eq!(g.poly().coeff(-2), ExactScalar::from_int(3));
        assert!(ExponentialPart::monomial(1, 1.into()).galois(1, 3).is_err());
        assert_eq!(
            ExponentialPart::monomial(1, 1.into()).galois(1, 4).unwrap(),
            ExponentialPart::monomial(1, -ExactScalar::i())
        );
    }
}
