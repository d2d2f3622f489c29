//! Radial cutoffs `χ(ρ)`: `1` on `[0, a]`, `0` on `[b, ∞)`, monotone in between.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Cubic smoothstep, `C¹`; a polynomial on `[a, b]`.
    Smoothstep,
    /// `C^∞` bump built from `e^{-1/t}`.
    Exp,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialCutoff {
    pub a: f64,
    pub b: f64,
    pub profile: Profile,
}

impl RadialCutoff {
    pub fn new(a: f64, b: f64, profile: Profile) -> Result<Self> {
        if !(a > 0.0 && a < b && b <= 1.0) {
            return Err(Error::Invalid(format!("cutoff needs 0 < a < b <= 1, got a={a}, b={b}")));
        }
        Ok(Self { a, b, profile })
    }

    pub fn smoothstep(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, Profile::Smoothstep)
    }

    pub fn eval(&self, rho: f64) -> f64 {
        if rho <= self.a {
            return 1.0;
        }
        if rho >= self.b {
            return 0.0;
        }
        let t = (rho - self.a) / (self.b - self.a);
        match self.profile {
            Profile::Smoothstep => 1.0 - t * t * (3.0 - 2.0 * t),
            Profile::Exp => {
                let f = |x: f64| if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() };
                let (u, w) = (f(t), f(1.0 - t));
                w / (u + w)
            }
        }
    }
}

impl Default for RadialCutoff {
    fn default() -> Self {
        Self {
            a: 0.5,
            b: 1.0,
            profile: Profile::Smoothstep,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_support() {
        for p in [Profile::Smoothstep, Profile::Exp] {
            let c = RadialCutoff::new(0.4, 0.8, p).unwrap();
            assert_eq!(c.eval(0.1), 1.0);
            assert_eq!(c.eval(0.4), 1.0);
            assert_eq!(c.eval(0.8), 0.0);
            let mut last = 1.0;
            for i in 0..=100 {
                let v = c.eval(0.4 + 0.004 * i as f64);
                assert!(v <= last + 1e-15);
                last = v;
            }
        }
        assert!(RadialCutoff::smoothstep(0.5, 0.5).is_err());
    }
}
