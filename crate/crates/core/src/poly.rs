//! Dense univariate polynomials over `Q(i)` and an exact root finder.
//!
//! Roots are located numerically on the squarefree part, rationalized, and
//! then verified by exact evaluation and exact deflation. A residual factor of
//! degree two is solved with the quadratic formula when its discriminant has a
//! square root in `Q(i)`. Anything left over is reported as leaving the field.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// Coefficients from the constant term upwards. No trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<ExactScalar>,
}

const MAX_ROOT_DENOMINATOR: i64 = 1_000_000;

impl Poly {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `t - a`.
    pub fn linear_root(a: &ExactScalar) -> Self {
        Self::new(vec![-a, ExactScalar::one()])
    }

    pub fn monomial(deg: usize, c: ExactScalar) -> Self {
        let mut v = vec![ExactScalar::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> ExactScalar {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, t: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    pub fn eval_c64(&self, t: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c.to_c64())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![ExactScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        Self::new(v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(ExactScalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ExactScalar::from_int(k as i64))
                .collect(),
        )
    }

    /// `p(t + a)`.
    pub fn shift(&self, a: &ExactScalar) -> Self {
        let lin = Self::new(vec![a.clone(), ExactScalar::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `p(c·t)`.
    pub fn scale_variable(&self, c: &ExactScalar) -> Self {
        let mut pw = ExactScalar::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw = &pw * c;
        }
        Self::new(out)
    }

    /// Taylor coefficients `p^{(j)}(a)/j!` for `j = 0..=deg`.
    pub fn taylor_at(&self, a: &ExactScalar) -> Vec<ExactScalar> {
        self.shift(a).coeffs
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead_inv = d.leading().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![ExactScalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    rem[k + j] -= &t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().inv())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// All roots with multiplicities, sorted by real part then imaginary part.
    pub fn roots(&self) -> Result<Vec<(ExactScalar, usize)>> {
        if self.is_zero() {
            return Err(Error::Invalid("roots of the zero polynomial".into()));
        }
        let mut remaining = self.monic();
        let mut found: Vec<(ExactScalar, usize)> = Vec::new();
        // zero roots first
        let zeros = remaining.coeffs.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            remaining = Self::new(remaining.coeffs[zeros..].to_vec());
            found.push((ExactScalar::zero(), zeros));
        }
        while remaining.degree().unwrap_or(0) > 0 {
            let sqf = remaining.squarefree_part();
            let mut progressed = false;
            for z in numeric_roots(&sqf) {
                let Some(cand) = ExactScalar::approximate(z, MAX_ROOT_DENOMINATOR) else {
                    continue;
                };
                if remaining.eval(&cand).is_zero() {
                    let m = remaining.deflate(&cand);
                    push_root(&mut found, cand, m);
                    progressed = true;
                }
            }
            if progressed {
                continue;
            }
            if remaining.degree() == Some(2) || sqf.degree() == Some(2) {
                let quad = if sqf.degree() == Some(2) { sqf.clone() } else { remaining.clone() };
                if let Some((r1, r2)) = quad.quadratic_roots() {
                    for r in [r1, r2] {
                        if remaining.eval(&r).is_zero() {
                            let m = remaining.deflate(&r);
                            push_root(&mut found, r, m);
                            progressed = true;
                        }
                    }
                }
            }
            if !progressed {
                return Err(Error::UnsupportedField(format!(
                    "polynomial factor {remaining:?} has roots outside Q(i)"
                )));
            }
        }
        found.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(found)
    }

    /// Removes every factor `(t - r)` and returns how many were removed.
    fn deflate(&mut self, r: &ExactScalar) -> usize {
        let lin = Self::linear_root(r);
        let mut m = 0;
        loop {
            let (q, rem) = self.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            *self = q;
            m += 1;
        }
        m
    }

    fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    fn quadratic_roots(&self) -> Option<(ExactScalar, ExactScalar)> {
        let (c, b, a) = (self.coeff(0), self.coeff(1), self.coeff(2));
        let disc = &(&b * &b) - &(&ExactScalar::from_int(4) * &(&a * &c));
        let sq = disc.sqrt()?;
        let two_a = &ExactScalar::from_int(2) * &a;
        Some((&(&-&b + &sq) / &two_a, &(&-&b - &sq) / &two_a))
    }
}

fn push_root(found: &mut Vec<(ExactScalar, usize)>, r: ExactScalar, m: usize) {
    if m == 0 {
        return;
    }
    if let Some(slot) = found.iter_mut().find(|(x, _)| *x == r) {
        slot.1 += m;
    } else {
        found.push((r, m));
    }
}

/// Durand–Kerner iteration followed by Newton polishing.
fn numeric_roots(p: &Poly) -> Vec<Complex64> {
    let n = match p.degree() {
        Some(d) if d > 0 => d,
        _ => return Vec::new(),
    };
    let coeffs: Vec<Complex64> = p.monic().coeffs.iter().map(|c| c.to_c64()).collect();
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |a, c| a * z + c);
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound.min(4.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let deriv: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    let eval_d = |w: Complex64| deriv.iter().rev().fold(Complex64::new(0.0, 0.0), |a, c| a * w + c);
    for w in z.iter_mut() {
        for _ in 0..5 {
            let d = eval_d(*w);
            if d.norm() == 0.0 {
                break;
            }
            *w -= eval(*w) / d;
        }
    }
    z
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})t^{k}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
