//! Linear differential operators with Laurent-polynomial coefficients.
//!
//! An operator is `Σ a_i(v) ∂^i` (D-form) or `Σ a_i(v) θ^i` (θ-form, with
//! `θ = v∂` the Euler operator). Coefficients always sit on the left. The
//! θ-form is canonical; every algebraic operation returns θ-form.
//!
//! Internally the θ-form is often viewed "graded": `Σ_k v^k p_k(θ)`. The two
//! views are transposes of each other and composition is
//! `(v^a p(θ))(v^b q(θ)) = v^{a+b} p(θ+b) q(θ)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exponential::ExponentialPart;
use crate::laurent::{LaurentPoly, Var};
use crate::poly::Poly;
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    D,
    Theta,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOp {
    var: Var,
    form: Form,
    coeffs: Vec<LaurentPoly>,
}

/// Stirling numbers of the second kind `S(n, k)` for `k ≤ n ≤ max`.
fn stirling2(max: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; max + 1]; max + 1];
    s[0][0] = 1;
    for n in 1..=max {
        for k in 1..=n {
            s[n][k] = k as i64 * s[n - 1][k] + s[n - 1][k - 1];
        }
    }
    s
}

/// `t(t-1)…(t-i+1)`.
fn falling_factorial(i: usize) -> Poly {
    (0..i).fold(Poly::constant(ExactScalar::one()), |p, j| {
        p.mul(&Poly::linear_root(&ExactScalar::from_int(j as i64)))
    })
}

impl DiffOp {
    pub fn new(var: Var, form: Form, mut coeffs: Vec<LaurentPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { var, form, coeffs }
    }

    pub fn zero(var: Var) -> Self {
        Self::new(var, Form::Theta, Vec::new())
    }

    pub fn constant(var: Var, c: ExactScalar) -> Self {
        Self::new(var, Form::Theta, vec![LaurentPoly::constant(c)])
    }

    /// Multiplication by `c · v^k`.
    pub fn multiplication(var: Var, k: i64, c: ExactScalar) -> Self {
        Self::new(var, Form::Theta, vec![LaurentPoly::monomial(k, c)])
    }

    /// The Euler operator `θ = v∂`.
    pub fn theta(var: Var) -> Self {
        Self::new(
            var,
            Form::Theta,
            vec![LaurentPoly::zero(), LaurentPoly::constant(ExactScalar::one())],
        )
    }

    /// `∂`, stored in D-form.
    pub fn derivation(var: Var) -> Self {
        Self::new(
            var,
            Form::D,
            vec![LaurentPoly::zero(), LaurentPoly::constant(ExactScalar::one())],
        )
    }

    pub fn from_theta_poly(var: Var, p: &Poly) -> Self {
        Self::new(
            var,
            Form::Theta,
            p.coeffs().iter().cloned().map(LaurentPoly::constant).collect(),
        )
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    /// Rewrites the operator in the requested form; the result acts
    /// identically on every function.
    pub fn convert_form(&self, target: Form) -> DiffOp {
        match (self.form, target) {
            (a, b) if a == b => self.clone(),
            (Form::D, Form::Theta) => {
                // ∂^i = v^{-i} θ(θ-1)…(θ-i+1)
                let mut out = vec![LaurentPoly::zero(); self.coeffs.len()];
                for (i, a) in self.coeffs.iter().enumerate() {
                    let shifted = a.shift(-(i as i64));
                    for (j, c) in falling_factorial(i).coeffs().iter().enumerate() {
                        out[j] = out[j].add(&shifted.scale(c));
                    }
                }
                DiffOp::new(self.var, Form::Theta, out)
            }
            (Form::Theta, Form::D) => {
                // θ^i = Σ_k S(i,k) v^k ∂^k
                let s = stirling2(self.coeffs.len());
                let mut out = vec![LaurentPoly::zero(); self.coeffs.len()];
                for (i, a) in self.coeffs.iter().enumerate() {
                    for k in 0..=i {
                        if s[i][k] != 0 {
                            out[k] = out[k].add(&a.shift(k as i64).scale(&ExactScalar::from_int(s[i][k])));
                        }
                    }
                }
                DiffOp::new(self.var, Form::D, out)
            }
            _ => unreachable!(),
        }
    }

    pub fn to_theta(&self) -> DiffOp {
        self.convert_form(Form::Theta)
    }

    /// Left multiplication by the smallest power `v^m` making every
    /// coefficient a polynomial. Kernel is unchanged; `m` is returned.
    pub fn clear_denominators(&self) -> (DiffOp, i64) {
        let min_val = self
            .coeffs
            .iter()
            .filter_map(|c| c.valuation())
            .min()
            .unwrap_or(0);
        let m = (-min_val).max(0);
        let coeffs = self.coeffs.iter().map(|c| c.shift(m)).collect();
        (DiffOp::new(self.var, self.form, coeffs), m)
    }

    /// `Σ_k v^k p_k(θ)`.
    pub fn graded(&self) -> BTreeMap<i64, Poly> {
        let t = self.to_theta();
        let mut raw: BTreeMap<i64, Vec<ExactScalar>> = BTreeMap::new();
        for (i, a) in t.coeffs.iter().enumerate() {
            for (k, c) in a.terms() {
                let slot = raw.entry(k).or_insert_with(|| vec![ExactScalar::zero(); t.coeffs.len()]);
                slot[i] = c.clone();
            }
        }
        raw.into_iter()
            .map(|(k, v)| (k, Poly::new(v)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    pub fn from_graded(var: Var, graded: &BTreeMap<i64, Poly>) -> DiffOp {
        let n = graded.values().filter_map(|p| p.degree()).max().map_or(0, |d| d + 1);
        let mut coeffs = vec![LaurentPoly::zero(); n];
        for (k, p) in graded {
            for (i, c) in p.coeffs().iter().enumerate() {
                coeffs[i].add_term(*k, c);
            }
        }
        DiffOp::new(var, Form::Theta, coeffs)
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let (a, b) = (self.to_theta(), o.to_theta());
        let n = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).cloned().unwrap_or_default();
                let y = b.coeffs.get(i).cloned().unwrap_or_default();
                x.add(&y)
            })
            .collect();
        DiffOp::new(self.var, Form::Theta, coeffs)
    }

    pub fn scale(&self, c: &ExactScalar) -> DiffOp {
        let coeffs = self.coeffs.iter().map(|a| a.scale(c)).collect();
        DiffOp::new(self.var, self.form, coeffs)
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        self.add(&o.scale(&ExactScalar::from_int(-1)))
    }

    /// Composition `self ∘ o`.
    pub fn compose(&self, o: &DiffOp) -> DiffOp {
        let (ga, gb) = (self.graded(), o.graded());
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (a, p) in &ga {
            for (b, q) in &gb {
                let term = p.shift(&ExactScalar::from_int(*b)).mul(q);
                let slot = out.entry(a + b).or_default();
                *slot = slot.add(&term);
            }
        }
        out.retain(|_, p| !p.is_zero());
        DiffOp::from_graded(self.var, &out)
    }

    pub fn pow(&self, e: u32) -> DiffOp {
        (0..e).fold(DiffOp::constant(self.var, ExactScalar::one()), |acc, _| acc.compose(self))
    }

    /// Pullback along `x = y^q`: `θ_x ↦ θ_y / q`, `x^k ↦ y^{qk}`.
    pub fn ramify(&self, q: u32) -> DiffOp {
        assert!(q >= 1, "ramification index must be positive");
        let inv_q = ExactScalar::from_frac(1, q as i64);
        let graded: BTreeMap<i64, Poly> = self
            .graded()
            .into_iter()
            .map(|(k, p)| (k * q as i64, p.scale_variable(&inv_q)))
            .collect();
        DiffOp::from_graded(Var::Y, &graded)
    }

    /// Conjugation `e^{-φ} ∘ P ∘ e^{φ}`, i.e. `θ ↦ θ + vφ'(v)`.
    pub fn twist(&self, phi: &ExponentialPart) -> DiffOp {
        if phi.is_zero() {
            return self.to_theta();
        }
        let shift = DiffOp::new(self.var, Form::Theta, vec![phi.euler_derivative()]);
        let big_theta = DiffOp::theta(self.var).add(&shift);
        let mut out = DiffOp::zero(self.var);
        for (k, p) in self.graded() {
            // Horner in the non-commuting variable Θ
            let mut acc = DiffOp::zero(self.var);
            for c in p.coeffs().iter().rev() {
                acc = acc.compose(&big_theta).add(&DiffOp::constant(self.var, c.clone()));
            }
            out = out.add(&DiffOp::multiplication(self.var, k, ExactScalar::one()).compose(&acc));
        }
        out
    }

    /// Valuations `(i, val a_i)` of the θ-form coefficients.
    pub fn valuation_points(&self) -> Vec<(usize, i64)> {
        self.to_theta()
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.valuation().map(|v| (i, v)))
            .collect()
    }

    /// Coefficient of the lowest power of the variable, as a polynomial in θ.
    pub fn lowest_theta_polynomial(&self) -> (i64, Poly) {
        self.graded()
            .into_iter()
            .next()
            .unwrap_or((0, Poly::zero()))
    }

    /// Indicial polynomial of a regular singular operator.
    pub fn indicial_polynomial(&self) -> Result<Poly> {
        let np = crate::newton::NewtonPolygon::of(self);
        if let Some((slope, _)) = np.slopes.iter().find(|(s, _)| !s.is_zero()) {
            return Err(Error::IrregularOperator {
                slope: crate::scalar::fmt_rat(slope),
            });
        }
        Ok(self.lowest_theta_polynomial().1)
    }
}

impl fmt::Display for DiffOp {
    /// Operator grammar; θ-form operators print with `T`, D-form with `D`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.form {
            Form::Theta => "T",
            Form::D => "D",
        };
        let mut parts = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (k, c) in a.terms() {
                let mut factors = vec![format!("({c})")];
                if k != 0 {
                    factors.push(format!("{}^{}", self.var, k));
                }
                if i != 0 {
                    factors.push(format!("{sym}^{i}"));
                }
                parts.push(factors.join("*"));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp<{}>[{}]", self.var, self)
    }
}
