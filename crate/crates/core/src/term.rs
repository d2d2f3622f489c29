//! Symbolic terms `c · e^{φ-φ̄} y^{β'} ȳ^{β''} (log y)^j (log ȳ)^k` and the
//! exact action of a holomorphic operator on them.
//!
//! Under `∂_y` the antiholomorphic factors are constants and
//! `∂_y e^{φ-φ̄} = φ' e^{φ-φ̄}`, so a term is closed under the action up to
//! integer shifts of `β'`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponential::ExponentialPart;
use crate::laurent::Var;
use crate::operator::DiffOp;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicTerm {
    pub var: Var,
    pub phi: ExponentialPart,
    pub beta_hol: ExactScalar,
    pub beta_anti: ExactScalar,
    pub j_log: u32,
    pub k_log: u32,
    pub coeff: ExactScalar,
}

type TermKey = (ExponentialPart, ExactScalar, ExactScalar, u32, u32);

impl SymbolicTerm {
    /// `c · v^β (log v)^j` with no exponential or antiholomorphic factor.
    pub fn power_log(var: Var, beta: ExactScalar, j: u32, coeff: ExactScalar) -> Self {
        Self {
            var,
            phi: ExponentialPart::zero(),
            beta_hol: beta,
            beta_anti: ExactScalar::zero(),
            j_log: j,
            k_log: 0,
            coeff,
        }
    }

    pub fn with_phi(mut self, phi: ExponentialPart) -> Self {
        self.phi = phi;
        self
    }

    fn key(&self) -> TermKey {
        (
            self.phi.clone(),
            self.beta_hol.clone(),
            self.beta_anti.clone(),
            self.j_log,
            self.k_log,
        )
    }

    fn from_key(var: Var, k: TermKey, coeff: ExactScalar) -> Self {
        Self {
            var,
            phi: k.0,
            beta_hol: k.1,
            beta_anti: k.2,
            j_log: k.3,
            k_log: k.4,
            coeff,
        }
    }

    /// Numeric value at `y ≠ 0` on the principal branch `arg y ∈ (-π, π]`.
    pub fn eval(&self, y: Complex64) -> Complex64 {
        let log_y = y.ln();
        let log_ybar = log_y.conj();
        let phi = self.phi.eval(y);
        let exp_part = (phi - phi.conj()).exp();
        self.coeff.to_c64()
            * exp_part
            * (self.beta_hol.to_c64() * log_y).exp()
            * (self.beta_anti.to_c64() * log_ybar).exp()
            * log_y.powu(self.j_log)
            * log_ybar.powu(self.k_log)
    }
}

/// Sums like terms and drops zeros; output sorted by key.
pub fn collect_terms(var: Var, terms: impl IntoIterator<Item = SymbolicTerm>) -> Vec<SymbolicTerm> {
    let mut acc: BTreeMap<TermKey, ExactScalar> = BTreeMap::new();
    for t in terms {
        *acc.entry(t.key()).or_default() += &t.coeff;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| SymbolicTerm::from_key(var, k, c))
        .collect()
}

fn theta_once(t: &SymbolicTerm) -> Vec<SymbolicTerm> {
    let mut out = Vec::new();
    for (e, c) in t.phi.euler_derivative().terms() {
        let mut s = t.clone();
        s.beta_hol = &s.beta_hol + &ExactScalar::from_int(e);
        s.coeff = &s.coeff * c;
        out.push(s);
    }
    if !t.beta_hol.is_zero() {
        let mut s = t.clone();
        s.coeff = &s.coeff * &t.beta_hol;
        out.push(s);
    }
    if t.j_log > 0 {
        let mut s = t.clone();
        s.coeff = &s.coeff * &ExactScalar::from_int(t.j_log as i64);
        s.j_log -= 1;
        out.push(s);
    }
    out
}

/// Exact result of applying `op` to `t`. The empty list is zero.
pub fn apply_to_term(op: &DiffOp, t: &SymbolicTerm) -> Result<Vec<SymbolicTerm>> {
    apply_to_sum(op, std::slice::from_ref(t))
}

pub fn apply_to_sum(op: &DiffOp, terms: &[SymbolicTerm]) -> Result<Vec<SymbolicTerm>> {
    let var = op.var();
    if let Some(t) = terms.iter().find(|t| t.var != var) {
        return Err(Error::Invalid(format!(
            "operator in {var} applied to a term in {}",
            t.var
        )));
    }
    let op = op.to_theta();
    let mut power = collect_terms(var, terms.iter().cloned());
    let mut result = Vec::new();
    for (i, a) in op.coeffs().iter().enumerate() {
        if i > 0 {
            power = collect_terms(var, power.iter().flat_map(theta_once));
        }
        for (k, c) in a.terms() {
            for s in &power {
                let mut s = s.clone();
                s.beta_hol = &s.beta_hol + &ExactScalar::from_int(k);
                s.coeff = &s.coeff * c;
                result.push(s);
            }
        }
    }
    Ok(collect_terms(var, result))
}
