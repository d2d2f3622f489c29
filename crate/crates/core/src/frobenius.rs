//! Formal solutions `y^ρ Σ_n y^n F_n(log y)` of the regular part of an
//! operator, by the Frobenius method.
//!
//! With `T = Σ_k y^{v+k} p_k(θ)` the coefficient of `y^{ρ+v+n}` in `T f` is
//! `Σ_{k+m=n} p_k(ρ+m+D) F_m`, where `D = d/d(log y)` acts on polynomials in
//! `log y`. Each step solves `p_0(γ+D) F_n = rhs` with `γ = ρ+n`. When `γ` is a
//! root of multiplicity `μ` of `p_0`, `p_0(γ+D) = D^μ U(D)` with `U(0) ≠ 0`
//! and `F_n` is obtained by inverting `U` and integrating `μ` times: this is
//! where new powers of `log y` appear.

use crate::error::{Error, Result};
use crate::exponential::ExponentialPart;
use crate::laurent::Var;
use crate::operator::DiffOp;
use crate::poly::Poly;
use crate::scalar::ExactScalar;
use crate::term::SymbolicTerm;

/// Polynomial in `log y`, constant term first.
pub type LogPoly = Vec<ExactScalar>;

fn trim(mut p: LogPoly) -> LogPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn log_derivative(p: &LogPoly) -> LogPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &ExactScalar::from_int(k as i64))
            .collect(),
    )
}

fn log_integral(p: &LogPoly) -> LogPoly {
    let mut out = vec![ExactScalar::zero()];
    for (k, c) in p.iter().enumerate() {
        out.push(c / &ExactScalar::from_int(k as i64 + 1));
    }
    trim(out)
}

fn add_into(acc: &mut LogPoly, p: &LogPoly, scale: &ExactScalar) {
    if acc.len() < p.len() {
        acc.resize(p.len(), ExactScalar::zero());
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += &(c * scale);
    }
}

/// `Σ_j taylor[j] D^j f`.
fn apply_taylor(taylor: &[ExactScalar], f: &LogPoly) -> LogPoly {
    let mut out = Vec::new();
    let mut d = f.clone();
    for t in taylor {
        if d.is_empty() {
            break;
        }
        if !t.is_zero() {
            add_into(&mut out, &d, t);
        }
        d = log_derivative(&d);
    }
    trim(out)
}

/// Solves `p_0(γ+D) F = rhs` given the Taylor coefficients of `p_0` at `γ`
/// and the multiplicity `mu` of `γ` as a root.
fn solve_step(taylor: &[ExactScalar], mu: usize, rhs: &LogPoly) -> Result<LogPoly> {
    if rhs.is_empty() {
        return Ok(Vec::new());
    }
    let lead = taylor.get(mu).cloned().unwrap_or_default();
    if lead.is_zero() {
        return Err(Error::DegenerateLift {
            exponent: format!("multiplicity {mu}"),
            reason: "indicial polynomial vanishes to higher order than its root multiplicity".into(),
        });
    }
    // U(D) = lead · (1 + V(D))
    let v: Vec<ExactScalar> = std::iter::once(ExactScalar::zero())
        .chain(taylor.iter().skip(mu + 1).map(|t| t / &lead))
        .collect();
    let inv_lead = lead.inv();
    let mut h: LogPoly = rhs.iter().map(|c| c * &inv_lead).collect();
    let mut term = h.clone();
    // Neumann series, finite because V is nilpotent on bounded degree
    for _ in 0..=rhs.len() {
        term = apply_taylor(&v, &term)
            .into_iter()
            .map(|c| -c)
            .collect();
        if term.is_empty() {
            break;
        }
        add_into(&mut h, &term, &ExactScalar::one());
    }
    let mut f = trim(h);
    for _ in 0..mu {
        f = log_integral(&f);
    }
    Ok(f)
}

/// One formal solution `y^ρ Σ_{n<N} y^n F_n(log y)` (times `e^φ` when `φ ≠ 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSolution {
    pub phi: ExponentialPart,
    /// Indicial root the recursion starts from.
    pub exponent: ExactScalar,
    /// Initial power of `log y`.
    pub log_start: u32,
    pub coefficients: Vec<LogPoly>,
}

impl FormalSolution {
    /// Highest power of `log y` occurring in the truncated series.
    pub fn log_degree(&self) -> u32 {
        self.coefficients
            .iter()
            .map(|f| f.len().saturating_sub(1) as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn to_terms(&self, var: Var) -> Vec<SymbolicTerm> {
        let mut out = Vec::new();
        for (n, f) in self.coefficients.iter().enumerate() {
            for (k, c) in f.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                out.push(
                    SymbolicTerm::power_log(
                        var,
                        &self.exponent + &ExactScalar::from_int(n as i64),
                        k as u32,
                        c.clone(),
                    )
                    .with_phi(self.phi.clone()),
                );
            }
        }
        out
    }
}

/// Formal solutions of the regular part of `op`, tagged with `phi`.
///
/// Returns the solutions together with the valuation `v` of `op`, so that
/// `op` applied to a truncated solution starts at `y^{ρ+v+truncation}`.
pub fn regular_solutions(
    op: &DiffOp,
    phi: &ExponentialPart,
    truncation: usize,
) -> Result<(Vec<FormalSolution>, i64)> {
    let graded = op.graded();
    let Some((&vmin, p0)) = graded.iter().next() else {
        return Err(Error::Invalid("zero operator has no formal solutions".into()));
    };
    if p0.degree().unwrap_or(0) == 0 {
        return Ok((Vec::new(), vmin));
    }
    let roots = p0.roots()?;
    let shifted: Vec<(i64, &Poly)> = graded.iter().map(|(k, p)| (k - vmin, p)).collect();
    let mult = |g: &ExactScalar| -> usize {
        roots.iter().find(|(r, _)| r == g).map_or(0, |(_, m)| *m)
    };
    let mut out = Vec::new();
    for (rho, mu) in &roots {
        for j in 0..*mu {
            let mut coeffs: Vec<LogPoly> = Vec::with_capacity(truncation);
            let mut start = vec![ExactScalar::zero(); j + 1];
            start[j] = ExactScalar::one();
            coeffs.push(start);
            for n in 1..truncation {
                let gamma = rho + &ExactScalar::from_int(n as i64);
                let mut rhs: LogPoly = Vec::new();
                for &(k, pk) in shifted.iter().skip(1) {
                    if k as usize > n {
                        break;
                    }
                    let m = n - k as usize;
                    if coeffs[m].is_empty() {
                        continue;
                    }
                    let at = rho + &ExactScalar::from_int(m as i64);
                    let contrib = apply_taylor(&pk.taylor_at(&at), &coeffs[m]);
                    add_into(&mut rhs, &contrib, &ExactScalar::from_int(-1));
                }
                let rhs = trim(rhs);
                let step = solve_step(&p0.taylor_at(&gamma), mult(&gamma), &rhs)?;
                coeffs.push(step);
            }
            out.push(FormalSolution {
                phi: phi.clone(),
                exponent: rho.clone(),
                log_start: j as u32,
                coefficients: coeffs,
            });
        }
    }
    Ok((out, vmin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::apply_to_sum;

    fn theta() -> DiffOp {
        DiffOp::theta(Var::Y)
    }

    fn y() -> DiffOp {
        DiffOp::multiplication(Var::Y, 1, ExactScalar::one())
    }

    #[test]
    fn double_root_gives_log_solution() {
        let (sols, _) = regular_solutions(&theta().pow(2), &ExponentialPart::zero(), 10).unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(sols.iter().map(|s| s.log_degree()).max(), Some(1));
    }

    #[test]
    fn resonance_inserts_log() {
        // θ(θ-1) - y: roots 0 and 1 differ by an integer and the recursion
        // from 0 hits the root 1 with a nonzero right-hand side
        let op = theta()
            .compose(&theta().sub(&DiffOp::constant(Var::Y, ExactScalar::one())))
            .sub(&y());
        let (sols, v) = regular_solutions(&op, &ExponentialPart::zero(), 12).unwrap();
        let from_zero = sols.iter().find(|s| s.exponent.is_zero()).unwrap();
        assert_eq!(from_zero.log_degree(), 1);
        let residual = apply_to_sum(&op, &from_zero.to_terms(Var::Y)).unwrap();
        assert!(residual
            .iter()
            .all(|t| t.beta_hol.re >= crate::scalar::rat_int(v + 12)));
    }

    #[test]
    fn generic_root_has_no_log() {
        let half = ExactScalar::from_frac(1, 2);
        let op = theta()
            .sub(&DiffOp::constant(Var::Y, half))
            .compose(&theta())
            .add(&y().compose(&theta()));
        let (sols, _) = regular_solutions(&op, &ExponentialPart::zero(), 8).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(sols.iter().all(|s| s.log_degree() == 0));
    }
}
