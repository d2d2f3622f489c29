//! Formal structure at the singular point: exponential parts after
//! ramification, the elementary model `⊕_φ E^φ ⊗ R_φ`, Galois descent and
//! nearby cycles.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exponential::ExponentialPart;
use crate::frobenius::{regular_solutions, FormalSolution};
use crate::laurent::{LaurentPoly, Var};
use crate::newton::NewtonPolygon;
use crate::operator::DiffOp;
use crate::poly::Poly;
use crate::scalar::{fmt_rat, ExactScalar};
use crate::term::apply_to_sum;

#[derive(Clone, Debug, PartialEq)]
pub struct FormalConfig {
    /// Largest ramification index tried.
    pub q_cap: u32,
    /// Largest pole order of an exponential part, in the ramified variable.
    pub pole_budget: u32,
    /// Number of series terms in formal solutions.
    pub truncation: usize,
}

impl Default for FormalConfig {
    fn default() -> Self {
        Self {
            q_cap: 24,
            pole_budget: 12,
            truncation: 40,
        }
    }
}

/// One `Z`-coset of exponents of a regular part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentEntry {
    /// Coset representative: the indicial root of smallest real part.
    pub beta: ExactScalar,
    /// Nilpotency order of `θ - β` on the coset.
    pub log_depth: u32,
    pub dim: u32,
    /// Jordan block sizes, decreasing.
    pub jordan: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RegularPartData {
    pub exponents: Vec<ExponentEntry>,
    pub rank: usize,
}

impl RegularPartData {
    /// Entry whose coset contains `beta`.
    pub fn entry(&self, beta: &ExactScalar) -> Option<&ExponentEntry> {
        self.exponents
            .iter()
            .find(|e| beta.integer_difference(&e.beta).is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryModel {
    pub q: u32,
    pub parts: BTreeMap<ExponentialPart, RegularPartData>,
}

impl ElementaryModel {
    pub fn total_rank(&self) -> usize {
        self.parts.values().map(|r| r.rank).sum()
    }

    pub fn to_json(&self) -> Value {
        let parts: Vec<Value> = self
            .parts
            .iter()
            .map(|(phi, r)| {
                json!({
                    "phi": phi_json(phi),
                    "exponents": r.exponents.iter().map(|e| json!([fmt_rat(&e.beta.re), fmt_rat(&e.beta.im), e.log_depth])).collect::<Vec<_>>(),
                    "rank": r.rank,
                    "jordan": r.exponents.iter().map(|e| json!(e.jordan)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "q": self.q, "parts": parts })
    }
}

pub fn phi_json(phi: &ExponentialPart) -> Value {
    Value::Array(
        phi.terms()
            .map(|(e, c)| json!([e, fmt_rat(&c.re), fmt_rat(&c.im)]))
            .collect(),
    )
}

pub fn newton_polygon(p: &DiffOp) -> NewtonPolygon {
    NewtonPolygon::of(p)
}

enum Split {
    Ramify(u32),
    Fail(Error),
}

impl From<Error> for Split {
    fn from(e: Error) -> Self {
        Split::Fail(e)
    }
}

/// Edge polynomial `Σ lc_i u^i` over the points of `op` on the line of slope `s`
/// through `start`.
fn edge_polynomial(op: &DiffOp, s: i64, start: (usize, i64)) -> Poly {
    let level = start.1 - s * start.0 as i64;
    let coeffs = op
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| a.coeff(level + s * i as i64))
        .collect();
    Poly::new(coeffs)
}

fn split(
    op: &DiffOp,
    prefix: &ExponentialPart,
    bound: Option<i64>,
    out: &mut Vec<(ExponentialPart, usize)>,
) -> std::result::Result<(), Split> {
    let np = NewtonPolygon::of(op);
    let regular = np.regular_length();
    if regular > 0 {
        out.push((prefix.clone(), regular));
    }
    for edge in np.edges.iter().filter(|e| e.slope.is_positive()) {
        if !edge.slope.is_integer() {
            return Err(Split::Ramify(edge.slope.denom().to_u32().unwrap_or(u32::MAX)));
        }
        let s = edge.slope.to_integer().to_i64().unwrap_or(i64::MAX);
        if bound.is_some_and(|b| s >= b) {
            continue;
        }
        let ep = edge_polynomial(op, s, edge.start);
        for (u, _) in ep.roots()? {
            if u.is_zero() {
                continue;
            }
            let c = -(&u / &ExactScalar::from_int(s));
            let step = ExponentialPart::monomial(s as u32, c);
            let child = op.twist(&step);
            split(&child, &prefix.add(&step), Some(s), out)?;
        }
    }
    Ok(())
}

/// Ramification index and exponential parts with the rank of each regular part.
fn exponential_parts_with_rank(
    p: &DiffOp,
    cfg: &FormalConfig,
) -> Result<(u32, DiffOp, Vec<(ExponentialPart, usize)>)> {
    if p.is_zero() {
        return Err(Error::Invalid("zero operator".into()));
    }
    let p = p.to_theta();
    let mut q = 1u32;
    loop {
        let pq = p.ramify(q);
        let irr = NewtonPolygon::of(&pq).irregularity();
        if irr > crate::scalar::rat_int(cfg.pole_budget as i64) {
            return Err(Error::NoConvergence(format!(
                "irregularity {} exceeds the pole-order budget {}",
                fmt_rat(&irr),
                cfg.pole_budget
            )));
        }
        let mut parts = Vec::new();
        match split(&pq, &ExponentialPart::zero(), None, &mut parts) {
            Ok(()) => {
                let total: usize = parts.iter().map(|(_, r)| r).sum();
                if total != p.order() {
                    return Err(Error::NoConvergence(format!(
                        "exponential parts account for rank {total} of order {}",
                        p.order()
                    )));
                }
                parts.sort();
                return Ok((q, pq, parts));
            }
            Err(Split::Ramify(d)) => {
                q = q.saturating_mul(d);
                if q > cfg.q_cap {
                    return Err(Error::NoConvergence(format!(
                        "ramification index {q} exceeds the cap {}",
                        cfg.q_cap
                    )));
                }
            }
            Err(Split::Fail(e)) => return Err(e),
        }
    }
}

/// Minimal ramification and the set of exponential parts, with regular
/// exponents left empty.
pub fn exponential_parts(p: &DiffOp, cfg: &FormalConfig) -> Result<ElementaryModel> {
    let (q, _, parts) = exponential_parts_with_rank(p, cfg)?;
    let parts = parts
        .into_iter()
        .map(|(phi, rank)| {
            (
                phi,
                RegularPartData {
                    exponents: Vec::new(),
                    rank,
                },
            )
        })
        .collect();
    Ok(ElementaryModel { q, parts })
}

/// Check that the ramified operator applied to `e^φ` times a truncated
/// solution only leaves terms beyond the truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub phi: ExponentialPart,
    pub exponent: ExactScalar,
    pub log_start: u32,
    /// Residual terms must have real exponent at least this.
    pub required_order: ExactScalar,
    /// Smallest real exponent among residual terms, `None` when it vanishes.
    pub residual_order: Option<ExactScalar>,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct FormalAnalysis {
    pub model: ElementaryModel,
    /// `P` pulled back along `x = y^q`.
    pub ramified: DiffOp,
    pub solutions: Vec<FormalSolution>,
    pub certificates: Vec<Certificate>,
}

impl FormalAnalysis {
    pub fn certified(&self) -> bool {
        self.certificates.iter().all(|c| c.ok)
    }
}

fn rank_exact(mut rows: Vec<Vec<ExactScalar>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv();
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] * &inv;
            for c in col..ncols {
                let d = &rows[rank][c] * &f;
                rows[r][c] -= &d;
            }
        }
        rank += 1;
    }
    rank
}

/// Jordan block sizes of `θ` on the span of solutions in one coset.
///
/// `dim ker N^k` is the dimension of the subspace of solutions without
/// `(log y)^{≥k}` terms, computed exactly from the series coefficients.
fn jordan_blocks(sols: &[&FormalSolution], rep: &ExactScalar) -> Vec<u32> {
    let dim = sols.len();
    let max_deg = sols.iter().map(|s| s.log_degree()).max().unwrap_or(0) as usize;
    let mut kernel = vec![0usize; max_deg + 2];
    for (k, slot) in kernel.iter_mut().enumerate().skip(1) {
        // rows: coefficients of y^{rep+n}(log y)^m with m ≥ k; columns: solutions
        let mut table: BTreeMap<(i64, usize), Vec<ExactScalar>> = BTreeMap::new();
        for (col, s) in sols.iter().enumerate() {
            let off = s.exponent.integer_difference(rep).unwrap_or(0);
            for (n, f) in s.coefficients.iter().enumerate() {
                for (m, c) in f.iter().enumerate().skip(k) {
                    if c.is_zero() {
                        continue;
                    }
                    let row = table
                        .entry((off + n as i64, m))
                        .or_insert_with(|| vec![ExactScalar::zero(); dim]);
                    row[col] = c.clone();
                }
            }
        }
        *slot = dim - rank_exact(table.into_values().collect());
    }
    let mut blocks = Vec::new();
    for k in (1..kernel.len()).rev() {
        let at_least_k = kernel[k] - kernel[k - 1];
        let at_least_k1 = if k + 1 < kernel.len() {
            kernel[k + 1] - kernel[k]
        } else {
            0
        };
        for _ in 0..(at_least_k - at_least_k1) {
            blocks.push(k as u32);
        }
    }
    blocks
}

fn regular_data(sols: &[FormalSolution]) -> RegularPartData {
    let mut sorted: Vec<&FormalSolution> = sols.iter().collect();
    sorted.sort_by(|a, b| a.exponent.cmp(&b.exponent));
    let mut cosets: Vec<(ExactScalar, Vec<&FormalSolution>)> = Vec::new();
    for s in sorted {
        match cosets
            .iter_mut()
            .find(|(rep, _)| s.exponent.integer_difference(rep).is_some())
        {
            Some((_, v)) => v.push(s),
            None => cosets.push((s.exponent.clone(), vec![s])),
        }
    }
    let exponents = cosets
        .into_iter()
        .map(|(rep, v)| {
            let jordan = jordan_blocks(&v, &rep);
            ExponentEntry {
                beta: rep,
                log_depth: jordan.first().copied().unwrap_or(1),
                dim: v.len() as u32,
                jordan,
            }
        })
        .collect();
    RegularPartData {
        exponents,
        rank: sols.len(),
    }
}

/// Full formal analysis: exponential parts, formal solution bases of the
/// twisted operators and their certification against the ramified operator.
pub fn analyze(p: &DiffOp, cfg: &FormalConfig) -> Result<FormalAnalysis> {
    let (q, ramified, parts) = exponential_parts_with_rank(p, cfg)?;
    let mut model = BTreeMap::new();
    let mut solutions = Vec::new();
    let mut certificates = Vec::new();
    for (phi, rank) in parts {
        let twisted = ramified.twist(&phi);
        let (sols, vmin) = regular_solutions(&twisted, &phi, cfg.truncation)?;
        if sols.len() != rank {
            return Err(Error::DegenerateLift {
                exponent: format!("{phi}"),
                reason: format!("found {} formal solutions for a part of rank {rank}", sols.len()),
            });
        }
        for s in &sols {
            let residual = apply_to_sum(&ramified, &s.to_terms(Var::Y))?;
            let required = crate::scalar::ExactScalar::real(
                &s.exponent.re + &crate::scalar::rat_int(vmin + cfg.truncation as i64),
            );
            let residual_order = residual
                .iter()
                .map(|t| ExactScalar::real(t.beta_hol.re.clone()))
                .min();
            let ok = residual_order.as_ref().is_none_or(|r| r.re >= required.re);
            certificates.push(Certificate {
                phi: phi.clone(),
                exponent: s.exponent.clone(),
                log_start: s.log_start,
                required_order: required,
                residual_order,
                ok,
            });
        }
        model.insert(phi, regular_data(&sols));
        solutions.extend(sols);
    }
    Ok(FormalAnalysis {
        model: ElementaryModel { q, parts: model },
        ramified,
        solutions,
        certificates,
    })
}

pub fn elementary_model(p: &DiffOp, cfg: &FormalConfig) -> Result<ElementaryModel> {
    Ok(analyze(p, cfg)?.model)
}

fn galois_orbit(phi: &ExponentialPart, q: u32) -> Result<Vec<ExponentialPart>> {
    let mut orbit = Vec::new();
    for k in 0..q {
        let g = phi.galois(k, q)?;
        if !orbit.contains(&g) {
            orbit.push(g);
        }
    }
    orbit.sort();
    Ok(orbit)
}

fn scale_exponent(beta: &ExactScalar, by: &ExactScalar) -> ExactScalar {
    beta * by
}

/// Invariants of a `Z/qZ`-stable model under `y ↦ ζ_q y`.
///
/// Exponents are divided by `q` and exponential parts are grouped into Galois
/// orbits. An orbit fixed pointwise only contains powers of `y^q` and is
/// rewritten in the quotient variable; a nontrivial orbit is represented by
/// its smallest element, still written in `y`, with rank multiplied by the
/// orbit size.
pub fn descend_model(n: &ElementaryModel, q: u32) -> Result<ElementaryModel> {
    if q == 0 || !n.q.is_multiple_of(q) {
        return Err(Error::Invalid(format!(
            "cannot descend a model ramified to order {} by {q}",
            n.q
        )));
    }
    if q == 1 {
        return Ok(n.clone());
    }
    let inv_q = ExactScalar::from_frac(1, q as i64);
    let mut parts = BTreeMap::new();
    let mut seen: Vec<ExponentialPart> = Vec::new();
    for (phi, data) in &n.parts {
        if seen.contains(phi) {
            continue;
        }
        let orbit = galois_orbit(phi, q)?;
        for g in &orbit {
            match n.parts.get(g) {
                Some(d) if d == data => {}
                _ => {
                    return Err(Error::NotGaloisStable {
                        q,
                        witness: format!("{g}"),
                    })
                }
            }
        }
        seen.extend(orbit.iter().cloned());
        let size = orbit.len();
        let rep = if size == 1 {
            let terms = phi.terms().map(|(e, c)| (e / q as i64, c.clone()));
            ExponentialPart::new(LaurentPoly::from_terms(terms))?
        } else {
            orbit[0].clone()
        };
        let mut exponents: Vec<ExponentEntry> = data
            .exponents
            .iter()
            .map(|e| ExponentEntry {
                beta: scale_exponent(&e.beta, &inv_q),
                log_depth: e.log_depth,
                dim: e.dim * size as u32,
                jordan: e
                    .jordan
                    .iter()
                    .flat_map(|&b| std::iter::repeat_n(b, size))
                    .collect(),
            })
            .collect();
        exponents.sort_by(|a, b| a.beta.cmp(&b.beta));
        parts.insert(
            rep,
            RegularPartData {
                exponents,
                rank: data.rank * size,
            },
        );
    }
    Ok(ElementaryModel { q: n.q / q, parts })
}

/// Pullback of a model along `z = y^q`. Every part is treated as living in
/// the quotient variable, so an orbit representative produced by
/// `descend_model` is not expanded back into its orbit.
pub fn lift_model(m: &ElementaryModel, q: u32) -> ElementaryModel {
    let by = ExactScalar::from_int(q as i64);
    let parts = m
        .parts
        .iter()
        .map(|(phi, d)| {
            (
                phi.ramify(q),
                RegularPartData {
                    exponents: d
                        .exponents
                        .iter()
                        .map(|e| ExponentEntry {
                            beta: scale_exponent(&e.beta, &by),
                            ..e.clone()
                        })
                        .collect(),
                    rank: d.rank,
                },
            )
        })
        .collect();
    ElementaryModel { q: m.q * q, parts }
}

/// Dimension and nilpotency order of `θ - β` on `ψ^β`; `(0, 0)` when the
/// coset of `β` carries no exponent.
pub fn nearby_cycles(r: &RegularPartData, beta: &ExactScalar) -> (u32, u32) {
    r.entry(beta).map_or((0, 0), |e| (e.dim, e.log_depth))
}

/// `β` reduced to the window `0 ≤ Re β < 1`.
pub fn reduce_exponent(beta: &ExactScalar) -> ExactScalar {
    let f = beta.re_floor();
    let shift = num_rational::BigRational::from_integer(f);
    ExactScalar::new(&beta.re - shift, beta.im.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x() -> DiffOp {
        DiffOp::multiplication(Var::X, 1, ExactScalar::one())
    }

    fn theta() -> DiffOp {
        DiffOp::theta(Var::X)
    }

    fn c(v: i64) -> DiffOp {
        DiffOp::constant(Var::X, ExactScalar::from_int(v))
    }

    fn half_slope() -> DiffOp {
        let d = DiffOp::derivation(Var::X);
        DiffOp::multiplication(Var::X, 3, 4.into())
            .compose(&d.pow(2))
            .add(&DiffOp::multiplication(Var::X, 2, 6.into()).compose(&d))
            .sub(&c(1))
    }

    fn cfg() -> FormalConfig {
        FormalConfig {
            truncation: 12,
            ..Default::default()
        }
    }

    #[test]
    fn first_order_irregular() {
        let p = x().compose(&x()).compose(&DiffOp::derivation(Var::X)).add(&c(1));
        let m = exponential_parts(&p, &cfg()).unwrap();
        assert_eq!(m.q, 1);
        let keys: Vec<_> = m.parts.keys().cloned().collect();
        assert_eq!(keys, vec![ExponentialPart::monomial(1, ExactScalar::one())]);
    }

    #[test]
    fn half_slope_needs_square_root() {
        let a = analyze(&half_slope(), &cfg()).unwrap();
        assert_eq!(a.model.q, 2);
        let keys: Vec<_> = a.model.parts.keys().cloned().collect();
        assert_eq!(keys.len(), 2);
        assert!(keys.contains(&ExponentialPart::monomial(1, ExactScalar::one())));
        assert!(keys.contains(&ExponentialPart::monomial(1, ExactScalar::from_int(-1))));
        for d in a.model.parts.values() {
            assert_eq!(d.rank, 1);
            assert_eq!(d.exponents[0].beta, ExactScalar::zero());
            assert_eq!(d.exponents[0].log_depth, 1);
        }
        assert!(a.certified());
    }

    #[test]
    fn regular_examples() {
        let m = elementary_model(&theta().pow(2), &cfg()).unwrap();
        let r = &m.parts[&ExponentialPart::zero()];
        assert_eq!(r.rank, 2);
        assert_eq!(r.exponents[0].log_depth, 2);
        assert_eq!(r.exponents[0].jordan, vec![2]);
        assert_eq!(nearby_cycles(r, &ExactScalar::from_int(5)), (2, 2));

        let half = DiffOp::constant(Var::X, ExactScalar::from_frac(1, 2));
        let p = theta().sub(&half).compose(&theta());
        let m = elementary_model(&p, &cfg()).unwrap();
        let r = &m.parts[&ExponentialPart::zero()];
        let betas: Vec<_> = r.exponents.iter().map(|e| (e.beta.clone(), e.log_depth)).collect();
        assert_eq!(betas, vec![(ExactScalar::zero(), 1), (ExactScalar::from_frac(1, 2), 1)]);
        assert_eq!(nearby_cycles(r, &ExactScalar::from_frac(1, 2)), (1, 1));
        assert_eq!(nearby_cycles(r, &ExactScalar::from_frac(1, 3)), (0, 0));
    }

    #[test]
    fn integer_spaced_roots_without_resonance_stay_semisimple() {
        // θ(θ-1): solutions 1 and x, no log
        let m = elementary_model(&theta().compose(&theta().sub(&c(1))), &cfg()).unwrap();
        let r = &m.parts[&ExponentialPart::zero()];
        assert_eq!(r.exponents.len(), 1);
        assert_eq!(r.exponents[0].jordan, vec![1, 1]);
        assert_eq!(r.exponents[0].log_depth, 1);
    }

    #[test]
    fn descent_groups_orbits() {
        let n = elementary_model(&half_slope(), &cfg()).unwrap();
        let m = descend_model(&n, 2).unwrap();
        assert_eq!(m.q, 1);
        assert_eq!(m.parts.len(), 1);
        let d = m.parts.values().next().unwrap();
        assert_eq!(d.rank, 2);
        assert_eq!(d.exponents[0].beta, ExactScalar::zero());
    }

    #[test]
    fn descent_divides_exponents() {
        let mut parts = BTreeMap::new();
        parts.insert(
            ExponentialPart::zero(),
            RegularPartData {
                exponents: vec![ExponentEntry {
                    beta: ExactScalar::one(),
                    log_depth: 1,
                    dim: 1,
                    jordan: vec![1],
                }],
                rank: 1,
            },
        );
        let n = ElementaryModel { q: 2, parts };
        let m = descend_model(&n, 2).unwrap();
        assert_eq!(m.parts[&ExponentialPart::zero()].exponents[0].beta, ExactScalar::from_frac(1, 2));
        assert_eq!(descend_model(&n, 1).unwrap(), n);
    }

    #[test]
    fn missing_orbit_element_is_reported() {
        let mut n = elementary_model(&half_slope(), &cfg()).unwrap();
        n.parts.remove(&ExponentialPart::monomial(1, ExactScalar::from_int(-1)));
        assert!(matches!(descend_model(&n, 2), Err(Error::NotGaloisStable { .. })));
    }

    #[test]
    fn reduce_exponent_window() {
        let b = ExactScalar::new(rat(-3, 2), rat(1, 1));
        assert_eq!(reduce_exponent(&b), ExactScalar::new(rat(1, 2), rat(1, 1)));
    }
}
