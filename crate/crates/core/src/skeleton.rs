//! Predicted shape of the asymptotic expansion of a distribution `v` at the
//! origin: the exponential parts, the exponent sets and the log orders,
//! assembled from a model of the holomorphic side and of the conjugate side.
//!
//! The conjugate side is the elementary model of an operator annihilating
//! `v̄`. A term `e^{φ-φ̄} y^{β'} ȳ^{β''}` of `v` appears in `v̄` with
//! holomorphic factor `e^{-φ} y^{conj β''}`, so that side is read back by
//! negating exponential parts and conjugating exponents.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::Result;
use crate::exponential::ExponentialPart;
use crate::formal::{analyze, phi_json, ElementaryModel, FormalAnalysis};
use crate::laurent::Var;
use crate::operator::DiffOp;
use crate::poly::Poly;
use crate::scalar::{fmt_rat, rat_int, ExactScalar};
use crate::term::{apply_to_sum, SymbolicTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Hol,
    Anti,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideData {
    pub side: Side,
    pub bsets: BTreeMap<ExponentialPart, Vec<ExactScalar>>,
    pub lorders: BTreeMap<(ExponentialPart, ExactScalar), u32>,
}

impl SideData {
    /// Log order of the coset of `beta` in part `phi`, zero when absent.
    pub fn lorder(&self, phi: &ExponentialPart, beta: &ExactScalar) -> u32 {
        self.bsets
            .get(phi)
            .and_then(|bs| bs.iter().find(|b| beta.integer_difference(b).is_some()))
            .and_then(|b| self.lorders.get(&(phi.clone(), b.clone())))
            .copied()
            .unwrap_or(0)
    }

    /// Element of `B_φ` in the coset of `beta`.
    pub fn representative(&self, phi: &ExponentialPart, beta: &ExactScalar) -> Option<&ExactScalar> {
        self.bsets
            .get(phi)?
            .iter()
            .find(|b| beta.integer_difference(b).is_some())
    }
}

pub fn side_data(model: &ElementaryModel, side: Side) -> SideData {
    let mut bsets = BTreeMap::new();
    let mut lorders = BTreeMap::new();
    for (phi, r) in &model.parts {
        let key = match side {
            Side::Hol => phi.clone(),
            Side::Anti => phi.neg(),
        };
        let mut betas = Vec::new();
        for e in &r.exponents {
            let beta = match side {
                Side::Hol => e.beta.clone(),
                Side::Anti => e.beta.conj(),
            };
            lorders.insert((key.clone(), beta.clone()), e.log_depth);
            betas.push(beta);
        }
        betas.sort();
        bsets.insert(key, betas);
    }
    SideData {
        side,
        bsets,
        lorders,
    }
}

/// `β' - β ∈ ℕ`.
fn in_shift_of(beta: &ExactScalar, upper: &ExactScalar) -> bool {
    upper.integer_difference(beta).is_some_and(|d| d >= 0)
}

/// `[(B' - ℕ) ∩ B''] ∪ [B' ∩ (B'' - ℕ)]`.
pub fn combine_betas(b1: &[ExactScalar], b2: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut out = BTreeSet::new();
    for b in b2 {
        if b1.iter().any(|a| in_shift_of(b, a)) {
            out.insert(b.clone());
        }
    }
    for a in b1 {
        if b2.iter().any(|b| in_shift_of(a, b)) {
            out.insert(a.clone());
        }
    }
    out.into_iter().collect()
}

/// `β ∈ B' ∪ B''` with `(β+ℕ) ∩ B' ≠ ∅` and `(β+ℕ) ∩ B'' ≠ ∅`.
pub fn combine_betas_characterized(b1: &[ExactScalar], b2: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut out = BTreeSet::new();
    for beta in b1.iter().chain(b2) {
        let hits = |set: &[ExactScalar]| set.iter().any(|x| in_shift_of(beta, x));
        if hits(b1) && hits(b2) {
            out.insert(beta.clone());
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combined {
    /// Exponential parts present on both sides.
    pub phis: Vec<ExponentialPart>,
    pub bsets: BTreeMap<ExponentialPart, Vec<ExactScalar>>,
    pub lorders: BTreeMap<(ExponentialPart, ExactScalar), u32>,
    /// Both descriptions of `B_φ` agreed for every `φ`.
    pub characterizations_agree: bool,
}

pub fn combine_sides(hol: &SideData, anti: &SideData) -> Combined {
    let mut phis = Vec::new();
    let mut bsets = BTreeMap::new();
    let mut lorders = BTreeMap::new();
    let mut agree = true;
    for (phi, b1) in &hol.bsets {
        let Some(b2) = anti.bsets.get(phi) else { continue };
        if b1.is_empty() || b2.is_empty() {
            continue;
        }
        phis.push(phi.clone());
        let b = combine_betas(b1, b2);
        agree &= b == combine_betas_characterized(b1, b2);
        for beta in &b {
            let l = hol.lorder(phi, beta).min(anti.lorder(phi, beta));
            lorders.insert((phi.clone(), beta.clone()), l);
        }
        bsets.insert(phi.clone(), b);
    }
    Combined {
        phis,
        bsets,
        lorders,
        characterizations_agree: agree,
    }
}

/// Antichain of exponents `(k', k'')` in `ℕ²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Staircase {
    pub points: Vec<(u32, u32)>,
}

impl Staircase {
    /// Minimal elements of `points`.
    pub fn new(points: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let all: BTreeSet<(u32, u32)> = points.into_iter().collect();
        let points = all
            .iter()
            .filter(|p| !all.iter().any(|q| q != *p && q.0 <= p.0 && q.1 <= p.1))
            .copied()
            .collect();
        Self { points }
    }

    pub fn contains(&self, k: (u32, u32)) -> bool {
        self.points.iter().any(|p| p.0 <= k.0 && p.1 <= k.1)
    }

    /// Largest `m` with the staircase inside `(m, m) + ℕ²`, and the staircase
    /// translated back by `(m, m)`.
    pub fn normalize(&self) -> (u32, Staircase) {
        let m = self
            .points
            .iter()
            .map(|p| p.0.min(p.1))
            .min()
            .unwrap_or(0);
        (m, Staircase::new(self.points.iter().map(|p| (p.0 - m, p.1 - m))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseConstraint {
    pub phi: ExponentialPart,
    pub beta: ExactScalar,
    /// `(k', k'')` allowed iff `β + k' ∈ B'_φ + ℕ` and `β + k'' ∈ B''_φ + ℕ`.
    pub staircase: Staircase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonEntry {
    pub phi: ExponentialPart,
    pub beta: ExactScalar,
    pub l_max: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionSkeleton {
    pub phis: Vec<ExponentialPart>,
    pub entries: Vec<SkeletonEntry>,
    pub staircase: Vec<StaircaseConstraint>,
}

impl ExpansionSkeleton {
    pub fn to_json(&self) -> Value {
        json!({
            "phi": self.phis.iter().map(phi_json).collect::<Vec<_>>(),
            "entries": self.entries.iter().map(|e| json!({
                "phi": phi_json(&e.phi),
                "betaRe": fmt_rat(&e.beta.re),
                "betaIm": fmt_rat(&e.beta.im),
                "lMax": e.l_max,
            })).collect::<Vec<_>>(),
            "staircaseConstraints": self.staircase.iter().map(|c| json!({
                "phi": phi_json(&c.phi),
                "betaRe": fmt_rat(&c.beta.re),
                "betaIm": fmt_rat(&c.beta.im),
                "minimal": c.staircase.points.iter().map(|p| json!([p.0, p.1])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn json_err(what: &str) -> crate::error::Error {
    crate::error::Error::Invalid(format!("skeleton JSON: bad or missing {what}"))
}

fn rat_field(v: &Value, key: &str) -> Result<num_rational::BigRational> {
    let s = v.get(key).and_then(Value::as_str).ok_or_else(|| json_err(key))?;
    crate::scalar::parse_rat(s)
}

/// Inverse of [`phi_json`].
pub fn phi_from_json(v: &Value) -> Result<ExponentialPart> {
    let arr = v.as_array().ok_or_else(|| json_err("phi"))?;
    let mut terms = Vec::new();
    for t in arr {
        let e = t.get(0).and_then(Value::as_i64).ok_or_else(|| json_err("phi exponent"))?;
        let part = |i: usize| {
            t.get(i)
                .and_then(Value::as_str)
                .ok_or_else(|| json_err("phi coefficient"))
                .and_then(crate::scalar::parse_rat)
        };
        terms.push((e, ExactScalar::new(part(1)?, part(2)?)));
    }
    ExponentialPart::from_terms(terms)
}

impl ExpansionSkeleton {
    /// Inverse of [`ExpansionSkeleton::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let list = |key: &str| v.get(key).and_then(Value::as_array).ok_or_else(|| json_err(key));
        let phis = list("phi")?.iter().map(phi_from_json).collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::new();
        for e in list("entries")? {
            entries.push(SkeletonEntry {
                phi: phi_from_json(e.get("phi").ok_or_else(|| json_err("entry phi"))?)?,
                beta: ExactScalar::new(rat_field(e, "betaRe")?, rat_field(e, "betaIm")?),
                l_max: e.get("lMax").and_then(Value::as_u64).ok_or_else(|| json_err("lMax"))? as u32,
            });
        }
        let mut staircase = Vec::new();
        for c in list("staircaseConstraints")? {
            let points = c
                .get("minimal")
                .and_then(Value::as_array)
                .ok_or_else(|| json_err("minimal"))?
                .iter()
                .map(|p| match (p.get(0).and_then(Value::as_u64), p.get(1).and_then(Value::as_u64)) {
                    (Some(a), Some(b)) => Ok((a as u32, b as u32)),
                    _ => Err(json_err("staircase point")),
                })
                .collect::<Result<Vec<_>>>()?;
            staircase.push(StaircaseConstraint {
                phi: phi_from_json(c.get("phi").ok_or_else(|| json_err("constraint phi"))?)?,
                beta: ExactScalar::new(rat_field(c, "betaRe")?, rat_field(c, "betaIm")?),
                staircase: Staircase::new(points),
            });
        }
        Ok(Self {
            phis,
            entries,
            staircase,
        })
    }
}

/// `k' ≥ 0` minimal with `β + k' ∈ B + ℕ`.
fn min_shift(side: &SideData, phi: &ExponentialPart, beta: &ExactScalar) -> u32 {
    side.representative(phi, beta)
        .and_then(|b| b.integer_difference(beta))
        .map_or(0, |d| d.max(0) as u32)
}

pub fn skeleton(hol_model: &ElementaryModel, anti_model: &ElementaryModel) -> ExpansionSkeleton {
    let hol = side_data(hol_model, Side::Hol);
    let anti = side_data(anti_model, Side::Anti);
    let c = combine_sides(&hol, &anti);
    let mut entries = Vec::new();
    let mut staircase = Vec::new();
    for phi in &c.phis {
        for beta in &c.bsets[phi] {
            let l = c.lorders[&(phi.clone(), beta.clone())];
            entries.push(SkeletonEntry {
                phi: phi.clone(),
                beta: beta.clone(),
                l_max: l.saturating_sub(1),
            });
            staircase.push(StaircaseConstraint {
                phi: phi.clone(),
                beta: beta.clone(),
                staircase: Staircase::new([(min_shift(&hol, phi, beta), min_shift(&anti, phi, beta))]),
            });
        }
    }
    ExpansionSkeleton {
        phis: c.phis,
        entries,
        staircase,
    }
}

/// Every entry has `Re β > -1`; the unimodular factor `e^{φ-φ̄}` and the log
/// powers do not affect local integrability.
pub fn l1loc_test(s: &ExpansionSkeleton) -> bool {
    s.entries.iter().all(|e| e.beta.re > -rat_int(1))
}

/// Functional equation `[∏_{k=0}^{k(j)} ∏_β (-(θ-β-k))^{L'} - y^j P_j] e^{φ̄-φ} v = 0`.
#[derive(Clone, Debug)]
pub struct BernsteinEquation {
    pub k_j: u32,
    /// The bracket, a polynomial in `θ`.
    pub bracket: Poly,
    /// For each formal solution, the lowest real exponent left after applying
    /// the bracket relative to the solution's coset representative; `None`
    /// when nothing is left.
    pub residual_orders: Vec<Option<i64>>,
    /// Every residual lies in `y^j` times the solution space.
    pub certified: bool,
}

impl BernsteinEquation {
    pub fn operator(&self) -> DiffOp {
        DiffOp::from_theta_poly(Var::Y, &self.bracket)
    }
}

/// Bracket of the functional equation for the part `φ` of the model and
/// its check on formal solutions truncated as in `analysis`.
///
/// A part absent from the model has `B'_φ = ∅` and the bracket is `1`.
pub fn bernstein_equation(analysis: &FormalAnalysis, phi: &ExponentialPart, j: u32) -> BernsteinEquation {
    let k_j = j.saturating_sub(1);
    let mut bracket = Poly::constant(ExactScalar::one());
    if let Some(r) = analysis.model.parts.get(phi) {
        for k in 0..=k_j {
            for e in &r.exponents {
                // -(t - β - k)
                let root = &e.beta + &ExactScalar::from_int(k as i64);
                let factor = Poly::linear_root(&root).scale(&ExactScalar::from_int(-1));
                bracket = bracket.mul(&factor.pow(e.log_depth));
            }
        }
    }
    let op = DiffOp::from_theta_poly(Var::Y, &bracket);
    let truncation = analysis
        .solutions
        .first()
        .map_or(0, |s| s.coefficients.len() as i64);
    let mut residual_orders = Vec::new();
    let mut certified = true;
    for s in analysis.solutions.iter().filter(|s| &s.phi == phi) {
        let rep = analysis.model.parts[phi]
            .entry(&s.exponent)
            .map(|e| e.beta.clone())
            .unwrap_or_else(|| s.exponent.clone());
        let terms: Vec<SymbolicTerm> = s
            .to_terms(Var::Y)
            .into_iter()
            .map(|t| t.with_phi(ExponentialPart::zero()))
            .collect();
        let residual = apply_to_sum(&op, &terms).unwrap_or_default();
        let order = residual
            .iter()
            .filter_map(|t| t.beta_hol.integer_difference(&rep))
            .min();
        if let Some(o) = order {
            // terms beyond the truncation are not meaningful
            if o < j as i64 && o < s.exponent.integer_difference(&rep).unwrap_or(0) + truncation {
                certified = false;
            }
        }
        residual_orders.push(order);
    }
    BernsteinEquation {
        k_j,
        bracket,
        residual_orders,
        certified,
    }
}

/// Models of both sides from the two operators and the resulting skeleton.
pub fn skeleton_from_operators(
    hol: &DiffOp,
    anti: &DiffOp,
    cfg: &crate::formal::FormalConfig,
) -> Result<(FormalAnalysis, FormalAnalysis, ExpansionSkeleton)> {
    let a = analyze(hol, cfg)?;
    let b = analyze(anti, cfg)?;
    let s = skeleton(&a.model, &b.model);
    Ok((a, b, s))
}
