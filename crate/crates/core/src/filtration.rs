//! Deligne and parabolic filtrations of an elementary model, recorded at the
//! level of exponents.
//!
//! A lattice entry for `(φ, β)` says which powers `y^{β+k} (log y)^j e^φ` it
//! contains: all `k ≥ shift`, all `k`, or (after `∂`-saturation of the
//! integer coset) all `k ≥ shift` plus the image of the nilpotent part below.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::Result;
use crate::exponential::ExponentialPart;
use crate::formal::{descend_model, phi_json, ElementaryModel, ExponentEntry};
use crate::scalar::{fmt_rat, ExactScalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Inclusion {
    /// `y^{β+k}` for `k ≥ shift`.
    Shifted(i64),
    /// Every power of `y`.
    Full,
    /// `k ≥ shift` in full and, for `k < shift`, a subspace of dimension
    /// `below_rank`.
    Saturated { shift: i64, below_rank: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeEntry {
    pub phi: ExponentialPart,
    pub beta: ExactScalar,
    pub log_depth: u32,
    pub dim: u32,
    pub inclusion: Inclusion,
}

impl LatticeEntry {
    fn to_json(&self) -> Value {
        let inclusion = match &self.inclusion {
            Inclusion::Shifted(k) => json!(k),
            Inclusion::Full => json!("full"),
            Inclusion::Saturated { shift, below_rank } => {
                json!({ "shift": shift, "belowRank": below_rank })
            }
        };
        json!({
            "phi": phi_json(&self.phi),
            "beta": [fmt_rat(&self.beta.re), fmt_rat(&self.beta.im)],
            "logDepth": self.log_depth,
            "dim": self.dim,
            "shift": inclusion,
        })
    }
}

/// Lattice in the model, at level `b`.
///
/// `q > 1` marks a lattice of the descended module: entries are those of the
/// ramified model at level `q·b` and multiplication by `x = y^q` adds `q` to
/// every shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentLattice {
    pub b: BigRational,
    pub q: u32,
    pub entries: Vec<LatticeEntry>,
}

impl ExponentLattice {
    /// Multiplication by the `k`-th power of the base coordinate.
    pub fn mul_coordinate(&self, k: i64) -> Self {
        let step = k * self.q as i64;
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let inclusion = match &e.inclusion {
                    Inclusion::Shifted(s) => Inclusion::Shifted(s + step),
                    Inclusion::Full => Inclusion::Full,
                    Inclusion::Saturated { shift, below_rank } => Inclusion::Saturated {
                        shift: shift + step,
                        below_rank: *below_rank,
                    },
                };
                LatticeEntry {
                    inclusion,
                    ..e.clone()
                }
            })
            .collect();
        Self {
            b: &self.b + BigRational::from_integer(k.into()),
            q: self.q,
            entries,
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.entries.iter().map(LatticeEntry::to_json).collect())
    }

    /// Sum of the dimensions of all entries.
    pub fn rank(&self) -> u32 {
        self.entries.iter().map(|e| e.dim).sum()
    }
}

/// Smallest integer `k` with `Re β + k ≥ b`.
fn shift_at(beta: &ExactScalar, b: &BigRational) -> i64 {
    (b - &beta.re).ceil().to_integer().to_i64().unwrap_or(i64::MAX)
}

/// Smallest integer `k` with `Re β + k > b`.
fn strict_shift_at(beta: &ExactScalar, b: &BigRational) -> i64 {
    (b - &beta.re).floor().to_integer().to_i64().unwrap_or(i64::MAX) + 1
}

fn entries<F>(model: &ElementaryModel, mut inclusion: F) -> Vec<LatticeEntry>
where
    F: FnMut(&ExponentialPart, &ExponentEntry) -> Inclusion,
{
    let mut out = Vec::new();
    for (phi, r) in &model.parts {
        for e in &r.exponents {
            out.push(LatticeEntry {
                phi: phi.clone(),
                beta: e.beta.clone(),
                log_depth: e.log_depth,
                dim: e.dim,
                inclusion: inclusion(phi, e),
            });
        }
    }
    out.sort();
    out
}

fn lattice(model: &ElementaryModel, b: &BigRational, full_irregular: bool, strict: bool) -> ExponentLattice {
    let entries = entries(model, |phi, e| {
        if full_irregular && !phi.is_zero() {
            Inclusion::Full
        } else if strict {
            Inclusion::Shifted(strict_shift_at(&e.beta, b))
        } else {
            Inclusion::Shifted(shift_at(&e.beta, b))
        }
    });
    ExponentLattice {
        b: b.clone(),
        q: 1,
        entries,
    }
}

/// `V^b`: regular part filtered by `Re β ≥ b`, irregular parts in full.
pub fn deligne_v(model: &ElementaryModel, b: &BigRational) -> ExponentLattice {
    lattice(model, b, true, false)
}

/// `V^{>b}`.
pub fn deligne_v_strict(model: &ElementaryModel, b: &BigRational) -> ExponentLattice {
    lattice(model, b, true, true)
}

/// `P^b`: every part filtered by `Re β ≥ b`.
pub fn parabolic_lattice(model: &ElementaryModel, b: &BigRational) -> ExponentLattice {
    lattice(model, b, false, false)
}

/// `P^{>b}`.
pub fn parabolic_lattice_strict(model: &ElementaryModel, b: &BigRational) -> ExponentLattice {
    lattice(model, b, false, true)
}

/// `P^b` of the module obtained by descending the ramified model along
/// `x = y^q`, represented through `P^{qb}` of the model.
pub fn parabolic_lattice_descended(model: &ElementaryModel, q: u32, b: &BigRational) -> Result<ExponentLattice> {
    descend_model(model, q)?;
    let level = b * BigRational::from_integer(q.into());
    Ok(ExponentLattice {
        b: b.clone(),
        q,
        entries: parabolic_lattice(model, &level).entries,
    })
}

pub fn deligne_v_descended(model: &ElementaryModel, q: u32, b: &BigRational) -> Result<ExponentLattice> {
    descend_model(model, q)?;
    let level = b * BigRational::from_integer(q.into());
    Ok(ExponentLattice {
        b: b.clone(),
        q,
        entries: deligne_v(model, &level).entries,
    })
}

/// Saturation under `θ`.
///
/// On `φ = 0` the operator `θ` preserves `y^{β+k}` blocks so the lattice is
/// unchanged. On `e^φ y^β` it acts as `β + yφ'(y) + N`, and `yφ'` has a pole
/// of order `ord φ` with invertible leading coefficient, so repeated
/// application reaches every power of `y`.
pub fn theta_saturation(l: &ExponentLattice) -> ExponentLattice {
    let entries = l
        .entries
        .iter()
        .map(|e| LatticeEntry {
            inclusion: if e.phi.is_zero() {
                e.inclusion.clone()
            } else {
                Inclusion::Full
            },
            ..e.clone()
        })
        .collect();
    ExponentLattice {
        entries,
        ..l.clone()
    }
}

/// Saturation under `∂ = y⁻¹θ`.
///
/// `∂ y^{β+k} = y^{β+k-1}(β + k + N)` is invertible unless `β + k = 0`, where
/// only the image of `N` passes to lower powers.
pub fn derivation_saturation(model: &ElementaryModel, l: &ExponentLattice) -> ExponentLattice {
    let entries = l
        .entries
        .iter()
        .map(|e| {
            let blocks = model
                .parts
                .get(&e.phi)
                .and_then(|r| r.entry(&e.beta))
                .map_or(0, |x| x.jordan.len() as u32);
            let inclusion = match (&e.inclusion, e.phi.is_zero()) {
                (Inclusion::Shifted(s), true) => match e.beta.integer_difference(&ExactScalar::zero()) {
                    // exponent 0 sits at k = -β
                    Some(d) if *s <= -d => Inclusion::Saturated {
                        shift: -d,
                        below_rank: e.dim - blocks,
                    },
                    _ => Inclusion::Full,
                },
                (Inclusion::Saturated { .. }, true) => e.inclusion.clone(),
                _ => Inclusion::Full,
            };
            LatticeEntry {
                inclusion,
                ..e.clone()
            }
        })
        .collect();
    ExponentLattice {
        entries,
        ..l.clone()
    }
}

/// First entry at which two lattices differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotMismatch {
    pub phi: ExponentialPart,
    pub beta: ExactScalar,
    pub expected: Inclusion,
    pub found: Inclusion,
}

fn compare(expected: &ExponentLattice, found: &ExponentLattice) -> Option<SlotMismatch> {
    for (a, b) in expected.entries.iter().zip(&found.entries) {
        if a != b {
            return Some(SlotMismatch {
                phi: a.phi.clone(),
                beta: a.beta.clone(),
                expected: a.inclusion.clone(),
                found: b.inclusion.clone(),
            });
        }
    }
    None
}

/// Checks that `θ` generates `V^b` from `P^b`.
pub fn generated_v_check(model: &ElementaryModel, b: &BigRational) -> (bool, Option<SlotMismatch>) {
    generated_v_check_with(model, b, theta_saturation)
}

/// As [`generated_v_check`] with a caller-supplied saturation.
pub fn generated_v_check_with<F>(model: &ElementaryModel, b: &BigRational, saturate: F) -> (bool, Option<SlotMismatch>)
where
    F: Fn(&ExponentLattice) -> ExponentLattice,
{
    let v = deligne_v(model, b);
    let sat = saturate(&parabolic_lattice(model, b));
    match compare(&v, &sat) {
        None => (true, None),
        Some(w) => (false, Some(w)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalExtension {
    pub from_v: ExponentLattice,
    pub from_p: ExponentLattice,
    pub equal: bool,
}

/// `∂`-saturations of `V^{>-1}` and `P^{>-1}`.
pub fn minimal_extension(model: &ElementaryModel) -> MinimalExtension {
    let minus_one = -BigRational::one();
    let from_v = derivation_saturation(model, &deligne_v_strict(model, &minus_one));
    let from_p = derivation_saturation(model, &parabolic_lattice_strict(model, &minus_one));
    let equal = from_v == from_p;
    MinimalExtension { from_v, from_p, equal }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedGenerator {
    pub phi: ExponentialPart,
    /// Eigenvalue of `S`.
    pub beta: ExactScalar,
    pub multiplicity: u32,
    /// Nilpotent block sizes on this generator.
    pub blocks: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiData {
    pub beta: ExactScalar,
    pub dim: u32,
    pub nilpotency: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub b: BigRational,
    pub generators: Vec<GradedGenerator>,
    /// Factor applied to `N` (`1/q` after descent).
    pub n_scale: BigRational,
    /// Formal nearby cycles `ψ̂^β`, all parts together.
    pub psi_hat: Vec<PsiData>,
    /// Nearby cycles `ψ^β` of the regular part only.
    pub psi_regular: Vec<PsiData>,
}

impl GradedPiece {
    pub fn dim(&self) -> u32 {
        self.generators.iter().map(|g| g.multiplicity).sum()
    }

    pub fn s_eigenvalues(&self) -> Vec<ExactScalar> {
        self.generators
            .iter()
            .flat_map(|g| std::iter::repeat_n(g.beta.clone(), g.multiplicity as usize))
            .collect()
    }

    pub fn n_blocks(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.generators.iter().flat_map(|g| g.blocks.clone()).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// `ψ̂^β ⊋ ψ^β` for some `β`.
    pub fn psi_hat_larger(&self) -> bool {
        self.psi_hat.iter().any(|p| {
            let reg = self
                .psi_regular
                .iter()
                .find(|r| r.beta == p.beta)
                .map_or(0, |r| r.dim);
            p.dim > reg
        })
    }

    pub fn to_json(&self) -> Value {
        let psi = |v: &[PsiData]| -> Vec<Value> {
            v.iter()
                .map(|p| json!({"beta": [fmt_rat(&p.beta.re), fmt_rat(&p.beta.im)], "dim": p.dim, "nilp": p.nilpotency}))
                .collect()
        };
        json!({
            "dim": self.dim(),
            "S": self.s_eigenvalues().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "NBlocks": self.n_blocks(),
            "NScale": fmt_rat(&self.n_scale),
            "psiHat": psi(&self.psi_hat),
            "psi": psi(&self.psi_regular),
        })
    }
}

fn psi_from(gens: &[GradedGenerator], regular_only: bool) -> Vec<PsiData> {
    let mut out: Vec<PsiData> = Vec::new();
    for g in gens.iter().filter(|g| !regular_only || g.phi.is_zero()) {
        let nilp = g.blocks.iter().copied().max().unwrap_or(1);
        match out.iter_mut().find(|p| p.beta == g.beta) {
            Some(p) => {
                p.dim += g.multiplicity;
                p.nilpotency = p.nilpotency.max(nilp);
            }
            None => out.push(PsiData {
                beta: g.beta.clone(),
                dim: g.multiplicity,
                nilpotency: nilp,
            }),
        }
    }
    out.sort_by(|a, b| a.beta.cmp(&b.beta));
    out
}

fn generators_at(model: &ElementaryModel, b: &BigRational) -> Vec<(ExponentialPart, ExponentEntry, i64)> {
    let mut out = Vec::new();
    for (phi, r) in &model.parts {
        for e in &r.exponents {
            let d = b - &e.beta.re;
            if d.is_integer() {
                out.push((phi.clone(), e.clone(), d.to_integer().to_i64().unwrap_or(0)));
            }
        }
    }
    out
}

/// `gr^b_P = P^b / P^{>b}` with its semisimple and nilpotent parts.
pub fn graded_piece(model: &ElementaryModel, b: &BigRational) -> GradedPiece {
    let generators: Vec<GradedGenerator> = generators_at(model, b)
        .into_iter()
        .map(|(phi, e, k)| GradedGenerator {
            phi,
            beta: &e.beta + &ExactScalar::from_int(k),
            multiplicity: e.dim,
            blocks: e.jordan.clone(),
        })
        .collect();
    GradedPiece {
        b: b.clone(),
        psi_hat: psi_from(&generators, false),
        psi_regular: psi_from(&generators, true),
        generators,
        n_scale: BigRational::one(),
    }
}

/// Graded piece of the descended module at level `b`, as the `Z/qZ`
/// invariants of the model's graded piece at level `qb`.
///
/// The deck group permutes an orbit of `o` exponential parts; the stabilizer
/// of order `q/o` fixes `y^{β+k}` exactly when `q/o` divides `k`, counted
/// from the coset representative. Each invariant slot contributes one copy
/// per orbit.
pub fn graded_piece_descended(model: &ElementaryModel, q: u32, b: &BigRational) -> Result<GradedPiece> {
    descend_model(model, q)?;
    let level = b * BigRational::from_integer(q.into());
    let inv_q = ExactScalar::from_frac(1, q as i64);
    let mut seen: Vec<ExponentialPart> = Vec::new();
    let mut generators = Vec::new();
    for (phi, e, k) in generators_at(model, &level) {
        if seen.contains(&phi) {
            continue;
        }
        let mut orbit = Vec::new();
        for j in 0..q {
            let g = phi.galois(j, q)?;
            if !orbit.contains(&g) {
                orbit.push(g);
            }
        }
        let stabilizer = q as i64 / orbit.len() as i64;
        if k.mod_floor(&stabilizer) != 0 {
            continue;
        }
        generators.push(GradedGenerator {
            phi: orbit.iter().min().cloned().unwrap_or_default(),
            beta: &(&e.beta + &ExactScalar::from_int(k)) * &inv_q,
            multiplicity: e.dim,
            blocks: e.jordan.clone(),
        });
        if orbit.len() > 1 {
            seen.extend(orbit.into_iter().filter(|g| *g != phi));
        }
    }
    Ok(GradedPiece {
        b: b.clone(),
        psi_hat: psi_from(&generators, false),
        psi_regular: psi_from(&generators, true),
        generators,
        n_scale: BigRational::new(1.into(), q.into()),
    })
}

/// JSON report of the filtrations at level `b`.
pub fn report(model: &ElementaryModel, b: &BigRational) -> Value {
    json!({
        "b": fmt_rat(b),
        "vBasis": deligne_v(model, b).to_json(),
        "pBasis": parabolic_lattice(model, b).to_json(),
        "graded": graded_piece(model, b).to_json(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::{elementary_model, FormalConfig, RegularPartData};
    use crate::laurent::Var;
    use crate::operator::DiffOp;
    use crate::scalar::rat;
    use std::collections::BTreeMap;

    fn cfg() -> FormalConfig {
        FormalConfig {
            truncation: 10,
            ..Default::default()
        }
    }

    fn log_model() -> ElementaryModel {
        elementary_model(&DiffOp::theta(Var::X).pow(2), &cfg()).unwrap()
    }

    fn pair_model() -> ElementaryModel {
        let d = DiffOp::derivation(Var::X);
        let p = DiffOp::multiplication(Var::X, 3, 4.into())
            .compose(&d.pow(2))
            .add(&DiffOp::multiplication(Var::X, 2, 6.into()).compose(&d))
            .sub(&DiffOp::constant(Var::X, 1.into()));
        elementary_model(&p, &cfg()).unwrap()
    }

    fn zero() -> BigRational {
        rat(0, 1)
    }

    #[test]
    fn deligne_keeps_irregular_parts_full() {
        let v = deligne_v(&pair_model(), &rat(7, 3));
        assert!(v.entries.iter().all(|e| e.inclusion == Inclusion::Full));
        let p = parabolic_lattice(&pair_model(), &zero());
        assert!(p.entries.iter().all(|e| e.inclusion == Inclusion::Shifted(0)));
    }

    #[test]
    fn log_model_at_zero() {
        let v = deligne_v(&log_model(), &zero());
        assert_eq!(v.entries.len(), 1);
        assert_eq!(v.entries[0].inclusion, Inclusion::Shifted(0));
        assert_eq!(v.entries[0].dim, 2);
        assert_eq!(deligne_v(&log_model(), &rat(1, 2)).entries[0].inclusion, Inclusion::Shifted(1));
    }

    #[test]
    fn coordinate_shifts_level() {
        for m in [log_model(), pair_model()] {
            for b in [rat(-3, 2), zero(), rat(1, 3)] {
                let up = &b + rat(1, 1);
                assert_eq!(parabolic_lattice(&m, &up), parabolic_lattice(&m, &b).mul_coordinate(1));
                assert_eq!(deligne_v(&m, &up), deligne_v(&m, &b).mul_coordinate(1));
            }
        }
        let d0 = parabolic_lattice_descended(&pair_model(), 2, &zero()).unwrap();
        let d1 = parabolic_lattice_descended(&pair_model(), 2, &rat(1, 1)).unwrap();
        assert_eq!(d1, d0.mul_coordinate(1));
    }

    #[test]
    fn theta_generates_v_from_p() {
        for m in [log_model(), pair_model()] {
            assert_eq!(generated_v_check(&m, &zero()), (true, None));
        }
        let (ok, witness) = generated_v_check_with(&pair_model(), &zero(), |l| l.clone());
        assert!(!ok);
        let w = witness.unwrap();
        assert_eq!(w.expected, Inclusion::Full);
        assert_eq!(w.found, Inclusion::Shifted(0));
    }

    #[test]
    fn minimal_extension_agrees() {
        let me = minimal_extension(&log_model());
        assert!(me.equal);
        assert_eq!(
            me.from_v.entries[0].inclusion,
            Inclusion::Saturated {
                shift: 0,
                below_rank: 1
            }
        );
        let me = minimal_extension(&pair_model());
        assert!(me.equal);
        assert!(me.from_p.entries.iter().all(|e| e.inclusion == Inclusion::Full));
    }

    #[test]
    fn graded_pieces() {
        let g = graded_piece(&log_model(), &zero());
        assert_eq!(g.dim(), 2);
        assert_eq!(g.s_eigenvalues(), vec![ExactScalar::zero(); 2]);
        assert_eq!(g.n_blocks(), vec![2]);

        let g = graded_piece(&pair_model(), &zero());
        assert_eq!(g.psi_hat[0].dim, 2);
        assert!(g.psi_regular.is_empty());
        assert!(g.psi_hat_larger());
        assert_eq!(graded_piece(&pair_model(), &rat(1, 2)).dim(), 0);
    }

    #[test]
    fn descended_graded_pieces() {
        let m = pair_model();
        let g0 = graded_piece_descended(&m, 2, &zero()).unwrap();
        let g1 = graded_piece_descended(&m, 2, &rat(1, 2)).unwrap();
        assert_eq!((g0.dim(), g1.dim()), (1, 1));
        assert_eq!(g1.s_eigenvalues(), vec![ExactScalar::from_frac(1, 2)]);
        assert_eq!(g1.n_scale, rat(1, 2));

        let mut parts = BTreeMap::new();
        parts.insert(
            ExponentialPart::zero(),
            RegularPartData {
                exponents: vec![ExponentEntry {
                    beta: ExactScalar::one(),
                    log_depth: 2,
                    dim: 2,
                    jordan: vec![2],
                }],
                rank: 2,
            },
        );
        let n = ElementaryModel { q: 2, parts };
        let g = graded_piece_descended(&n, 2, &rat(1, 2)).unwrap();
        assert_eq!(g.s_eigenvalues(), vec![ExactScalar::from_frac(1, 2); 2]);
        assert_eq!(g.n_blocks(), vec![2]);
        assert_eq!(graded_piece_descended(&n, 2, &zero()).unwrap().dim(), 0);
    }

    #[test]
    fn report_shape() {
        let r = report(&log_model(), &zero());
        assert_eq!(r["graded"]["dim"], serde_json::json!(2));
        assert!(r["vBasis"].is_array() && r["pBasis"].is_array());
    }
}
