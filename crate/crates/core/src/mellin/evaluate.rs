//! Evaluation and continuation of the Mellin transform.
//!
//! An atom `c ρ^m e^{inθ} e^{φ-φ̄} |y|^{2β} L^ℓ` paired with
//! `|y|^{2s} y^{-k'} ȳ^{-k''} χ` is `c y^P ȳ^Q L^ℓ e^{φ-φ̄}` with
//! `P = s + β + (m+n)/2 - k'`, `Q = s + β + (m-n)/2 - k''`.
//!
//! `φ = 0`: only frequency `P - Q = 0` survives and the transform is
//! `2c ∫ ρ^{t-1} L^ℓ χ dρ`, `t = P + Q + 2`. On the plateau `[0, a]` this is
//! done in closed form, which carries the poles; `[a, b]` is entire.
//!
//! `φ = c_φ y^{-r}`: on a small disc `|y| < ρ₁` inside the plateau, `y^P` is
//! traded for `y^{P+r}` by integrating by parts against
//! `∂_y e^{φ-φ̄} = -r c_φ y^{-r-1} e^{φ-φ̄}`. Each step leaves a boundary term
//! on `|y| = ρ₁`; after enough steps the rest is integrable and tiny near 0.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::cutoff::RadialCutoff;
use super::distribution::{Atom, ModelDistribution};
use super::quadrature::Rule;
use super::MellinConfig;
use crate::error::{Error, Result};

/// Taylor terms of `e^{-ρ²}` used on the plateau.
const GAUSS_TERMS: u32 = 30;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rpow(rho: f64, z: Complex64) -> Complex64 {
    (z * rho.ln()).exp()
}

/// `∫_0^a ρ^{t-1} (-2 log ρ)^ℓ dρ`, continued to `t ≠ 0`.
pub fn plateau_integral(t: Complex64, l: u32, a: f64) -> Complex64 {
    let la = a.ln();
    let at = rpow(a, t);
    let mut sum = c(0.0);
    let mut falling = 1.0;
    for i in 0..=l {
        if i > 0 {
            falling *= (l - i + 1) as f64;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * falling * la.powi((l - i) as i32) * at / t.powu(i + 1);
    }
    sum * (-2.0f64).powi(l as i32)
}

fn gauss_taylor(j: u32) -> f64 {
    let fact: f64 = (1..=j).map(|k| k as f64).product();
    if j.is_multiple_of(2) {
        1.0 / fact
    } else {
        -1.0 / fact
    }
}

#[derive(Clone, Debug)]
struct RegularAtom {
    c: Complex64,
    /// `t = 2s + shift`.
    shift: Complex64,
    l: u32,
    gauss: bool,
}

impl RegularAtom {
    fn head(&self, t: Complex64, a: f64) -> Complex64 {
        if !self.gauss {
            return plateau_integral(t, self.l, a);
        }
        (0..=GAUSS_TERMS)
            .map(|j| gauss_taylor(j) * plateau_integral(t + 2.0 * j as f64, self.l, a))
            .sum()
    }

    fn poles(&self) -> impl Iterator<Item = Complex64> + '_ {
        let last = if self.gauss { GAUSS_TERMS } else { 0 };
        (0..=last).map(move |j| -(self.shift + 2.0 * j as f64) / 2.0)
    }
}

/// `A_ν(ρ) = ∫ e^{φ-φ̄} e^{iνθ} dθ` for `φ = c y^{-r}` by the trapezoid rule.
fn angular(cphi: Complex64, r: u32, rho: f64, nu: i32) -> Complex64 {
    let z = 2.0 * cphi.norm() * rho.powi(-(r as i32));
    let need = 2.0 * (r as f64 * (z + 10.0 * z.cbrt() + 30.0) + nu.unsigned_abs() as f64);
    let n = (need as usize).next_power_of_two().max(64);
    let amp = cphi * rho.powi(-(r as i32));
    let h = 2.0 * PI / n as f64;
    let mut sum = c(0.0);
    for k in 0..n {
        let th = h * k as f64;
        let phi = amp * Complex64::from_polar(1.0, -(r as f64) * th);
        sum += Complex64::from_polar(1.0, 2.0 * phi.im + nu as f64 * th);
    }
    sum * h
}

/// Panel edges on `[lo, hi]` such that `2|c|ρ^{-r}` moves by at most `π`
/// and `ρ` grows by at most a factor `1.25` per panel.
fn phase_edges(cabs: f64, r: u32, lo: f64, hi: f64, breaks: &[f64]) -> Vec<f64> {
    let mut edges = vec![lo];
    let mut cur = lo;
    let max_h = (hi - lo) / 4.0;
    while cur < hi {
        let z = 2.0 * cabs * cur.powi(-(r as i32));
        let mut next = if z > PI {
            (2.0 * cabs / (z - PI)).powf(1.0 / r as f64)
        } else {
            f64::INFINITY
        };
        next = next.min(cur * 1.25).min(cur + max_h);
        if let Some(&bk) = breaks.iter().find(|&&bk| bk > cur && bk < next) {
            next = bk;
        }
        cur = next.min(hi);
        edges.push(cur);
    }
    edges
}

#[derive(Clone, Debug)]
struct OscillatoryAtom {
    c: Complex64,
    p_shift: Complex64,
    q_shift: Complex64,
    l: u32,
    gauss: bool,
    r: u32,
    /// `-1/(r c_φ)`.
    w_step: Complex64,
    steps: usize,
    rho1: f64,
    /// `A_{ν₀+jr}(ρ₁)`, `j = 0..=steps`.
    edge: Vec<Complex64>,
    /// `(ρ, weight, A_{ν₀+steps·r}(ρ))` on `[ρ₀, ρ₁]`.
    inner: Vec<(f64, f64, Complex64)>,
    /// `(ρ, weight·χ(ρ), A_{ν₀}(ρ))` on `[ρ₁, b]`.
    outer: Vec<(f64, f64, Complex64)>,
}

impl OscillatoryAtom {
    fn new(atom: &Atom, kp: u32, kd: u32, chi: &RadialCutoff, cfg: &MellinConfig, re_min: f64, nodes: usize) -> Result<Self> {
        let (r, cphi) = atom
            .phi
            .as_monomial()
            .ok_or_else(|| Error::Unsupported(format!("exponential part {} is not a monomial c/y^r", atom.phi)))?;
        let p_shift = atom.beta + (atom.m as f64 + atom.n as f64) / 2.0 - kp as f64;
        let q_shift = atom.beta + (atom.m as f64 - atom.n as f64) / 2.0 - kd as f64;
        let nu0 = atom.n - kp as i32 + kd as i32;
        let re_pq = 2.0 * re_min + (p_shift + q_shift).re;
        let steps = (((cfg.ibp_target - re_pq) / r as f64).ceil().max(0.0) as usize).min(cfg.max_ibp_steps);
        let cabs = cphi.norm();
        let rho1 = chi.a.min((cabs / 20.0).powf(1.0 / r as f64));
        let rho0 = (rho1 / 4.0).min((cabs / 100.0).powf(1.0 / r as f64));
        let nu_at = |j: usize| nu0 + (j as u32 * r) as i32;
        let edge = (0..=steps).map(|j| angular(cphi, r, rho1, nu_at(j))).collect();
        let inner = Rule::panels(&phase_edges(cabs, r, rho0, rho1, &[]), nodes)
            .points
            .into_iter()
            .map(|(x, w)| (x, w, angular(cphi, r, x, nu_at(steps))))
            .collect();
        let outer = Rule::panels(&phase_edges(cabs, r, rho1, chi.b, &[chi.a]), nodes)
            .points
            .into_iter()
            .map(|(x, w)| (x, w * chi.eval(x), angular(cphi, r, x, nu0)))
            .collect();
        Ok(Self {
            c: atom.c,
            p_shift,
            q_shift,
            l: atom.l,
            gauss: atom.gauss,
            r,
            w_step: -1.0 / (r as f64 * cphi),
            steps,
            rho1,
            edge,
            inner,
            outer,
        })
    }

    fn profile(&self, rho: f64, l: u32) -> f64 {
        let g = if self.gauss { (-rho * rho).exp() } else { 1.0 };
        g * (-2.0 * rho.ln()).powi(l as i32)
    }

    fn eval(&self, s: Complex64) -> Complex64 {
        let p = s + self.p_shift;
        let q = s + self.q_shift;
        let r = self.r;
        let rho1 = self.rho1;
        let mut terms: BTreeMap<(u32, u32, u32), Complex64> = BTreeMap::new();
        terms.insert((0, 0, self.l), self.c);
        let mut boundary = c(0.0);
        for j in 0..self.steps {
            let mut next: BTreeMap<(u32, u32, u32), Complex64> = BTreeMap::new();
            for (&(dp, dq, l), &coef) in &terms {
                let pp = p + dp as f64;
                let qq = q + dq as f64;
                let w = coef * self.w_step;
                boundary += rho1 / (2.0 * PI)
                    * w
                    * rpow(rho1, pp + qq + (r + 1) as f64)
                    * self.profile(rho1, l)
                    * self.edge[j + 1];
                *next.entry((dp + r, dq, l)).or_default() -= w * (pp + (r + 1) as f64);
                if l > 0 {
                    *next.entry((dp + r, dq, l - 1)).or_default() += w * l as f64;
                }
                if self.gauss {
                    *next.entry((dp + r + 1, dq + 1, l)).or_default() += w;
                }
            }
            terms = next;
        }
        let max_l = self.l as usize;
        let rest: Complex64 = self
            .inner
            .iter()
            .map(|&(x, w, a)| {
                let base = rpow(x, p + q + 1.0);
                let lx = -2.0 * x.ln();
                let lpow: Vec<f64> = (0..=max_l).map(|k| lx.powi(k as i32)).collect();
                let g = if self.gauss { (-x * x).exp() } else { 1.0 };
                let v: Complex64 = terms
                    .iter()
                    .map(|(&(dp, dq, l), &coef)| coef * (x.powi((dp + dq) as i32) * lpow[l as usize]))
                    .sum();
                v * base * a * (w * g)
            })
            .sum();
        let outer: Complex64 = self
            .outer
            .iter()
            .map(|&(x, w, a)| self.c * rpow(x, p + q + 1.0) * self.profile(x, self.l) * a * w)
            .sum();
        boundary + (rest + outer) / PI
    }
}

/// Transform of a fixed distribution for fixed `(k', k'')` and cutoff,
/// prepared for evaluation at many `s` with `Re s ≥ re_min`.
#[derive(Clone, Debug)]
pub struct MellinEvaluator {
    pub k_prime: u32,
    pub k_double: u32,
    pub chi: RadialCutoff,
    regular: Vec<RegularAtom>,
    oscillatory: Vec<OscillatoryAtom>,
    annulus: Rule,
    exclusion: f64,
}

impl MellinEvaluator {
    pub fn new(v: &ModelDistribution, kp: u32, kd: u32, chi: &RadialCutoff, cfg: &MellinConfig, re_min: f64) -> Result<Self> {
        Self::with_nodes(v, kp, kd, chi, cfg, re_min, cfg.panel_nodes)
    }

    fn with_nodes(
        v: &ModelDistribution,
        kp: u32,
        kd: u32,
        chi: &RadialCutoff,
        cfg: &MellinConfig,
        re_min: f64,
        nodes: usize,
    ) -> Result<Self> {
        let mut regular = Vec::new();
        let mut oscillatory = Vec::new();
        for atom in v.atoms() {
            if !atom.phi.is_zero() {
                oscillatory.push(OscillatoryAtom::new(&atom, kp, kd, chi, cfg, re_min, nodes)?);
            } else if atom.n - kp as i32 + kd as i32 == 0 {
                regular.push(RegularAtom {
                    c: atom.c,
                    shift: 2.0 * atom.beta + (atom.m as f64 - kp as f64 - kd as f64 + 2.0),
                    l: atom.l,
                    gauss: atom.gauss,
                });
            }
        }
        let edges: Vec<f64> = (0..=4).map(|i| chi.a + (chi.b - chi.a) * i as f64 / 4.0).collect();
        Ok(Self {
            k_prime: kp,
            k_double: kd,
            chi: *chi,
            regular,
            oscillatory,
            annulus: Rule::panels(&edges, nodes),
            exclusion: cfg.exclusion_radius,
        })
    }

    /// Singularities of the closed-form plateau integrals.
    pub fn singularities(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self.regular.iter().flat_map(|a| a.poles().collect::<Vec<_>>()).collect();
        out.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        out.dedup_by(|x, y| (*x - *y).norm() < 1e-12);
        out
    }

    /// Value of the continuation; no check against the singular set.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let (a, chi) = (self.chi.a, &self.chi);
        let mut total = c(0.0);
        for atom in &self.regular {
            let t = 2.0 * s + atom.shift;
            let tail: Complex64 = self.annulus.integrate(|x| {
                let g = if atom.gauss { (-x * x).exp() } else { 1.0 };
                rpow(x, t - 1.0) * (-2.0 * x.ln()).powi(atom.l as i32) * (g * chi.eval(x))
            });
            total += 2.0 * atom.c * (atom.head(t, a) + tail);
        }
        for atom in &self.oscillatory {
            total += atom.eval(s);
        }
        total
    }

    pub fn continue_at(&self, s: Complex64) -> Result<Complex64> {
        if let Some(p) = self.singularities().into_iter().find(|p| (s - p).norm() < self.exclusion) {
            return Err(Error::NearPole {
                s: format!("{s}"),
                pole: format!("{p}"),
                radius: self.exclusion,
            });
        }
        Ok(self.eval(s))
    }
}

/// Direct quadrature of the pairing on its half-plane of convergence.
pub fn mellin_numeric(
    v: &ModelDistribution,
    s: Complex64,
    kp: u32,
    kd: u32,
    chi: &RadialCutoff,
    cfg: &MellinConfig,
) -> Result<Complex64> {
    let abscissa = (v.order() + kp + kd) as f64;
    if 2.0 * s.re <= abscissa + cfg.margin {
        return Err(Error::DomainError {
            s: format!("{s}"),
            abscissa,
        });
    }
    let coarse = direct(v, s, kp, kd, chi, cfg, cfg.panel_nodes)?;
    let fine = direct(v, s, kp, kd, chi, cfg, 2 * cfg.panel_nodes)?;
    let estimate = (fine - coarse).norm();
    let tolerance = cfg.quad_tolerance * fine.norm().max(1e-300) + 1e-14;
    if estimate > tolerance {
        return Err(Error::QuadratureWarning { estimate, tolerance });
    }
    Ok(fine)
}

fn direct(
    v: &ModelDistribution,
    s: Complex64,
    kp: u32,
    kd: u32,
    chi: &RadialCutoff,
    cfg: &MellinConfig,
    nodes: usize,
) -> Result<Complex64> {
    let graded = Rule::graded(chi.a, chi.b, cfg.graded_depth, nodes);
    let mut total = c(0.0);
    let mut oscillating = ModelDistribution::default();
    for t in &v.terms {
        if t.phi.is_zero() {
            for atom in ModelDistribution::single(t.clone()).atoms() {
                if atom.n - kp as i32 + kd as i32 != 0 {
                    continue;
                }
                let tt = 2.0 * s + 2.0 * atom.beta + (atom.m as f64 - kp as f64 - kd as f64 + 2.0);
                let val: Complex64 = graded.integrate(|x| {
                    let g = if atom.gauss { (-x * x).exp() } else { 1.0 };
                    rpow(x, tt - 1.0) * (-2.0 * x.ln()).powi(atom.l as i32) * (g * chi.eval(x))
                });
                total += 2.0 * atom.c * val;
            }
        } else {
            oscillating.terms.push(t.clone());
        }
    }
    if !oscillating.terms.is_empty() {
        total += MellinEvaluator::with_nodes(&oscillating, kp, kd, chi, cfg, s.re, nodes)?.eval(s);
    }
    Ok(total)
}

/// Value of the meromorphic continuation at `s`.
pub fn mellin_continue(
    v: &ModelDistribution,
    s: Complex64,
    kp: u32,
    kd: u32,
    chi: &RadialCutoff,
    cfg: &MellinConfig,
) -> Result<Complex64> {
    MellinEvaluator::new(v, kp, kd, chi, cfg, s.re - 1.0)?.continue_at(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponential::ExponentialPart;
    use crate::mellin::distribution::{monomials, ModelTerm};
    use crate::scalar::ExactScalar;

    fn one() -> ModelDistribution {
        ModelDistribution::power_log(ExactScalar::zero(), 0)
    }

    fn chi() -> RadialCutoff {
        RadialCutoff::smoothstep(0.5, 1.0).unwrap()
    }

    #[test]
    fn constant_at_two() {
        // 2∫ρ⁵χ by Simpson on a fine grid
        let n = 20000;
        let h = 1.0 / n as f64;
        let f = |x: f64| 2.0 * x.powi(5) * chi().eval(x);
        let simpson: f64 = (0..n)
            .map(|i| {
                let x = i as f64 * h;
                h / 6.0 * (f(x) + 4.0 * f(x + h / 2.0) + f(x + h))
            })
            .sum();
        let cfg = MellinConfig::default();
        let m = mellin_numeric(&one(), c(2.0), 0, 0, &chi(), &cfg).unwrap();
        assert!((m - simpson).norm() < 1e-10, "{m} {simpson}");
        let cont = mellin_continue(&one(), c(2.0), 0, 0, &chi(), &cfg).unwrap();
        assert!((cont - m).norm() < 1e-12);
    }

    #[test]
    fn twisted_monomial_matches_constant() {
        let cfg = MellinConfig::default();
        let y = ModelDistribution::single(
            ModelTerm::new(ExponentialPart::zero(), ExactScalar::zero(), 0).with_g(monomials([((1, 0), c(1.0))])),
        );
        let a = mellin_numeric(&y, c(2.0), 1, 0, &chi(), &cfg).unwrap();
        let b = mellin_numeric(&one(), c(2.0), 0, 0, &chi(), &cfg).unwrap();
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn domain_is_enforced() {
        let cfg = MellinConfig::default();
        let v = ModelDistribution::power_log(ExactScalar::from_frac(-1, 2), 0);
        assert!(matches!(
            mellin_numeric(&v, c(0.6), 0, 0, &chi(), &cfg),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn residue_of_constant() {
        let cfg = MellinConfig::default();
        let e = MellinEvaluator::new(&one(), 0, 0, &chi(), &cfg, -3.0).unwrap();
        let eps = 1e-4;
        let v = e.eval(c(-1.0 + eps)) * eps;
        assert!((v - 1.0).norm() < 1e-3, "{v}");
        assert!(matches!(e.continue_at(c(-1.0 + 1e-4)), Err(Error::NearPole { .. })));
    }

    #[test]
    fn oscillatory_continuation_agrees_with_direct_quadrature() {
        let cfg = MellinConfig::default();
        let phi = ExponentialPart::monomial(1, ExactScalar::one());
        let v = ModelDistribution::single(ModelTerm::new(phi, ExactScalar::from_frac(3, 10), 1).with_gauss());
        let s = Complex64::new(1.7, 0.4);
        let direct = mellin_numeric(&v, s, 0, 0, &chi(), &cfg).unwrap();
        // continuation built for a window far to the left uses many more steps
        let e = MellinEvaluator::new(&v, 0, 0, &chi(), &cfg, -3.0).unwrap();
        assert!((e.eval(s) - direct).norm() < 1e-9 * direct.norm().max(1.0), "{} {direct}", e.eval(s));
    }
}
