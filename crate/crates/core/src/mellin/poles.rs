//! Pole lattices, contour-integral Laurent coefficients and pole scans.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::RadialCutoff;
use super::distribution::ModelDistribution;
use super::evaluate::MellinEvaluator;
use super::MellinConfig;
use crate::error::{Error, Result};
use crate::skeleton::ExpansionSkeleton;

const SAME: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min <= im_max) {
            return Err(Error::Invalid(format!("empty window {re_min},{re_max},{im_min},{im_max}")));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// `re_min,re_max` or `re_min,re_max,im_min,im_max`; a real window gets
    /// `Im s ∈ [-0.5, 0.5]`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<f64> = text
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Invalid(format!("window {text:?}: {e}")))?;
        match parts[..] {
            [a, b] => Self::new(a, b, -0.5, 0.5),
            [a, b, c, d] => Self::new(a, b, c, d),
            _ => Err(Error::Invalid(format!("window {text:?} needs 2 or 4 numbers"))),
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }
}

fn same_coset(a: Complex64, b: Complex64) -> bool {
    let d = a - b;
    d.im.abs() < SAME && (d.re - d.re.round()).abs() < SAME
}

/// Predicted poles `(A' + k' - ℕ) ∩ (A'' + k'' - ℕ)` with `α = -β - 1`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PoleLattice {
    pub a_prime: Vec<Complex64>,
    pub a_double: Vec<Complex64>,
    /// Order bound along `α + ℤ`, keyed by a representative.
    pub orders: Vec<(Complex64, u32)>,
}

impl PoleLattice {
    /// From the `φ = 0` entries of a skeleton and their staircases.
    pub fn from_skeleton(s: &ExpansionSkeleton) -> Self {
        let mut out = Self::default();
        for e in s.entries.iter().filter(|e| e.phi.is_zero()) {
            let beta = e.beta.to_c64();
            let points = s
                .staircase
                .iter()
                .find(|c| c.phi.is_zero() && c.beta == e.beta)
                .map_or(vec![(0, 0)], |c| c.staircase.points.clone());
            for (a, b) in points {
                out.a_prime.push(-beta - 1.0 - a as f64);
                out.a_double.push(-beta - 1.0 - b as f64);
            }
            out.orders.push((-beta - 1.0, e.l_max + 1));
        }
        out
    }

    /// The lattice read off the `φ = 0` terms of the distribution itself.
    pub fn from_distribution(v: &ModelDistribution) -> Self {
        let mut out = Self::default();
        for atom in v.atoms().iter().filter(|a| a.phi.is_zero()) {
            let hol = atom.beta + (atom.m as f64 + atom.n as f64) / 2.0;
            let anti = atom.beta + (atom.m as f64 - atom.n as f64) / 2.0;
            out.a_prime.push(-hol - 1.0);
            out.a_double.push(-anti - 1.0);
            out.orders.push((-hol - 1.0, atom.l + 1));
        }
        out
    }

    pub fn order_bound(&self, alpha: Complex64) -> u32 {
        self.orders
            .iter()
            .filter(|(rep, _)| same_coset(*rep, alpha))
            .map(|o| o.1)
            .max()
            .unwrap_or(0)
    }

    fn in_shifted(set: &[Complex64], k: u32, alpha: Complex64, tol: f64) -> bool {
        set.iter().any(|&a| {
            let d = a + k as f64 - alpha;
            d.im.abs() < tol && (d.re - d.re.round()).abs() < tol && d.re.round() >= 0.0
        })
    }

    pub fn contains(&self, kp: u32, kd: u32, alpha: Complex64, tol: f64) -> bool {
        Self::in_shifted(&self.a_prime, kp, alpha, tol) && Self::in_shifted(&self.a_double, kd, alpha, tol)
    }

    /// Lattice points inside the window with their order bounds.
    pub fn candidates(&self, kp: u32, kd: u32, window: &Window) -> Vec<(Complex64, u32)> {
        let mut out: Vec<(Complex64, u32)> = Vec::new();
        for &a1 in &self.a_prime {
            for &a2 in &self.a_double {
                if !same_coset(a1, a2) {
                    continue;
                }
                let (t1, t2) = (a1 + kp as f64, a2 + kd as f64);
                let top = if t1.re <= t2.re { t1 } else { t2 };
                let mut z = top;
                while z.re > window.re_min {
                    if window.contains(z) && !out.iter().any(|o| (o.0 - z).norm() < SAME) {
                        out.push((z, self.order_bound(z)));
                    }
                    z -= 1.0;
                }
            }
        }
        out.sort_by(|x, y| x.0.re.total_cmp(&y.0.re).then(x.0.im.total_cmp(&y.0.im)));
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectedPole {
    pub k_prime: u32,
    pub k_double: u32,
    pub location: Complex64,
    pub order: u32,
    /// `c_{-1}, …, c_{-order}`.
    pub laurent: Vec<Complex64>,
    pub confidence: f64,
    /// Whether the pole was a supplied candidate.
    pub expected: bool,
}

impl DetectedPole {
    pub fn leading(&self) -> Complex64 {
        self.laurent[self.order as usize - 1]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleReport {
    pub window: Window,
    pub poles: Vec<DetectedPole>,
}

impl PoleReport {
    pub fn merge(reports: impl IntoIterator<Item = PoleReport>) -> Option<PoleReport> {
        let mut it = reports.into_iter();
        let mut first = it.next()?;
        for r in it {
            first.poles.extend(r.poles);
        }
        first.sort();
        Some(first)
    }

    fn sort(&mut self) {
        self.poles.sort_by(|a, b| {
            (a.k_prime, a.k_double)
                .cmp(&(b.k_prime, b.k_double))
                .then(a.location.re.total_cmp(&b.location.re))
                .then(a.location.im.total_cmp(&b.location.im))
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kPrime,kDouble,locRe,locIm,order,leadRe,leadIm,confidence\n");
        for p in &self.poles {
            let lead = p.leading();
            // `+ 0.0` turns -0 into 0
            let _ = writeln!(
                out,
                "{},{},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e}",
                p.k_prime,
                p.k_double,
                p.location.re + 0.0,
                p.location.im + 0.0,
                p.order,
                lead.re + 0.0,
                lead.im + 0.0,
                p.confidence
            );
        }
        out
    }

    /// Lattice candidates as crosses, detected poles as circles sized by order.
    pub fn to_svg(&self, candidates: &[Complex64]) -> String {
        let w = &self.window;
        let (width, height) = (640.0, 320.0);
        let sx = |x: f64| (x - w.re_min) / (w.re_max - w.re_min) * width;
        let span = (w.im_max - w.im_min).max(1e-9);
        let sy = |y: f64| height - (y - w.im_min) / span * height;
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"-20 -20 {} {}\">\n",
            width + 40.0,
            height + 40.0
        );
        let _ = writeln!(
            out,
            "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"none\" stroke=\"#888\"/>"
        );
        if w.im_min <= 0.0 && w.im_max >= 0.0 {
            let _ = writeln!(out, "<line x1=\"0\" y1=\"{0:.2}\" x2=\"{width}\" y2=\"{0:.2}\" stroke=\"#ccc\"/>", sy(0.0));
        }
        for z in candidates {
            let (x, y) = (sx(z.re), sy(z.im));
            let _ = writeln!(
                out,
                "<path d=\"M{:.2} {:.2} l8 8 m0 -8 l-8 8\" stroke=\"#1f77b4\"/>",
                x - 4.0,
                y - 4.0
            );
        }
        for p in &self.poles {
            let colour = if p.expected { "#2ca02c" } else { "#d62728" };
            let _ = writeln!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{}\" fill=\"none\" stroke=\"{colour}\"><title>k'={} k''={} s={:.6}{:+.6}i order {}</title></circle>",
                sx(p.location.re),
                sy(p.location.im),
                4 + 3 * p.order,
                p.k_prime,
                p.k_double,
                p.location.re,
                p.location.im,
                p.order
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Moments `c_{-k} = (1/2πi)∮ M(z)(z-z₀)^{k-1} dz`, `k = 1..=kmax`, and `max |M|`.
pub fn laurent_moments(
    f: &impl Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    nodes: usize,
    kmax: usize,
) -> (Vec<Complex64>, f64) {
    let mut moments = vec![Complex64::new(0.0, 0.0); kmax];
    let mut max = 0.0f64;
    for j in 0..nodes {
        let u = Complex64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64);
        let v = f(center + u);
        max = max.max(v.norm());
        let mut p = u;
        for m in moments.iter_mut() {
            *m += v * p;
            p *= u;
        }
    }
    for m in moments.iter_mut() {
        *m /= nodes as f64;
    }
    (moments, max)
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

struct Characterized {
    center: Complex64,
    order: u32,
    laurent: Vec<Complex64>,
    confidence: f64,
    lowest: u32,
}

fn characterize(
    f: &impl Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    cfg: &MellinConfig,
) -> Characterized {
    let (m, max) = laurent_moments(f, center, radius, cfg.contour_nodes, cfg.max_laurent);
    let scaled: Vec<f64> = m
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm() * radius.powi(-(k as i32 + 1)) / max.max(1e-300))
        .collect();
    let significant = |k: usize| scaled[k] > cfg.noise_floor;
    let order = (0..m.len()).rev().find(|&k| significant(k)).map_or(0, |k| k + 1);
    let lowest = (0..m.len()).find(|&k| significant(k)).map_or(0, |k| k + 1);
    let confidence = if order == 0 {
        0.0
    } else {
        ((scaled[order - 1] / cfg.noise_floor).log10() / -cfg.noise_floor.log10()).clamp(0.0, 1.0)
    };
    Characterized {
        center,
        order: order as u32,
        laurent: m[..order].to_vec(),
        confidence,
        lowest: lowest as u32,
    }
}

/// Characterize near an estimated location, recentring on the
/// `c_{-k-1} = k δ c_{-k}` relation of a shifted pole of order `k`.
fn locate(
    f: &impl Fn(Complex64) -> Complex64,
    start: Complex64,
    radius: f64,
    cfg: &MellinConfig,
) -> Characterized {
    let mut best = characterize(f, start, radius, cfg);
    for _ in 0..6 {
        if best.order == 0 || best.order == best.lowest || (best.lowest as usize) >= cfg.max_laurent {
            break;
        }
        let k = best.lowest as usize;
        let (m, _) = laurent_moments(f, best.center, radius, cfg.contour_nodes, k + 1);
        let delta = m[k] / (k as f64 * m[k - 1]);
        if !(delta.norm() < radius) {
            break;
        }
        let next = characterize(f, best.center + delta, radius, cfg);
        if next.order > best.order {
            break;
        }
        best = next;
    }
    best
}

/// Radius for a circle around `center` keeping clear of `points`.
fn clear_radius(center: Complex64, radius: f64, points: &[Complex64], tol: f64) -> Result<f64> {
    let mut r = radius;
    for &p in points {
        let d = (p - center).norm();
        if d < tol {
            continue;
        }
        if (d - r).abs() < 1e-12 {
            return Err(Error::ContourThroughPole {
                center: format!("{center}"),
                pole: format!("{p}"),
            });
        }
        if d < 1.5 * r {
            r = d / 3.0;
        }
    }
    Ok(r)
}

pub fn pole_scan(
    v: &ModelDistribution,
    window: &Window,
    kp: u32,
    kd: u32,
    chi: &RadialCutoff,
    cfg: &MellinConfig,
    lattice: Option<&PoleLattice>,
) -> Result<PoleReport> {
    let eval = MellinEvaluator::new(v, kp, kd, chi, cfg, window.re_min - cfg.sweep_cell)?;
    let f = |z: Complex64| eval.eval(z);
    let candidates: Vec<Complex64> = lattice
        .map(|l| l.candidates(kp, kd, window).into_iter().map(|c| c.0).collect())
        .unwrap_or_default();
    let mut known: Vec<Complex64> = candidates.clone();
    known.extend(eval.singularities());

    let mut poles: Vec<DetectedPole> = Vec::new();
    for &alpha in &candidates {
        let r = clear_radius(alpha, cfg.contour_radius, &known, cfg.merge_tolerance)?;
        let ch = characterize(&f, alpha, r, cfg);
        if ch.order > 0 {
            poles.push(DetectedPole {
                k_prime: kp,
                k_double: kd,
                location: alpha,
                order: ch.order,
                laurent: ch.laurent,
                confidence: ch.confidence,
                expected: true,
            });
        }
    }

    // sweep for poles that are not candidates
    let nx = ((window.re_max - window.re_min) / cfg.sweep_cell).ceil().max(1.0) as usize;
    let ny = ((window.im_max - window.im_min) / cfg.sweep_cell).ceil().max(1.0) as usize;
    let hx = (window.re_max - window.re_min) / nx as f64;
    let hy = (window.im_max - window.im_min) / ny as f64;
    let base = 0.5 * (hx * hx + hy * hy).sqrt() * 1.02;
    let kmax = cfg.max_laurent;
    for ix in 0..nx {
        for iy in 0..ny {
            let z0 = Complex64::new(
                window.re_min + (ix as f64 + 0.5) * hx,
                window.im_min + (iy as f64 + 0.5) * hy,
            );
            let clearance = |r: f64| {
                known
                    .iter()
                    .chain(poles.iter().map(|p| &p.location))
                    .map(|p| ((p - z0).norm() - r).abs() / r)
                    .fold(f64::INFINITY, f64::min)
            };
            // only enlarge, so the circles keep covering their cells
            let options: Vec<f64> = (0..8).map(|i| base * (1.0 + 0.07 * i as f64)).collect();
            let rc = options
                .iter()
                .copied()
                .find(|&r| clearance(r) >= 0.03)
                .unwrap_or_else(|| options.iter().copied().max_by(|a, b| clearance(*a).total_cmp(&clearance(*b))).unwrap());
            let (mut m, max) = laurent_moments(&f, z0, rc, cfg.contour_nodes, kmax);
            for p in poles.iter().filter(|p| (p.location - z0).norm() < rc) {
                let d = p.location - z0;
                for (k, mk) in m.iter_mut().enumerate() {
                    let k = k + 1;
                    for (i, a) in p.laurent.iter().enumerate() {
                        let i = i + 1;
                        if k >= i {
                            *mk -= a * binom(k - 1, i - 1) * d.powu((k - i) as u32);
                        }
                    }
                }
            }
            let floor = 10.0 * cfg.noise_floor * max.max(1e-300);
            let Some(k) = (0..kmax).find(|&k| m[k].norm() * rc.powi(-(k as i32 + 1)) > floor) else {
                continue;
            };
            let start = if k + 1 < kmax && m[k].norm() > 0.0 {
                z0 + m[k + 1] / ((k + 1) as f64 * m[k])
            } else {
                z0
            };
            let r = clear_radius(start, cfg.contour_radius, &known, cfg.merge_tolerance)?;
            let ch = locate(&f, start, r, cfg);
            if ch.order == 0 || !window.contains(ch.center) {
                continue;
            }
            if poles.iter().any(|p| (p.location - ch.center).norm() < cfg.merge_tolerance) {
                continue;
            }
            poles.push(DetectedPole {
                k_prime: kp,
                k_double: kd,
                location: ch.center,
                order: ch.order,
                laurent: ch.laurent,
                confidence: ch.confidence,
                expected: false,
            });
        }
    }
    let mut report = PoleReport {
        window: *window,
        poles,
    };
    report.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_double_pole() {
        let a = Complex64::new(-1.3, 0.0);
        let f = |z: Complex64| 2.0 / (z - a).powu(2) + 0.5 / (z - a) + z * z;
        let (m, _) = laurent_moments(&f, a, 0.05, 512, 4);
        assert!((m[0] - 0.5).norm() < 1e-12);
        assert!((m[1] - 2.0).norm() < 1e-12);
        assert!(m[2].norm() < 1e-14);
    }

    #[test]
    fn recentring_finds_offset_pole() {
        let a = Complex64::new(-0.71, 0.013);
        let f = |z: Complex64| 3.0 / (z - a).powu(2) + (z * 0.3).exp();
        let ch = locate(&f, Complex64::new(-0.7, 0.0), 0.05, &MellinConfig::default());
        assert_eq!(ch.order, 2);
        assert!((ch.center - a).norm() < 1e-9, "{}", ch.center);
    }

    #[test]
    fn lattice_candidates() {
        let l = PoleLattice {
            a_prime: vec![Complex64::new(-2.0, 0.0)],
            a_double: vec![Complex64::new(-1.0, 0.0)],
            orders: vec![(Complex64::new(-1.0, 0.0), 2)],
        };
        let w = Window::new(-3.5, 0.5, -0.5, 0.5).unwrap();
        let c: Vec<f64> = l.candidates(1, 0, &w).iter().map(|c| c.0.re).collect();
        assert_eq!(c, vec![-3.0, -2.0, -1.0]);
        assert!(l.contains(1, 0, Complex64::new(-2.0, 0.0), 1e-9));
        assert!(!l.contains(0, 0, Complex64::new(-1.0, 0.0), 1e-9));
        assert_eq!(l.order_bound(Complex64::new(-3.0, 0.0)), 2);
    }
}
