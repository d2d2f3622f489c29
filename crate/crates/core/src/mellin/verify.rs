//! Checking detected Mellin poles against the lattice predicted by a skeleton.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::cutoff::RadialCutoff;
use super::distribution::ModelDistribution;
use super::poles::{pole_scan, DetectedPole, PoleLattice, PoleReport, Window};
use super::MellinConfig;
use crate::skeleton::ExpansionSkeleton;

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// First offending pole.
    pub witness: Option<DetectedPole>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub assertions: Vec<Assertion>,
    pub scans: Vec<PoleReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn to_json(&self) -> Value {
        let pole = |p: &DetectedPole| {
            json!({"kPrime": p.k_prime, "kDouble": p.k_double, "locRe": p.location.re + 0.0,
                   "locIm": p.location.im + 0.0, "order": p.order})
        };
        json!({
            "pass": self.passed(),
            "assertions": self.assertions.iter().map(|a| json!({
                "name": a.name, "pass": a.pass, "detail": a.detail,
                "witness": a.witness.as_ref().map(pole),
            })).collect::<Vec<_>>(),
            "poles": self.scans.iter().flat_map(|s| s.poles.iter().map(pole)).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub window: Window,
    /// Twists `(k', k'')` range over `0..=k_max` in both slots.
    pub k_max: u32,
    pub tolerance: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            window: Window::new(-2.6, 1.4, -0.5, 0.5).unwrap(),
            k_max: 2,
            tolerance: 1e-6,
        }
    }
}

fn assertion(name: &str, failures: Vec<(DetectedPole, String)>, checked: usize) -> Assertion {
    let pass = failures.is_empty();
    let detail = match failures.first() {
        None => format!("{checked} poles checked"),
        Some((_, why)) => format!("{} of {checked} poles fail; first: {why}", failures.len()),
    };
    Assertion {
        name: name.to_string(),
        pass,
        detail,
        witness: failures.into_iter().next().map(|f| f.0),
    }
}

pub fn verify_skeleton(
    v: &ModelDistribution,
    s: &ExpansionSkeleton,
    chi: &RadialCutoff,
    cfg: &MellinConfig,
    opts: &VerifyOptions,
) -> VerificationReport {
    let lattice = PoleLattice::from_skeleton(s);
    let oscillating = ModelDistribution::new(v.terms.iter().filter(|t| !t.phi.is_zero()).cloned().collect());
    let mut scans = Vec::new();
    let mut errors = Vec::new();
    let mut osc_poles = Vec::new();
    for kp in 0..=opts.k_max {
        for kd in 0..=opts.k_max {
            match pole_scan(v, &opts.window, kp, kd, chi, cfg, Some(&lattice)) {
                Ok(r) => scans.push(r),
                Err(e) => errors.push(format!("(k'={kp}, k''={kd}): {e}")),
            }
            if !oscillating.terms.is_empty() {
                match pole_scan(&oscillating, &opts.window, kp, kd, chi, cfg, None) {
                    Ok(r) => osc_poles.extend(r.poles),
                    Err(e) => errors.push(format!("(k'={kp}, k''={kd}) oscillating part: {e}")),
                }
            }
        }
    }
    let all: Vec<&DetectedPole> = scans.iter().flat_map(|r| r.poles.iter()).collect();
    let describe = |p: &DetectedPole| {
        format!(
            "(k'={}, k''={}) pole at {:.6}{:+.6}i of order {}",
            p.k_prime, p.k_double, p.location.re, p.location.im, p.order
        )
    };
    let outside: Vec<_> = all
        .iter()
        .filter(|p| !lattice.contains(p.k_prime, p.k_double, p.location, opts.tolerance))
        .map(|p| ((*p).clone(), format!("{} outside the lattice", describe(p))))
        .collect();
    let too_high: Vec<_> = all
        .iter()
        .filter(|p| p.order > lattice.order_bound(p.location))
        .map(|p| {
            let bound = lattice.order_bound(p.location);
            ((*p).clone(), format!("{} exceeds bound {bound}", describe(p)))
        })
        .collect();
    let osc: Vec<_> = osc_poles.iter().map(|p| (p.clone(), describe(p))).collect();
    let mut assertions = vec![
        assertion("poles-in-lattice", outside, all.len()),
        assertion("orders-bounded", too_high, all.len()),
        assertion("exponential-parts-entire", osc, osc_poles.len()),
    ];
    if !errors.is_empty() {
        assertions.push(Assertion {
            name: "scans-completed".into(),
            pass: false,
            detail: errors.join("; "),
            witness: None,
        });
    }
    VerificationReport { assertions, scans }
}

/// Lowest-order Laurent data at `α` in a report, if detected.
pub fn find_pole(report: &PoleReport, alpha: Complex64, tol: f64) -> Option<&DetectedPole> {
    report.poles.iter().find(|p| (p.location - alpha).norm() < tol)
}
