//! Functions on the real blow-up of the origin, `ρ ≥ 0`, `θ ∈ S¹`, given by
//! truncated Fourier–Taylor data `Σ f̃_{m,n} ρ^m e^{inθ}`, and their
//! decomposition `Σ_{-2k₀ ≤ k ≤ 0} g_k(y) |y|^k` with `g_k` smooth.
//!
//! `ρ^m e^{inθ} = y^{k'} ȳ^{k''}` with `k' = (m+n)/2`, `k'' = (m-n)/2`. The
//! monomial goes to a `k` with `k' - k/2, k'' - k/2 ∈ ℕ`, that is `k ≡ m+n
//! (mod 2)` and `k ≤ m - |n|`. The largest such `k ≤ 0` is used. When
//! `m - |n| > 0` is odd the monomial still needs `k = -1`
//! (`ρ² e^{iθ} = y|y|`), one more than the bound `(m ± n)/2 ≥ -k₀` suggests.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FourierTaylor {
    pub coefficients: BTreeMap<(u32, i32), Complex64>,
    pub m_max: u32,
    pub n_max: u32,
}

impl FourierTaylor {
    pub fn new(coefficients: impl IntoIterator<Item = ((u32, i32), Complex64)>) -> Self {
        let coefficients: BTreeMap<_, _> = coefficients.into_iter().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect();
        let m_max = coefficients.keys().map(|k| k.0).max().unwrap_or(0);
        let n_max = coefficients.keys().map(|k| k.1.unsigned_abs()).max().unwrap_or(0);
        Self {
            coefficients,
            m_max,
            n_max,
        }
    }

    pub fn eval(&self, rho: f64, theta: f64) -> Complex64 {
        self.coefficients
            .iter()
            .map(|(&(m, n), c)| c * rho.powi(m as i32) * Complex64::from_polar(1.0, n as f64 * theta))
            .sum()
    }
}

/// Largest admissible `k ≤ 0` for the monomial `ρ^m e^{inθ}`.
pub fn route(m: u32, n: i32) -> i32 {
    let d = m as i32 - n.abs();
    if d <= 0 {
        d
    } else if d % 2 == 0 {
        0
    } else {
        -1
    }
}

/// Smallest `k₀` accommodating the monomial.
pub fn required_k0(m: u32, n: i32) -> u32 {
    (-route(m, n) + 1) as u32 / 2
}

/// `g_k` as a polynomial `Σ c y^a ȳ^b`, keyed by `(a, b)`.
pub type SmoothPoly = BTreeMap<(u32, u32), Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub struct Collapse {
    pub k0: u32,
    pub components: BTreeMap<i32, SmoothPoly>,
}

impl Collapse {
    /// Fourier–Taylor data of `Σ_k g_k |y|^k`.
    pub fn to_fourier_taylor(&self) -> FourierTaylor {
        let mut out: BTreeMap<(u32, i32), Complex64> = BTreeMap::new();
        for (&k, g) in &self.components {
            for (&(a, b), c) in g {
                let m = (a + b) as i32 + k;
                *out.entry((m as u32, a as i32 - b as i32)).or_default() += c;
            }
        }
        FourierTaylor::new(out)
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        let r = y.norm();
        self.components
            .iter()
            .flat_map(|(&k, g)| {
                g.iter()
                    .map(move |(&(a, b), c)| c * y.powu(a) * y.conj().powu(b) * r.powi(k))
            })
            .sum()
    }
}

pub fn collapse_blowup(f: &FourierTaylor, budget: u32) -> Result<Collapse> {
    let worst = f
        .coefficients
        .keys()
        .map(|&(m, n)| (required_k0(m, n), m, n))
        .max_by_key(|w| w.0);
    let k0 = worst.map_or(0, |w| w.0);
    if let Some((required, m, n)) = worst.filter(|w| w.0 > budget) {
        return Err(Error::BudgetExceeded {
            budget,
            m,
            n,
            required,
        });
    }
    let mut components: BTreeMap<i32, SmoothPoly> = BTreeMap::new();
    for (&(m, n), c) in &f.coefficients {
        let k = route(m, n);
        // 2k' - k and 2k'' - k
        let a = ((m as i32 + n - k) / 2) as u32;
        let b = ((m as i32 - n - k) / 2) as u32;
        *components.entry(k).or_default().entry((a, b)).or_default() += c;
    }
    Ok(Collapse { k0, components })
}

/// Minimal `k₀` by trying every `k₀ ≤ limit` and every `k ∈ [-2k₀, 0]`.
pub fn brute_force_k0(f: &FourierTaylor, limit: u32) -> Option<u32> {
    (0..=limit).find(|&k0| {
        f.coefficients.keys().all(|&(m, n)| {
            (-2 * k0 as i32..=0).any(|k| {
                let a2 = m as i32 + n - k;
                let b2 = m as i32 - n - k;
                a2 >= 0 && b2 >= 0 && a2 % 2 == 0 && b2 % 2 == 0
            })
        })
    })
}
