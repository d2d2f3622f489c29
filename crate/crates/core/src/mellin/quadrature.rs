//! Composite Gauss–Legendre rules.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// Nodes and weights of an `n`-point rule on `[-1, 1]`.
pub fn legendre(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap());
    rule.as_node_weight_pairs().to_vec()
}

/// A list of `(node, weight)` pairs covering some interval.
#[derive(Clone, Debug, Default)]
pub struct Rule {
    pub points: Vec<(f64, f64)>,
}

impl Rule {
    /// `n` nodes on each panel `[e_i, e_{i+1}]`.
    pub fn panels(edges: &[f64], n: usize) -> Self {
        let base = legendre(n);
        let mut points = Vec::with_capacity(base.len() * edges.len());
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let (h, m) = ((hi - lo) / 2.0, (hi + lo) / 2.0);
            points.extend(base.iter().map(|&(x, wt)| (m + h * x, h * wt)));
        }
        Self { points }
    }

    /// Geometric panels `[b 2^{-i-1}, b 2^{-i}]` down to `b 2^{-depth}` plus
    /// uniform panels on `[a, b]`.
    pub fn graded(a: f64, b: f64, depth: u32, n: usize) -> Self {
        let mut edges: Vec<f64> = (0..=depth).rev().map(|i| a * 0.5f64.powi(i as i32)).collect();
        edges.extend((1..=4).map(|i| a + (b - a) * i as f64 / 4.0));
        Self::panels(&edges, n)
    }

    pub fn integrate<T, F>(&self, f: F) -> T
    where
        F: Fn(f64) -> T,
        T: std::iter::Sum<T> + std::ops::Mul<f64, Output = T>,
    {
        self.points.iter().map(|&(x, w)| f(x) * w).sum()
    }
}
