//! Newton polygon of a θ-form operator.
//!
//! Points are `(i, val a_i)` for the θ-form coefficients `a_i`, which equals
//! `(i, val a_i^D - i)` for the D-form coefficients. The polygon is the
//! boundary of the convex hull of the quadrants `(i, v) + {(≤0, ≥0)}`. It is
//! read left to right: a horizontal part (slope 0, the regular part) followed
//! by strictly increasing positive slopes.

use num_rational::BigRational;
use num_traits::Zero;

use crate::operator::DiffOp;
use crate::scalar::rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub slope: BigRational,
    pub start: (usize, i64),
    pub end: (usize, i64),
}

impl Edge {
    pub fn length(&self) -> usize {
        self.end.0 - self.start.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
    /// `(slope, horizontal length)`, nondecreasing in slope.
    pub slopes: Vec<(BigRational, usize)>,
    pub edges: Vec<Edge>,
}

impl NewtonPolygon {
    pub fn of(op: &DiffOp) -> Self {
        let pts = op.valuation_points();
        let Some(vmin) = pts.iter().map(|p| p.1).min() else {
            return Self {
                vertices: Vec::new(),
                slopes: Vec::new(),
                edges: Vec::new(),
            };
        };
        let i0 = pts.iter().filter(|p| p.1 == vmin).map(|p| p.0).max().unwrap();
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        if i0 > 0 {
            vertices.push((0, vmin));
            edges.push(Edge {
                slope: BigRational::zero(),
                start: (0, vmin),
                end: (i0, vmin),
            });
        }
        vertices.push((i0, vmin));
        let mut cur = (i0, vmin);
        loop {
            let mut best: Option<((usize, i64), BigRational)> = None;
            for &(j, v) in pts.iter().filter(|p| p.0 > cur.0) {
                let s = rat(v - cur.1, (j - cur.0) as i64);
                let better = match &best {
                    None => true,
                    Some((bp, bs)) => s < *bs || (s == *bs && j > bp.0),
                };
                if better {
                    best = Some(((j, v), s));
                }
            }
            let Some((next, slope)) = best else { break };
            edges.push(Edge {
                slope,
                start: cur,
                end: next,
            });
            vertices.push(next);
            cur = next;
        }
        let slopes = edges.iter().map(|e| (e.slope.clone(), e.length())).collect();
        Self {
            vertices,
            slopes,
            edges,
        }
    }

    /// Length of the slope-0 part (rank of the regular part).
    pub fn regular_length(&self) -> usize {
        self.slopes
            .iter()
            .filter(|(s, _)| s.is_zero())
            .map(|(_, l)| *l)
            .sum()
    }

    pub fn total_length(&self) -> usize {
        self.slopes.iter().map(|(_, l)| l).sum()
    }

    pub fn is_regular(&self) -> bool {
        self.slopes.iter().all(|(s, _)| s.is_zero())
    }

    /// Largest slope, zero for regular operators.
    pub fn irregularity(&self) -> BigRational {
        self.slopes
            .iter()
            .map(|(s, _)| s.clone())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Var;
    use crate::operator::DiffOp;
    use crate::scalar::ExactScalar as S;

    fn x() -> DiffOp {
        DiffOp::multiplication(Var::X, 1, S::one())
    }

    #[test]
    fn regular_operator_has_single_flat_slope() {
        let t = DiffOp::theta(Var::X);
        let p = t.pow(2).add(&t).add(&DiffOp::constant(Var::X, 5.into()));
        let np = NewtonPolygon::of(&p);
        assert_eq!(np.slopes, vec![(rat(0, 1), 2)]);
    }

    #[test]
    fn x2d_plus_one_has_slope_one() {
        // θ-form: xθ + 1, points (0,0), (1,1)
        let p = x().compose(&DiffOp::theta(Var::X)).add(&DiffOp::constant(Var::X, 1.into()));
        assert_eq!(NewtonPolygon::of(&p).slopes, vec![(rat(1, 1), 1)]);
    }

    #[test]
    fn half_slope_operator() {
        // 4x³∂² + 6x²∂ - 1 = 4xθ² + 2xθ - 1, points (0,0),(1,1),(2,1)
        let d = DiffOp::derivation(Var::X);
        let p = DiffOp::multiplication(Var::X, 3, 4.into())
            .compose(&d.pow(2))
            .add(&DiffOp::multiplication(Var::X, 2, 6.into()).compose(&d))
            .sub(&DiffOp::constant(Var::X, 1.into()));
        let np = NewtonPolygon::of(&p);
        assert_eq!(np.slopes, vec![(rat(1, 2), 2)]);
        assert_eq!(np.total_length(), p.order());
    }
}
