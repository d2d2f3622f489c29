//! Mellin transforms `s ↦ ⟨v, |y|^{2s} y^{-k'} ȳ^{-k''} χ⟩` of model
//! distributions, their continuation, pole detection and comparison with a
//! predicted lattice. The pairing uses the measure `(1/π) ρ dρ dθ`.

pub mod cutoff;
pub mod distribution;
pub mod evaluate;
pub mod l1;
pub mod poles;
pub mod quadrature;
pub mod verify;

use serde::{Deserialize, Serialize};

pub use cutoff::{Profile, RadialCutoff};
pub use distribution::{ModelDistribution, ModelTerm};
pub use evaluate::{mellin_continue, mellin_numeric, MellinEvaluator};
pub use poles::{pole_scan, PoleLattice, PoleReport, Window};
pub use verify::{verify_skeleton, VerificationReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct MellinConfig {
    /// `mellin_numeric` requires `2 Re s > p + k' + k'' + margin`.
    pub margin: f64,
    pub exclusion_radius: f64,
    /// Gauss–Legendre nodes per panel.
    pub panel_nodes: usize,
    /// Number of geometric panels towards `ρ = 0`.
    pub graded_depth: u32,
    /// Relative tolerance between a rule and its refinement.
    pub quad_tolerance: f64,
    /// Radial exponent reached by integrating by parts before truncating the disc.
    pub ibp_target: f64,
    pub max_ibp_steps: usize,
    pub contour_radius: f64,
    pub contour_nodes: usize,
    pub noise_floor: f64,
    pub merge_tolerance: f64,
    /// Side of the cells of the sweep for unexpected poles.
    pub sweep_cell: f64,
    pub max_laurent: usize,
}

impl Default for MellinConfig {
    fn default() -> Self {
        Self {
            margin: 0.5,
            exclusion_radius: 1e-3,
            panel_nodes: 20,
            graded_depth: 60,
            quad_tolerance: 1e-9,
            ibp_target: 6.0,
            max_ibp_steps: 48,
            contour_radius: 0.05,
            contour_nodes: 512,
            noise_floor: 1e-8,
            merge_tolerance: 1e-6,
            sweep_cell: 0.5,
            max_laurent: 8,
        }
    }
}
