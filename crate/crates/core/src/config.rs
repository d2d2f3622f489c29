//! Run configuration: a TOML file overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal::FormalConfig;
use crate::mellin::{MellinConfig, Profile, RadialCutoff, Window};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct AnalysisConfig {
    pub truncation: usize,
    pub q_cap: u32,
    pub pole_budget: u32,
    pub chi_a: f64,
    pub chi_b: f64,
    pub chi_profile: Profile,
    /// `[re_min, re_max, im_min, im_max]`.
    pub window: [f64; 4],
    pub k_prime: u32,
    pub k_double: u32,
    /// Twists checked by `verify` range over `0..=verify_k_max`.
    pub verify_k_max: u32,
    pub mellin: MellinConfig,
    pub out: Option<PathBuf>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let f = FormalConfig::default();
        Self {
            truncation: f.truncation,
            q_cap: f.q_cap,
            pole_budget: f.pole_budget,
            chi_a: 0.5,
            chi_b: 1.0,
            chi_profile: Profile::Smoothstep,
            window: [-2.6, 1.4, -0.5, 0.5],
            k_prime: 0,
            k_double: 0,
            verify_k_max: 2,
            mellin: MellinConfig::default(),
            out: None,
        }
    }
}

impl AnalysisConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.mellin;
        let positive = [
            ("truncation", self.truncation as f64),
            ("q-cap", self.q_cap as f64),
            ("pole-budget", self.pole_budget as f64),
            ("panel-nodes", m.panel_nodes as f64),
            ("contour-radius", m.contour_radius),
            ("contour-nodes", m.contour_nodes as f64),
            ("noise-floor", m.noise_floor),
            ("quad-tolerance", m.quad_tolerance),
            ("exclusion-radius", m.exclusion_radius),
            ("sweep-cell", m.sweep_cell),
            ("max-laurent", m.max_laurent as f64),
        ];
        if let Some((name, _)) = positive.iter().find(|p| !(p.1 > 0.0)) {
            return Err(Error::Invalid(format!("config: {name} must be positive")));
        }
        self.cutoff()?;
        self.window()?;
        Ok(())
    }

    pub fn formal(&self) -> FormalConfig {
        FormalConfig {
            q_cap: self.q_cap,
            pole_budget: self.pole_budget,
            truncation: self.truncation,
        }
    }

    pub fn cutoff(&self) -> Result<RadialCutoff> {
        RadialCutoff::new(self.chi_a, self.chi_b, self.chi_profile)
    }

    pub fn window(&self) -> Result<Window> {
        let [a, b, c, d] = self.window;
        Window::new(a, b, c, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let cfg = AnalysisConfig::default();
        assert_eq!(AnalysisConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        let partial = AnalysisConfig::from_toml("q-cap = 6\n[mellin]\ncontour-radius = 0.02\n").unwrap();
        assert_eq!(partial.q_cap, 6);
        assert_eq!(partial.mellin.contour_radius, 0.02);
        assert_eq!(partial.truncation, 40);
        assert!(AnalysisConfig::from_toml("bogus = 1").is_err());
        assert!(AnalysisConfig::from_toml("chi-a = 2.0").is_err());
    }
}
