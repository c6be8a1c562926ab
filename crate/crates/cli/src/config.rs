//! Effective run configuration: defaults, overridden by an optional JSON
//! config file, overridden by flags. Every report embeds the exact
//! configuration that produced it.

use std::path::Path;

use serde::{Deserialize, Serialize};

use ellbounds_core::{ProblemParams, RadiiChain, SuiteOptions};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub d: u32,
    pub p: f64,
    pub lambda: f64,
    pub u0: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r_inf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eps: Option<f64>,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub jobs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inject_perturbation: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            d: 3,
            p: 1.0,
            lambda: 1.0,
            u0: 1.0,
            r_inf: None,
            r_bar: None,
            r0: None,
            q: None,
            eps: None,
            tol: 1e-10,
            s2: None,
            jobs: None,
            inject_perturbation: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn problem(&self) -> Result<ProblemParams, String> {
        ProblemParams::new(self.d, self.p, self.lambda).map_err(|e| e.to_string())
    }

    /// Explicit chain from the radii flags; None when no radii were given.
    pub fn chain(&self) -> Result<Option<RadiiChain>, String> {
        match (self.r_inf, self.r0) {
            (None, None) => Ok(None),
            (Some(ri), Some(r0)) => RadiiChain::new(ri, self.r_bar, r0, None)
                .map(Some)
                .map_err(|e| e.to_string()),
            _ => Err("give both --r-inf and --r0, or neither".into()),
        }
    }

    pub fn suite_options(&self, selection: Option<Vec<String>>) -> SuiteOptions {
        SuiteOptions {
            s2_override: self.s2,
            solver_tol: self.tol,
            perturbation: self.inject_perturbation,
            selection,
            geometry_scale: 1.0,
            q_override: self.q,
            eps_override: self.eps,
        }
    }

    /// Stable 64-bit FNV-1a hash of the canonical JSON encoding; stamped
    /// into CSV headers so exported data can be traced back to its config.
    pub fn hash(&self) -> u64 {
        let text = serde_json::to_string(self).expect("config serializes");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}
