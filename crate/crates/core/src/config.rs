//! Run configuration: defaults, JSON file, flag overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub p: f64,
    pub q: f64,
    pub chen_tol: f64,
    pub equiv_tol: f64,
    pub cauchy_tol: f64,
    /// Dyadic depth N of the area construction.
    pub depth: usize,
    /// Seed constant for A_{0,1}.
    pub c0: f64,
    /// Decreasing ε schedule for local solves.
    pub schedule: Vec<f64>,
    /// Ball radius for local solves.
    pub r: f64,
    /// Flow horizon (and the cap on degenerate interval lengths).
    pub horizon: f64,
    /// Seed for randomized probes.
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 2.5,
            q: 3.0,
            chen_tol: 1e-12,
            equiv_tol: 1e-10,
            cauchy_tol: 1e-9,
            depth: 10,
            c0: 0.0,
            schedule: vec![0.2, 0.1, 0.05, 0.025],
            r: 0.5,
            horizon: 1.0,
            seed: 7,
            output_dir: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: RunConfig = serde_json::from_str(&text)?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 2.0 && self.p < 3.0) {
            return Err(Error::PRange(self.p));
        }
        if !(self.q > self.p && self.q <= 4.0) {
            return Err(Error::QRange { p: self.p, q: self.q });
        }
        for (name, tol) in [
            ("chen_tol", self.chen_tol),
            ("equiv_tol", self.equiv_tol),
            ("cauchy_tol", self.cauchy_tol),
        ] {
            if tol <= 0.0 {
                return Err(Error::InvalidInput(format!("{name} must be positive")));
            }
        }
        if self.depth == 0 {
            return Err(Error::InvalidInput("depth must be >= 1".into()));
        }
        if self.r <= 0.0 || self.horizon <= 0.0 {
            return Err(Error::InvalidInput("r and horizon must be positive".into()));
        }
        if self.schedule.is_empty()
            || self.schedule[0] <= 0.0
            || self.schedule.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(Error::InvalidInput(
                "schedule must be positive and strictly decreasing".into(),
            ));
        }
        Ok(())
    }
}
