//! Numerical tolerances shared by every membership and validation test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable holding a multiplier applied to every tolerance.
pub const TOL_SCALE_ENV: &str = "CARTAN_BUNDLE_TOL_SCALE";

/// Named tolerances. `recon` is per ambient dimension: the reconstruction
/// threshold for an `n x n` matrix is `recon * n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub orth: f64,
    pub invol: f64,
    pub eig: f64,
    pub recon: f64,
    pub rank: f64,
    pub branch: f64,
    pub sing: f64,
    pub plane: f64,
    pub fiber: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orth: 1e-9,
            invol: 1e-8,
            eig: 1e-7,
            recon: 1e-10,
            rank: 1e-10,
            branch: 1e-6,
            sing: 1e-9,
            plane: 1e-8,
            fiber: 1e-9,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 9] = [
        "orth", "invol", "eig", "recon", "rank", "branch", "sing", "plane", "fiber",
    ];

    /// Defaults multiplied by `CARTAN_BUNDLE_TOL_SCALE` when that variable is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_SCALE_ENV) {
            Ok(raw) => {
                let scale: f64 = raw.trim().parse().map_err(|_| {
                    Error::InvalidValue(format!("{TOL_SCALE_ENV}={raw:?} is not a number"))
                })?;
                Tolerances::default().scaled(scale)
            }
            Err(_) => Ok(Tolerances::default()),
        }
    }

    pub fn scaled(mut self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidValue(format!(
                "tolerance scale must be positive, got {factor}"
            )));
        }
        for name in Self::NAMES {
            *self.slot(name).expect("known name") *= factor;
        }
        Ok(self)
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidValue(format!(
                "tolerance {name} must be positive, got {value}"
            )));
        }
        let slot = self
            .slot(name)
            .ok_or_else(|| Error::InvalidValue(format!("unknown tolerance {name:?}")))?;
        *slot = value;
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        let mut copy = *self;
        copy.slot(name).map(|v| *v)
    }

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "orth" => &mut self.orth,
            "invol" => &mut self.invol,
            "eig" => &mut self.eig,
            "recon" => &mut self.recon,
            "rank" => &mut self.rank,
            "branch" => &mut self.branch,
            "sing" => &mut self.sing,
            "plane" => &mut self.plane,
            "fiber" => &mut self.fiber,
            _ => return None,
        })
    }

    pub(crate) fn recon_for(&self, n: usize) -> f64 {
        self.recon * n.max(1) as f64
    }
}
