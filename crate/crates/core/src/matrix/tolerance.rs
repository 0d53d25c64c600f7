use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every module.
///
/// The stored values are dimensionless factors; the effective thresholds scale
/// with the operands:
///
/// * rank cutoff: `rank_rtol · scale`, where `scale` is σ_max of the matrix
///   (or a known norm of the operator it was assembled from);
/// * eigenvalue clustering width: `cluster_atol · (1 + ‖H‖)`;
/// * residual acceptance: `residual_atol + residual_rtol · ‖B‖ · (1 + ‖X‖)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub rank_rtol: f64,
    pub cluster_atol: f64,
    pub residual_atol: f64,
    pub residual_rtol: f64,
}

pub const PROFILE_ENV: &str = "RICCATI_TOL_PROFILE";

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_rtol: 1e-10,
            cluster_atol: 1e-8,
            residual_atol: 1e-9,
            residual_rtol: 1e-9,
        }
    }
}

impl TolerancePolicy {
    pub fn strict() -> Self {
        Self {
            rank_rtol: 1e-12,
            cluster_atol: 1e-10,
            residual_atol: 1e-11,
            residual_rtol: 1e-11,
        }
    }

    /// Named preset: `default` or `strict`.
    pub fn profile(name: &str) -> Result<Self> {
        match name.trim() {
            "" | "default" => Ok(Self::default()),
            "strict" => Ok(Self::strict()),
            other => Err(Error::InvalidSpec(format!(
                "unknown tolerance profile {other:?} (expected default or strict)"
            ))),
        }
    }

    /// Preset selected by `RICCATI_TOL_PROFILE`, falling back to the default.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PROFILE_ENV) {
            Ok(name) => Self::profile(&name),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rank_rtol", self.rank_rtol),
            ("cluster_atol", self.cluster_atol),
            ("residual_atol", self.residual_atol),
            ("residual_rtol", self.residual_rtol),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidSpec(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn rank_cutoff(&self, scale: f64) -> f64 {
        self.rank_rtol * scale
    }

    pub fn cluster_width(&self, norm: f64) -> f64 {
        self.cluster_atol * (1.0 + norm)
    }

    pub fn residual_bound(&self, norm_b: f64, norm_x: f64) -> f64 {
        self.residual_atol + self.residual_rtol * norm_b * (1.0 + norm_x).powi(2)
    }

    /// Contractivity allowance: ‖X‖ ≤ 1 + rank_rtol.
    pub fn is_contractive_norm(&self, norm: f64) -> bool {
        norm <= 1.0 + self.rank_rtol
    }
}
