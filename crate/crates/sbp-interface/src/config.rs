//! JSON run configurations for the command line tool. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::euler::{EulerConfig, OrderSpec, VortexParams};
use crate::interp::{InterpKind, StencilShape};
use crate::sat::CouplingMode;
use crate::spectrum::{ModelConfig, STABILITY_TOL};
use crate::{Error, Result};

/// Environment variable that redirects relative output paths.
pub const OUTPUT_DIR_ENV: &str = "SBP_OUTPUT_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOpsConfig {
    #[serde(default = "all_orders")]
    pub orders: Vec<usize>,
    /// Intervals of the 1-D operators.
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "preserving_kinds")]
    pub kinds: Vec<InterpKind>,
    /// Coarse intervals for the pairs; each kind is raised to its minimum if smaller.
    #[serde(default)]
    pub mc: Option<usize>,
}

fn all_orders() -> Vec<usize> {
    vec![2, 4, 6, 8]
}

fn default_n() -> usize {
    40
}

fn preserving_kinds() -> Vec<InterpKind> {
    InterpKind::TABULATED.into_iter().filter(|k| k.is_sbp_preserving()).collect()
}

impl Default for VerifyOpsConfig {
    fn default() -> Self {
        Self { orders: all_orders(), n: default_n(), kinds: preserving_kinds(), mc: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildInterpConfig {
    pub p: usize,
    pub mc: usize,
    /// Closure shape; the tabulated shape for `p` when absent.
    #[serde(default)]
    pub shape: Option<StencilShape>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    /// One model, or several entries run as a sweep.
    #[serde(default)]
    pub model: Option<ModelConfig>,
    #[serde(default)]
    pub sweep: Vec<ModelConfig>,
    #[serde(default = "default_tol")]
    pub tolerance: f64,
    /// Also report the energy matrix check.
    #[serde(default)]
    pub energy: bool,
}

fn default_tol() -> f64 {
    STABILITY_TOL
}

impl SpectrumConfig {
    pub fn single(model: ModelConfig) -> Self {
        Self { model: Some(model), sweep: Vec::new(), tolerance: STABILITY_TOL, energy: false }
    }

    pub fn models(&self) -> Result<Vec<ModelConfig>> {
        let all: Vec<ModelConfig> = self.model.iter().cloned().chain(self.sweep.iter().cloned()).collect();
        if all.is_empty() {
            return Err(Error::Invalid("spectrum config needs a model or a sweep".into()));
        }
        Ok(all)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VortexConfig {
    pub order: OrderSpec,
    /// Coarse points per side, one run each.
    pub m: Vec<usize>,
    #[serde(default)]
    pub coupling: Option<CouplingMode>,
    #[serde(default)]
    pub cfl: Option<f64>,
    #[serde(default = "one")]
    pub t_end: f64,
    #[serde(default)]
    pub vortex: VortexParams,
}

fn one() -> f64 {
    1.0
}

impl VortexConfig {
    pub fn base(&self) -> EulerConfig {
        EulerConfig {
            order: self.order,
            m: self.m.first().copied().unwrap_or(0),
            coupling: self.coupling,
            cfl: self.cfl,
            t_end: self.t_end,
            vortex: self.vortex,
        }
    }
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Resolves a relative output path against the output directory override, if set.
pub fn output_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<BuildInterpConfig>(r#"{"p":4,"mc":20,"extra":true}"#).is_err());
        assert!(serde_json::from_str::<VortexConfig>(r#"{"order":"8:4","m":[51],"speed":2}"#).is_err());
        let v: VortexConfig = serde_json::from_str(r#"{"order":"8:4","m":[51,101],"coupling":"quadratic"}"#).unwrap();
        assert_eq!(v.order, OrderSpec { coarse: 8, fine: 4 });
        assert_eq!(v.base().m, 51);
    }

    #[test]
    fn spectrum_config_forms() {
        let c: SpectrumConfig =
            serde_json::from_str(r#"{"model":{"interp":"p6","coupling":"characteristic","coarse_points":21}}"#).unwrap();
        assert_eq!(c.models().unwrap().len(), 1);
        assert_eq!(c.tolerance, STABILITY_TOL);
        let empty: SpectrumConfig = serde_json::from_str("{}").unwrap();
        assert!(empty.models().is_err());
    }

    #[test]
    fn verify_defaults() {
        let c: VerifyOpsConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, VerifyOpsConfig::default());
        assert!(!c.kinds.contains(&InterpKind::NonSbpP4));
    }
}
