//! Tolerance configuration: defaults, then the TOML file named by
//! `ABSCOMP_CONFIG`, then `--tol` (which overrides `eq_tol` only).
//!
//! ```toml
//! eig_tol = 1e-12
//! eq_tol = 1e-9
//! rank_tol = 1e-10
//! ```

use std::fs;
use std::path::Path;

use abscomp::Tolerances;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const CONFIG_ENV: &str = "ABSCOMP_CONFIG";

#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub eig_tol: Option<f64>,
    pub eq_tol: Option<f64>,
    pub rank_tol: Option<f64>,
}

impl ToleranceConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn apply(&self, base: Tolerances) -> CliResult<Tolerances> {
        let pol = Tolerances::new(
            self.eig_tol.unwrap_or(base.eig_tol),
            self.eq_tol.unwrap_or(base.eq_tol),
            self.rank_tol.unwrap_or(base.rank_tol),
        )?;
        Ok(pol)
    }
}

/// Resolve the policy from an optional config path and an optional `--tol`.
pub fn resolve(config_path: Option<&Path>, tol: Option<f64>) -> CliResult<Tolerances> {
    let mut pol = Tolerances::default();
    if let Some(path) = config_path {
        pol = ToleranceConfig::load(path)?.apply(pol)?;
    }
    if let Some(t) = tol {
        pol = pol.with_eq_tol(t)?;
    }
    Ok(pol)
}

/// [`resolve`] with the path taken from `ABSCOMP_CONFIG`.
pub fn from_env(tol: Option<f64>) -> CliResult<Tolerances> {
    let path = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty());
    resolve(path.as_deref().map(Path::new), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg = ToleranceConfig::parse("rank_tol = 1e-8\n").unwrap();
        let pol = cfg.apply(Tolerances::default()).unwrap();
        assert_eq!(pol.rank_tol, 1e-8);
        assert_eq!(pol.eq_tol, Tolerances::default().eq_tol);
    }

    #[test]
    fn unknown_keys_and_bad_values_fail() {
        assert!(ToleranceConfig::parse("eq_tolerance = 1e-9").is_err());
        let cfg = ToleranceConfig::parse("eq_tol = 0.0").unwrap();
        assert!(cfg.apply(Tolerances::default()).is_err());
    }

    #[test]
    fn tol_flag_overrides_only_eq_tol() {
        let pol = resolve(None, Some(1e-6)).unwrap();
        assert_eq!(pol.eq_tol, 1e-6);
        assert_eq!(pol.eig_tol, Tolerances::default().eig_tol);
    }
}
