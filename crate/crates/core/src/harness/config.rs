//! Scenario configuration: a TOML file with one `[[scenario]]` table per
//! run. All angles and lengths are in turns; all logs are natural.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::szego::{MeasureDensity, SmoothFactor, TrigPoly};
use crate::weights::{CompactSetModel, ProfileFunction, WeightField, ZeroSetSpec};

/// Top-level config file.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Config {
    /// directory for CSV / JSON / plot outputs (default `reports/`)
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(rename = "scenario")]
    pub scenarios: Vec<ScenarioConfig>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("reports")
}

/// Which envelopes / certificates a scenario requests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Lower,
    Chebyshev,
    Taylor,
    TwoSided,
    DeepZero,
    Certify,
}

/// Predicted growth law for `|log e_n|`, matched against the fitted rate.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct PredictedRate {
    /// registry id: `cor_61`, `cor_62`, `cor_i` .. `cor_iv`
    pub id: String,
    pub p: Option<f64>,
    pub nu: Option<f64>,
}

/// One scenario: a measure, an `n` grid, and the methods to run on it.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ScenarioConfig {
    pub id: String,
    /// deep-zero profile `h`; omitted for weights without a zero set
    pub profile: Option<ProfileFunction>,
    /// zero set `K`; required iff `profile` is present
    pub zero_set: Option<ZeroSetSpec>,
    /// nonnegative trigonometric factor multiplying `e^{-H}` (default 1)
    pub smooth: Option<TrigPoly>,
    /// closed support arc `[a, b]` in turns (default: full circle)
    pub support_arc: Option<(f64, f64)>,
    /// strictly increasing degree grid
    pub n: Vec<u64>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    /// expected rate for the fitter to check, when the family has one
    pub predicted: Option<PredictedRate>,
    /// override for the automatic working precision
    pub precision_bits: Option<u32>,
    /// override for the initial `ln` moment-error target
    pub ln_eps: Option<f64>,
    /// certificates are built only for grid points `<=` this (default 512)
    #[serde(default = "default_cert_max_n")]
    pub cert_max_n: u64,
}

fn default_methods() -> Vec<Method> {
    vec![Method::Lower, Method::Chebyshev, Method::Taylor]
}

fn default_cert_max_n() -> u64 {
    512
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Config =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenarios.is_empty() {
            return Err(Error::Config("config has no scenarios".into()));
        }
        let mut ids: Vec<&str> = self.scenarios.iter().map(|s| s.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        if ids.len() != self.scenarios.len() {
            return Err(Error::Config("scenario ids must be unique".into()));
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        Ok(())
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n.len() < 1 || !self.n.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config(format!(
                "{}: n grid must be nonempty and strictly increasing",
                self.id
            )));
        }
        if self.profile.is_some() != self.zero_set.is_some() {
            return Err(Error::Config(format!(
                "{}: profile and zero_set must be given together",
                self.id
            )));
        }
        Ok(())
    }

    /// The weight field `H = h ∘ d_K`, when the scenario has one.
    pub fn weight(&self) -> Result<Option<WeightField>> {
        match (&self.profile, &self.zero_set) {
            (Some(h), Some(k)) => Ok(Some(WeightField::new(
                h.clone(),
                CompactSetModel::new(k.clone())?,
            )?)),
            _ => Ok(None),
        }
    }

    /// The measure `dρ = e^{-H} w 1_{support} dm` this scenario computes on.
    pub fn density(&self) -> Result<MeasureDensity> {
        let d = MeasureDensity {
            weight: self.weight()?,
            smooth: match &self.smooth {
                None => SmoothFactor::Const { value: 1.0 },
                Some(t) => SmoothFactor::Trig(t.clone()),
            },
            support_arc: self.support_arc,
        };
        d.validate()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let text = r#"
            [[scenario]]
            id = "lebesgue"
            n = [64, 128, 256]
        "#;
        let cfg: Config = toml::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.scenarios[0].id, "lebesgue");
        assert_eq!(cfg.scenarios[0].cert_max_n, 512);
        assert!(cfg.scenarios[0].density().unwrap().weight.is_none());
    }

    #[test]
    fn parses_weight_scenario() {
        let text = r#"
            output_dir = "out"

            [[scenario]]
            id = "deep_zero_p2"
            profile = { family = "power", p = 2.0, c = 1.0 }
            zero_set = { kind = "point_set", angles = [0.0] }
            n = [64, 128]
            methods = ["lower", "chebyshev", "taylor", "certify"]
            predicted = { id = "cor_iii", p = 2.0 }
        "#;
        let cfg: Config = toml::from_str(text).unwrap();
        cfg.validate().unwrap();
        let s = &cfg.scenarios[0];
        assert!(s.weight().unwrap().is_some());
        assert_eq!(s.methods.len(), 4);
        assert_eq!(s.predicted.as_ref().unwrap().id, "cor_iii");
    }

    #[test]
    fn rejects_bad_grids_and_dangling_profile() {
        let text = r#"
            [[scenario]]
            id = "x"
            n = [128, 64]
        "#;
        let cfg: Config = toml::from_str(text).unwrap();
        assert!(cfg.validate().is_err());

        let text = r#"
            [[scenario]]
            id = "x"
            profile = { family = "power", p = 2.0, c = 1.0 }
            n = [64, 128]
        "#;
        let cfg: Config = toml::from_str(text).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_duplicate_ids() {
        let text = r#"
            [[scenario]]
            id = "a"
            n = [64]
            [[scenario]]
            id = "a"
            n = [64]
        "#;
        let cfg: Config = toml::from_str(text).unwrap();
        assert!(cfg.validate().is_err());
    }
}
