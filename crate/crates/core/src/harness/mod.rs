//! Config-driven experiment harness: scenarios in, report files out.

pub mod config;
pub mod fit;
pub mod report;
pub mod reproduce;
pub mod run;

use std::path::Path;

pub use config::{Config, Method, PredictedRate, ScenarioConfig};
pub use fit::{fit_all, fit_rate, RateFit, RateModel};
pub use reproduce::{reproduce, ReproduceReport};
pub use run::{run_scenario, ScenarioRun};

use crate::error::Result;
use crate::harness::run::Check;

/// Run every scenario in a config; failures in one scenario do not stop the
/// others. Returns the completed runs in config order.
pub fn run_config(cfg: &Config) -> Result<Vec<ScenarioRun>> {
    cfg.validate()?;
    let mut runs = Vec::new();
    for sc in &cfg.scenarios {
        match run_scenario(sc) {
            Ok(r) => runs.push(r),
            Err(e) => runs.push(ScenarioRun {
                id: sc.id.clone(),
                rows: vec![],
                fits: vec![],
                extras: vec![],
                sandwich: vec![],
                checks: vec![Check {
                    name: "scenario_completed".into(),
                    passed: false,
                    detail: e.to_string(),
                }],
                failures: vec![format!("{}: {e}", sc.id)],
            }),
        }
    }
    Ok(runs)
}

/// Run a config and write its CSV, JSON summary, and plot files into
/// `output_dir`. Returns true iff every scenario's property checks passed.
pub fn run_and_report(cfg: &Config, out_dir: &Path) -> Result<bool> {
    let runs = run_config(cfg)?;
    report::write_csv(&out_dir.join("results.csv"), &runs)?;
    report::write_summary(&out_dir.join("summary.json"), &runs)?;
    report::write_plot_data(out_dir, &runs)?;
    Ok(runs.iter().all(|r| r.passed()))
}
