//! Built-in reproduction registry: one canonical scenario per decay-rate
//! corollary, run end to end and checked against its predicted rate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::config::{Method, PredictedRate, ScenarioConfig};
use crate::harness::fit::{RateFit, RateModel};
use crate::harness::run::{run_scenario, ScenarioRun};
use crate::weights::{ProfileFunction, ZeroSetSpec};

/// What a registry entry promises about the fitted rate.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    /// the named model's fitted exponent lies in `beta ± tol`; with
    /// `must_be_best`, the model must also win the `R²` ranking
    Beta {
        model: RateModel,
        beta: f64,
        tol: f64,
        must_be_best: bool,
    },
    /// doubly-logarithmic growth: `loglog` wins the ranking with positive
    /// slope, and the series grows by less than `max_ratio` across the grid
    LogLogGrowth { max_ratio: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproduceReport {
    pub id: String,
    pub expectation: Expectation,
    pub fits: Vec<RateFit>,
    pub passed: bool,
    pub detail: String,
}

fn grid(hi_pow: u32) -> Vec<u64> {
    (6..=hi_pow).map(|k| 1u64 << k).collect()
}

fn scenario(
    id: &str,
    profile: ProfileFunction,
    zero_set: ZeroSetSpec,
    n: Vec<u64>,
    predicted: Option<PredictedRate>,
) -> ScenarioConfig {
    ScenarioConfig {
        id: id.into(),
        profile: Some(profile),
        zero_set: Some(zero_set),
        smooth: None,
        support_arc: None,
        n,
        methods: vec![Method::Lower, Method::Chebyshev, Method::Taylor],
        predicted,
        precision_bits: None,
        ln_eps: None,
        cert_max_n: 0,
    }
}

fn origin() -> ZeroSetSpec {
    ZeroSetSpec::PointSet { angles: vec![0.0] }
}

/// Profiles are stated in radian distance in the source rates
/// (`h(theta) = theta^{-p}` etc.); angles here are in turns, so the
/// constant picks up `(2 pi)^{-p}`.
fn radians_pow(p: f64) -> f64 {
    (2.0 * std::f64::consts::PI).powf(-p)
}

/// The canonical scenario and expectation for a corollary id.
pub fn registry(id: &str) -> Result<(ScenarioConfig, Expectation)> {
    let pred = |pid: &str, p: Option<f64>, nu: Option<f64>| {
        Some(PredictedRate {
            id: pid.into(),
            p,
            nu,
        })
    };
    match id {
        // gamma-regular ternary Cantor zero set, h(s) = s^{gamma-1}
        "cor_61" => {
            let gamma = 2f64.ln() / 3f64.ln();
            Ok((
                scenario(
                    id,
                    ProfileFunction::Power {
                        p: 1.0 - gamma,
                        c: radians_pow(1.0 - gamma),
                    },
                    ZeroSetSpec::CantorTernary { depth: 22 },
                    grid(12),
                    pred("cor_61", None, None),
                ),
                Expectation::Beta {
                    model: RateModel::LogPower,
                    beta: 1.0,
                    tol: 0.15,
                    must_be_best: true,
                },
            ))
        }
        // power-sequence zero set n^{-nu} with a power profile
        "cor_62" => {
            let (p, nu) = (2.0, 1.0);
            let theta = nu / (nu + 1.0);
            Ok((
                scenario(
                    id,
                    ProfileFunction::Power { p, c: radians_pow(p) },
                    ZeroSetSpec::PowerSequence { nu },
                    grid(12),
                    pred("cor_62", Some(p), Some(nu)),
                ),
                Expectation::Beta {
                    model: RateModel::Power,
                    beta: (p - theta) / (p + theta),
                    tol: 0.1,
                    must_be_best: false,
                },
            ))
        }
        // h ~ theta^{-1} / log(1/theta): doubly logarithmic decay
        "cor_i" => Ok((
            scenario(
                id,
                ProfileFunction::LogPower { p: -1.0, c: radians_pow(1.0) },
                origin(),
                grid(12),
                pred("cor_i", None, None),
            ),
            Expectation::LogLogGrowth { max_ratio: 1.6 },
        )),
        // h ~ theta^{-1} log(1/theta): (log n)^{p+1}
        "cor_ii" => Ok((
            scenario(
                id,
                ProfileFunction::LogPower { p: 1.0, c: radians_pow(1.0) },
                origin(),
                grid(12),
                pred("cor_ii", Some(1.0), None),
            ),
            Expectation::Beta {
                model: RateModel::LogPower,
                beta: 2.0,
                tol: 0.3,
                must_be_best: false,
            },
        )),
        // single deep zero h = theta^{-p}: n^{(p-1)/(p+1)}
        "cor_iii_p2" | "cor_iii_p3" => {
            let p = if id == "cor_iii_p2" { 2.0 } else { 3.0 };
            Ok((
                scenario(
                    id,
                    ProfileFunction::Power { p, c: radians_pow(p) },
                    origin(),
                    grid(12),
                    pred("cor_iii", Some(p), None),
                ),
                Expectation::Beta {
                    model: RateModel::Power,
                    beta: (p - 1.0) / (p + 1.0),
                    tol: 0.08,
                    must_be_best: false,
                },
            ))
        }
        // h = exp(theta^{-p}): n / (log n)^{2/p}; grid capped for runtime
        "cor_iv" => {
            let p = 1.0;
            Ok((
                scenario(
                    id,
                    ProfileFunction::ExpPower { p, c: radians_pow(p) },
                    origin(),
                    grid(11),
                    pred("cor_iv", Some(p), None),
                ),
                Expectation::Beta {
                    model: RateModel::NLogPow,
                    beta: 2.0 / p,
                    tol: 0.5,
                    must_be_best: false,
                },
            ))
        }
        other => Err(Error::UnknownCorollary(other.into())),
    }
}

pub const ALL_IDS: [&str; 7] = [
    "cor_61",
    "cor_62",
    "cor_i",
    "cor_ii",
    "cor_iii_p2",
    "cor_iii_p3",
    "cor_iv",
];

/// Check an expectation against a completed run.
pub fn check(run: &ScenarioRun, expectation: Expectation) -> (bool, String) {
    match expectation {
        Expectation::Beta {
            model,
            beta,
            tol,
            must_be_best,
        } => {
            let Some(fit) = run.fits.iter().find(|f| f.model == model) else {
                return (false, format!("no {model:?} fit available"));
            };
            let in_range = (fit.beta - beta).abs() <= tol;
            let best_ok = !must_be_best || run.fits.first().map(|f| f.model) == Some(model);
            (
                in_range && best_ok,
                format!(
                    "{model:?}: beta {:.4} vs {beta:.4} +- {tol} (R² {:.5}{})",
                    fit.beta,
                    fit.r2,
                    if must_be_best {
                        format!(", best = {:?}", run.fits.first().map(|f| f.model))
                    } else {
                        String::new()
                    }
                ),
            )
        }
        Expectation::LogLogGrowth { max_ratio } => {
            let series: Vec<(u64, f64)> = run
                .rows
                .iter()
                .filter_map(|r| {
                    let v = -r.log_e_n.to_f64();
                    (v > 0.0).then_some((r.n, v))
                })
                .collect();
            if series.len() < 2 {
                return (false, "series empty or nonpositive".into());
            }
            let growth = series.last().unwrap().1 / series[0].1;
            let best = run.fits.first();
            let best_ok = best.map(|f| f.model) == Some(RateModel::LogLog)
                && best.map_or(false, |f| f.beta > 0.0);
            (
                best_ok && growth < max_ratio,
                format!(
                    "best {:?}, growth {:.4} vs < {max_ratio}",
                    best.map(|f| f.model),
                    growth
                ),
            )
        }
    }
}

/// Run a registry entry end to end.
pub fn reproduce(id: &str) -> Result<ReproduceReport> {
    let (sc, expectation) = registry(id)?;
    let run = run_scenario(&sc)?;
    let (passed, detail) = check(&run, expectation);
    Ok(ReproduceReport {
        id: id.into(),
        expectation,
        fits: run.fits.clone(),
        passed,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_resolve_and_validate() {
        for id in ALL_IDS {
            let (sc, _) = registry(id).unwrap();
            sc.validate().unwrap();
            assert!(sc.n.len() >= 4);
        }
        assert!(matches!(
            registry("cor_v"),
            Err(Error::UnknownCorollary(_))
        ));
    }

    #[test]
    fn expectation_checks_synthetic_runs() {
        // synthetic: build a run via the fitter only
        use crate::harness::fit::fit_all;
        let series: Vec<(u64, f64)> = (6..=12)
            .map(|k| {
                let n = 1u64 << k;
                (n, (n as f64).powf(1.0 / 3.0))
            })
            .collect();
        let fits = fit_all(&series).unwrap();
        let run = ScenarioRun {
            id: "synthetic".into(),
            rows: vec![],
            fits,
            extras: vec![],
            sandwich: vec![],
            checks: vec![],
            failures: vec![],
        };
        let (ok, detail) = check(
            &run,
            Expectation::Beta {
                model: RateModel::Power,
                beta: 1.0 / 3.0,
                tol: 0.08,
                must_be_best: false,
            },
        );
        assert!(ok, "{detail}");
        let (ok, _) = check(
            &run,
            Expectation::Beta {
                model: RateModel::Power,
                beta: 0.6,
                tol: 0.08,
                must_be_best: false,
            },
        );
        assert!(!ok);
    }
}
