//! Rate fitting: least squares for `|log e_n|` against the candidate growth
//! laws, in coordinates where each law is a straight line.

use serde::Serialize;

use crate::bounds::RatePrediction;
use crate::error::{Error, Result};

/// Candidate growth laws for `v(n) = |log e_n|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateModel {
    /// `v = C n^beta`: regress `ln v` on `ln n`
    Power,
    /// `v = C (ln n)^beta`: regress `ln v` on `ln ln n`
    LogPower,
    /// `v = C (ln ln n)^beta`: regress `ln v` on `ln ln ln n`
    LogLog,
    /// `v = C (n / (ln n)^2)^beta`: regress `ln v` on `ln n - 2 ln ln n`
    NOverLog2,
    /// `v = C n (ln n)^{-beta}`: regress `ln v - ln n` on `ln ln n`,
    /// report `beta = -slope`
    NLogPow,
}

pub const ALL_MODELS: [RateModel; 5] = [
    RateModel::Power,
    RateModel::LogPower,
    RateModel::LogLog,
    RateModel::NOverLog2,
    RateModel::NLogPow,
];

/// A fitted rate: `model` with exponent `beta`, plus fit quality.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateFit {
    pub model: RateModel,
    pub beta: f64,
    pub stderr: f64,
    pub r2: f64,
    pub n_lo: u64,
    pub n_hi: u64,
}

impl RateModel {
    /// `(x, y)` coordinates in which the model is `y = a + beta x`
    /// (up to the `NLogPow` sign flip).
    fn transform(self, n: f64, v: f64) -> (f64, f64) {
        match self {
            RateModel::Power => (n.ln(), v.ln()),
            RateModel::LogPower => (n.ln().ln(), v.ln()),
            RateModel::LogLog => (n.ln().ln().ln(), v.ln()),
            RateModel::NOverLog2 => (n.ln() - 2.0 * n.ln().ln(), v.ln()),
            RateModel::NLogPow => (n.ln().ln(), v.ln() - n.ln()),
        }
    }

    fn beta_from_slope(self, slope: f64) -> f64 {
        match self {
            RateModel::NLogPow => -slope,
            _ => slope,
        }
    }

    /// The model a closed-form prediction lives in, with its exponent.
    pub fn of_prediction(pred: &RatePrediction) -> (RateModel, f64) {
        match *pred {
            RatePrediction::PowerOfN { exponent } => (RateModel::Power, exponent),
            RatePrediction::LogN => (RateModel::LogPower, 1.0),
            RatePrediction::LogLogN => (RateModel::LogLog, 1.0),
            RatePrediction::LogPower { power } => (RateModel::LogPower, power),
            RatePrediction::NOverLogPower { power } => (RateModel::NLogPow, power),
        }
    }
}

/// Least squares of `series = (n, v)` in the model's coordinates.
pub fn fit_rate(series: &[(u64, f64)], model: RateModel) -> Result<RateFit> {
    if series.len() < 4 {
        return Err(Error::DegenerateSeries(format!(
            "need >= 4 points, got {}",
            series.len()
        )));
    }
    let mut pts = Vec::with_capacity(series.len());
    for &(n, v) in series {
        if !(v > 0.0) || n < 3 {
            return Err(Error::DegenerateSeries(format!(
                "point (n={n}, v={v}) outside the model domain"
            )));
        }
        let (x, y) = model.transform(n as f64, v);
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::DegenerateSeries(format!(
                "transform degenerate at (n={n}, v={v})"
            )));
        }
        pts.push((x, y));
    }
    let m = pts.len() as f64;
    let xbar = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let ybar = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - xbar).powi(2)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - ybar).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateSeries("zero variance in x".into()));
    }
    let slope = sxy / sxx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - ybar - slope * (p.0 - xbar)).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    let dof = (pts.len() - 2).max(1) as f64;
    let stderr = (ss_res / dof / sxx).sqrt();
    Ok(RateFit {
        model,
        beta: model.beta_from_slope(slope),
        stderr,
        r2,
        n_lo: series[0].0,
        n_hi: series[series.len() - 1].0,
    })
}

/// Fit every registered model and return them sorted best-first by `R²`.
pub fn fit_all(series: &[(u64, f64)]) -> Result<Vec<RateFit>> {
    let mut fits: Vec<RateFit> = ALL_MODELS
        .iter()
        .filter_map(|&m| fit_rate(series, m).ok())
        .collect();
    if fits.is_empty() {
        return Err(Error::DegenerateSeries(
            "no model admits this series".into(),
        ));
    }
    fits.sort_by(|a, b| b.r2.partial_cmp(&a.r2).unwrap());
    Ok(fits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<u64> {
        (6..=12).map(|k| 1u64 << k).collect()
    }

    #[test]
    fn exact_power_recovered() {
        let series: Vec<(u64, f64)> = grid()
            .into_iter()
            .map(|n| (n, (n as f64).powf(1.0 / 3.0)))
            .collect();
        let f = fit_rate(&series, RateModel::Power).unwrap();
        assert!((f.beta - 1.0 / 3.0).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_series_selects_logpower() {
        let series: Vec<(u64, f64)> = grid()
            .into_iter()
            .map(|n| (n, 5.0 * (n as f64).ln()))
            .collect();
        let fits = fit_all(&series).unwrap();
        assert_eq!(fits[0].model, RateModel::LogPower);
        assert!((fits[0].beta - 1.0).abs() < 0.02, "beta = {}", fits[0].beta);
        let power = fits.iter().find(|f| f.model == RateModel::Power).unwrap();
        assert!(power.r2 < fits[0].r2);
    }

    #[test]
    fn n_over_log_family_recovered() {
        let series: Vec<(u64, f64)> = grid()
            .into_iter()
            .map(|n| {
                let x = n as f64;
                (n, 0.7 * x / x.ln().powf(2.0))
            })
            .collect();
        let f = fit_rate(&series, RateModel::NLogPow).unwrap();
        assert!((f.beta - 2.0).abs() < 1e-10);
        let g = fit_rate(&series, RateModel::NOverLog2).unwrap();
        assert!((g.beta - 1.0).abs() < 1e-10);
    }

    #[test]
    fn short_and_degenerate_series_rejected() {
        let short = vec![(64u64, 1.0), (128, 2.0), (256, 3.0)];
        assert!(matches!(
            fit_rate(&short, RateModel::Power),
            Err(Error::DegenerateSeries(_))
        ));
        let nonpos = vec![(64u64, 1.0), (128, 0.0), (256, 3.0), (512, 4.0)];
        assert!(fit_rate(&nonpos, RateModel::Power).is_err());
    }

    #[test]
    fn prediction_model_mapping() {
        let (m, b) = RateModel::of_prediction(&RatePrediction::LogN);
        assert_eq!(m, RateModel::LogPower);
        assert_eq!(b, 1.0);
        let (m, b) =
            RateModel::of_prediction(&RatePrediction::NOverLogPower { power: 2.0 });
        assert_eq!(m, RateModel::NLogPow);
        assert_eq!(b, 2.0);
    }
}
