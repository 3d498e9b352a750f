//! Decreasing profile functions `h : (0, 1/2] -> [0, inf)` with evaluable
//! inverses. The built-in families cover the explicit examples: pure powers,
//! powers with logarithmic corrections, exponentials of powers, and plain
//! logarithms; a table profile is the escape hatch for everything else.

use rug::ops::{CompleteRound, Pow};
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::real::{one, real};

/// `h` is strictly decreasing on `(0, 1/2]` with `h(0+) = +inf` for every
/// built-in family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProfileFunction {
    /// `h(t) = c t^{-p}`, `p > 0`.
    Power { p: f64, c: f64 },
    /// `h(t) = c t^{-1} (1 - ln(2t))^p`, `p > -1`.
    ///
    /// The shifted logarithm keeps `h` strictly decreasing on all of
    /// `(0, 1/2]` while behaving like `t^{-1} ln^p(1/t)` near zero.
    LogPower { p: f64, c: f64 },
    /// `h(t) = exp(c t^{-p})`, `p > 0`.
    ExpPower { p: f64, c: f64 },
    /// `h(t) = c ln(1/t)`.
    LogReciprocal { c: f64 },
    /// Monotone table, interpolated by a monotone piecewise-cubic in
    /// log-log coordinates. Knots are `(theta, h(theta))` with increasing
    /// `theta` and decreasing `h`.
    Table { knots: Vec<(f64, f64)> },
}

impl ProfileFunction {
    /// `h(theta)` for `theta` in `(0, 1/2]`; result at `theta`'s precision.
    pub fn eval(&self, theta: &Float) -> Float {
        let prec = theta.prec();
        match self {
            ProfileFunction::Power { p, c } => {
                let t: Float = theta.clone().pow(-real(prec, *p));
                t * real(prec, *c)
            }
            ProfileFunction::LogPower { p, c } => {
                let l = one(prec) - (theta.clone() * 2u32).ln();
                let lp: Float = l.pow(real(prec, *p));
                lp * real(prec, *c) / theta
            }
            ProfileFunction::ExpPower { p, c } => {
                let t: Float = theta.clone().pow(-real(prec, *p));
                (t * real(prec, *c)).exp()
            }
            ProfileFunction::LogReciprocal { c } => {
                -theta.clone().ln() * real(prec, *c)
            }
            ProfileFunction::Table { knots } => table_eval(knots, theta),
        }
    }

    /// Inverse of `eval` on `[h(1/2), inf)`; clamped to `(0, 1/2]`.
    pub fn inverse(&self, a: &Float) -> Float {
        let prec = a.prec();
        let half = real(prec, 0.5);
        let h_half = self.eval(&half);
        if *a <= h_half {
            return half;
        }
        match self {
            ProfileFunction::Power { p, c } => {
                let r = real(prec, *c) / a;
                r.pow(real(prec, 1.0 / *p))
            }
            ProfileFunction::ExpPower { p, c } => {
                // theta = (c / ln a)^{1/p}
                let r = real(prec, *c) / a.clone().ln();
                r.pow(real(prec, 1.0 / *p))
            }
            ProfileFunction::LogReciprocal { c } => {
                (-(a.clone() / real(prec, *c))).exp()
            }
            ProfileFunction::LogPower { .. } | ProfileFunction::Table { .. } => {
                self.invert_by_bisection(a)
            }
        }
    }

    /// `h'(theta)` where a closed form exists.
    pub fn derivative(&self, theta: &Float) -> Option<Float> {
        let prec = theta.prec();
        match self {
            ProfileFunction::Power { p, c } => {
                let t: Float = theta.clone().pow(-real(prec, *p + 1.0));
                Some(t * real(prec, -*c * *p))
            }
            ProfileFunction::ExpPower { p, c } => {
                let h = self.eval(theta);
                let t: Float = theta.clone().pow(-real(prec, *p + 1.0));
                Some(h * t * real(prec, -*c * *p))
            }
            ProfileFunction::LogReciprocal { c } => Some(real(prec, -*c) / theta),
            ProfileFunction::LogPower { p, c } => {
                // h = c t^{-1} L^p, L = 1 - ln(2t); h' = -c t^{-2} L^{p-1} (L + p)
                let l = one(prec) - (theta.clone() * 2u32).ln();
                let lp: Float = l.clone().pow(real(prec, *p - 1.0));
                let t2 = (theta * theta).complete(prec);
                Some(-real(prec, *c) * lp * (l + real(prec, *p)) / t2)
            }
            ProfileFunction::Table { .. } => None,
        }
    }

    /// Closed-form antiderivative `G` with `G' = h`, where one exists.
    /// Used for exact gap-spectrum integrals; `f64` is sufficient there.
    pub fn antiderivative(&self, u: f64) -> Option<f64> {
        match self {
            ProfileFunction::Power { p, c } => Some(if (*p - 1.0).abs() < 1e-12 {
                c * u.ln()
            } else {
                c * u.powf(1.0 - p) / (1.0 - p)
            }),
            ProfileFunction::LogPower { p, c } => {
                // substitute L = 1 - ln(2u): int h du = -c L^{p+1}/(p+1)
                let l = 1.0 - (2.0 * u).ln();
                Some(if (*p + 1.0).abs() < 1e-12 {
                    -c * l.ln()
                } else {
                    -c * l.powf(p + 1.0) / (p + 1.0)
                })
            }
            ProfileFunction::LogReciprocal { c } => Some(c * u * (1.0 - u.ln())),
            ProfileFunction::ExpPower { .. } | ProfileFunction::Table { .. } => None,
        }
    }

    /// Monotone bisection for families without a closed-form inverse.
    fn invert_by_bisection(&self, a: &Float) -> Float {
        let prec = a.prec();
        let mut hi = real(prec, 0.5);
        // find a lower bracket: h(lo) >= a
        let mut lo = real(prec, 0.25);
        let mut guard = 0;
        while self.eval(&lo) < *a {
            lo /= 16u32;
            guard += 1;
            if guard > 4 * prec {
                return lo; // a is astronomically large; theta underflows
            }
        }
        // bisect in log(theta) for scale invariance
        let mut lo_ln = lo.ln();
        let mut hi_ln = hi.clone().ln();
        for _ in 0..(prec as usize + 16) {
            let mid_ln = ((&lo_ln + &hi_ln).complete(prec)) / 2u32;
            let mid = mid_ln.clone().exp();
            if self.eval(&mid) >= *a {
                lo_ln = mid_ln;
            } else {
                hi_ln = mid_ln;
            }
            let width = (&hi_ln - &lo_ln).complete(prec).abs().to_f64();
            if width < 1e-35 {
                break;
            }
        }
        hi = (((&lo_ln + &hi_ln).complete(prec)) / 2u32).exp();
        hi
    }

    /// Checks strict decrease and inverse consistency on a dyadic grid.
    pub fn validate(&self, prec: u32) -> Result<(), String> {
        let mut prev: Option<Float> = None;
        for i in 1..=40u32 {
            let theta = real(prec, 0.5) / Float::with_val(prec, 2f64).pow(i as f64 / 4.0);
            let v = self.eval(&theta);
            if !v.is_finite() && !v.is_infinite() {
                return Err(format!("h({}) is NaN", theta.to_f64()));
            }
            if let Some(p) = &prev {
                if v <= *p && v.is_finite() {
                    return Err(format!(
                        "profile is not strictly decreasing near theta = {}",
                        theta.to_f64()
                    ));
                }
            }
            if v.is_finite() {
                let back = self.inverse(&v);
                let rel = ((&back - &theta).complete(prec) / &theta)
                    .abs()
                    .to_f64();
                if rel > 1e-12 {
                    return Err(format!(
                        "inverse(eval(theta)) off by {rel:e} at theta = {}",
                        theta.to_f64()
                    ));
                }
            }
            prev = Some(v);
        }
        Ok(())
    }
}

/// Monotone piecewise-cubic (Fritsch-Carlson) in log-log coordinates.
fn table_eval(knots: &[(f64, f64)], theta: &Float) -> Float {
    let prec = theta.prec();
    assert!(knots.len() >= 2, "table profile needs at least two knots");
    let xs: Vec<f64> = knots.iter().map(|k| k.0.ln()).collect();
    let ys: Vec<f64> = knots.iter().map(|k| k.1.ln()).collect();
    let x = theta.to_f64().ln();
    let n = xs.len();
    // slopes
    let mut d = vec![0.0; n - 1];
    for i in 0..n - 1 {
        d[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    }
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        m[i] = if d[i - 1] * d[i] <= 0.0 {
            0.0
        } else {
            0.5 * (d[i - 1] + d[i])
        };
    }
    // Fritsch-Carlson limiter
    for i in 0..n - 1 {
        if d[i] == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
        } else {
            let a = m[i] / d[i];
            let b = m[i + 1] / d[i];
            let s = (a * a + b * b).sqrt();
            if s > 3.0 {
                m[i] = 3.0 * a / s * d[i];
                m[i + 1] = 3.0 * b / s * d[i];
            }
        }
    }
    // extrapolate linearly outside the table
    if x <= xs[0] {
        return real(prec, (ys[0] + m[0] * (x - xs[0])).exp());
    }
    if x >= xs[n - 1] {
        return real(prec, (ys[n - 1] + m[n - 1] * (x - xs[n - 1])).exp());
    }
    let i = xs.partition_point(|&v| v <= x).saturating_sub(1).min(n - 2);
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let y = ys[i] * (2.0 * t3 - 3.0 * t2 + 1.0)
        + m[i] * h * (t3 - 2.0 * t2 + t)
        + ys[i + 1] * (-2.0 * t3 + 3.0 * t2)
        + m[i + 1] * h * (t3 - t2);
    real(prec, y.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::WEIGHTS_PREC as P;

    #[test]
    fn power_profile_golden() {
        let h = ProfileFunction::Power { p: 2.0, c: 1.0 };
        assert_eq!(h.eval(&real(P, 0.25)).to_f64(), 16.0);
        assert_eq!(h.inverse(&real(P, 16.0)).to_f64(), 0.25);
    }

    #[test]
    fn builtin_families_validate() {
        let families = [
            ProfileFunction::Power { p: 2.0, c: 1.0 },
            ProfileFunction::Power { p: 0.369, c: 1.0 },
            ProfileFunction::LogPower { p: 2.0, c: 1.0 },
            ProfileFunction::LogPower { p: -1.0, c: 1.0 },
            ProfileFunction::ExpPower { p: 1.0, c: 1.0 },
            ProfileFunction::LogReciprocal { c: 3.0 },
        ];
        for fam in &families {
            fam.validate(P).unwrap_or_else(|e| panic!("{fam:?}: {e}"));
        }
    }

    #[test]
    fn logpower_matches_asymptotic_shape() {
        // c t^{-1} (1 - ln(2t))^p ~ t^{-1} ln^p(1/t) for small t
        let h = ProfileFunction::LogPower { p: 1.0, c: 1.0 };
        let t = 1e-9;
        let v = h.eval(&real(P, t)).to_f64();
        let asym = (1.0 / t) * (1.0 / t).ln();
        assert!((v / asym - 1.0).abs() < 0.05);
    }

    #[test]
    fn table_profile_tracks_power_law() {
        let knots: Vec<(f64, f64)> = (0..30)
            .map(|i| {
                let t = 0.5 * 0.7f64.powi(i);
                (t, t.powf(-2.0))
            })
            .rev()
            .collect();
        let h = ProfileFunction::Table { knots };
        for &t in &[0.01, 0.05, 0.2, 0.4] {
            let v = h.eval(&real(P, t)).to_f64();
            let want = t.powf(-2.0);
            assert!((v / want - 1.0).abs() < 1e-3, "t={t} v={v} want={want}");
        }
        let inv = h.inverse(&real(P, 100.0)).to_f64();
        assert!((inv - 0.1).abs() < 1e-3);
    }
}
