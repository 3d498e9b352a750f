//! Theoretical envelopes for `|log e_n(ρ)|`: the level `A = A(n)` solving
//! the relevant fixed-point equation and the envelope value built from it,
//! together with the closed-form rate predictions used by the fitter.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::real;
use crate::weights::{LevelEquation, ProfileFunction, RegularityReport, WeightField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeMethod {
    LowerRemez,
    UpperTaylor,
    UpperChebyshev,
    TwoSided,
    DeepZero,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEnvelope {
    pub n: u64,
    pub method: EnvelopeMethod,
    /// level satisfying the method's defining equation
    pub a: f64,
    /// envelope for `|log e_n|` up to the theorem's absolute constant
    pub value: f64,
    /// sampled regularity snapshot, where the method has hypotheses
    pub preconditions: Option<RegularityReport>,
}

/// Geometric level grid used to sample regularity predicates.
fn level_grid(w: &WeightField) -> Vec<f64> {
    let lo = (w.min_weight() / 4.0).max(1e-3);
    let mut out = Vec::new();
    let mut a = lo;
    while a < 1e7 {
        out.push(a);
        a *= 2.0;
    }
    out
}

/// `|log e_n| <= C int_0^A lambda_H(a) da` with `A` solving `n lambda(A) = A`.
pub fn lower_envelope(w: &WeightField, n: u64) -> Result<BoundEnvelope> {
    let sol = w.solve_level(n, LevelEquation::Lambda)?;
    let value = if sol.a > 0.0 {
        w.cutoff_integral(sol.a)?.value
    } else {
        0.0
    };
    Ok(BoundEnvelope {
        n,
        method: EnvelopeMethod::LowerRemez,
        a: sol.a,
        value,
        preconditions: None,
    })
}

/// Infimum-style bisection for `n phi^{-1}(A) = A` on a general profile.
fn solve_profile_inverse(phi: &ProfileFunction, n: u64) -> Result<f64> {
    let prec = 128u32;
    let holds = |a: f64| -> bool {
        if a <= 0.0 {
            return false;
        }
        let inv = phi.inverse(&real(prec, a)).to_f64().min(0.5);
        n as f64 * inv <= a
    };
    let hi = n as f64;
    if !holds(hi) {
        return Err(Error::NoCrossing { upper: hi });
    }
    let (mut lo, mut hi) = (0.0f64, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Taylor-section upper envelope: `A` per the Reg1/Reg2 case split
/// (`n phi^{-1}(A) = A` under Reg1, `A = sqrt(n)` under Reg2; Reg2 wins when
/// both hold), value `int_0^A lambda_H`.
pub fn upper_envelope_taylor(
    w: &WeightField,
    phi: &ProfileFunction,
    n: u64,
) -> Result<BoundEnvelope> {
    let report = w.regularity_report(phi, &level_grid(w));
    if !report.subordinate {
        return Err(Error::RegularityViolation(format!(
            "subordination failed: sampled Lipschitz constant {} > 1",
            report.lipschitz
        )));
    }
    let a = if report.reg2 {
        (n as f64).sqrt()
    } else if report.reg1 {
        solve_profile_inverse(phi, n)?
    } else {
        return Err(Error::RegularityViolation(format!(
            "neither Reg1 (witness {}) nor Reg2 (ratio {}) holds for the profile",
            report.reg1_witness, report.reg2_ratio
        )));
    };
    let value = w.cutoff_integral(a)?.value;
    Ok(BoundEnvelope {
        n,
        method: EnvelopeMethod::UpperTaylor,
        a,
        value,
        preconditions: Some(report),
    })
}

/// Arc-Chebyshev upper envelope: `A` solves `n lambda*(A) = A`,
/// value `A lambda*(A)`.
pub fn upper_envelope_chebyshev(w: &WeightField, n: u64) -> Result<BoundEnvelope> {
    let sol = w.solve_level(n, LevelEquation::LambdaStar)?;
    let value = if sol.a > 0.0 {
        sol.a * w.lambda_star(sol.a)?
    } else {
        0.0
    };
    Ok(BoundEnvelope {
        n,
        method: EnvelopeMethod::UpperChebyshev,
        a: sol.a,
        value,
        preconditions: None,
    })
}

/// Matched two-sided envelope `A lambda(A)` with `n lambda(A) = A`, valid
/// under doubling and `lambda* >~ lambda`.
pub fn two_sided(w: &WeightField, n: u64) -> Result<BoundEnvelope> {
    let report = w.regularity_report(&w.profile, &level_grid(w));
    let mut failed = Vec::new();
    if !report.doubling {
        failed.push(format!("doubling (ratio {})", report.doubling_ratio));
    }
    if !(report.lambda_star_over_lambda_min > 0.0) {
        failed.push(format!(
            "lambda*/lambda bounded below (inf {})",
            report.lambda_star_over_lambda_min
        ));
    }
    if !failed.is_empty() {
        return Err(Error::RegularityViolation(failed.join("; ")));
    }
    let sol = w.solve_level(n, LevelEquation::Lambda)?;
    let value = if sol.a > 0.0 {
        sol.a * w.lambda(sol.a)?
    } else {
        0.0
    };
    Ok(BoundEnvelope {
        n,
        method: EnvelopeMethod::TwoSided,
        a: sol.a,
        value,
        preconditions: Some(report),
    })
}

/// Deep-zero envelope for a single zero with profile `h`:
/// `A` solves `n h^{-1}(A) = A`, value `int_0^{1/2} min(h, A)`.
///
/// Hypotheses (sampled on `(0, 0.1]` and a doubling level grid):
/// (i) `theta^2 h(theta)` nondecreasing and `|log theta| = O(h)`, or
/// (ii) `limsup h^{-1}(a)/h^{-1}(2a) < 2`.
pub fn deep_zero_envelope(h: &ProfileFunction, n: u64) -> Result<BoundEnvelope> {
    let prec = 128u32;
    // predicate (i)
    let mut cond_i = true;
    let mut prev: Option<f64> = None;
    let mut log_ratio_first = None;
    let mut log_ratio_last = 0.0;
    for i in (0..=120).rev() {
        let theta = 0.1 * 0.8f64.powi(i);
        let hv = h.eval(&real(prec, theta)).to_f64();
        let g = theta * theta * hv;
        if let Some(p) = prev {
            // theta increasing along this loop; require nondecreasing
            if g < p * (1.0 - 1e-9) {
                cond_i = false;
            }
        }
        prev = Some(g);
        // |log theta| = O(h): the sampled ratio must not keep growing
        let ratio = (1.0 / theta).ln() / hv.max(1e-300);
        if i == 120 {
            log_ratio_first = Some(ratio);
        }
        log_ratio_last = ratio;
    }
    if let Some(deep) = log_ratio_first {
        if deep > 2.5 * log_ratio_last.max(1e-300) {
            cond_i = false;
        }
    }
    // predicate (ii)
    let mut cond_ii = true;
    let mut a = h.eval(&real(prec, 0.4)).to_f64().max(1e-2);
    for _ in 0..40 {
        let i1 = h.inverse(&real(prec, a)).to_f64();
        let i2 = h.inverse(&real(prec, 2.0 * a)).to_f64();
        if i2 > 0.0 && i1 / i2 >= 2.0 * (1.0 - 1e-9) {
            cond_ii = false;
        }
        a *= 2.0;
        if !a.is_finite() {
            break;
        }
    }
    if !cond_i && !cond_ii {
        return Err(Error::RegularityViolation(
            "deep-zero profile satisfies neither the monotone theta^2 h form nor the \
             sub-doubling inverse condition"
                .into(),
        ));
    }
    let a = solve_profile_inverse(h, n)?;
    let theta_a = h.inverse(&real(prec, a)).to_f64().min(0.5);
    // int_0^{1/2} min(h, A) = A theta_A + int_{theta_A}^{1/2} h
    let tail = match (h.antiderivative(theta_a), h.antiderivative(0.5)) {
        (Some(fa), Some(fb)) if theta_a < 0.5 => fb - fa,
        _ if theta_a >= 0.5 => 0.0,
        _ => {
            let mut f = |t: &rug::Float| h.eval(t);
            crate::quad::integrate_adaptive(
                &mut f,
                &real(prec, theta_a),
                &real(prec, 0.5),
                prec,
                1e-11,
                1e-13,
                48,
            )?
            .value
            .to_f64()
        }
    };
    Ok(BoundEnvelope {
        n,
        method: EnvelopeMethod::DeepZero,
        a,
        value: a * theta_a + tail,
        preconditions: None,
    })
}

/// Closed-form growth law for `|log e_n|` as a function of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum RatePrediction {
    /// `n^exponent`
    PowerOfN { exponent: f64 },
    /// `log n`
    LogN,
    /// `log log n`
    LogLogN,
    /// `(log n)^power`
    LogPower { power: f64 },
    /// `n (log n)^{-power}`
    NOverLogPower { power: f64 },
}

/// Built-in scenario families and their predicted rates.
///
/// `p` is the profile exponent where the family has one; `nu` is the
/// power-sequence exponent for `cor_62`.
pub fn predicted_rate(id: &str, p: Option<f64>, nu: Option<f64>) -> Result<RatePrediction> {
    let need_p = || p.ok_or_else(|| Error::UnknownFamily(format!("{id}: missing exponent p")));
    match id {
        "cor_61" => Ok(RatePrediction::LogN),
        "cor_62" => {
            let p = need_p()?;
            let nu = nu.ok_or_else(|| Error::UnknownFamily(format!("{id}: missing nu")))?;
            let theta = nu / (nu + 1.0);
            Ok(RatePrediction::PowerOfN {
                exponent: (p - theta) / (p + theta),
            })
        }
        "cor_i" => Ok(RatePrediction::LogLogN),
        "cor_ii" => Ok(RatePrediction::LogPower {
            power: need_p()? + 1.0,
        }),
        "cor_iii" => {
            let p = need_p()?;
            Ok(RatePrediction::PowerOfN {
                exponent: (p - 1.0) / (p + 1.0),
            })
        }
        "cor_iv" => Ok(RatePrediction::NOverLogPower {
            power: 2.0 / need_p()?,
        }),
        other => Err(Error::UnknownFamily(other.into())),
    }
}

impl RatePrediction {
    /// Evaluate the rate at `n` (up to the unknown constant).
    pub fn eval(&self, n: f64) -> f64 {
        match *self {
            RatePrediction::PowerOfN { exponent } => n.powf(exponent),
            RatePrediction::LogN => n.ln(),
            RatePrediction::LogLogN => n.ln().ln(),
            RatePrediction::LogPower { power } => n.ln().powf(power),
            RatePrediction::NOverLogPower { power } => n / n.ln().powf(power),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{CompactSetModel, ZeroSetSpec};

    fn point_weight(p: f64) -> WeightField {
        WeightField::new(
            ProfileFunction::Power { p, c: 1.0 },
            CompactSetModel::new(ZeroSetSpec::PointSet { angles: vec![0.0] }).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn lower_envelope_power_golden() {
        // lambda = 2 a^{-1/2} above 4: A = 128^{2/3}, value = 4 sqrt(A) - 4
        let w = point_weight(2.0);
        let b = lower_envelope(&w, 64).unwrap();
        let a_want = 2f64.powf(14.0 / 3.0);
        assert!((b.a - a_want).abs() < 1e-8 * a_want, "A = {}", b.a);
        let v_want = 4.0 * a_want.sqrt() - 4.0;
        assert!((b.value - v_want).abs() < 1e-7 * v_want, "value = {}", b.value);
    }

    #[test]
    fn upper_taylor_reg2_square_root_level() {
        // theta^{-2} fails Reg1, satisfies Reg2: A = sqrt(n)
        let w = point_weight(2.0);
        let b = upper_envelope_taylor(&w, &w.profile.clone(), 4096).unwrap();
        assert_eq!(b.a, 64.0);
        let v_want = 4.0 * 8.0 - 4.0; // cutoff integral at A = 64
        assert!((b.value - v_want).abs() < 1e-7 * v_want);
        let r = b.preconditions.unwrap();
        assert!(r.reg2 && !r.reg1 && r.subordinate);
    }

    #[test]
    fn upper_taylor_rejects_irregular_profile() {
        let phi = ProfileFunction::ExpPower { p: 1.0, c: 1.0 };
        let w = WeightField::new(
            phi.clone(),
            CompactSetModel::new(ZeroSetSpec::PointSet { angles: vec![0.0] }).unwrap(),
        )
        .unwrap();
        let err = upper_envelope_taylor(&w, &phi, 256).unwrap_err();
        assert!(matches!(err, Error::RegularityViolation(_)));
    }

    #[test]
    fn chebyshev_envelope_goldens() {
        // single point: value = A lambda*(A) = 2 sqrt(A), A = 2^{14/3}
        let w = point_weight(2.0);
        let b = upper_envelope_chebyshev(&w, 64).unwrap();
        let a_want = 2f64.powf(14.0 / 3.0);
        assert!((b.a - a_want).abs() < 1e-8 * a_want);
        let v_want = 2.0 * a_want.sqrt();
        assert!((b.value - v_want).abs() < 1e-7 * v_want);

        // two antipodal points: each super-level arc still has length 2s, so
        // lambda* = 2 a^{-1/2} = lambda/2 and A, value match the single-point
        // case while lambda itself doubles
        let w2 = WeightField::new(
            ProfileFunction::Power { p: 2.0, c: 1.0 },
            CompactSetModel::new(ZeroSetSpec::PointSet {
                angles: vec![0.0, 0.5],
            })
            .unwrap(),
        )
        .unwrap();
        let b2 = upper_envelope_chebyshev(&w2, 64).unwrap();
        assert!((b2.a - a_want).abs() < 1e-8 * a_want, "A = {}", b2.a);
        assert!((b2.value - v_want).abs() < 1e-7 * v_want, "value = {}", b2.value);
        let ls = w2.lambda_star(100.0).unwrap();
        let l = w2.lambda(100.0).unwrap();
        assert!((ls - 0.2).abs() < 1e-12 && (l - 0.4).abs() < 1e-12);
    }

    #[test]
    fn two_sided_power_family() {
        // A = (2n)^{p/(p+1)}, value = 2 A^{1/2} for p = 2
        let w = point_weight(2.0);
        let b = two_sided(&w, 64).unwrap();
        let a_want = 128f64.powf(2.0 / 3.0);
        assert!((b.a - a_want).abs() < 1e-8 * a_want);
        assert!((b.value - 2.0 * a_want.sqrt()).abs() < 1e-7);
        let r = b.preconditions.unwrap();
        assert!(r.doubling && r.lambda_star_over_lambda_min > 0.9);

        // p < 1: doubling ratio 2^{1/p} > 2 -> rejected
        let w = point_weight(0.5);
        assert!(matches!(
            two_sided(&w, 64),
            Err(Error::RegularityViolation(_))
        ));
    }

    #[test]
    fn deep_zero_golden_and_hypotheses() {
        let h = ProfileFunction::Power { p: 2.0, c: 1.0 };
        let b = deep_zero_envelope(&h, 4096).unwrap();
        assert!((b.a - 256.0).abs() < 1e-7, "A = {}", b.a);
        assert!((b.value - 30.0).abs() < 1e-7, "value = {}", b.value);

        // exp profile passes via condition (ii)
        let h = ProfileFunction::ExpPower { p: 1.0, c: 1.0 };
        assert!(deep_zero_envelope(&h, 256).is_ok());

        // shallow power fails (i) (|log theta| not O(h)) and (ii)
        let h = ProfileFunction::Power { p: 0.05, c: 1.0 };
        assert!(matches!(
            deep_zero_envelope(&h, 256),
            Err(Error::RegularityViolation(_))
        ));
    }

    #[test]
    fn level_monotone_in_n() {
        let w = point_weight(3.0);
        let mut prev_a = 0.0;
        let mut prev_v = 0.0;
        for k in 6..=12 {
            let b = lower_envelope(&w, 1u64 << k).unwrap();
            assert!(b.a >= prev_a && b.value >= prev_v, "n = 2^{k}");
            prev_a = b.a;
            prev_v = b.value;
        }
    }

    #[test]
    fn envelope_ordering_when_matched() {
        // lambda* = lambda here, so lower >= two-sided >= chebyshev holds
        // with constant 1 at every n
        let w = point_weight(2.0);
        for k in [6u64, 9, 12] {
            let n = 1 << k;
            let lo = lower_envelope(&w, n).unwrap().value;
            let ts = two_sided(&w, n).unwrap().value;
            let ch = upper_envelope_chebyshev(&w, n).unwrap().value;
            assert!(lo >= ts && (ts - ch).abs() < 1e-7 * ts, "n={n} {lo} {ts} {ch}");
        }
    }

    #[test]
    fn rate_registry() {
        assert_eq!(predicted_rate("cor_61", None, None).unwrap(), RatePrediction::LogN);
        match predicted_rate("cor_iii", Some(2.0), None).unwrap() {
            RatePrediction::PowerOfN { exponent } => {
                assert!((exponent - 1.0 / 3.0).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
        match predicted_rate("cor_62", Some(1.0), Some(1.0)).unwrap() {
            RatePrediction::PowerOfN { exponent } => {
                assert!((exponent - 1.0 / 3.0).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
        match predicted_rate("cor_iv", Some(2.0), None).unwrap() {
            RatePrediction::NOverLogPower { power } => assert_eq!(power, 1.0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            predicted_rate("cor_ix", None, None),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(
            predicted_rate("cor_iii", None, None),
            Err(Error::UnknownFamily(_))
        ));
    }
}
