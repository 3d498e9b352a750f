//! Ground truth for the minimum problem: Fourier moments of
//! `dρ = e^{-H} w dm` and the Levinson prediction-error recursion,
//! cross-checked by a direct Gram/Cholesky oracle at small degree.

use rug::ops::CompleteRound;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{fourier_moments, integrate_adaptive, LiveInterval};
use crate::real::{real, sin_cos_turns, zero, WEIGHTS_PREC};
use crate::weights::WeightField;

/// Real trigonometric polynomial `a_0 + sum_j a_j cos(2 pi j t) + b_j sin(2 pi j t)`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TrigPoly {
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn eval(&self, t: &Float) -> Float {
        let prec = t.prec();
        let mut acc = zero(prec);
        let deg = self.cos.len().max(self.sin.len());
        for j in 0..deg {
            if j == 0 {
                if let Some(a) = self.cos.first() {
                    acc += real(prec, *a);
                }
                continue;
            }
            let arg = (t * (j as u32)).complete(prec);
            let (s, c) = sin_cos_turns(&arg);
            if let Some(a) = self.cos.get(j) {
                acc += c * real(prec, *a);
            }
            if let Some(b) = self.sin.get(j) {
                acc += s * real(prec, *b);
            }
        }
        acc
    }

    /// Crude sup bound `sum |coeffs|`.
    pub fn sup_bound(&self) -> f64 {
        self.cos.iter().chain(self.sin.iter()).map(|c| c.abs()).sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothFactor {
    Const { value: f64 },
    Trig(TrigPoly),
}

impl SmoothFactor {
    pub fn eval(&self, t: &Float) -> Float {
        match self {
            SmoothFactor::Const { value } => real(t.prec(), *value),
            SmoothFactor::Trig(p) => p.eval(t),
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            SmoothFactor::Const { value } => *value,
            SmoothFactor::Trig(p) => p.sup_bound(),
        }
    }
}

/// Absolutely continuous measure `dρ = e^{-H(t)} w(t) 1_{support} dm`.
/// Atoms and singular parts are out of scope and unrepresentable here.
#[derive(Clone, Debug)]
pub struct MeasureDensity {
    pub weight: Option<WeightField>,
    pub smooth: SmoothFactor,
    /// closed arc `[a, b]` in turns; density is 0 outside
    pub support_arc: Option<(f64, f64)>,
}

impl MeasureDensity {
    pub fn lebesgue() -> Self {
        MeasureDensity {
            weight: None,
            smooth: SmoothFactor::Const { value: 1.0 },
            support_arc: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.smooth.sup_bound() <= 0.0 {
            return Err(Error::Config("smooth factor is identically <= 0".into()));
        }
        // positivity on a grid
        let prec = WEIGHTS_PREC;
        for i in 0..1024 {
            let t = real(prec, i as f64 / 1024.0);
            if self.smooth.eval(&t).to_f64() < 0.0 {
                return Err(Error::Config(format!(
                    "smooth factor negative near theta = {}",
                    i as f64 / 1024.0
                )));
            }
        }
        if let Some((a, b)) = self.support_arc {
            if !(b > a && b - a <= 1.0) {
                return Err(Error::Config("support arc must satisfy a < b <= a+1".into()));
            }
        }
        Ok(())
    }

    /// `ρ'(theta)` at the precision of `theta`.
    pub fn density(&self, theta: &Float) -> Float {
        let prec = theta.prec();
        if let Some((a, b)) = self.support_arc {
            let t = theta.to_f64().rem_euclid(1.0);
            let inside = (t >= a && t <= b) || (t + 1.0 >= a && t + 1.0 <= b);
            if !inside {
                return zero(prec);
            }
        }
        let mut v = self.smooth.eval(theta);
        if let Some(w) = &self.weight {
            let h = w.eval(theta);
            if h.is_infinite() {
                return zero(prec);
            }
            v *= (-h).exp();
        }
        v
    }
}

/// High-precision Fourier moments `c_k = int t^{-k} dρ`, `k = 0..=N`.
#[derive(Clone, Debug)]
pub struct MomentSequence {
    pub values: Vec<Complex>,
    /// natural log of the per-coefficient quadrature error bound
    pub ln_eps: Vec<f64>,
    pub precision_bits: u32,
    pub evals: usize,
}

/// Mantissa bits required to resolve moments at `ln_target_eps`.
fn moment_precision(ln_target_eps: f64) -> u32 {
    let bits = (-ln_target_eps) / std::f64::consts::LN_2;
    // headroom past the target: quadrature internals plus room for the
    // stability loop to probe perturbations well below the claimed error
    (bits.ceil() as u32 + 224).max(224)
}

/// Live intervals (angles where the density exceeds the target) plus the
/// log-mass bound of what was excluded analytically.
fn live_intervals(d: &MeasureDensity, ln_target_eps: f64) -> Result<(Vec<LiveInterval>, f64)> {
    let base: Vec<(f64, f64)> = match d.support_arc {
        Some((a, b)) => vec![(a, b)],
        None => vec![(-0.5, 0.5)],
    };
    let mut ln_skipped = f64::NEG_INFINITY;
    let live: Vec<(f64, f64)> = if let Some(w) = &d.weight {
        // dead zone: {H > T} with e^{-T} * sup(w) below target
        let t_cut = -ln_target_eps + d.smooth.sup_bound().max(1.0).ln() + 2.0;
        let s_dead = w.scale_of(t_cut);
        match w.zero_set.positioned_gaps(2.0 * s_dead) {
            Ok(gaps) if s_dead >= w.zero_set.resolution() => {
                let lam = w.zero_set.psi(s_dead)?;
                ln_skipped = lam.max(f64::MIN_POSITIVE).ln()
                    + d.smooth.sup_bound().max(f64::MIN_POSITIVE).ln()
                    - t_cut;
                let mut segs = Vec::with_capacity(2 * gaps.len());
                for (lo, hi) in gaps {
                    let (a, b) = (lo + s_dead, hi - s_dead);
                    if b > a {
                        // the distance to the set has a derivative jump at
                        // the gap midpoint; pin it as an interval endpoint
                        // so every quadrature panel sees a smooth integrand
                        let mid = 0.5 * (lo + hi);
                        if mid > a && mid < b {
                            segs.push((a, mid));
                            segs.push((mid, b));
                        } else {
                            segs.push((a, b));
                        }
                    }
                }
                intersect_periodic(&segs, &base)
            }
            _ => base.clone(), // resolution too coarse: integrate everything
        }
    } else {
        base.clone()
    };
    Ok((
        live.into_iter()
            .map(|(lo, hi)| LiveInterval { lo, hi })
            .collect(),
        ln_skipped,
    ))
}

/// Intersection of two arc unions on the circle; operands may stick out of
/// `[0,1)` by less than a full turn.
fn intersect_periodic(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(al, ah) in a {
        for &(bl, bh) in b {
            for shift in [-1.0, 0.0, 1.0] {
                let (bl, bh) = (bl + shift, bh + shift);
                let lo = al.max(bl);
                let hi = ah.min(bh);
                if hi > lo {
                    out.push((lo, hi));
                }
            }
        }
    }
    out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    out
}

pub fn compute_moments(
    d: &MeasureDensity,
    n_max: usize,
    ln_target_eps: f64,
) -> Result<MomentSequence> {
    d.validate()?;
    let prec = moment_precision(ln_target_eps);
    let (live, ln_skipped) = live_intervals(d, ln_target_eps)?;
    let mut f = |t: &Float| d.density(t);
    let out = fourier_moments(&mut f, &live, n_max, prec, ln_target_eps, ln_skipped)?;
    let c0 = out.values[0].real().to_f64();
    if !(c0 > 0.0) {
        return Err(Error::NegativeMass(c0));
    }
    Ok(MomentSequence {
        values: out.values,
        ln_eps: out.ln_eps,
        precision_bits: prec,
        evals: out.evals,
    })
}

/// `e_0..e_N`, reflection coefficients, and precision metadata.
#[derive(Clone, Debug)]
pub struct SzegoResult {
    pub e: Vec<Float>,
    pub alpha: Vec<Complex>,
    /// natural logs of `e_n`
    pub log_e: Vec<Float>,
    pub precision_bits: u32,
    /// `max_n |Δ log e_n|` between the final two precision levels, when the
    /// stability loop has run
    pub stability: Option<f64>,
}

/// Hermitian Toeplitz entry `c_{k-j}` of the Gram matrix `<z^j, z^k>`.
fn toeplitz(mom: &MomentSequence, j: i64, k: i64, prec: u32) -> Complex {
    let d = k - j;
    let c = Complex::with_val(prec, &mom.values[d.unsigned_abs() as usize]);
    if d >= 0 {
        c
    } else {
        c.conj()
    }
}

/// Reflection coefficients and prediction errors of the Toeplitz moment
/// matrix, by the Schur recursion on the inner-product tails
/// `F_n(-j) = <z^{-j}, φ_n>` and `G_n(-j) = <z^{-j}, φ*_n>`:
///
/// `conj(α_n) = F_n(-1)/G_n(0)`, `E_n = G_n(0)`,
/// `F' = F(shift) - conj(α_n) G`, `G' = G - α_n F(shift)`, `e_n = sqrt(E_n)`.
///
/// The classical predictor-coefficient update computes the same quantities
/// but amplifies rounding exponentially in `n` when the measure is far from
/// Lebesgue; the Schur form stays accurate at the precision of the moments.
pub fn levinson(mom: &MomentSequence, n_max: usize) -> Result<SzegoResult> {
    assert!(n_max < mom.values.len(), "levinson needs c_0..c_N");
    let prec = mom.precision_bits;
    let mut e = Vec::with_capacity(n_max + 1);
    let mut alpha = Vec::with_capacity(n_max);
    // F_0(-j) = G_0(-j) = conj(c_j)
    let mut f_seq: Vec<Complex> = (0..=n_max)
        .map(|j| Complex::with_val(prec, &mom.values[j]).conj())
        .collect();
    let mut g_seq = f_seq.clone();
    for n in 0..=n_max {
        let big_e = g_seq[0].real().clone(); // E_n = e_n^2
        if !(big_e > 0u32) {
            return Err(Error::PositivityLoss {
                step: n,
                alpha: f64::NAN,
            });
        }
        e.push(big_e.clone().sqrt());
        if n == n_max {
            break;
        }
        let conj_alpha = f_seq[1].clone() / &big_e;
        let mag2 = conj_alpha.clone().norm().into_real_imag().0;
        if !(mag2 < 1u32) {
            return Err(Error::PositivityLoss {
                step: n,
                alpha: mag2.to_f64().sqrt(),
            });
        }
        let alpha_n = conj_alpha.clone().conj();
        // both tails shrink by one entry per step
        let len = f_seq.len() - 1;
        let mut f_next: Vec<Complex> = Vec::with_capacity(len);
        let mut g_next: Vec<Complex> = Vec::with_capacity(len);
        for j in 0..len {
            f_next.push(f_seq[j + 1].clone() - (&conj_alpha * &g_seq[j]).complete((prec, prec)));
            g_next.push(g_seq[j].clone() - (&alpha_n * &f_seq[j + 1]).complete((prec, prec)));
        }
        f_seq = f_next;
        g_seq = g_next;
        alpha.push(alpha_n);
    }
    let log_e: Vec<Float> = e.iter().map(|x| x.clone().ln()).collect();
    Ok(SzegoResult {
        e,
        alpha,
        log_e,
        precision_bits: prec,
        stability: None,
    })
}

/// Deterministic LCG step; returns a value in `[-1, 1]`.
fn lcg_unit(state: &mut u64) -> f64 {
    *state = state
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    ((*state >> 11) as f64) / ((1u64 << 52) as f64) - 1.0
}

/// Moments shifted by a random perturbation at the claimed per-`k` error
/// size (times `e^{ln_offset}`), used to probe the sensitivity of the
/// prediction errors.
fn perturbed(mom: &MomentSequence, state: &mut u64, ln_offset: f64) -> MomentSequence {
    let prec = mom.precision_bits;
    let values = mom
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let mag = Float::with_val(prec, mom.ln_eps[k] + ln_offset).exp();
            let re: Float = mag.clone() * Float::with_val(prec, lcg_unit(state));
            let im = if k == 0 {
                // c_0 stays real
                zero(prec)
            } else {
                mag * Float::with_val(prec, lcg_unit(state))
            };
            v.clone() + Complex::with_val(prec, (re, im))
        })
        .collect::<Vec<Complex>>();
    MomentSequence {
        values,
        ln_eps: mom.ln_eps.clone(),
        precision_bits: mom.precision_bits,
        evals: mom.evals,
    }
}

/// Moments + recursion with an adaptive accuracy loop.
///
/// The smallest Toeplitz eigenvalue can sit far below `e_n^2` (it tracks the
/// essential infimum of the density resolved at scale `1/n`), so `log e_n`
/// can be violently sensitive to moment perturbations. Each round probes
/// that sensitivity directly: the recursion is re-run on moments perturbed
/// at the claimed quadrature error size, and the result is accepted when
/// `max_n |Δ log e_n| <= 1e-7` across probes. Otherwise the observed
/// amplification says exactly how much tighter the moments must be, and the
/// loop jumps there in one step.
pub fn levinson_stable(
    d: &MeasureDensity,
    n_max: usize,
    ln_target_eps: f64,
) -> Result<(MomentSequence, SzegoResult)> {
    let trace = std::env::var_os("SZMIN_TRACE").is_some();
    let mut ln_eps = ln_target_eps.min(-40.0);
    for _round in 0..10 {
        let t0 = std::time::Instant::now();
        let mom = compute_moments(d, n_max, ln_eps)?;
        let res = match levinson(&mom, n_max) {
            Ok(r) => r,
            Err(Error::PositivityLoss { step, alpha }) => {
                if trace {
                    eprintln!(
                        "round {_round}: ln_eps {ln_eps:.1} prec {} -> positivity loss at {step} (|alpha| {alpha}) [{:.1?}]",
                        mom.precision_bits,
                        t0.elapsed()
                    );
                }
                // positivity broke where the moment error caught up with the
                // smallest Toeplitz eigenvalue; extrapolate that eigenvalue's
                // decay from the failing step to the full order
                let ratio = (n_max.max(1) as f64 / step.max(1) as f64).powf(2.0 / 3.0);
                ln_eps *= ratio.clamp(1.3, 2.5);
                continue;
            }
            Err(e) => return Err(e),
        };
        // sensitivity probe at the claimed moment accuracy
        let mut state = 0x9E3779B97F4A7C15u64 ^ (n_max as u64);
        let mut worst = 0.0f64;
        let mut probe_ok = true;
        let mut probe_fail_step = n_max;
        for _trial in 0..2 {
            match levinson(&perturbed(&mom, &mut state, 0.0), n_max) {
                Ok(pr) => {
                    for (x, y) in res.log_e.iter().zip(pr.log_e.iter()) {
                        worst = worst.max((x.clone() - y).abs().to_f64());
                    }
                }
                Err(Error::PositivityLoss { step, .. }) => {
                    probe_ok = false;
                    probe_fail_step = step;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if trace {
            eprintln!(
                "round {_round}: ln_eps {ln_eps:.1} prec {} sensitivity {worst:.3e} probe_ok {probe_ok} [{:.1?}]",
                mom.precision_bits,
                t0.elapsed()
            );
        }
        if probe_ok && worst <= 1e-7 {
            let mut res = res;
            res.stability = Some(worst);
            return Ok((mom, res));
        }
        // jump to the accuracy implied by the observed amplification, aiming
        // two decades under the acceptance threshold
        let ln10 = std::f64::consts::LN_10;
        ln_eps = if probe_ok {
            let ln_amp = worst.max(1e-300).ln() - ln_eps;
            (-9.0 * ln10 - ln_amp).min(ln_eps - 10.0)
        } else {
            // the probe itself lost positivity: the response is nonlinear at
            // this size. Descend until a probe responds linearly and
            // extrapolate its amplification; every size that still fails
            // caps the acceptable target directly (a perturbation nine
            // decades under a failing one keeps `Δ log e_n` under 1e-9 if
            // the response scales at worst linearly up to the blow-up)
            let mut deepest_fail = ln_eps;
            let mut estimated = None;
            let mut down = -12.0 * ln10;
            // perturbations below one ulp of the moments are invisible
            let floor = -((mom.precision_bits - 10) as f64) * std::f64::consts::LN_2;
            while ln_eps + down > floor {
                let mut red_worst = 0.0f64;
                let mut red_ok = true;
                for _trial in 0..2 {
                    match levinson(&perturbed(&mom, &mut state, down), n_max) {
                        Ok(pr) => {
                            for (x, y) in res.log_e.iter().zip(pr.log_e.iter()) {
                                red_worst = red_worst.max((x.clone() - y).abs().to_f64());
                            }
                        }
                        Err(Error::PositivityLoss { .. }) => {
                            red_ok = false;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                if trace {
                    eprintln!(
                        "round {_round}: probe at offset {down:.1} sensitivity {red_worst:.3e} ok {red_ok}"
                    );
                }
                if red_ok && red_worst > 0.0 {
                    let ln_amp = red_worst.ln() - (ln_eps + down);
                    estimated = Some(-9.0 * ln10 - ln_amp);
                    break;
                }
                deepest_fail = ln_eps + down;
                down *= 2.0;
            }
            match estimated {
                Some(e) => e.min(deepest_fail - 9.0 * ln10).min(ln_eps - 10.0),
                // every probe size down to the moment ulp still blew up. Two
                // estimates of the requirement: (a) the deepest failing size
                // minus the ladder spacing and acceptance margin, (b) the
                // eigenvalue-decay extrapolation from the step where the
                // probe broke, as for a main-run positivity loss. Take the
                // deeper one; the clamp caps the overshoot.
                None => {
                    let spacing_bound = deepest_fail + down.max(-12.0 * ln10) - 9.0 * ln10;
                    let ratio = (n_max.max(1) as f64 / probe_fail_step.max(1) as f64)
                        .powf(2.0 / 3.0);
                    let extrapolated = ln_eps * ratio.clamp(1.3, 2.5);
                    spacing_bound.min(extrapolated)
                }
            }
        };
    }
    Err(Error::QuadratureNonConvergence(
        "prediction errors did not stabilize under moment refinement".into(),
    ))
}

/// Residual distance of `z^n` from `P_{n-1}` by Hermitian Cholesky of the
/// full Gram matrix: independent of the recursion path.
pub fn gram_oracle(mom: &MomentSequence, n: usize) -> Result<Float> {
    assert!(n <= 32, "oracle scale is n <= 32");
    assert!(n < mom.values.len());
    let prec = mom.precision_bits;
    let m = n + 1;
    // G = L L^H, column-by-column
    let mut l: Vec<Vec<Complex>> = vec![vec![Complex::with_val(prec, 0); m]; m];
    for j in 0..m {
        // diagonal
        let mut s = Float::with_val(prec, toeplitz(mom, j as i64, j as i64, prec).real());
        for k in 0..j {
            s -= l[j][k].clone().norm().into_real_imag().0;
        }
        if !(s > 0u32) {
            return Err(Error::PositivityLoss {
                step: j,
                alpha: f64::NAN,
            });
        }
        let dj = s.sqrt();
        l[j][j] = Complex::with_val(prec, (&dj, &zero(prec)));
        for i in (j + 1)..m {
            let mut s = toeplitz(mom, i as i64, j as i64, prec); // M_{ij} = <z^i, z^j> = c_{j-i}
            for k in 0..j {
                s -= l[i][k].clone() * l[j][k].clone().conj();
            }
            l[i][j] = s / Complex::with_val(prec, (&dj, &zero(prec)));
        }
    }
    Ok(Float::with_val(prec, l[n][n].real()))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SzegoLimit {
    pub value: f64,
    pub divergent: bool,
    /// the cutoff integral was still growing at the ceiling
    pub inconclusive: bool,
}

/// `exp(1/2 int log ρ' dm)`, with divergence detected by cutoff growth.
pub fn szego_limit(d: &MeasureDensity) -> Result<SzegoLimit> {
    if d.support_arc.is_some() {
        // ρ' = 0 on a set of positive measure: the log integral is -inf
        return Ok(SzegoLimit {
            value: 0.0,
            divergent: true,
            inconclusive: false,
        });
    }
    let prec = WEIGHTS_PREC;
    // int log w dm (log-singularities are integrable; adaptive panels cope)
    let mut f = |t: &Float| {
        let v = d.smooth.eval(t);
        if v <= 0u32 {
            real(prec, -1e18) // measure-zero zero of a trig polynomial
        } else {
            v.ln()
        }
    };
    let log_w = integrate_adaptive(
        &mut f,
        &real(prec, -0.5),
        &real(prec, 0.5),
        prec,
        1e-10,
        1e-12,
        52,
    )?
    .value
    .to_f64();
    let mut log_integral = log_w;
    if let Some(w) = &d.weight {
        const A_MAX: f64 = 1e6;
        let mut a = 100.0;
        let mut prev = w.cutoff_integral(a)?.value;
        let mut flattened = false;
        let mut last = prev;
        while a < A_MAX {
            a *= 10.0;
            last = w.cutoff_integral(a)?.value;
            if last - prev <= 1e-6 * last.max(1.0) {
                flattened = true;
                break;
            }
            prev = last;
        }
        if !flattened {
            return Ok(SzegoLimit {
                value: 0.0,
                divergent: true,
                inconclusive: last < 1e6, // ceiling hit while still growing
            });
        }
        log_integral -= last; // int H dm = lim_A int H_A dm
    }
    Ok(SzegoLimit {
        value: (0.5 * log_integral).exp(),
        divergent: false,
        inconclusive: false,
    })
}

/// Working precision for a run targeting `predicted_log_en` at degree `n`.
pub fn precision_policy(predicted_log_en: f64, n: usize) -> u32 {
    let p = predicted_log_en.min(0.0).abs();
    let bits =
        (4.0 * p / std::f64::consts::LN_2).ceil() + 8.0 * ((n as f64 + 2.0).log2().ceil()) + 64.0;
    (bits as u32).max(128)
}

/// Moment target for the stability loop entry point: comfortably below
/// `e_n^2` so the Toeplitz pivots stay resolved.
pub fn ln_eps_policy(predicted_log_en: f64) -> f64 {
    2.0 * predicted_log_en.min(0.0) - 12.0 * std::f64::consts::LN_10
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{CompactSetModel, ProfileFunction, ZeroSetSpec};

    fn ln10(d: f64) -> f64 {
        d * std::f64::consts::LN_10
    }

    fn one_minus_t_squared() -> MeasureDensity {
        // |1 - t|^2 = 2 - 2 cos(2 pi theta)
        MeasureDensity {
            weight: None,
            smooth: SmoothFactor::Trig(TrigPoly {
                cos: vec![2.0, -2.0],
                sin: vec![],
            }),
            support_arc: None,
        }
    }

    fn deep_zero_density(p: f64) -> MeasureDensity {
        MeasureDensity {
            weight: Some(
                WeightField::new(
                    ProfileFunction::Power { p, c: 1.0 },
                    CompactSetModel::new(ZeroSetSpec::PointSet { angles: vec![0.0] }).unwrap(),
                )
                .unwrap(),
            ),
            smooth: SmoothFactor::Const { value: 1.0 },
            support_arc: None,
        }
    }

    #[test]
    fn moments_of_lebesgue() {
        let mom = compute_moments(&MeasureDensity::lebesgue(), 16, ln10(-40.0)).unwrap();
        assert!((mom.values[0].real().to_f64() - 1.0).abs() < 1e-35);
        for k in 1..=16 {
            assert!(mom.values[k].clone().abs().real().to_f64() < 1e-35, "k={k}");
        }
    }

    #[test]
    fn moments_of_one_minus_t_squared() {
        let mom = compute_moments(&one_minus_t_squared(), 8, ln10(-40.0)).unwrap();
        assert!((mom.values[0].real().to_f64() - 2.0).abs() < 1e-35);
        assert!((mom.values[1].real().to_f64() + 1.0).abs() < 1e-35);
        for k in 2..=8 {
            assert!(mom.values[k].clone().abs().real().to_f64() < 1e-35, "k={k}");
        }
    }

    #[test]
    fn levinson_on_lebesgue_is_one() {
        let mom = compute_moments(&MeasureDensity::lebesgue(), 64, ln10(-45.0)).unwrap();
        let r = levinson(&mom, 64).unwrap();
        for (n, e) in r.e.iter().enumerate() {
            assert!(
                (e.clone() - 1u32).abs().to_f64() < 1e-40,
                "n={n} e={}",
                e.to_f64()
            );
        }
    }

    #[test]
    fn levinson_determinant_golden() {
        // density |1-t|^2: e_n^2 = (n+2)/(n+1)
        let mom = compute_moments(&one_minus_t_squared(), 32, ln10(-45.0)).unwrap();
        let r = levinson(&mom, 32).unwrap();
        for n in 0..=32usize {
            let want = (n as f64 + 2.0) / (n as f64 + 1.0);
            let got = r.e[n].clone() * &r.e[n];
            let rel = ((got.to_f64() - want) / want).abs();
            assert!(rel < 1e-25, "n={n} rel={rel:e}");
        }
        // product formula: e_n^2 = c_0 prod (1 - |alpha_k|^2)
        let prec = mom.precision_bits;
        let mut prod = Float::with_val(prec, mom.values[0].real());
        for k in 0..8 {
            let m2 = r.alpha[k].clone().norm().into_real_imag().0;
            prod *= Float::with_val(prec, 1) - m2;
            let e2 = r.e[k + 1].clone() * &r.e[k + 1];
            let rel = ((e2 - &prod) / &prod).abs().to_f64();
            assert!(rel < 1e-30, "k={k} rel={rel:e}");
        }
    }

    #[test]
    fn gram_oracle_agrees_with_levinson() {
        let cases = vec![one_minus_t_squared(), deep_zero_density(2.0)];
        for d in &cases {
            let mom = compute_moments(d, 17, ln10(-45.0)).unwrap();
            let r = levinson(&mom, 16).unwrap();
            for n in (0..=16).step_by(4) {
                let g = gram_oracle(&mom, n).unwrap();
                let rel = ((g.clone() - &r.e[n]).abs() / &r.e[n]).to_f64();
                assert!(rel < 1e-25, "n={n} rel={rel:e}");
            }
        }
    }

    #[test]
    fn monotone_decreasing_errors() {
        let d = deep_zero_density(2.0);
        let mom = compute_moments(&d, 48, ln10(-50.0)).unwrap();
        let r = levinson(&mom, 48).unwrap();
        for n in 1..=48usize {
            assert!(r.e[n] <= r.e[n - 1]);
            let m2 = r.alpha[n - 1].clone().norm().into_real_imag().0.to_f64();
            assert!(m2 < 1.0);
        }
    }

    #[test]
    fn stability_loop_reports_certificate() {
        let d = deep_zero_density(2.0);
        let (_, r) = levinson_stable(&d, 24, ln10(-30.0)).unwrap();
        assert!(r.stability.unwrap() <= 1e-6);
    }

    #[test]
    fn szego_limit_goldens() {
        let lim = szego_limit(&MeasureDensity::lebesgue()).unwrap();
        assert!((lim.value - 1.0).abs() < 1e-8);
        // classical: int log|1 - t|^2 dm = 0
        let lim = szego_limit(&one_minus_t_squared()).unwrap();
        assert!(!lim.divergent);
        assert!((lim.value - 1.0).abs() < 1e-5, "value = {}", lim.value);
        // divergent logarithmic integral
        let lim = szego_limit(&deep_zero_density(2.0)).unwrap();
        assert!(lim.divergent);
        assert_eq!(lim.value, 0.0);
    }

    #[test]
    fn support_arc_produces_exponential_decay() {
        let d = MeasureDensity {
            weight: None,
            smooth: SmoothFactor::Const { value: 1.0 },
            support_arc: Some((-0.25, 0.25)),
        };
        assert_eq!(szego_limit(&d).unwrap().value, 0.0);
        let mom = compute_moments(&d, 32, ln10(-45.0)).unwrap();
        let r = levinson(&mom, 32).unwrap();
        // log e_n <= -c n for a proper sub-arc
        let l8 = r.log_e[8].to_f64();
        let l32 = r.log_e[32].to_f64();
        assert!(l32 < l8 && l32 < -0.05 * 32.0, "l32 = {l32}");
    }

    #[test]
    fn precision_policy_goldens() {
        // ceil(40/ln2) + 8 ceil(log2(66)) + 64 = 58 + 56 + 64
        assert_eq!(precision_policy(-10.0, 64), 178);
        // ceil(800/ln2) + 8 ceil(log2(1026)) + 64 = 1155 + 88 + 64
        assert_eq!(precision_policy(-200.0, 1024), 1307);
        assert_eq!(precision_policy(0.0, 4), 128);
    }

    #[test]
    fn random_trig_densities_match_oracle() {
        // |q(t)|^2 for random complex q keeps the density nonnegative
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(17);
        for case in 0..3 {
            let deg = 3 + case;
            let q: Vec<(f64, f64)> = (0..=deg)
                .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            // w = |q|^2 as a trig polynomial: w_k = sum_j q_{j+k} conj(q_j)
            let mut cos = vec![0.0; deg + 1];
            let mut sin = vec![0.0; deg + 1];
            for k in 0..=deg {
                let mut re = 0.0;
                let mut im = 0.0;
                for j in 0..=(deg - k) {
                    let (ar, ai) = q[j + k];
                    let (br, bi) = q[j];
                    re += ar * br + ai * bi;
                    im += ai * br - ar * bi;
                }
                if k == 0 {
                    cos[0] = re;
                } else {
                    cos[k] = 2.0 * re;
                    sin[k] = -2.0 * im;
                }
            }
            let d = MeasureDensity {
                weight: None,
                smooth: SmoothFactor::Trig(TrigPoly { cos, sin }),
                support_arc: None,
            };
            let mom = compute_moments(&d, 11, ln10(-45.0)).unwrap();
            let r = levinson(&mom, 10).unwrap();
            let g = gram_oracle(&mom, 10).unwrap();
            let rel = ((g - &r.e[10]).abs() / &r.e[10]).to_f64();
            assert!(rel < 1e-25, "case={case} rel={rel:e}");
        }
    }
}
