//! Arbitrary-precision Gauss-Legendre quadrature.
//!
//! Three layers:
//!  * cached Legendre nodes/weights at any (order, precision),
//!  * a generic adaptive panel integrator for real integrands,
//!  * a Fourier-moment engine that evaluates the integrand once per panel
//!    node and accumulates all moments `c_k = int f(theta) e^{-2 pi i k theta}`
//!    from the shared evaluations, with per-coefficient error bounds.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::{CompleteRound, Pow};
use rug::{Assign, Complex, Float};

use crate::error::{Error, Result};
use crate::real::{sin_cos_turns, zero};

/// Nodes and weights on `[-1, 1]`.
pub struct GaussRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

fn rule_cache() -> &'static Mutex<HashMap<(usize, u32), Arc<GaussRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<GaussRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Master rules: each order is solved once at a generous precision and then
/// served to callers as cheap rounded copies. The master precision is bumped
/// (and the cache rebuilt lazily) if a caller ever asks for more.
fn master_cache() -> &'static Mutex<(u32, HashMap<usize, Arc<GaussRule>>)> {
    static CACHE: OnceLock<Mutex<(u32, HashMap<usize, Arc<GaussRule>>)>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new((0, HashMap::new())))
}

/// Legendre polynomial value and derivative at `x` via the three-term recurrence.
fn legendre_pair(q: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    if q == 0 {
        return (p0, zero(prec));
    }
    for j in 1..q {
        // p_{j+1} = ((2j+1) x p_j - j p_{j-1}) / (j+1)
        let mut t = (x * &p1).complete(prec);
        t *= 2 * j as u32 + 1;
        t -= (&p0 * (j as u32)).complete(prec);
        t /= j as u32 + 1;
        p0 = std::mem::replace(&mut p1, t);
    }
    // P'_q(x) = q (x P_q - P_{q-1}) / (x^2 - 1)
    let num = ((x * &p1).complete(prec) - &p0) * (q as u32);
    let den = (x * x).complete(prec) - 1u32;
    (p1, num / den)
}

/// Builds the order-`q` rule at precision `prec` by Newton iteration with a
/// precision ladder: each doubling of working precision doubles the correct
/// digits, so the total cost is a small multiple of the final iteration.
fn build_rule(q: usize, prec: u32) -> GaussRule {
    let mut nodes = Vec::with_capacity(q);
    let mut weights = Vec::with_capacity(q);
    let half = q / 2;
    for i in 0..q {
        if q % 2 == 1 && i == half {
            let x = zero(prec);
            let (_, dp) = legendre_pair(q, &x);
            let w = Float::with_val(prec, 2) / (dp.clone() * dp);
            nodes.push(x);
            weights.push(w);
            continue;
        }
        if i > half || (q % 2 == 0 && i >= half) {
            // mirror of an already computed node
            let j = q - 1 - i;
            let x = -nodes[j].clone();
            let w = weights[j].clone();
            nodes.push(x);
            weights.push(w);
            continue;
        }
        // Newton from the Tricomi seed, doubling the working precision
        let seed = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut x = Float::with_val(64, -seed);
        let mut bits = 64u32;
        loop {
            let (p, dp) = legendre_pair(q, &x);
            x -= p / dp;
            if bits >= prec {
                break;
            }
            bits = (2 * bits).min(prec);
            x.set_prec(bits);
        }
        // two clean-up iterations at full precision
        for _ in 0..2 {
            let (p, dp) = legendre_pair(q, &x);
            x -= p / dp;
        }
        let (_, dp) = legendre_pair(q, &x);
        let om = (&x * &x).complete(prec);
        let w = Float::with_val(prec, 2) / ((Float::with_val(prec, 1) - om) * dp.clone() * dp);
        nodes.push(x);
        weights.push(w);
    }
    GaussRule { nodes, weights }
}

/// Gauss-Legendre rule of order `q` at mantissa precision `prec`, cached.
pub fn gauss_legendre(q: usize, prec: u32) -> Arc<GaussRule> {
    assert!(q >= 1);
    if let Some(r) = rule_cache().lock().unwrap().get(&(q, prec)) {
        return r.clone();
    }
    let master = {
        let mut guard = master_cache().lock().unwrap();
        let (master_prec, rules) = &mut *guard;
        if *master_prec < prec + 64 {
            // bump the master precision; old rules rebuild lazily
            *master_prec = (2 * (prec + 64)).max(2112);
            rules.clear();
        }
        let mp = *master_prec;
        rules
            .entry(q)
            .or_insert_with(|| Arc::new(build_rule(q, mp)))
            .clone()
    };
    let rule = Arc::new(GaussRule {
        nodes: master
            .nodes
            .iter()
            .map(|x| Float::with_val(prec, x))
            .collect(),
        weights: master
            .weights
            .iter()
            .map(|w| Float::with_val(prec, w))
            .collect(),
    });
    rule_cache()
        .lock()
        .unwrap()
        .insert((q, prec), rule.clone());
    rule
}

/// One fixed Gauss-Legendre pass over `[lo, hi]`.
pub fn gl_integrate<F: FnMut(&Float) -> Float>(
    f: &mut F,
    lo: &Float,
    hi: &Float,
    q: usize,
    prec: u32,
) -> Float {
    let rule = gauss_legendre(q, prec);
    let half = ((hi - lo).complete(prec)) / 2u32;
    let mid = ((hi + lo).complete(prec)) / 2u32;
    let mut acc = zero(prec);
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let t = (&half * x).complete(prec) + &mid;
        acc += w * f(&t);
    }
    acc * half
}

pub struct AdaptiveResult {
    pub value: Float,
    pub err_bound: Float,
    pub evals: usize,
}

/// Adaptive bisection with an embedded `q` vs two-half comparison.
///
/// `abs_floor` is the absolute error budget; panels whose refinement
/// difference is below their proportional share are accepted.
pub fn integrate_adaptive<F: FnMut(&Float) -> Float>(
    f: &mut F,
    lo: &Float,
    hi: &Float,
    prec: u32,
    rel_tol: f64,
    abs_floor: f64,
    max_depth: usize,
) -> Result<AdaptiveResult> {
    let q = 16;
    let mut evals = 0usize;
    let total_len = (hi - lo).complete(prec);
    if !(total_len > 0u32) {
        return Ok(AdaptiveResult {
            value: zero(prec),
            err_bound: zero(prec),
            evals,
        });
    }
    // coarse magnitude estimate for the relative-tolerance budget
    let coarse = gl_integrate(f, lo, hi, q, prec).abs();
    evals += q;
    let budget = {
        let rel = coarse.clone() * rel_tol;
        let floor = Float::with_val(prec, abs_floor);
        if rel > floor {
            rel
        } else {
            floor
        }
    };

    struct Panel {
        lo: Float,
        hi: Float,
        depth: usize,
    }
    let mut stack = vec![Panel {
        lo: lo.clone(),
        hi: hi.clone(),
        depth: 0,
    }];
    let mut value = zero(prec);
    let mut err = zero(prec);
    while let Some(p) = stack.pop() {
        let mid = ((&p.lo + &p.hi).complete(prec)) / 2u32;
        let whole = gl_integrate(f, &p.lo, &p.hi, q, prec);
        let left = gl_integrate(f, &p.lo, &mid, q, prec);
        let right = gl_integrate(f, &mid, &p.hi, q, prec);
        evals += 3 * q;
        let refined = (&left + &right).complete(prec);
        let diff = (&whole - &refined).complete(prec).abs();
        let share = ((&p.hi - &p.lo).complete(prec) / &total_len) * &budget;
        if diff <= share || p.depth >= max_depth {
            // depth-capped panels are accepted too: around integrable
            // singularities the per-panel defect shrinks with the panel and
            // the global budget check below still guards the total
            value += refined;
            err += diff;
        } else {
            stack.push(Panel {
                lo: p.lo,
                hi: mid.clone(),
                depth: p.depth + 1,
            });
            stack.push(Panel {
                lo: mid,
                hi: p.hi,
                depth: p.depth + 1,
            });
        }
    }
    if err > budget.clone() * 16u32 {
        return Err(Error::QuadratureNonConvergence(format!(
            "accumulated defect {:e} exceeds budget {:e}",
            err.to_f64(),
            budget.to_f64()
        )));
    }
    Ok(AdaptiveResult {
        value,
        err_bound: err,
        evals,
    })
}

/// log of the Gauss-Legendre error bound for `e^{i c x}` on `[-1,1]` with `q` nodes:
/// `E <= c^{2q} 2^{2q+1} (q!)^4 / ((2q+1) ((2q)!)^3)`.
fn ln_osc_error(ln_c: f64, q: usize) -> f64 {
    let qf = q as f64;
    2.0 * qf * ln_c + (2.0 * qf + 1.0) * std::f64::consts::LN_2 + 4.0 * ln_gamma(qf + 1.0)
        - (2.0 * qf + 1.0).ln()
        - 3.0 * ln_gamma(2.0 * qf + 1.0)
}

/// Stirling-series log-gamma, good to ~1e-10 for x >= 8 (shifted up otherwise).
fn ln_gamma(x: f64) -> f64 {
    let mut x = x;
    let mut shift = 0.0;
    while x < 8.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    shift
        + 0.5 * ((2.0 * std::f64::consts::PI).ln() - x.ln())
        + x * (x.ln() - 1.0)
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// Smallest node count from the ladder meeting `ln_err <= ln_eps` for phase `c`.
fn pick_order(c: f64, ln_eps: f64, q_max: usize) -> Option<usize> {
    let ln_c = if c <= 0.0 { f64::NEG_INFINITY } else { c.ln() };
    let mut q = 6usize;
    while q <= q_max {
        if ln_osc_error(ln_c, q) <= ln_eps {
            return Some(q);
        }
        q = (q * 5 / 4).max(q + 2);
    }
    None
}

/// A closed interval on which the integrand is to be evaluated.
#[derive(Clone, Debug)]
pub struct LiveInterval {
    pub lo: f64,
    pub hi: f64,
}

pub struct MomentOutput {
    /// `c_k` for `k = 0..=kmax`.
    pub values: Vec<Complex>,
    /// natural log of the per-coefficient quadrature error bound
    pub ln_eps: Vec<f64>,
    pub evals: usize,
    pub panels: usize,
}

/// Computes `c_k = int f(theta) e^{-2 pi i k theta} d theta` over the union of
/// `live` intervals (angles in turns), for all `k <= kmax`, sharing integrand
/// evaluations across `k`.
///
/// `ln_skipped_mass` is the natural log of an upper bound for the integral of
/// `|f|` over the part of the circle not covered by `live`; it is folded into
/// every error bound. Error budgets are carried in log space throughout
/// because the targets routinely sit far below `f64` range.
pub fn fourier_moments<F: FnMut(&Float) -> Float>(
    f: &mut F,
    live: &[LiveInterval],
    kmax: usize,
    prec: u32,
    ln_target_eps: f64,
    ln_skipped_mass: f64,
) -> Result<MomentOutput> {
    let ln_eps = ln_target_eps;
    // per-panel budget is proportional to length; total live length <= 1
    struct Panel {
        lo: f64,
        hi: f64,
        depth: usize,
    }
    let mut stack: Vec<Panel> = Vec::new();
    let pi = std::f64::consts::PI;
    // Panel length cap: keep the phase of the highest mode at c <= q_cap/4,
    // leaving order headroom for the integrand's own resolution.
    let q_cap = 1024usize;
    let l_max = if kmax == 0 {
        0.26
    } else {
        ((q_cap as f64 / 4.0) / (pi * kmax as f64)).min(0.26)
    };
    for iv in live {
        if iv.hi <= iv.lo {
            continue;
        }
        let n_split = ((iv.hi - iv.lo) / l_max).ceil() as usize;
        let step = (iv.hi - iv.lo) / n_split as f64;
        // boundaries pinned to the exact interval endpoints: `lo + step*n`
        // can miss `hi` by an ulp, silently dropping a sliver of mass
        let mut bounds: Vec<f64> = (0..=n_split)
            .map(|i| {
                if i == 0 {
                    iv.lo
                } else if i == n_split {
                    iv.hi
                } else {
                    (iv.lo + step * i as f64).min(iv.hi)
                }
            })
            .collect();
        bounds.dedup();
        for pair in bounds.windows(2) {
            stack.push(Panel {
                lo: pair[0],
                hi: pair[1],
                depth: 0,
            });
        }
    }

    // Adaptive resolution pass on the worst-mode integrand
    // `f(theta) e^{-2 pi i kmax theta}`: escalate the order until successive
    // rules agree at the panel's budget share, bisecting when the order cap
    // is exhausted. The observed inter-order agreement doubles as the
    // panel's error estimate — a pure-oscillation bound is badly optimistic
    // when `f` grows off the real axis, as spiked densities do.
    let mut frozen: Vec<(f64, f64, usize, f64)> = Vec::new(); // (lo, hi, q, ln_diff)
    let mut evals = 0usize;
    // GL sum of f times the kmax-mode phase factor
    let mut gl_osc = |lo: f64, hi: f64, q: usize, evals: &mut usize| -> (Float, Float) {
        let rule = gauss_legendre(q, prec);
        // halve in extended precision: the f64 products would shift the
        // effective panel edges by an ulp, breaking exact tiling
        let half = (Float::with_val(prec, hi) - Float::with_val(prec, lo)) / 2u32;
        let mid = (Float::with_val(prec, hi) + Float::with_val(prec, lo)) / 2u32;
        let mut re = zero(prec);
        let mut im = zero(prec);
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let theta = (&half * x).complete(prec) + &mid;
            let fv = f(&theta);
            *evals += 1;
            let wgt = (w * &half).complete(prec) * fv;
            if kmax == 0 {
                re += wgt;
            } else {
                let phase = (theta * Float::with_val(prec, kmax)).fract();
                let (s, c_) = sin_cos_turns(&phase);
                re += c_ * &wgt;
                im -= s * wgt;
            }
        }
        (re, im)
    };
    while let Some(p) = stack.pop() {
        let l = p.hi - p.lo;
        let c = pi * kmax as f64 * l;
        // budget share: eps per unit length
        let ln_share = ln_eps + l.max(1e-300).ln();
        if p.depth >= 64 {
            return Err(Error::QuadratureNonConvergence(format!(
                "moment panel [{}, {}] not resolved at depth {}",
                p.lo, p.hi, p.depth
            )));
        }
        // seed from the pure-oscillation requirement, then escalate
        let q_seed = pick_order(c, ln_share, q_cap).unwrap_or(q_cap).max(12);
        // threshold as a Float: ln_share may be far below f64 exp range
        let thresh: Float = Float::with_val(prec, ln_share).exp() * Float::with_val(prec, 0.5);
        let mut q_try = q_seed;
        let mut prev_val = gl_osc(p.lo, p.hi, (q_try / 2).max(6), &mut evals);
        let mut resolved = None;
        loop {
            let cur = gl_osc(p.lo, p.hi, q_try, &mut evals);
            let diff: Float = (cur.0.clone() - &prev_val.0).square()
                + (cur.1.clone() - &prev_val.1).square();
            let diff = diff.sqrt();
            if diff <= thresh {
                let ln_diff = if diff > 0u32 {
                    diff.ln().to_f64()
                } else {
                    f64::NEG_INFINITY
                };
                resolved = Some((q_try, ln_diff));
                break;
            }
            if q_try >= q_cap {
                break;
            }
            prev_val = cur;
            q_try = (q_try * 2).min(q_cap);
        }
        match resolved {
            Some((qf, ln_diff)) => frozen.push((p.lo, p.hi, qf, ln_diff)),
            None => {
                let mid = 0.5 * (p.lo + p.hi);
                if mid <= p.lo || mid >= p.hi {
                    // width exhausted in f64: freeze with the observed
                    // disagreement so the error bound stays honest
                    let cur = gl_osc(p.lo, p.hi, q_cap, &mut evals);
                    let diff: Float = (cur.0.clone() - &prev_val.0).square()
                        + (cur.1.clone() - &prev_val.1).square();
                    let diff = diff.sqrt();
                    let ln_diff = if diff > 0u32 {
                        diff.ln().to_f64()
                    } else {
                        f64::NEG_INFINITY
                    };
                    frozen.push((p.lo, p.hi, q_cap, ln_diff));
                    continue;
                }
                stack.push(Panel {
                    lo: p.lo,
                    hi: mid,
                    depth: p.depth + 1,
                });
                stack.push(Panel {
                    lo: mid,
                    hi: p.hi,
                    depth: p.depth + 1,
                });
            }
        }
    }
    frozen.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if std::env::var_os("SZMIN_TRACE_PANELS").is_some() {
        for &(lo, hi, q, ln_diff) in &frozen {
            eprintln!("panel {lo:.17e} {hi:.17e} q {q} ln_diff {ln_diff:.1}");
        }
    }

    let timing = std::env::var_os("SZMIN_TRACE_TIMING").is_some();
    let t_res = std::time::Instant::now();
    if timing {
        eprintln!("resolution pass: {} evals", evals);
    }
    // Assembly: evaluate f at the panel nodes, then accumulate all moments.
    let mut t_feval = std::time::Duration::ZERO;
    let mut acc_re: Vec<Float> = (0..=kmax).map(|_| zero(prec)).collect();
    let mut acc_im: Vec<Float> = (0..=kmax).map(|_| zero(prec)).collect();
    let mut t1 = zero(prec);
    let mut t2 = zero(prec);
    let mut t3 = zero(prec);
    for &(lo, hi, q, _) in &frozen {
        let rule = gauss_legendre(q, prec);
        let half = (Float::with_val(prec, hi) - Float::with_val(prec, lo)) / 2u32;
        let mid = (Float::with_val(prec, hi) + Float::with_val(prec, lo)) / 2u32;
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let theta = (&half * x).complete(prec) + &mid;
            let tf = std::time::Instant::now();
            let fv = f(&theta);
            t_feval += tf.elapsed();
            evals += 1;
            let wgt = (w * &half).complete(prec) * fv; // scaled weight * value
            // omega = e^{-2 pi i theta}
            let (s, c_) = sin_cos_turns(&theta);
            let om_re = c_;
            let om_im = -s;
            // running z = omega^k starting at k=0
            let mut z_re = Float::with_val(prec, 1);
            let mut z_im = zero(prec);
            for k in 0..=kmax {
                // plain multiplies into preallocated temporaries: the hot
                // loop stays allocation-free without MPFR's slow fused ops
                t3.assign(&wgt * &z_re);
                acc_re[k] += &t3;
                t3.assign(&wgt * &z_im);
                acc_im[k] += &t3;
                if k < kmax {
                    t1.assign(&z_re * &om_re);
                    t3.assign(&z_im * &om_im);
                    t1 -= &t3;
                    t2.assign(&z_re * &om_im);
                    t3.assign(&z_im * &om_re);
                    t2 += &t3;
                    std::mem::swap(&mut z_re, &mut t1);
                    std::mem::swap(&mut z_im, &mut t2);
                }
            }
        }
    }

    if timing {
        eprintln!(
            "assembly: total {:.1?}, of which f evals {:.1?}",
            t_res.elapsed(),
            t_feval
        );
    }
    // Error estimate shared by every mode: the dropped-mass bound, the
    // budget itself, and the observed inter-order agreement of each panel
    // at the worst mode, combined by log-sum-exp.
    let mut terms: Vec<f64> = vec![ln_skipped_mass, ln_eps];
    terms.extend(frozen.iter().map(|&(_, _, _, ln_diff)| ln_diff));
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ln_err_total = if m == f64::NEG_INFINITY {
        m
    } else {
        m + terms
            .iter()
            .map(|t| (t - m).exp())
            .sum::<f64>()
            .ln()
    };
    let ln_eps_out = vec![ln_err_total; kmax + 1];

    let values: Vec<Complex> = acc_re
        .into_iter()
        .zip(acc_im)
        .map(|(re, im)| Complex::with_val(prec, (re, im)))
        .collect();
    Ok(MomentOutput {
        values,
        ln_eps: ln_eps_out,
        evals,
        panels: frozen.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::real;

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        // GL(q) is exact for degree 2q-1
        let prec = 192;
        let rule = gauss_legendre(8, prec);
        let mut acc = zero(prec);
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let x15: Float = x.clone().pow(14u32);
            acc += w * x15;
        }
        // int_{-1}^1 x^14 dx = 2/15
        let expect = Float::with_val(prec, 2) / 15u32;
        let diff = (acc - expect).abs().to_f64();
        assert!(diff < 1e-50, "diff = {diff:e}");
    }

    #[test]
    fn gauss_weights_sum_to_two() {
        for q in [3, 7, 24, 65, 180] {
            let rule = gauss_legendre(q, 256);
            let mut s = zero(256);
            for w in &rule.weights {
                s += w;
            }
            let diff = (s - 2u32).abs().to_f64();
            assert!(diff < 1e-70, "q={q} diff={diff:e}");
        }
    }

    #[test]
    fn adaptive_handles_sharp_bump() {
        // int_0^1 e^{-1/x^2 - 1/(1-x)^2}-like sharp transition: use e^{-100(x-0.3)^2}
        let prec = 128;
        let mut f = |x: &Float| {
            let d = (x - &real(prec, 0.3)).complete(prec);
            (-(d.clone() * d) * 100u32).exp()
        };
        let r = integrate_adaptive(
            &mut f,
            &zero(prec),
            &real(prec, 1.0),
            prec,
            1e-14,
            1e-20,
            40,
        )
        .unwrap();
        // exact: (sqrt(pi)/20) (erf(3) + erf(7))
        let erf3 = real(prec, 3.0).erf();
        let erf7 = real(prec, 7.0).erf();
        let expect = (erf3 + erf7) * real(prec, std::f64::consts::PI.sqrt() / 20.0);
        assert!((r.value - expect).abs().to_f64() < 1e-12);
    }

    #[test]
    fn fourier_moments_of_shifted_cosine() {
        // f = 1 + cos(2 pi theta): c_0 = 1, c_1 = 1/2, c_k = 0 beyond
        let prec = 192;
        let mut f = |t: &Float| {
            let (_, c) = sin_cos_turns(t);
            c + 1u32
        };
        let out = fourier_moments(
            &mut f,
            &[LiveInterval { lo: -0.5, hi: 0.5 }],
            8,
            prec,
            -30.0 * std::f64::consts::LN_10,
            f64::NEG_INFINITY,
        )
        .unwrap();
        assert!((out.values[0].real().to_f64() - 1.0).abs() < 1e-28);
        assert!((out.values[1].real().to_f64() - 0.5).abs() < 1e-28);
        for k in 2..=8 {
            assert!(out.values[k].clone().abs().real().to_f64() < 1e-28, "k={k}");
        }
        for k in 0..=8 {
            let lim = -25.0 * std::f64::consts::LN_10;
            assert!(out.ln_eps[k] < lim, "ln_eps[{k}] = {}", out.ln_eps[k]);
        }
    }

    #[test]
    fn fourier_moments_high_mode_accuracy() {
        // f = cos(2 pi K theta) has c_K = 1/2 exactly
        let prec = 192;
        let kbig = 96usize;
        let mut f = |t: &Float| {
            let arg = (t * (kbig as u32)).complete(prec);
            let (_, c) = sin_cos_turns(&arg);
            c
        };
        let out = fourier_moments(
            &mut f,
            &[LiveInterval { lo: -0.5, hi: 0.5 }],
            kbig,
            prec,
            -30.0 * std::f64::consts::LN_10,
            f64::NEG_INFINITY,
        )
        .unwrap();
        let err = (out.values[kbig].real().to_f64() - 0.5).abs();
        assert!(err < 1e-27, "err = {err:e}");
        assert!(out.values[kbig / 2].clone().abs().real().to_f64() < 1e-27);
    }
}
