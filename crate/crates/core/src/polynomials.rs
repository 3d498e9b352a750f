//! Certifying polynomials: the arc-Chebyshev family, Taylor sections of
//! outer functions, and the machinery that turns either into a certified
//! upper bound on `e_n(ρ)`.

use rug::ops::{CompleteRound, Pow};
use rug::{Complex, Float, Integer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{fourier_moments, integrate_adaptive, LiveInterval};
use crate::real::{real, sin_cos_turns, zero};
use crate::szego::{compute_moments, MeasureDensity, MomentSequence};
use crate::weights::WeightField;

/// Coefficients `a_0..a_n` with `a_n = 1` exactly.
#[derive(Clone, Debug)]
pub struct MonicPolynomial {
    pub coeffs: Vec<Complex>,
}

impl MonicPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: &Complex) -> Complex {
        horner(&self.coeffs, z)
    }

    /// `|P(e^{2 pi i t})|` at the coefficient precision.
    pub fn abs_on_circle(&self, t: &Float) -> Float {
        let prec = self.coeffs[0].prec().0;
        let (s, c) = sin_cos_turns(t);
        let z = Complex::with_val(prec, (c, s));
        self.eval(&z).abs().into_real_imag().0
    }
}

fn horner(coeffs: &[Complex], z: &Complex) -> Complex {
    let prec = coeffs[0].prec().0;
    let mut acc = Complex::with_val(prec, 0);
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

/// The monic arc polynomial `T_{2m}` for the arc `|theta| <= alpha`
/// (`alpha` in radians): `T(z) = (4c^2)^m z^m Q_m((z+1)^2 / (4 c^2 z))`,
/// `c = cos(alpha/2)`, where `Q_m(y) = 2^{1-2m} T_{2m}(sqrt(y))` is monic.
pub fn chebyshev_arc(n: usize, alpha: f64, prec: u32) -> Result<MonicPolynomial> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::OddDegree(n));
    }
    let m = n / 2;
    // integer coefficients of the classical T_{2m} via the recurrence
    let mut t_prev: Vec<Integer> = vec![Integer::from(1)]; // T_0
    let mut t_cur: Vec<Integer> = vec![Integer::from(0), Integer::from(1)]; // T_1
    for _ in 1..(2 * m) {
        let mut next = vec![Integer::new(); t_cur.len() + 1];
        for (i, c) in t_cur.iter().enumerate() {
            next[i + 1] += Integer::from(2) * c;
        }
        for (i, c) in t_prev.iter().enumerate() {
            next[i] -= c;
        }
        t_prev = std::mem::replace(&mut t_cur, next);
    }
    // q_j = 2^{1-2m} * [x^{2j}] T_{2m}
    let half = real(prec, alpha / 2.0);
    let c2 = half.cos().square(); // cos^2(alpha/2)
    let four_c2 = c2 * 4u32;
    let scale = Float::with_val(prec, 1) >> (2 * m as u32 - 1); // 2^{1-2m}
    let mut coeffs = vec![zero(prec); n + 1];
    // binomial row cache for (z+1)^{2j}
    for j in 0..=m {
        let q = Float::with_val(prec, &t_cur[2 * j]) * &scale;
        let pw: Float = four_c2.clone().pow((m - j) as u32);
        let base = q * pw;
        let mut binom = Integer::from(1);
        for i in 0..=(2 * j) {
            coeffs[m - j + i] += base.clone() * Float::with_val(prec, &binom);
            // C(2j, i+1) = C(2j, i) (2j - i)/(i + 1)
            binom *= (2 * j - i) as u32;
            binom /= (i + 1) as u32;
        }
    }
    let out: Vec<Complex> = coeffs
        .into_iter()
        .map(|c| Complex::with_val(prec, (c, zero(prec))))
        .collect();
    let mut p = MonicPolynomial { coeffs: out };
    // the top coefficient is 1 by construction; pin it exactly
    let last = p.coeffs.len() - 1;
    p.coeffs[last] = Complex::with_val(prec, 1);
    Ok(p)
}

#[derive(Clone, Debug)]
pub struct MaxModulus {
    pub value: Float,
    /// rigorous enclosure width from the Bernstein derivative bound
    pub enclosure: Float,
}

/// `max |P(e^{i theta})|` over `theta in [alpha, 2 pi - alpha]`
/// (`alpha` in radians), by dense grid plus local refinement; the
/// derivative bound `|(P o exp)'| <= n max|P|` certifies the enclosure.
pub fn max_modulus_off_arc(p: &MonicPolynomial, alpha: f64) -> MaxModulus {
    let prec = p.coeffs[0].prec().0;
    let n = p.degree().max(1);
    let lo = alpha / (2.0 * std::f64::consts::PI); // turns
    let hi = 1.0 - lo;
    let grid = (64 * n).max(512);
    let step = (hi - lo) / grid as f64;
    let mut vals = Vec::with_capacity(grid + 1);
    for i in 0..=grid {
        let t = real(prec, lo + step * i as f64);
        vals.push(p.abs_on_circle(&t));
    }
    let mut best = vals[0].clone();
    let mut refine_at: Vec<usize> = vec![0, grid];
    for i in 1..grid {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            refine_at.push(i);
        }
        if vals[i] > best {
            best = vals[i].clone();
        }
    }
    // golden-section refinement of every bracketed local maximum
    let gr = 0.5 * (3.0 - 5f64.sqrt());
    let mut width = step;
    for &i in &refine_at {
        let mut a = lo + step * (i.saturating_sub(1)) as f64;
        let mut b = (lo + step * (i + 1) as f64).min(hi);
        for _ in 0..96 {
            let x1 = a + gr * (b - a);
            let x2 = b - gr * (b - a);
            let f1 = p.abs_on_circle(&real(prec, x1));
            let f2 = p.abs_on_circle(&real(prec, x2));
            if f1 > f2 {
                b = x2;
            } else {
                a = x1;
            }
        }
        width = b - a;
        let v = p.abs_on_circle(&real(prec, 0.5 * (a + b)));
        if v > best {
            best = v;
        }
    }
    // |d/d theta |P|| <= n max|P| (theta in radians): on a bracket of
    // (turn) width w the peak exceeds the probe by at most pi n w max
    let slack = std::f64::consts::PI * n as f64 * width;
    let enclosure = (best.clone() * real(prec, slack)) / real(prec, 1.0 - slack);
    MaxModulus {
        value: best,
        enclosure,
    }
}

/// Taylor section of the outer function `F_A` with `|F_A|^2 = e^{H_A/M}`,
/// sampled at radius `1 - delta`.
#[derive(Clone, Debug)]
pub struct OuterSection {
    pub a: f64,
    pub m: f64,
    pub delta: f64,
    pub n: usize,
    /// log-series coefficients `l_0..l_n` (before damping)
    pub l: Vec<Complex>,
    /// section coefficients `f_0..f_n` with the `(1-delta)^k` damping applied
    pub f: Vec<Complex>,
    /// Cauchy bound for `sum_{k>n} |f_k|`
    pub tail_bound: Float,
}

/// Full-circle cover whose interval endpoints pin every derivative jump of
/// `min(H, A)`: the plateau edges at distance `h^{-1}(A)` from the zero set
/// and the gap midpoints of the distance function. Quadrature panels then
/// only ever see smooth pieces of the integrand.
fn cutoff_live(w: &WeightField, a: f64) -> Vec<LiveInterval> {
    let s = w.scale_of(a);
    let mut pts: Vec<f64> = Vec::new();
    if let Ok(gaps) = w.zero_set.positioned_gaps(2.0 * s) {
        for (lo, hi) in gaps {
            pts.push(lo + s);
            pts.push(0.5 * (lo + hi));
            pts.push(hi - s);
        }
    }
    for p in pts.iter_mut() {
        *p -= p.round(); // into [-0.5, 0.5]
    }
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    match pts.len() {
        0 => vec![LiveInterval { lo: -0.5, hi: 0.5 }],
        1 => vec![LiveInterval {
            lo: pts[0],
            hi: pts[0] + 1.0,
        }],
        _ => {
            let mut live: Vec<LiveInterval> = pts
                .windows(2)
                .map(|w2| LiveInterval {
                    lo: w2[0],
                    hi: w2[1],
                })
                .collect();
            live.push(LiveInterval {
                lo: *pts.last().unwrap(),
                hi: pts[0] + 1.0,
            });
            live
        }
    }
}

/// Builds the section from the Herglotz expansion of `log F_A`:
/// `l_0 = int g dm`, `l_k = 2 int g t^{-k} dm`, `g = H_A/(2M)`; then the
/// exp-of-series recurrence `k f_k = sum j l'_j f_{k-j}` on the damped
/// coefficients. `weight = None` means `H == 0`.
pub fn outer_taylor(
    weight: Option<&WeightField>,
    a: f64,
    m: f64,
    delta: f64,
    n: usize,
) -> Result<OuterSection> {
    assert!(delta > 0.0 && delta < 1.0);
    assert!(m > 0.0 && a >= 0.0);
    let ln_eps = -30.0 * std::f64::consts::LN_10;
    let prec = 256u32;
    let moments = match weight {
        None => {
            let mut v = vec![Complex::with_val(prec, 0); n + 1];
            v[0] = Complex::with_val(prec, 0);
            v
        }
        Some(w) => {
            let two_m = real(prec, 2.0 * m);
            let cap = real(prec, a);
            let mut g = |t: &Float| {
                let h = w.eval(t);
                let capped = if h > cap { cap.clone() } else { h };
                capped / &two_m
            };
            let live = cutoff_live(w, a);
            let out = fourier_moments(&mut g, &live, n, prec, ln_eps, f64::NEG_INFINITY)?;
            out.values
        }
    };
    let mut l: Vec<Complex> = Vec::with_capacity(n + 1);
    for (k, c) in moments.iter().enumerate() {
        let factor = if k == 0 { 1u32 } else { 2u32 };
        l.push((c * factor).complete((prec, prec)));
    }
    // damped series l'_k = l_k (1-delta)^k, then f = exp(series)
    let one_minus = real(prec, 1.0 - delta);
    let mut damp = real(prec, 1.0);
    let mut ld: Vec<Complex> = Vec::with_capacity(n + 1);
    for lk in &l {
        ld.push((lk * &damp).complete((prec, prec)));
        damp *= &one_minus;
    }
    let mut f: Vec<Complex> = Vec::with_capacity(n + 1);
    f.push(Complex::with_val(prec, ld[0].clone().real().clone().exp()));
    if ld[0].imag().clone().abs().to_f64() > 1e-20 {
        return Err(Error::DegenerateSeries(
            "log-series constant term is not real".into(),
        ));
    }
    for k in 1..=n {
        let mut s = Complex::with_val(prec, 0);
        for j in 1..=k {
            s += (&ld[j] * &f[k - j]).complete((prec, prec)) * (j as u32);
        }
        f.push(s / (k as u32));
    }
    // Cauchy tail: sum_{k>n} |f_k| <= delta^{-1} (1-delta)^{n+1} e^{A/(2M)}
    let tail_bound: Float = {
        let pw: Float = one_minus.clone().pow((n + 1) as u32);
        pw * real(prec, a / (2.0 * m)).exp() / real(prec, delta)
    };
    let f0 = Float::with_val(prec, f[0].real());
    if tail_bound.clone() > f0 * real(prec, 1e-3) {
        return Err(Error::TailTooLarge {
            tail: tail_bound.to_f64(),
            budget: f[0].real().to_f64() * 1e-3,
        });
    }
    Ok(OuterSection {
        a,
        m,
        delta,
        n,
        l,
        f,
        tail_bound,
    })
}

impl OuterSection {
    /// Section coefficients as a plain polynomial `P_A(z) = sum f_k z^k`.
    pub fn polynomial(&self) -> Vec<Complex> {
        self.f.clone()
    }
}

/// `(H_A * p_delta)(theta)`: direct adaptive quadrature against the
/// normalized Poisson kernel at `r = 1 - delta`. `theta` in turns.
pub fn poisson_convolve(w: &WeightField, a: f64, delta: f64, theta: f64) -> Result<f64> {
    let prec = 128u32;
    let r = 1.0 - delta;
    let num = real(prec, 1.0 - r * r);
    let cap = real(prec, a);
    let th = real(prec, theta);
    let mut f = |u: &Float| {
        let (_, c) = sin_cos_turns(u);
        let den = real(prec, 1.0 + r * r) - c * real(prec, 2.0 * r);
        let kernel = num.clone() / den;
        let arg = (&th - u).complete(prec);
        let h = w.eval(&arg);
        let capped = if h > cap { cap.clone() } else { h };
        kernel * capped
    };
    let out = integrate_adaptive(
        &mut f,
        &real(prec, -0.5),
        &real(prec, 0.5),
        prec,
        1e-10,
        1e-12,
        48,
    )?;
    Ok(out.value.to_f64())
}

/// Empirical subordination constant: `sup (H_A * p_delta)/(H + 1)` over a
/// refining grid, inflated by the 1.1 safety factor. The convolution is
/// evaluated through the Fourier side (`P_r` multiplies `c_k` by `r^{|k|}`),
/// which one dense moment pass makes cheap pointwise.
pub fn estimate_m(w: &WeightField, a: f64, delta: f64) -> Result<f64> {
    let prec = 128u32;
    let r = 1.0 - delta;
    // modes beyond K contribute  <= 2 A r^K / delta; force that below 1e-9 A
    let kmax = ((9.0 * std::f64::consts::LN_10 + (2.0 / delta).ln()) / -r.ln())
        .ceil()
        .max(8.0) as usize;
    let cap = real(prec, a);
    let mut g = |t: &Float| {
        let h = w.eval(t);
        if h > cap {
            cap.clone()
        } else {
            h
        }
    };
    let mom = fourier_moments(
        &mut g,
        &[LiveInterval { lo: -0.5, hi: 0.5 }],
        kmax,
        prec,
        (1e-12f64 * a.max(1.0)).ln(),
        f64::NEG_INFINITY,
    )?;
    // real coefficients of H_A * p_delta in f64: conv(t) = sum c_k r^|k| e^{2 pi i k t}
    let coef: Vec<(f64, f64)> = mom
        .values
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let rk = r.powi(k as i32);
            (c.real().to_f64() * rk, c.imag().to_f64() * rk)
        })
        .collect();
    let conv = |t: f64| -> f64 {
        let mut s = coef[0].0;
        for (k, &(re, im)) in coef.iter().enumerate().skip(1) {
            let arg = 2.0 * std::f64::consts::PI * k as f64 * t;
            s += 2.0 * (re * arg.cos() - im * arg.sin());
        }
        s
    };
    let ratio_at = |t: f64| -> f64 {
        let h = w.eval(&real(prec, t)).to_f64();
        if !h.is_finite() {
            return 0.0;
        }
        conv(t) / (h + 1.0)
    };
    let mut grid = 4096usize;
    let mut prev_sup: Option<f64> = None;
    loop {
        let mut sup: f64 = 0.0;
        for i in 0..grid {
            sup = sup.max(ratio_at(i as f64 / grid as f64));
        }
        // extra resolution near the zero set: geometric approach to each gap edge
        if let Ok(gaps) = w.zero_set.positioned_gaps(1.0 / grid as f64) {
            for (lo, hi) in gaps.iter().take(64) {
                for j in 1..=24 {
                    let d = 0.5 * (hi - lo) * 0.7f64.powi(j);
                    sup = sup.max(ratio_at(lo + d));
                    sup = sup.max(ratio_at(hi - d));
                }
            }
        }
        if let Some(p) = prev_sup {
            if (sup - p).abs() <= 0.01 * p.max(1e-12) {
                return Ok(1.1 * sup);
            }
        }
        prev_sup = Some(sup);
        grid *= 2;
        if grid > 1 << 17 {
            return Err(Error::UnboundedRatio(sup));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMethod {
    Chebyshev,
    OuterTaylor,
}

/// A certified upper bound `e_n(ρ) <= value`.
#[derive(Clone, Debug)]
pub struct CertifiedBound {
    pub n: usize,
    pub value: Float,
    /// upper end of the enclosure of `int |P|^2 dρ`
    pub integral: Float,
    pub p0_abs: Float,
    pub method: CertMethod,
}

/// `e_n(ρ) <= sqrt(int |P|^2 dρ)/|P(0)|`: the reversed polynomial
/// `z^n conj(P(1/conj z))/conj(p_0)` is a monic degree-`n` competitor with
/// modulus `|P|/|p_0|` on the circle. Quadrature error is folded into the
/// upper end of the enclosure.
pub fn certify_upper_with(
    coeffs: &[Complex],
    mom: &MomentSequence,
    n: usize,
    method: CertMethod,
) -> Result<CertifiedBound> {
    let deg = coeffs.len() - 1;
    assert!(deg <= n, "degree(P) <= n required");
    assert!(deg < mom.values.len(), "moments up to degree(P) required");
    let prec = mom.precision_bits.max(coeffs[0].prec().0);
    let p0_abs = Complex::with_val(prec, &coeffs[0])
        .abs()
        .into_real_imag()
        .0;
    // precision floor: anything at or below one ulp of the coefficient scale
    let floor = Float::with_val(prec, 1) >> (prec - 8);
    if p0_abs <= floor {
        return Err(Error::ZeroAtOrigin(p0_abs.to_f64()));
    }
    // int |P|^2 dρ = sum_{j,k} p_j conj(p_k) c_{k-j}
    let mut integral = Float::with_val(prec, 0);
    let mut err = Float::with_val(prec, 0);
    for j in 0..=deg {
        for k in 0..=deg {
            let d = k as i64 - j as i64;
            let c = Complex::with_val(prec, &mom.values[d.unsigned_abs() as usize]);
            let c = if d >= 0 { c } else { c.conj() };
            let term = Complex::with_val(prec, &coeffs[j])
                * Complex::with_val(prec, &coeffs[k]).conj()
                * c;
            integral += term.real();
            let pj = Complex::with_val(prec, &coeffs[j]).abs().into_real_imag().0;
            let pk = Complex::with_val(prec, &coeffs[k]).abs().into_real_imag().0;
            let ek = Float::with_val(prec, mom.ln_eps[d.unsigned_abs() as usize]).exp();
            err += pj * pk * ek;
        }
    }
    let hi = integral.clone() + &err;
    if !(hi > 0u32) {
        return Err(Error::NegativeMass(hi.to_f64()));
    }
    let value = hi.clone().sqrt() / &p0_abs;
    Ok(CertifiedBound {
        n,
        value,
        integral: hi,
        p0_abs,
        method,
    })
}

/// Convenience wrapper computing fresh moments for `d`.
pub fn certify_upper(
    coeffs: &[Complex],
    d: &MeasureDensity,
    n: usize,
    ln_eps: f64,
    method: CertMethod,
) -> Result<CertifiedBound> {
    let mom = compute_moments(d, coeffs.len() - 1, ln_eps)?;
    certify_upper_with(coeffs, &mom, n, method)
}
