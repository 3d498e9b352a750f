//! Small helpers around `rug::Float` used throughout the crate.
//!
//! Angles are measured in turns (the circle is `R/Z`, total length 1) and
//! all arc lengths are normalized so that `m(T) = 1`.

use rug::float::Special;
use rug::Float;

/// Default working precision for the level-set calculus (128-bit mantissa).
pub const WEIGHTS_PREC: u32 = 128;

pub fn real(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

pub fn zero(prec: u32) -> Float {
    Float::with_val(prec, 0)
}

pub fn one(prec: u32) -> Float {
    Float::with_val(prec, 1)
}

pub fn inf(prec: u32) -> Float {
    Float::with_val(prec, Special::Infinity)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

pub fn two_pi(prec: u32) -> Float {
    pi(prec) * 2u32
}

/// Reduce an angle in turns to the fundamental domain `[-1/2, 1/2)`.
pub fn wrap_turns(theta: &Float) -> Float {
    let prec = theta.prec();
    let mut t = theta.clone() - theta.clone().round();
    // round() maps .5 away from zero, so t can land exactly on 1/2
    if t >= 0.5 {
        t -= 1u32;
    }
    if t < -0.5 {
        t += 1u32;
    }
    let _ = prec;
    t
}

/// Circle distance between two angles in turns, in `[0, 1/2]`.
pub fn circle_dist(a: &Float, b: &Float) -> Float {
    wrap_turns(&(a.clone() - b)).abs()
}

/// `(sin, cos)` of `2*pi*t` with `t` in turns.
pub fn sin_cos_turns(t: &Float) -> (Float, Float) {
    let prec = t.prec();
    let arg = two_pi(prec) * wrap_turns(t);
    arg.sin_cos(Float::new(prec))
}

/// Shortest decimal rendering of `x` truncated to `sig` significant digits.
///
/// Deterministic: the same `Float` always prints the same string.
pub fn to_decimal(x: &Float, sig: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if *x < 0 { "-inf".into() } else { "inf".into() };
    }
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(sig));
    // rug prints e.g. "1.2340000000e3"; trim trailing zeros in the mantissa.
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m.to_string(), Some(e.to_string())),
        None => (s, None),
    };
    let mant = if mant.contains('.') {
        let t = mant.trim_end_matches('0');
        t.trim_end_matches('.').to_string()
    } else {
        mant
    };
    match exp {
        Some(e) => format!("{mant}e{e}"),
        None => mant,
    }
}

/// Parse a decimal string into a `Float` at the given precision.
pub fn from_decimal(prec: u32, s: &str) -> Option<Float> {
    Float::parse(s).ok().map(|inc| Float::with_val(prec, inc))
}
