//! The weight `H = h o d_K` and its distribution-function calculus:
//! level sets, cut-off integrals, level equations, the decreasing
//! rearrangement, and the sampled regularity predicates.

use rug::Float;
use serde::Serialize;

use super::profile::ProfileFunction;
use super::zeroset::CompactSetModel;
use crate::error::{Error, Result};
use crate::quad::integrate_adaptive;
use crate::real::{real, WEIGHTS_PREC};

/// `H(e^{2 pi i theta}) = h(d_K(theta))`, with `H = +inf` on `K`.
#[derive(Clone, Debug)]
pub struct WeightField {
    pub profile: ProfileFunction,
    pub zero_set: CompactSetModel,
    /// `h(1/2)`: below this level the super-level set is the whole circle
    h_half: f64,
    /// `min H = h(max d_K)`
    min_h: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSetSummary {
    pub a: f64,
    /// `lambda_H(a) = m{H > a}`
    pub lambda: f64,
    /// length of the longest open arc inside `{H > a}`
    pub lambda_star: f64,
    pub arcs: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelEquation {
    /// `n lambda_H(A) = A`
    Lambda,
    /// `n lambda*_H(A) = A`
    LambdaStar,
    /// `n h^{-1}(A) = A` (the profile serving as the majorant)
    ProfileInverse,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LevelSolution {
    pub a: f64,
    /// `|n g(A) - A|` at the returned level (nonzero width when `g` jumps)
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CutoffIntegral {
    /// `int_0^A lambda_H(a) da` by adaptive quadrature
    pub value: f64,
    /// `A lambda_H(A) + int_{H <= A} H dm` via the gap spectrum
    pub alt: f64,
    /// relative disagreement of the two routes
    pub discrepancy: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegularityReport {
    /// `limsup lambda(a)/lambda(2a) < 2`
    pub doubling: bool,
    pub doubling_ratio: f64,
    /// `a -> a lambda^2(a)` nonincreasing on the sampled grid
    pub alambda2_monotone: bool,
    pub alambda2_max_increase: f64,
    /// `theta -> theta phi(theta)` nondecreasing and `phi >~ log(1/theta)`
    pub reg1: bool,
    pub reg1_witness: f64,
    /// `phi(theta/2) <~ phi(theta)` (sampled ratio stays bounded)
    pub reg2: bool,
    pub reg2_ratio: f64,
    /// sampled Lipschitz constant of `phi^{-1} o H`
    pub lipschitz: f64,
    /// subordination predicate: `lipschitz <= 1 + tol`
    pub subordinate: bool,
    /// `inf lambda*/lambda` over the level grid
    pub lambda_star_over_lambda_min: f64,
}

impl WeightField {
    pub fn new(profile: ProfileFunction, zero_set: CompactSetModel) -> Result<Self> {
        profile.validate(WEIGHTS_PREC).map_err(Error::Config)?;
        let h_half = profile.eval(&real(WEIGHTS_PREC, 0.5)).to_f64();
        let max_d = zero_set.max_distance();
        if max_d <= 0.0 {
            return Err(Error::Config("zero set has no complement".into()));
        }
        let min_h = profile.eval(&real(WEIGHTS_PREC, max_d)).to_f64();
        Ok(WeightField {
            profile,
            zero_set,
            h_half,
            min_h,
        })
    }

    /// `H(theta)`; `+inf` exactly on the zero set.
    pub fn eval(&self, theta: &Float) -> Float {
        let d = self.zero_set.dist(theta);
        if d == 0 {
            return Float::with_val(theta.prec(), rug::float::Special::Infinity);
        }
        self.profile.eval(&d)
    }

    /// `min_T H = h(max d_K)`.
    pub fn min_weight(&self) -> f64 {
        self.min_h
    }

    /// `h(1/2)`, the level below which `lambda = 1`.
    pub fn h_half(&self) -> f64 {
        self.h_half
    }

    /// `h^{-1}(a)` as `f64`, clamped to `(0, 1/2]`.
    pub fn scale_of(&self, a: f64) -> f64 {
        self.profile.inverse(&real(WEIGHTS_PREC, a)).to_f64()
    }

    /// `lambda_H(a) = m{H > a}`.
    pub fn lambda(&self, a: f64) -> Result<f64> {
        if a < self.h_half {
            return Ok(1.0);
        }
        self.zero_set.psi(self.scale_of(a))
    }

    /// Length of the longest open arc in `{H > a}`.
    pub fn lambda_star(&self, a: f64) -> Result<f64> {
        if a < self.h_half {
            return Ok(1.0);
        }
        self.zero_set.longest_component(self.scale_of(a))
    }

    pub fn level_set(&self, a: f64) -> Result<LevelSetSummary> {
        if a < self.h_half {
            return Ok(LevelSetSummary {
                a,
                lambda: 1.0,
                lambda_star: 1.0,
                arcs: vec![(0.0, 1.0)],
            });
        }
        let s = self.scale_of(a);
        Ok(LevelSetSummary {
            a,
            lambda: self.zero_set.psi(s)?,
            lambda_star: self.zero_set.longest_component(s)?,
            arcs: self.zero_set.neighborhood_arcs(s)?,
        })
    }

    /// `int_0^A lambda_H(a) da`, with the identity
    /// `= A lambda_H(A) + int_{H <= A} H dm` evaluated independently.
    pub fn cutoff_integral(&self, a_level: f64) -> Result<CutoffIntegral> {
        if a_level <= 0.0 {
            return Ok(CutoffIntegral {
                value: 0.0,
                alt: 0.0,
                discrepancy: 0.0,
            });
        }
        let a0 = a_level.min(self.min_h);
        let mut value = a0; // lambda = 1 below the minimum of H
        if a_level > a0 {
            // the deepest scale probed is h^{-1}(A); check it once up front
            let s = self.scale_of(a_level);
            self.zero_set.psi(s)?;
            let prec = WEIGHTS_PREC;
            // lambda has a derivative kink at h(g/2) for every gap length g;
            // split the integral there so the panels see smooth pieces
            let mut brk: Vec<f64> = vec![a0, a_level];
            for c in self.zero_set.gap_classes().iter().take(2048) {
                if c.len <= 2.0 * s {
                    break;
                }
                let a = self.profile.eval(&real(prec, c.len / 2.0)).to_f64();
                if a > a0 && a < a_level {
                    brk.push(a);
                }
            }
            brk.sort_by(|a, b| a.partial_cmp(b).unwrap());
            brk.dedup();
            let mut f = |a: &Float| {
                real(
                    prec,
                    self.lambda(a.to_f64()).expect("scale pre-checked"),
                )
            };
            for seg in brk.windows(2) {
                let r = integrate_adaptive(
                    &mut f,
                    &real(prec, seg[0]),
                    &real(prec, seg[1]),
                    prec,
                    1e-12,
                    1e-16,
                    48,
                )?;
                value += r.value.to_f64();
            }
        }
        let alt = a_level * self.lambda(a_level)? + self.shallow_mass(a_level)?;
        let discrepancy = (value - alt).abs() / value.abs().max(f64::MIN_POSITIVE);
        Ok(CutoffIntegral {
            value,
            alt,
            discrepancy,
        })
    }

    /// `int_{H <= A} H dm`, summed over the gap spectrum:
    /// each gap of length `g > 2s` contributes `2 int_s^{g/2} h(u) du`,
    /// `s = h^{-1}(A)`.
    fn shallow_mass(&self, a_level: f64) -> Result<f64> {
        if a_level < self.min_h {
            return Ok(0.0);
        }
        let s = self.scale_of(a_level);
        let classes = self.zero_set.gap_classes();
        if let Some(gs) = self.profile.antiderivative(s) {
            let mut total = 0.0;
            // sum small gaps first for accumulation accuracy
            for c in classes.iter().rev() {
                if c.len > 2.0 * s {
                    let g = self.profile.antiderivative(c.len / 2.0).unwrap();
                    total += c.count * 2.0 * (g - gs);
                }
            }
            return Ok(total.max(0.0));
        }
        if classes.len() > 4096 {
            return Err(Error::QuadratureNonConvergence(
                "gap spectrum too dense for a profile without a closed-form antiderivative"
                    .into(),
            ));
        }
        let prec = WEIGHTS_PREC;
        let mut total = 0.0;
        for c in classes.iter().rev() {
            if c.len > 2.0 * s {
                let mut f = |u: &Float| self.profile.eval(u);
                let r = integrate_adaptive(
                    &mut f,
                    &real(prec, s),
                    &real(prec, c.len / 2.0),
                    prec,
                    1e-12,
                    1e-15,
                    48,
                )?;
                total += c.count * 2.0 * r.value.to_f64();
            }
        }
        Ok(total)
    }

    /// Evaluates the predicate `n g(A) <= A`, falling back to the upper
    /// bound of `g` at the model resolution when the query outruns it.
    fn level_predicate(&self, n: u64, eq: LevelEquation, a: f64) -> Result<bool> {
        let nf = n as f64;
        let g = match eq {
            LevelEquation::Lambda => self.lambda(a),
            LevelEquation::LambdaStar => self.lambda_star(a),
            LevelEquation::ProfileInverse => Ok(self.scale_of(a)),
        };
        match g {
            Ok(v) => Ok(nf * v <= a),
            Err(Error::DepthInsufficiency { .. }) => {
                let res = self.zero_set.resolution();
                let ub = match eq {
                    LevelEquation::Lambda => self.zero_set.psi(res)?,
                    LevelEquation::LambdaStar => self.zero_set.longest_component(res)?,
                    LevelEquation::ProfileInverse => unreachable!(),
                };
                if nf * ub <= a {
                    Ok(true)
                } else {
                    Err(Error::DepthInsufficiency {
                        requested: self.scale_of(a),
                        resolvable: res,
                    })
                }
            }
            Err(e) => Err(e),
        }
    }

    /// Infimum `A` of the solution set of `n g(A) = A`; the map
    /// `a -> n g(a) - a` is strictly decreasing, so bisection applies.
    pub fn solve_level(&self, n: u64, eq: LevelEquation) -> Result<LevelSolution> {
        assert!(n >= 1);
        let mut hi = n as f64;
        if !self.level_predicate(n, eq, hi)? {
            return Err(Error::NoCrossing { upper: hi });
        }
        let mut lo = 0.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.level_predicate(n, eq, mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let g = match eq {
            LevelEquation::Lambda => self.lambda(hi)?,
            LevelEquation::LambdaStar => self.lambda_star(hi)?,
            LevelEquation::ProfileInverse => self.scale_of(hi),
        };
        Ok(LevelSolution {
            a: hi,
            residual: (n as f64 * g - hi).abs(),
        })
    }

    /// `H*(s) = inf{a : lambda_H(a) < s}` (the two conventions agree at
    /// continuity points of `lambda`).
    pub fn decreasing_rearrangement(&self, s: f64) -> Result<f64> {
        assert!(s > 0.0 && s <= 1.0);
        if s <= self.zero_set.set_measure() {
            return Ok(f64::INFINITY); // lambda never drops below m(K)
        }
        let below = |a: f64| -> Result<bool> {
            match self.lambda(a) {
                Ok(v) => Ok(v < s),
                Err(Error::DepthInsufficiency { .. }) => {
                    let ub = self.zero_set.psi(self.zero_set.resolution())?;
                    if ub < s {
                        Ok(true)
                    } else {
                        Err(Error::DepthInsufficiency {
                            requested: self.scale_of(a),
                            resolvable: self.zero_set.resolution(),
                        })
                    }
                }
                Err(e) => Err(e),
            }
        };
        let mut hi = self.min_h.max(1.0);
        let mut guard = 0;
        while !below(hi)? {
            hi *= 2.0;
            guard += 1;
            if guard > 1024 {
                return Ok(f64::INFINITY);
            }
        }
        let mut lo = 0.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if below(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Sampled regularity predicates for this weight and a majorant `phi`.
    /// Profile predicates are evaluated on `(0, 0.1]`, reading the
    /// asymptotic-near-zero intent.
    pub fn regularity_report(
        &self,
        phi: &ProfileFunction,
        a_range: &[f64],
    ) -> RegularityReport {
        let prec = WEIGHTS_PREC;
        // --- level-grid predicates ---
        let mut doubling_ratio: f64 = 0.0;
        let mut alambda2_max_increase: f64 = 0.0;
        let mut lambda_star_over_lambda_min = f64::INFINITY;
        let mut prev_al2: Option<(f64, f64)> = None;
        for &a in a_range {
            let (l1, l2) = match (self.lambda(a), self.lambda(2.0 * a)) {
                (Ok(x), Ok(y)) => (x, y),
                _ => continue,
            };
            if l2 > 0.0 {
                doubling_ratio = doubling_ratio.max(l1 / l2);
            }
            if let Ok(ls) = self.lambda_star(a) {
                if l1 > 0.0 {
                    lambda_star_over_lambda_min = lambda_star_over_lambda_min.min(ls / l1);
                }
            }
            let al2 = a * l1 * l1;
            if let Some((pa, pv)) = prev_al2 {
                if a > pa && pv > 0.0 {
                    alambda2_max_increase = alambda2_max_increase.max(al2 / pv);
                }
            }
            prev_al2 = Some((a, al2));
        }
        // --- profile predicates on (0, 0.1] ---
        let grid: Vec<f64> = (0..=60)
            .map(|i| 0.1 * 0.8f64.powi(i))
            .collect();
        let mut reg1 = true;
        let mut reg1_witness = f64::INFINITY; // min ratio of successive theta*phi
        let mut reg2_ratios: Vec<f64> = Vec::new();
        let mut prev_tphi: Option<f64> = None;
        for &t in &grid {
            let phi_t = phi.eval(&real(prec, t)).to_f64();
            let tphi = t * phi_t;
            if let Some(p) = prev_tphi {
                // grid descends, so theta*phi must not increase along it
                let ratio = p / tphi;
                reg1_witness = reg1_witness.min(ratio);
                if ratio < 1.0 - 1e-9 {
                    reg1 = false;
                }
            }
            prev_tphi = Some(tphi);
            let phi_half_t = phi.eval(&real(prec, t / 2.0)).to_f64();
            reg2_ratios.push(phi_half_t / phi_t);
        }
        // phi >~ log(1/theta): the ratio must not vanish towards zero
        let log_ratio_end = {
            let t = *grid.last().unwrap();
            phi.eval(&real(prec, t)).to_f64() / (1.0 / t).ln()
        };
        let log_ratio_start = {
            let t = grid[0];
            phi.eval(&real(prec, t)).to_f64() / (1.0 / t).ln()
        };
        if log_ratio_end < 0.1 * log_ratio_start.min(1.0) {
            reg1 = false;
        }
        // Reg2: the halving ratio must stay bounded as theta -> 0
        let reg2_ratio = *reg2_ratios.last().unwrap();
        let reg2_base = reg2_ratios[0];
        let reg2 = reg2_ratio <= 4.0 * reg2_base.max(1.0);
        // --- subordination: Lipschitz constant of phi^{-1} o H ---
        let m = 4096usize;
        let mut lipschitz: f64 = 0.0;
        let mut prev_g: Option<f64> = None;
        let mut first_g = 0.0;
        for i in 0..m {
            let t = i as f64 / m as f64;
            let hv = self.eval(&real(prec, t));
            let g = if hv.is_infinite() {
                0.0
            } else {
                phi.inverse(&hv).to_f64()
            };
            if i == 0 {
                first_g = g;
            }
            if let Some(p) = prev_g {
                lipschitz = lipschitz.max((g - p).abs() * m as f64);
            }
            prev_g = Some(g);
        }
        if let Some(p) = prev_g {
            lipschitz = lipschitz.max((first_g - p).abs() * m as f64);
        }
        RegularityReport {
            doubling: doubling_ratio < 2.0 * (1.0 - 1e-6),
            doubling_ratio,
            alambda2_monotone: alambda2_max_increase <= 1.0 + 1e-9,
            alambda2_max_increase,
            reg1,
            reg1_witness,
            reg2,
            reg2_ratio,
            lipschitz,
            subordinate: lipschitz <= 1.0 + 1e-9,
            lambda_star_over_lambda_min,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::zeroset::ZeroSetSpec;
    use crate::real::WEIGHTS_PREC as P;

    fn point_weight(p: f64) -> WeightField {
        WeightField::new(
            ProfileFunction::Power { p, c: 1.0 },
            CompactSetModel::new(ZeroSetSpec::PointSet { angles: vec![0.0] }).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn eval_weight_golden() {
        let w = point_weight(2.0);
        assert_eq!(w.eval(&real(P, 0.25)).to_f64(), 16.0);
        assert!(w.eval(&real(P, 0.0)).is_infinite());
    }

    #[test]
    fn level_set_golden() {
        let w = point_weight(2.0);
        let ls = w.level_set(16.0).unwrap();
        assert!((ls.lambda - 0.5).abs() < 1e-14); // the arc |theta| < 1/4
        assert!((ls.lambda_star - 0.5).abs() < 1e-14);
        assert_eq!(w.level_set(3.0).unwrap().lambda, 1.0); // below h(1/2) = 4
    }

    #[test]
    fn cutoff_integral_closed_forms() {
        let w = point_weight(2.0);
        // A=16: 4 + int_4^16 2 a^{-1/2} da = 12
        let c = w.cutoff_integral(16.0).unwrap();
        assert!((c.value - 12.0).abs() < 1e-8, "value = {}", c.value);
        assert!(c.discrepancy < 1e-9, "disc = {:e}", c.discrepancy);
        // general closed form 4 sqrt(A) - 4
        let a = 2f64.powf(14.0 / 3.0);
        let c = w.cutoff_integral(a).unwrap();
        assert!((c.value - (4.0 * a.sqrt() - 4.0)).abs() < 1e-8);
        // A = 0
        assert_eq!(w.cutoff_integral(0.0).unwrap().value, 0.0);
    }

    #[test]
    fn solve_level_goldens() {
        let w = point_weight(2.0);
        // 64 * 2 A^{-1/2} = A  =>  A = 128^{2/3}
        let sol = w.solve_level(64, LevelEquation::Lambda).unwrap();
        assert!((sol.a - 128f64.powf(2.0 / 3.0)).abs() < 1e-9, "A = {}", sol.a);
        assert!(sol.residual < 1e-9 * sol.a);
        // n=2: lambda = 1 at the fixed point A = 2
        let sol = w.solve_level(2, LevelEquation::Lambda).unwrap();
        assert!((sol.a - 2.0).abs() < 1e-9);
        // profile_inverse with phi = theta^{-1}: 100/A = A => A = 10
        let w1 = point_weight(1.0);
        let sol = w1.solve_level(100, LevelEquation::ProfileInverse).unwrap();
        assert!((sol.a - 10.0).abs() < 1e-9, "A = {}", sol.a);
    }

    #[test]
    fn solve_level_monotone_in_n() {
        let w = point_weight(2.0);
        let mut prev = 0.0;
        for n in [2u64, 8, 32, 128, 512, 2048] {
            let a = w.solve_level(n, LevelEquation::Lambda).unwrap().a;
            assert!(a >= prev);
            prev = a;
        }
    }

    #[test]
    fn rearrangement_goldens() {
        let w = point_weight(2.0);
        // inverse of lambda(a) = 2 a^{-1/2}: lambda < 1/2 iff a > 16
        assert!((w.decreasing_rearrangement(0.5).unwrap() - 16.0).abs() < 1e-9);
        // s = 1: min H = h(1/2) = 4
        assert!((w.decreasing_rearrangement(1.0).unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn rearrangement_matches_sampling_sort() {
        let w = WeightField::new(
            ProfileFunction::Power { p: 1.5, c: 2.0 },
            CompactSetModel::new(ZeroSetSpec::PointSet {
                angles: vec![0.0, 0.3, 0.65],
            })
            .unwrap(),
        )
        .unwrap();
        let m = 20000usize;
        let mut samples: Vec<f64> = (0..m)
            .map(|i| {
                let t = (i as f64 + 0.5) / m as f64;
                w.eval(&real(P, t)).to_f64()
            })
            .collect();
        samples.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for &s in &[0.1, 0.25, 0.5, 0.75, 0.95] {
            let want = samples[(s * m as f64) as usize];
            let got = w.decreasing_rearrangement(s).unwrap();
            let rel = (got - want).abs() / want;
            assert!(rel < 1e-2, "s={s} got={got} want={want}");
        }
    }

    #[test]
    fn doubling_predicate_closed_form() {
        // lambda(a) = 2 a^{-1/p}: ratio 2^{1/p} < 2 iff p > 1
        let grid: Vec<f64> = (0..20).map(|i| 5.0 * 1.5f64.powi(i)).collect();
        let w2 = point_weight(2.0);
        let r = w2.regularity_report(&w2.profile.clone(), &grid);
        assert!(r.doubling);
        assert!((r.doubling_ratio - 2f64.sqrt()).abs() < 1e-9);
        let wh = point_weight(0.5);
        let grid: Vec<f64> = (0..20).map(|i| 2.0 * 1.5f64.powi(i)).collect();
        let r = wh.regularity_report(&wh.profile.clone(), &grid);
        assert!(!r.doubling);
    }

    #[test]
    fn reg_predicates_and_subordination() {
        let w1 = point_weight(1.0);
        let grid: Vec<f64> = (0..10).map(|i| 4.0 * 2f64.powi(i)).collect();
        // phi = theta^{-1}: theta phi = 1 nondecreasing, phi >> log(1/theta)
        let r = w1.regularity_report(&ProfileFunction::Power { p: 1.0, c: 1.0 }, &grid);
        assert!(r.reg1, "witness {}", r.reg1_witness);
        // H = phi o d_K gives phi^{-1} o H = d_K, Lipschitz constant 1
        assert!(r.lipschitz <= 1.0 + 1e-9, "lip = {}", r.lipschitz);
        assert!(r.subordinate);
        // phi = theta^{-2}: theta phi decreasing -> Reg1 fails, Reg2 holds
        let w2 = point_weight(2.0);
        let r = w2.regularity_report(&ProfileFunction::Power { p: 2.0, c: 1.0 }, &grid);
        assert!(!r.reg1);
        assert!(r.reg2);
        // exp profile: Reg2 fails (halving ratio blows up)
        let r = w2.regularity_report(&ProfileFunction::ExpPower { p: 1.0, c: 1.0 }, &grid);
        assert!(!r.reg2);
    }

    #[test]
    fn cutoff_identity_across_models() {
        let cases: Vec<WeightField> = vec![
            point_weight(2.0),
            WeightField::new(
                // gamma-regular Cantor with p = 1 - gamma
                ProfileFunction::Power {
                    p: 1.0 - 2f64.ln() / 3f64.ln(),
                    c: 1.0,
                },
                CompactSetModel::new(ZeroSetSpec::CantorTernary { depth: 22 }).unwrap(),
            )
            .unwrap(),
            WeightField::new(
                ProfileFunction::Power { p: 2.0, c: 1.0 },
                CompactSetModel::new(ZeroSetSpec::PowerSequence { nu: 1.0 }).unwrap(),
            )
            .unwrap(),
        ];
        for w in &cases {
            for &a in &[2.0, 5.0, 17.0, 64.0] {
                let c = w.cutoff_integral(a).unwrap();
                assert!(
                    c.discrepancy < 1e-9,
                    "A={a} value={} alt={} disc={:e}",
                    c.value,
                    c.alt,
                    c.discrepancy
                );
            }
        }
    }

    #[test]
    fn lambda_monotone_and_star_below() {
        let w = WeightField::new(
            ProfileFunction::Power { p: 1.2, c: 1.0 },
            CompactSetModel::new(ZeroSetSpec::CantorTernary { depth: 22 }).unwrap(),
        )
        .unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let a = 2.0 * 1.4f64.powi(i);
            let l = w.lambda(a).unwrap();
            let ls = w.lambda_star(a).unwrap();
            assert!(ls <= l + 1e-12, "a={a} ls={ls} l={l}");
            assert!(l <= prev + 1e-12);
            assert!(l <= 1.0);
            prev = l;
        }
    }
}
