//! Models of the compact zero set `K` on the circle and the distance
//! function `d_K`. The complement of `K` is a union of open gaps; the gap
//! length spectrum drives `psi_K`, the distribution function and the
//! rearrangement calculus, so it is precomputed at construction.
//!
//! Angles are in turns; the circle is `[0, 1)` with 0 and 1 identified.

use rug::ops::{CompleteRound, Pow};
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{real, zero};

fn default_depth() -> u32 {
    22
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroSetSpec {
    /// Finite set of angles (turns).
    PointSet { angles: Vec<f64> },
    /// Finite union of closed arcs `[a, b]`, `0 <= a < b <= 1`, disjoint.
    ArcUnion { arcs: Vec<(f64, f64)> },
    /// Standard middle-thirds Cantor set, truncated at `depth` (level-`depth`
    /// intervals are treated as solid).
    CantorTernary {
        #[serde(default = "default_depth")]
        depth: u32,
    },
    /// `{ n^{-nu} : n in N } U {0}` as angles in turns.
    PowerSequence { nu: f64 },
}

/// One class of equal-length gaps in the complement of `K`.
#[derive(Clone, Copy, Debug)]
pub struct GapClass {
    pub len: f64,
    pub count: f64,
}

/// A compiled zero-set model.
#[derive(Clone, Debug)]
pub struct CompactSetModel {
    pub spec: ZeroSetSpec,
    /// gap classes sorted by decreasing length
    classes: Vec<GapClass>,
    /// cumulative `len * count` over the class prefix
    prefix_len: Vec<f64>,
    /// cumulative `count`
    prefix_count: Vec<f64>,
    /// finest trustworthy scale of the model
    resolution: f64,
    /// sorted point angles for `PointSet` / `PowerSequence` lookups
    points: Vec<f64>,
    /// sorted arcs for `ArcUnion`
    arcs: Vec<(f64, f64)>,
}

const POWER_SEQ_CAP: usize = 1_000_000;

impl CompactSetModel {
    pub fn new(spec: ZeroSetSpec) -> Result<Self> {
        let mut points = Vec::new();
        let mut arcs = Vec::new();
        let mut classes = Vec::new();
        let resolution;
        match &spec {
            ZeroSetSpec::PointSet { angles } => {
                if angles.is_empty() {
                    return Err(Error::Config("point_set needs at least one angle".into()));
                }
                points = angles.iter().map(|a| a.rem_euclid(1.0)).collect();
                points.sort_by(|a, b| a.partial_cmp(b).unwrap());
                points.dedup();
                for i in 0..points.len() {
                    let next = if i + 1 < points.len() {
                        points[i + 1]
                    } else {
                        points[0] + 1.0
                    };
                    let g = next - points[i];
                    if g > 0.0 {
                        classes.push(GapClass { len: g, count: 1.0 });
                    }
                }
                resolution = 0.0;
            }
            ZeroSetSpec::ArcUnion { arcs: list } => {
                if list.is_empty() {
                    return Err(Error::Config("arc_union needs at least one arc".into()));
                }
                arcs = list.clone();
                arcs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                for w in arcs.windows(2) {
                    if w[0].1 >= w[1].0 {
                        return Err(Error::Config("arcs must be disjoint and sorted".into()));
                    }
                }
                for i in 0..arcs.len() {
                    let next_start = if i + 1 < arcs.len() {
                        arcs[i + 1].0
                    } else {
                        arcs[0].0 + 1.0
                    };
                    let g = next_start - arcs[i].1;
                    if g > 0.0 {
                        classes.push(GapClass { len: g, count: 1.0 });
                    }
                }
                resolution = 0.0;
            }
            ZeroSetSpec::CantorTernary { depth } => {
                let d = (*depth).clamp(1, 40);
                let mut len = 1.0 / 3.0;
                let mut count = 1.0;
                for _ in 1..=d {
                    classes.push(GapClass { len, count });
                    len /= 3.0;
                    count *= 2.0;
                }
                resolution = 3f64.powi(-(d as i32));
            }
            ZeroSetSpec::PowerSequence { nu } => {
                if !(*nu > 0.0) {
                    return Err(Error::Config("power_sequence needs nu > 0".into()));
                }
                // points n^{-nu}, n >= 2 (n = 1 coincides with 0 on the circle)
                let mut n = 2u64;
                let mut prev = (2f64).powf(-nu);
                classes.push(GapClass {
                    len: 1.0 - prev,
                    count: 1.0,
                });
                points.push(prev);
                loop {
                    let next = ((n + 1) as f64).powf(-nu);
                    let g = prev - next;
                    if g <= 0.0 || points.len() >= POWER_SEQ_CAP {
                        break;
                    }
                    classes.push(GapClass { len: g, count: 1.0 });
                    points.push(next);
                    prev = next;
                    n += 1;
                }
                points.reverse(); // ascending
                resolution = classes.last().map(|c| c.len).unwrap_or(0.0);
            }
        }
        classes.sort_by(|a, b| b.len.partial_cmp(&a.len).unwrap());
        let mut prefix_len = Vec::with_capacity(classes.len() + 1);
        let mut prefix_count = Vec::with_capacity(classes.len() + 1);
        let (mut sl, mut sc) = (0.0f64, 0.0f64);
        prefix_len.push(0.0);
        prefix_count.push(0.0);
        for c in &classes {
            sl += c.len * c.count;
            sc += c.count;
            prefix_len.push(sl);
            prefix_count.push(sc);
        }
        Ok(CompactSetModel {
            spec,
            classes,
            prefix_len,
            prefix_count,
            resolution,
            points,
            arcs,
        })
    }

    /// Finest scale at which neighbourhood queries are trustworthy.
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Lebesgue measure of the model set itself (0 except for arc unions).
    pub fn set_measure(&self) -> f64 {
        match &self.spec {
            ZeroSetSpec::ArcUnion { .. } => {
                self.arcs.iter().map(|a| a.1 - a.0).sum()
            }
            _ => 0.0,
        }
    }

    /// `max_T d_K` = half the largest gap.
    pub fn max_distance(&self) -> f64 {
        self.classes.first().map(|c| c.len / 2.0).unwrap_or(0.0)
    }

    fn check_scale(&self, s: f64) -> Result<()> {
        if s < self.resolution {
            return Err(Error::DepthInsufficiency {
                requested: s,
                resolvable: self.resolution,
            });
        }
        Ok(())
    }

    /// Circle distance from angle `theta` (turns) to the model set.
    pub fn dist(&self, theta: &Float) -> Float {
        let prec = theta.prec();
        let x = {
            let mut t = theta.clone() - theta.clone().floor();
            if t >= 1 {
                t -= 1u32;
            }
            t
        };
        match &self.spec {
            ZeroSetSpec::PointSet { .. } => {
                let xf = x.to_f64();
                let n = self.points.len() as i64;
                let i = self.points.partition_point(|&p| p <= xf) as i64;
                let mut best = Float::with_val(prec, 1);
                for j in [i - 1, i, i + 1] {
                    let idx = j.rem_euclid(n) as usize;
                    let shift = if j < 0 {
                        -1.0
                    } else if j >= n {
                        1.0
                    } else {
                        0.0
                    };
                    let p = self.points[idx] + shift;
                    let d = (real(prec, p) - &x).abs();
                    if d < best {
                        best = d;
                    }
                }
                best
            }
            ZeroSetSpec::ArcUnion { .. } => {
                let xf = x.to_f64();
                let mut best = Float::with_val(prec, 1);
                for &(a, b) in &self.arcs {
                    for shift in [-1.0, 0.0, 1.0] {
                        let (a, b) = (a + shift, b + shift);
                        if xf >= a && xf <= b {
                            return zero(prec);
                        }
                        let d = if xf < a {
                            real(prec, a) - &x
                        } else {
                            x.clone() - real(prec, b)
                        };
                        let d = d.abs();
                        if d < best {
                            best = d;
                        }
                    }
                }
                best
            }
            ZeroSetSpec::CantorTernary { depth } => cantor_dist(&x, *depth),
            ZeroSetSpec::PowerSequence { nu } => {
                let xf = x.to_f64();
                let x2 = self.points.last().copied().unwrap_or(0.0); // 2^{-nu}
                let x_min = self.points.first().copied().unwrap_or(0.0);
                if xf >= x2 {
                    // between the largest point and 1 == 0
                    let d1 = (x.clone() - real(prec, x2)).abs();
                    let d2 = (real(prec, 1.0) - &x).abs();
                    return if d1 < d2 { d1 } else { d2 };
                }
                if xf <= x_min {
                    // inside the unresolved cluster near 0: solid by convention
                    return zero(prec);
                }
                // bracket by n ~ x^{-1/nu}
                let nf = xf.powf(-1.0 / nu);
                let n0 = (nf.floor() as i64 - 2).max(2);
                let mut best = Float::with_val(prec, 1);
                for n in n0..=(n0 + 5) {
                    let p: Float = Float::with_val(prec, n).pow(real(prec, -nu));
                    let d = (p - &x).abs();
                    if d < best {
                        best = d;
                    }
                }
                best
            }
        }
    }

    /// `psi_K(s)`: length of the open `s`-neighbourhood `{d_K < s}`.
    pub fn psi(&self, s: f64) -> Result<f64> {
        if s <= 0.0 {
            return Ok(self.set_measure());
        }
        self.check_scale(s)?;
        Ok(self.psi_unchecked(s))
    }

    fn psi_unchecked(&self, s: f64) -> f64 {
        // 1 - sum over gaps of max(0, len - 2s), via the sorted prefix sums
        let two_s = 2.0 * s;
        let i = self.classes.partition_point(|c| c.len > two_s);
        let uncovered = self.prefix_len[i] - two_s * self.prefix_count[i];
        (1.0 - uncovered).clamp(0.0, 1.0)
    }

    /// All gap classes, longest first.
    pub fn gap_classes(&self) -> &[GapClass] {
        &self.classes
    }

    /// Count of gaps strictly longer than `l` (prefix lookup).
    pub fn gaps_longer_than(&self, l: f64) -> f64 {
        let i = self.classes.partition_point(|c| c.len > l);
        self.prefix_count[i]
    }

    /// Positioned gaps with length > `min_len`, sorted by start angle.
    ///
    /// Errors out instead of materializing an astronomically long list.
    pub fn positioned_gaps(&self, min_len: f64) -> Result<Vec<(f64, f64)>> {
        const CAP: usize = 1 << 20;
        let mut out = Vec::new();
        match &self.spec {
            ZeroSetSpec::PointSet { .. } => {
                let n = self.points.len();
                for i in 0..n {
                    let next = if i + 1 < n {
                        self.points[i + 1]
                    } else {
                        self.points[0] + 1.0
                    };
                    if next - self.points[i] > min_len {
                        out.push((self.points[i], next));
                    }
                }
            }
            ZeroSetSpec::ArcUnion { .. } => {
                let n = self.arcs.len();
                for i in 0..n {
                    let next = if i + 1 < n {
                        self.arcs[i + 1].0
                    } else {
                        self.arcs[0].0 + 1.0
                    };
                    if next - self.arcs[i].1 > min_len {
                        out.push((self.arcs[i].1, next));
                    }
                }
            }
            ZeroSetSpec::CantorTernary { depth } => {
                let expect = self.gaps_longer_than(min_len);
                if expect > CAP as f64 {
                    return Err(Error::DepthInsufficiency {
                        requested: min_len,
                        resolvable: self.resolution,
                    });
                }
                cantor_gaps(0.0, 1.0, 1, *depth, min_len, &mut out);
                out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            }
            ZeroSetSpec::PowerSequence { .. } => {
                let n = self.points.len();
                // ascending points; gaps between consecutive ones
                for i in 0..n - 1 {
                    if self.points[i + 1] - self.points[i] > min_len {
                        out.push((self.points[i], self.points[i + 1]));
                    }
                }
                if 1.0 - self.points[n - 1] > min_len {
                    out.push((self.points[n - 1], 1.0));
                }
            }
        }
        if out.len() > CAP {
            return Err(Error::DepthInsufficiency {
                requested: min_len,
                resolvable: self.resolution,
            });
        }
        Ok(out)
    }

    /// Length of the longest connected component of `{d_K < s}`.
    pub fn longest_component(&self, s: f64) -> Result<f64> {
        self.check_scale(s)?;
        if let ZeroSetSpec::CantorTernary { depth } = &self.spec {
            // components are fattened triadic intervals; the two flanking 0
            // merge across the identification of 0 and 1
            let mut j = 0u32;
            let mut len = 1.0 / 3.0;
            while j < *depth && len > 2.0 * s {
                j += 1;
                len /= 3.0;
            }
            if j == 0 {
                return Ok(1.0);
            }
            let interval = 3f64.powi(-(j as i32));
            return Ok((2.0 * interval + 2.0 * s).min(1.0));
        }
        let gaps = self.positioned_gaps(2.0 * s)?;
        if gaps.is_empty() {
            return Ok(1.0);
        }
        let mut best: f64 = 0.0;
        for i in 0..gaps.len() {
            let next_start = if i + 1 < gaps.len() {
                gaps[i + 1].0
            } else {
                gaps[0].0 + 1.0
            };
            best = best.max(next_start - gaps[i].1 + 2.0 * s);
        }
        Ok(best.min(1.0))
    }

    /// Explicit connected components of `{d_K < s}`, sorted, disjoint.
    pub fn neighborhood_arcs(&self, s: f64) -> Result<Vec<(f64, f64)>> {
        self.check_scale(s)?;
        let gaps = self.positioned_gaps(2.0 * s)?;
        if gaps.is_empty() {
            return Ok(vec![(0.0, 1.0)]);
        }
        let mut arcs = Vec::with_capacity(gaps.len());
        for i in 0..gaps.len() {
            let next_start = if i + 1 < gaps.len() {
                gaps[i + 1].0
            } else {
                gaps[0].0 + 1.0
            };
            arcs.push((gaps[i].1 - s, next_start + s));
        }
        arcs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(arcs)
    }
}

/// Exact distance to the depth-truncated Cantor model via the ternary scan.
fn cantor_dist(x: &Float, depth: u32) -> Float {
    let prec = x.prec();
    let mut lo = zero(prec);
    let mut hi = Float::with_val(prec, 1);
    for _ in 0..depth {
        let third = ((&hi - &lo).complete(prec)) / 3u32;
        let a = (&lo + &third).complete(prec);
        let b = (&hi - &third).complete(prec);
        if *x < a {
            hi = a;
        } else if *x > b {
            lo = b;
        } else {
            // inside the removed middle third
            let d1 = (x - &a).complete(prec);
            let d2 = (&b - x).complete(prec);
            return if d1 < d2 { d1 } else { d2 };
        }
    }
    zero(prec) // within a solid depth-`depth` interval
}

fn cantor_gaps(lo: f64, hi: f64, level: u32, depth: u32, min_len: f64, out: &mut Vec<(f64, f64)>) {
    if level > depth {
        return;
    }
    let third = (hi - lo) / 3.0;
    if third <= min_len {
        return;
    }
    out.push((lo + third, hi - third));
    cantor_gaps(lo, lo + third, level + 1, depth, min_len, out);
    cantor_gaps(hi - third, hi, level + 1, depth, min_len, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::WEIGHTS_PREC as P;

    fn point_at_zero() -> CompactSetModel {
        CompactSetModel::new(ZeroSetSpec::PointSet { angles: vec![0.0] }).unwrap()
    }

    #[test]
    fn single_point_distance_and_psi() {
        let k = point_at_zero();
        assert!((k.dist(&real(P, 0.25)).to_f64() - 0.25).abs() < 1e-30);
        assert!((k.dist(&real(P, 0.9)).to_f64() - 0.1).abs() < 1e-15);
        assert!((k.psi(0.1).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(k.max_distance(), 0.5);
    }

    #[test]
    fn arc_union_psi_golden() {
        // two arcs of lengths 0.1 and 0.2, gaps > 2s: psi = 0.3 + 4s
        let k = CompactSetModel::new(ZeroSetSpec::ArcUnion {
            arcs: vec![(0.0, 0.1), (0.4, 0.6)],
        })
        .unwrap();
        let s = 0.01;
        assert!((k.psi(s).unwrap() - 0.34).abs() < 1e-15);
    }

    #[test]
    fn cantor_psi_matches_gamma_regular_scaling() {
        let k = CompactSetModel::new(ZeroSetSpec::CantorTernary { depth: 22 }).unwrap();
        // psi(3^{-k}/2) ~ s^{1-gamma}, gamma = ln2/ln3
        let gamma = 2f64.ln() / 3f64.ln();
        for kk in 2..=10 {
            let s = 3f64.powi(-kk) / 2.0;
            let psi = k.psi(s).unwrap();
            let ratio = psi / s.powf(1.0 - gamma);
            assert!(
                (0.5..4.0).contains(&ratio),
                "k={kk} psi={psi} ratio={ratio}"
            );
        }
    }

    #[test]
    fn cantor_exact_psi_at_level_scale() {
        // with 2s = 3^{-j}: gaps of level <= j-1 stay partially uncovered
        let k = CompactSetModel::new(ZeroSetSpec::CantorTernary { depth: 22 }).unwrap();
        let s = 3f64.powi(-4) / 2.0;
        // uncovered = sum_{j=1}^{3} 2^{j-1}(3^{-j} - 3^{-4})
        let mut unc = 0.0;
        for j in 1..=3 {
            unc += 2f64.powi(j - 1) * (3f64.powi(-j) - 3f64.powi(-4));
        }
        assert!((k.psi(s).unwrap() - (1.0 - unc)).abs() < 1e-14);
    }

    #[test]
    fn cantor_depth_error_below_resolution() {
        let k = CompactSetModel::new(ZeroSetSpec::CantorTernary { depth: 8 }).unwrap();
        let err = k.psi(1e-9).unwrap_err();
        assert!(matches!(err, Error::DepthInsufficiency { .. }));
    }

    #[test]
    fn cantor_distance_against_brute_force() {
        let depth = 12u32;
        let k = CompactSetModel::new(ZeroSetSpec::CantorTernary { depth }).unwrap();
        // brute force over depth-D interval endpoints
        let mut endpoints = vec![(0.0, 1.0)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (lo, hi) in endpoints {
                let t = (hi - lo) / 3.0;
                next.push((lo, lo + t));
                next.push((hi - t, hi));
            }
            endpoints = next;
        }
        let flat: Vec<f64> = endpoints.iter().flat_map(|&(a, b)| [a, b]).collect();
        for i in 0..200 {
            let x = i as f64 / 200.0 + 0.00137;
            let want = flat
                .iter()
                .map(|p| {
                    let d = (x - p).abs();
                    d.min(1.0 - d)
                })
                .fold(f64::INFINITY, f64::min);
            let got = k.dist(&real(P, x)).to_f64();
            // the scan treats depth-D intervals as solid; both agree to 3^-D
            assert!(
                (got - want).abs() <= 3f64.powi(-(depth as i32)),
                "x={x} got={got} want={want}"
            );
        }
    }

    #[test]
    fn distance_is_one_lipschitz_on_grid() {
        let models = [
            CompactSetModel::new(ZeroSetSpec::CantorTernary { depth: 16 }).unwrap(),
            CompactSetModel::new(ZeroSetSpec::PowerSequence { nu: 1.0 }).unwrap(),
            CompactSetModel::new(ZeroSetSpec::PointSet {
                angles: vec![0.1, 0.35, 0.8],
            })
            .unwrap(),
        ];
        for m in &models {
            let n = 2000;
            let mut prev = m.dist(&real(P, 0.0)).to_f64();
            for i in 1..=n {
                let x = i as f64 / n as f64;
                let d = m.dist(&real(P, x)).to_f64();
                assert!(
                    (d - prev).abs() <= 1.0 / n as f64 + 1e-12,
                    "Lipschitz violated at {x}: {prev} -> {d}"
                );
                prev = d;
            }
        }
    }

    #[test]
    fn power_sequence_total_gap_length_is_one() {
        let k = CompactSetModel::new(ZeroSetSpec::PowerSequence { nu: 1.0 }).unwrap();
        let total: f64 = k.gap_classes().iter().map(|c| c.len * c.count).sum();
        assert!((total - 1.0).abs() < 1e-6, "total = {total}");
    }

    #[test]
    fn longest_component_cantor() {
        let k = CompactSetModel::new(ZeroSetSpec::CantorTernary { depth: 22 }).unwrap();
        // s just under 1/18: level-2 gaps (1/9) survive; components are the
        // four level-2 intervals (1/9) fattened, merged across 0 -> 2/9 + 2s
        let s = 0.05;
        let want = 2.0 / 9.0 + 2.0 * s;
        assert!((k.longest_component(s).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn neighborhood_arcs_cover_psi() {
        let k = CompactSetModel::new(ZeroSetSpec::PointSet {
            angles: vec![0.0, 0.5],
        })
        .unwrap();
        let arcs = k.neighborhood_arcs(0.1).unwrap();
        let total: f64 = arcs.iter().map(|a| a.1 - a.0).sum();
        assert!((total - k.psi(0.1).unwrap()).abs() < 1e-14);
    }
}
