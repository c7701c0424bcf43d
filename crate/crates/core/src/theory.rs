//! Closed-form and numeric theory: binomial tails, the random-regular
//! critical probability `p̃(d)`, the wheel-graph threshold, and calculators
//! for the asymptotic parameter window.
//!
//! All arithmetic is in `f64`. Quantities too small for `f64` (the
//! ubiquity tolerance `ε = k^-100`) are carried as natural logarithms.

use serde::Serialize;

use crate::{Error, Result};

/// Neumaier-compensated sum.
fn compensated_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

fn ln_factorials(n: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(0.0);
    let (mut acc, mut comp) = (0.0f64, 0.0f64);
    for i in 1..=n {
        let t = f64::from(i).ln();
        let s = acc + t;
        comp += if acc.abs() >= t.abs() {
            (acc - s) + t
        } else {
            (t - s) + acc
        };
        acc = s;
        out.push(acc + comp);
    }
    out
}

/// `Pr[Bin(trials, success) ≤ cut]` with the failure probability passed
/// separately, so that callers holding `1 - y` exactly lose no precision.
pub fn binomial_cdf(trials: u32, cut: u32, success: f64, failure: f64) -> f64 {
    if cut >= trials {
        return 1.0;
    }
    let lf = ln_factorials(trials);
    let (ls, lq) = (success.ln(), failure.ln());
    let term = |i: u32| -> f64 {
        let tail = trials - i;
        if (success == 0.0 && i > 0) || (failure == 0.0 && tail > 0) {
            return 0.0;
        }
        let mut l = lf[trials as usize] - lf[i as usize] - lf[tail as usize];
        if i > 0 {
            l += f64::from(i) * ls;
        }
        if tail > 0 {
            l += f64::from(tail) * lq;
        }
        l.exp()
    };
    compensated_sum((0..=cut).map(term)).clamp(0.0, 1.0)
}

/// `F(d, y)`: probability of at most `d/2` successes in `d` independent
/// trials with success probability `y`.
pub fn binom_tail_f(d: u32, y: f64) -> f64 {
    binomial_cdf(d, d / 2, y, 1.0 - y)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalProbResult {
    pub d: u32,
    pub p_tilde: f64,
    /// Minimiser of `y / tail(y)` over the open interval `(0,1)`.
    pub argmin_y: f64,
    /// Final golden-section bracket width.
    pub tolerance: f64,
    /// The infimum is approached at the `y → 0⁺` end of the interval.
    pub at_boundary: bool,
    /// Same quantity with the tail cut at `⌊(d-1)/2⌋`; differs from
    /// `p_tilde` only for even `d`.
    pub floor_cut_p_tilde: f64,
}

const GRID_POINTS: usize = 10_000;
const Y_TOLERANCE: f64 = 1e-9;

/// `p̃(d) = 1 - inf_{y∈(0,1)} y / Pr[Bin(d-1, 1-y) ≤ c]`, the strict-majority
/// critical probability on random `d`-regular graphs.
///
/// The cut is `c = ⌈(d-1)/2⌉ = j - 1` for the strict-majority threshold
/// `j = ⌈(d+1)/2⌉`, i.e. the survival condition of the inactive
/// `(d-j+1)`-core. For odd `d` this is exactly `F(d-1, 1-y)`.
pub fn critical_prob(d: u32) -> Result<CriticalProbResult> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "critical probability needs d >= 3, got {d}"
        )));
    }
    let ceil_cut = (d - 1).div_ceil(2);
    let (inf, argmin_y, tolerance) = minimise_ratio(d, ceil_cut);
    let (floor_inf, _, _) = minimise_ratio(d, (d - 1) / 2);
    Ok(CriticalProbResult {
        d,
        p_tilde: 1.0 - inf,
        argmin_y,
        tolerance,
        at_boundary: argmin_y < 1e-6,
        floor_cut_p_tilde: 1.0 - floor_inf,
    })
}

fn minimise_ratio(d: u32, cut: u32) -> (f64, f64, f64) {
    let objective = |y: f64| y / binomial_cdf(d - 1, cut, 1.0 - y, y);
    let step = 1.0 / (GRID_POINTS as f64 + 1.0);
    let (best_i, _) = (1..=GRID_POINTS)
        .map(|i| (i, objective(i as f64 * step)))
        .fold(
            (1, f64::INFINITY),
            |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
        );
    let mut lo = (best_i - 1) as f64 * step;
    let mut hi = (best_i + 1) as f64 * step;
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (objective(a), objective(b));
    while hi - lo > Y_TOLERANCE {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = objective(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = objective(b);
        }
    }
    let (y, v) = if fa <= fb { (a, fa) } else { (b, fb) };
    (v, y, hi - lo)
}

/// Unique root in `[0,1]` of `x + x² - x³ = 1/2` (the wheel-graph threshold).
pub fn wheel_pplus() -> f64 {
    let f = |x: f64| x + x * x - x * x * x - 0.5;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Degree below which strict-majority dissemination a.a.s. fails for any
/// regular sequence: `(1/p, 2/p)` for odd and even degree respectively.
pub fn rstv_degree_bound(p: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p must be in (0, 1], got {p}"
        )));
    }
    Ok((1.0 / p, 2.0 / p))
}

/// Whether a `d`-regular instance is below the degree bound at `p`.
pub fn below_degree_bound(d: u32, p: f64) -> Result<bool> {
    let (odd, even) = rstv_degree_bound(p)?;
    let bound = if d % 2 == 1 { odd } else { even };
    Ok(f64::from(d) < bound)
}

/// Parameter choices of the phase-one argument at a given `(p, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseOneSettings {
    pub m: u64,
    /// `t = 100 k³`, as a float since it overflows integers for realistic `k`.
    pub t: f64,
    /// `ln ε` for `ε = k^-100`.
    pub ln_epsilon: f64,
    /// `⌊p k / 9⌋`, the largest admissible `r` in the phase-one statement.
    pub r_max: u64,
}

pub fn phase_one_settings(p: f64, k: u64) -> PhaseOneSettings {
    let kf = k as f64;
    PhaseOneSettings {
        m: (8.0 / p).ceil() as u64,
        t: 100.0 * kf.powi(3),
        ln_epsilon: -100.0 * kf.ln(),
        r_max: (p * kf / 9.0).floor() as u64,
    }
}

/// The parameter settings of the `d = Θ((log n · log log n)^{1/3})`
/// corollary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorollarySettings {
    pub p: f64,
    pub k: f64,
    pub r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParameterWindow {
    pub ln_n: f64,
    pub p_min: f64,
    pub p_max: f64,
    /// The `p` at which the `k` and `r` bounds were evaluated.
    pub p: f64,
    /// `k₀ = ⌈(1000/p) ln(1/p)⌉`
    pub k_min: f64,
    /// `k₁ = ⌊p² ln n / (3000 ln(1/p))⌋`
    pub k_max: f64,
    /// `⌊p k₀ / 20⌋`
    pub r_max: f64,
    pub nonempty: bool,
    pub corollary: CorollarySettings,
}

fn k_bounds(ln_n: f64, p: f64) -> (f64, f64) {
    let lp = (1.0 / p).ln();
    let k0 = (1000.0 / p * lp).ceil();
    let k1 = (p * p * ln_n / (3000.0 * lp)).floor();
    (k0, k1)
}

/// Lower end of the admissible `p` range, `200 (ln ln n)^{2/3} / (ln n)^{1/3}`.
pub fn p_lower_bound(ln_n: f64) -> f64 {
    200.0 * ln_n.ln().powf(2.0 / 3.0) / ln_n.cbrt()
}

/// The window for a torus of side `n`, given as `ln n` so that the
/// astronomically large sizes where it becomes nonempty stay representable.
/// Bounds are evaluated at the smallest admissible `p`, where the `k` range
/// is narrowest.
pub fn theorem_window(ln_n: f64, p0: f64) -> Result<ParameterWindow> {
    let p_min = p_lower_bound_checked(ln_n)?;
    let p = if p_min <= p0 { p_min } else { p0 };
    theorem_window_at(ln_n, p0, p)
}

fn p_lower_bound_checked(ln_n: f64) -> Result<f64> {
    if ln_n.is_nan() || ln_n < 16f64.ln() {
        return Err(Error::InvalidParameter(format!(
            "parameter window needs n >= 16, got ln n = {ln_n}"
        )));
    }
    Ok(p_lower_bound(ln_n))
}

/// The window with the `k` and `r` bounds evaluated at a chosen `p`.
pub fn theorem_window_at(ln_n: f64, p0: f64, p: f64) -> Result<ParameterWindow> {
    let p_min = p_lower_bound_checked(ln_n)?;
    if !(p0 > 0.0 && p0 < 1.0) || !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < p, p0 < 1, got p = {p}, p0 = {p0}"
        )));
    }
    let (k0, k1) = k_bounds(ln_n, p);
    let r_max = (p * k0 / 20.0).floor();
    let nonempty = p_min <= p && p <= p0 && k0 <= k1 && r_max >= 1.0;
    let corollary = {
        let (_, k) = k_bounds(ln_n, p_min.min(0.5));
        CorollarySettings {
            p: p_min,
            k,
            r: (400.0 * ln_n.ln()).floor(),
        }
    };
    Ok(ParameterWindow {
        ln_n,
        p_min,
        p_max: p0,
        p,
        k_min: k0,
        k_max: k1,
        r_max,
        nonempty,
        corollary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_edge_values() {
        for d in 0..20 {
            assert_eq!(binom_tail_f(d, 0.0), 1.0);
        }
        for d in 1..20 {
            assert_eq!(binom_tail_f(d, 1.0), 0.0);
        }
        assert!((binom_tail_f(2, 0.5) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn tail_matches_direct_sum() {
        // exact rational terms for small d via repeated multiplication
        for d in [1u32, 5, 10, 17, 30] {
            for &y in &[0.1f64, 0.37, 0.5, 0.9] {
                let mut total = 0.0;
                for i in 0..=d / 2 {
                    let mut c = 1.0;
                    for t in 0..i {
                        c = c * f64::from(d - t) / f64::from(t + 1);
                    }
                    total += c * y.powi(i as i32) * (1.0 - y).powi((d - i) as i32);
                }
                assert!((binom_tail_f(d, y) - total).abs() < 1e-13, "d={d} y={y}");
            }
        }
    }

    #[test]
    fn tail_matches_high_precision_values() {
        let cases = [
            (500, 0.49, 0.688_710_049_177_743_1),
            (499, 0.5, 0.5),
            (100, 0.3, 0.999_990_965_313_804_3),
            (333, 0.52, 0.232_459_146_111_898_84),
            (50, 0.9, 1.014_983_870_006_761e-12),
        ];
        for (d, y, want) in cases {
            assert!((binom_tail_f(d, y) - want).abs() <= 1e-12, "d={d} y={y}");
        }
    }

    #[test]
    fn tail_is_monotone_in_y() {
        for d in [3u32, 8, 51, 200] {
            let mut prev = 1.0;
            for i in 0..=200 {
                let v = binom_tail_f(d, i as f64 / 200.0);
                assert!(v <= prev + 1e-12, "d={d} i={i}");
                prev = v;
            }
        }
    }

    #[test]
    fn small_d_values() {
        let r3 = critical_prob(3).unwrap();
        assert!((r3.p_tilde - 0.5).abs() < 1e-9);
        assert!(r3.at_boundary);
        let r7 = critical_prob(7).unwrap();
        assert!((r7.p_tilde - 0.269).abs() < 5e-4);
        assert_eq!(r7.p_tilde, r7.floor_cut_p_tilde);
        assert!(critical_prob(2).is_err());
    }

    #[test]
    fn objective_at_argmin_matches() {
        let r = critical_prob(9).unwrap();
        let y = r.argmin_y;
        let val = y / binomial_cdf(8, 4, 1.0 - y, y);
        assert!((1.0 - val - r.p_tilde).abs() < 1e-12);
        assert!(r.tolerance <= 1e-9);
    }

    #[test]
    fn wheel_threshold() {
        let x = wheel_pplus();
        assert!((x - 0.4030).abs() < 5e-5);
        assert!((x + x * x - x * x * x - 0.5).abs() <= 1e-12);
        // derivative 1 + 2x - 3x² stays positive on [0,1)
        for i in 0..1000 {
            let x = i as f64 / 1000.0;
            assert!(1.0 + 2.0 * x - 3.0 * x * x > 0.0);
        }
    }

    #[test]
    fn degree_bounds() {
        assert_eq!(rstv_degree_bound(0.1).unwrap(), (10.0, 20.0));
        assert_eq!(rstv_degree_bound(0.5).unwrap(), (2.0, 4.0));
        assert!(rstv_degree_bound(0.0).is_err());
        // L*(n,1,1) has d = 7 < 2/0.2 = 10 but is odd: 7 >= 1/0.2 = 5
        assert!(!below_degree_bound(7, 0.2).unwrap());
        assert!(below_degree_bound(8, 0.2).unwrap());
    }

    #[test]
    fn window_is_empty_at_desk_scale() {
        let w = theorem_window(1e6f64.ln(), 0.1).unwrap();
        assert!(w.p_min > 150.0 && w.p_min < 170.0, "{}", w.p_min);
        assert!(!w.nonempty);
        assert!(theorem_window(10f64.ln(), 0.1).is_err());
    }

    #[test]
    fn phase_one_defaults() {
        let s = phase_one_settings(0.25, 10);
        assert_eq!(s.m, 32);
        assert_eq!(s.t, 100_000.0);
        assert!((s.ln_epsilon + 100.0 * 10f64.ln()).abs() < 1e-9);
    }
}
