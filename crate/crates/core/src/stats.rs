//! Small statistical helpers shared by the analyses and experiments.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::ln_gamma;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Poisson probability mass at `k`.
pub fn poisson_pmf(k: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let k = k as f64;
    (k * mean.ln() - mean - ln_gamma(k + 1.0)).exp()
}

/// Total-variation distance between an empirical histogram and a pmf on
/// the non-negative integers. Mass of the pmf beyond the histogram support
/// is included.
pub fn total_variation(histogram: &[u64], pmf: impl Fn(u64) -> f64) -> f64 {
    let total: u64 = histogram.iter().sum();
    if total == 0 {
        return 1.0;
    }
    let mut diff = 0.0;
    let mut covered = 0.0;
    for (k, &c) in histogram.iter().enumerate() {
        let q = pmf(k as u64);
        covered += q;
        diff += (c as f64 / total as f64 - q).abs();
    }
    0.5 * (diff + (1.0 - covered).max(0.0))
}

/// Sample quantile with linear interpolation between order statistics.
/// `sorted` must be sorted ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

pub fn normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    Flat,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MannKendall {
    pub s: i64,
    /// One-sided p-value for an increasing trend.
    pub p_increasing: f64,
    /// One-sided p-value for a decreasing trend.
    pub p_decreasing: f64,
}

/// Largest series for which the permutation distribution is enumerated.
const EXACT_MK_MAX: usize = 8;

/// Mann-Kendall statistic `S = Σ_{i<j} sgn(x_j − x_i)` with one-sided
/// permutation p-values (exact up to eight values, normal approximation with
/// tie correction beyond).
pub fn mann_kendall(values: &[f64]) -> MannKendall {
    let s = mk_statistic(values);
    let n = values.len();
    if n < 2 {
        return MannKendall {
            s,
            p_increasing: 1.0,
            p_decreasing: 1.0,
        };
    }
    if n <= EXACT_MK_MAX {
        let mut perm = values.to_vec();
        let (mut ge, mut le, mut total) = (0u64, 0u64, 0u64);
        for_each_permutation(&mut perm, &mut |p| {
            let t = mk_statistic(p);
            total += 1;
            ge += (t >= s) as u64;
            le += (t <= s) as u64;
        });
        return MannKendall {
            s,
            p_increasing: ge as f64 / total as f64,
            p_decreasing: le as f64 / total as f64,
        };
    }
    let nf = n as f64;
    let mut var = nf * (nf - 1.0) * (2.0 * nf + 5.0);
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        let t = j as f64;
        var -= t * (t - 1.0) * (2.0 * t + 5.0);
        i += j;
    }
    let sd = (var / 18.0).sqrt();
    if sd == 0.0 {
        return MannKendall {
            s,
            p_increasing: 1.0,
            p_decreasing: 1.0,
        };
    }
    let sf = s as f64;
    MannKendall {
        s,
        p_increasing: 1.0 - normal_cdf((sf - 1.0) / sd),
        p_decreasing: normal_cdf((sf + 1.0) / sd),
    }
}

fn mk_statistic(values: &[f64]) -> i64 {
    let mut s = 0i64;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            s += match values[j].partial_cmp(&values[i]) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
        }
    }
    s
}

/// Heap's algorithm.
fn for_each_permutation(items: &mut [f64], f: &mut impl FnMut(&[f64])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

impl MannKendall {
    /// Trend at one-sided significance `level`.
    pub fn trend(&self, level: f64) -> Trend {
        if self.p_increasing < level {
            Trend::Increasing
        } else if self.p_decreasing < level {
            Trend::Decreasing
        } else {
            Trend::Flat
        }
    }
}

/// Kendall trend test of a binary outcome against an ordered covariate.
///
/// `groups[i] = (successes, trials)` at the `i`-th covariate value, in
/// increasing order. Observations sharing a covariate value are tied, and so
/// are equal outcomes; the variance is the usual tie-corrected one and the
/// p-values use the normal approximation.
pub fn binary_trend(groups: &[(u64, u64)]) -> MannKendall {
    let mut s = 0i128;
    let (mut succ_before, mut fail_before) = (0i128, 0i128);
    for &(k, m) in groups {
        let (k, f) = (k as i128, (m - k) as i128);
        s += k * fail_before - f * succ_before;
        succ_before += k;
        fail_before += f;
    }
    let n = (succ_before + fail_before) as f64;
    let ties = |sizes: &mut dyn Iterator<Item = f64>| {
        sizes.fold((0.0, 0.0, 0.0), |(a, b, c), t| {
            (
                a + t * (t - 1.0) * (2.0 * t + 5.0),
                b + t * (t - 1.0),
                c + t * (t - 1.0) * (t - 2.0),
            )
        })
    };
    let (xt0, xt1, xt2) = ties(&mut groups.iter().map(|&(_, m)| m as f64));
    let (yt0, yt1, yt2) = ties(&mut [succ_before as f64, fail_before as f64].into_iter());
    let mut var = (n * (n - 1.0) * (2.0 * n + 5.0) - xt0 - yt0) / 18.0;
    if n > 1.0 {
        var += xt1 * yt1 / (2.0 * n * (n - 1.0));
    }
    if n > 2.0 {
        var += xt2 * yt2 / (9.0 * n * (n - 1.0) * (n - 2.0));
    }
    let s = s as i64;
    if var <= 0.0 {
        return MannKendall {
            s,
            p_increasing: 1.0,
            p_decreasing: 1.0,
        };
    }
    let z = s as f64 / var.sqrt();
    MannKendall {
        s,
        p_increasing: 1.0 - normal_cdf(z),
        p_decreasing: normal_cdf(z),
    }
}

/// One-sided p-value that proportion 2 exceeds proportion 1 (pooled
/// two-proportion z-test).
pub fn two_proportion_p_greater(k1: u64, n1: u64, k2: u64, n2: u64) -> f64 {
    let (p1, p2) = (k1 as f64 / n1 as f64, k2 as f64 / n2 as f64);
    let pooled = (k1 + k2) as f64 / (n1 + n2) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    if se == 0.0 {
        return if p2 > p1 { 0.0 } else { 1.0 };
    }
    1.0 - normal_cdf((p2 - p1) / se)
}

/// Ordinary least squares `y ≈ a + b x`; returns `(a, b)`.
pub fn least_squares(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = sxy / sxx;
    Some((my - b * mx, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((hi - lo - 0.192).abs() < 0.005);
        assert!(wilson_interval(0, 10, Z95).0.abs() < 1e-12);
        assert!((wilson_interval(10, 10, Z95).1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn poisson_pmf_sums_to_one() {
        let s: f64 = (0..100).map(|k| poisson_pmf(k, 3.5)).sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!((poisson_pmf(2, 2.0) - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn total_variation_extremes() {
        assert!(total_variation(&[0, 10], |k| if k == 1 { 1.0 } else { 0.0 }) < 1e-15);
        assert!((total_variation(&[10], |k| if k == 1 { 1.0 } else { 0.0 }) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mann_kendall_exact() {
        let inc = mann_kendall(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(inc.s, 6);
        assert!((inc.p_increasing - 1.0 / 24.0).abs() < 1e-15);
        assert_eq!(inc.p_decreasing, 1.0);
        let flat = mann_kendall(&[0.5, 0.5, 0.5]);
        assert_eq!(flat.s, 0);
        assert_eq!(flat.p_increasing, 1.0);
        let dec = mann_kendall(&(0..12).map(|i| -(i as f64)).collect::<Vec<_>>());
        assert!(dec.p_decreasing < 1e-4);
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&v, 0.5), 2.5);
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
        assert_eq!(quantile_sorted(&v, 1.0), 4.0);
    }

    #[test]
    fn least_squares_recovers_line() {
        let x = [1.0, 2.0, 3.0];
        let y = [3.0, 5.0, 7.0];
        let (a, b) = least_squares(&x, &y).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
    }

    /// Statistic and permutation variance by enumerating every labelling of
    /// the outcomes.
    fn binary_trend_oracle(groups: &[(u64, u64)]) -> (i64, f64) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (g, &(k, m)) in groups.iter().enumerate() {
            for j in 0..m {
                x.push(g as f64);
                y.push((j < k) as u8 as f64);
            }
        }
        let stat = |y: &[f64]| -> i64 {
            let mut s = 0;
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    let sign = |v: f64| (v > 0.0) as i64 - (v < 0.0) as i64;
                    s += sign(x[j] - x[i]) * sign(y[j] - y[i]);
                }
            }
            s
        };
        let observed = stat(&y);
        let (mut sum, mut sum2, mut count) = (0.0, 0.0, 0.0);
        for_each_permutation(&mut y, &mut |p| {
            let t = stat(p) as f64;
            sum += t;
            sum2 += t * t;
            count += 1.0;
        });
        (observed, sum2 / count - (sum / count).powi(2))
    }

    #[test]
    fn binary_trend_matches_permutation_oracle() {
        for groups in [
            vec![(0, 2), (1, 2), (2, 2)],
            vec![(2, 3), (1, 2), (0, 3)],
            vec![(1, 1), (1, 3), (2, 4)],
            vec![(0, 1), (3, 4), (1, 3)],
        ] {
            let (s, var) = binary_trend_oracle(&groups);
            let mk = binary_trend(&groups);
            assert_eq!(mk.s, s, "{groups:?}");
            let z = s as f64 / var.sqrt();
            assert!(
                (mk.p_increasing - (1.0 - normal_cdf(z))).abs() < 1e-12,
                "{groups:?}"
            );
        }
        let strong = binary_trend(&[(10, 100), (50, 100), (90, 100)]);
        assert_eq!(strong.trend(0.05), Trend::Increasing);
        assert_eq!(binary_trend(&[(5, 10), (5, 10)]).trend(0.05), Trend::Flat);
    }
}
