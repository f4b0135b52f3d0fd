//! Empirical statistics for heavy-tailed time series: empirical
//! characteristic functions, autocodifference estimates with ensemble
//! quartiles, pairwise codifference/cosum, heavy-tail-safe histograms, and
//! power-law tail regression.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Empirical characteristic function `(1/N) sum exp(i k x_j)` on a grid.
pub fn ecf(samples: &[f64], k_grid: &[f64]) -> Vec<Complex64> {
    assert!(!samples.is_empty(), "ecf needs at least one sample");
    k_grid
        .par_iter()
        .map(|&k| ecf_at(samples, k))
        .collect()
}

/// Empirical characteristic function at a single wavenumber.
pub fn ecf_at(samples: &[f64], k: f64) -> Complex64 {
    if k == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let (re, im) = samples
        .iter()
        .fold((0.0, 0.0), |(re, im), &x| (re + (k * x).cos(), im + (k * x).sin()));
    Complex64::new(re, im) / samples.len() as f64
}

/// Sup distance between two complex-valued functions on a shared grid.
pub fn sup_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// One autocodifference estimate, with a flag for near-degenerate
/// denominators in the log-ratio.
#[derive(Debug, Clone, Copy)]
pub struct AcdPoint {
    pub lag_steps: usize,
    pub value: Complex64,
    pub flagged: bool,
}

/// Plug-in autocodifference of a single stationary series at integer lags:
/// `ACD(tau) = log[ E e^{i(x_{t+tau} - x_t)} / (E e^{i x_{t+tau}} E e^{-i x_t}) ]`
/// with expectations replaced by time averages over aligned windows.
pub fn acd_single(values: &[f64], lags: &[usize]) -> Vec<AcdPoint> {
    lags.iter()
        .map(|&lag| {
            let n = values.len().saturating_sub(lag);
            assert!(n > 0, "lag {lag} exceeds series length");
            let mut num = Complex64::ZERO;
            let mut d1 = Complex64::ZERO;
            let mut d2 = Complex64::ZERO;
            for t in 0..n {
                let a = values[t + lag];
                let b = values[t];
                num += Complex64::new((a - b).cos(), (a - b).sin());
                d1 += Complex64::new(a.cos(), a.sin());
                d2 += Complex64::new(b.cos(), -b.sin());
            }
            let nf = n as f64;
            let denom = (d1 / nf) * (d2 / nf);
            let flagged = denom.norm() < 1e-8 || num.norm() < 1e-12;
            let value = if flagged {
                Complex64::new(f64::NAN, f64::NAN)
            } else {
                ((num / nf) / denom).ln()
            };
            AcdPoint { lag_steps: lag, value, flagged }
        })
        .collect()
}

/// Per-lag ensemble summary of ACD estimates: median and 25th/75th
/// percentiles of the real part across realizations, plus the median
/// imaginary part.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AcdLagStats {
    pub lag: f64,
    pub re_median: f64,
    pub re_q25: f64,
    pub re_q75: f64,
    pub im_median: f64,
    pub flagged: bool,
}

/// ACD over an ensemble of independent realizations; quartiles across the
/// ensemble are the error bars (heavy tails invalidate standard errors).
pub fn acd_ensemble(realizations: &[Vec<f64>], dt: f64, lags: &[usize]) -> Vec<AcdLagStats> {
    let per: Vec<Vec<AcdPoint>> = realizations
        .par_iter()
        .map(|r| acd_single(r, lags))
        .collect();
    lags.iter()
        .enumerate()
        .map(|(i, &lag)| {
            let mut res: Vec<f64> = Vec::new();
            let mut ims: Vec<f64> = Vec::new();
            let mut flagged = false;
            for est in &per {
                flagged |= est[i].flagged;
                if !est[i].flagged {
                    res.push(est[i].value.re);
                    ims.push(est[i].value.im);
                }
            }
            let (q25, med, q75) = quartiles(&mut res);
            let (_, im_med, _) = quartiles(&mut ims);
            AcdLagStats {
                lag: lag as f64 * dt,
                re_median: med,
                re_q25: q25,
                re_q75: q75,
                im_median: im_med,
                flagged,
            }
        })
        .collect()
}

/// Codifference and cosum of paired samples (already normalized to the
/// fitted scale; the characteristic functions are evaluated at argument 1):
/// `CD = log E e^{i(Yk - Yl)} - log E e^{i Yk} - log E e^{-i Yl}` and
/// `CS(Yk, Yl) = CD(Yk, -Yl)`.
pub fn codiff_cosum(first: &[f64], second: &[f64]) -> (Complex64, Complex64) {
    assert_eq!(first.len(), second.len());
    let n = first.len() as f64;
    let mut e_diff = Complex64::ZERO;
    let mut e_sum = Complex64::ZERO;
    let mut e_k = Complex64::ZERO;
    let mut e_ml = Complex64::ZERO; // E e^{-i Yl}
    let mut e_pl = Complex64::ZERO; // E e^{+i Yl}
    for (&a, &b) in first.iter().zip(second) {
        e_diff += Complex64::new((a - b).cos(), (a - b).sin());
        e_sum += Complex64::new((a + b).cos(), (a + b).sin());
        e_k += Complex64::new(a.cos(), a.sin());
        e_ml += Complex64::new(b.cos(), -b.sin());
        e_pl += Complex64::new(b.cos(), b.sin());
    }
    let cd = (e_diff / n).ln() - (e_k / n).ln() - (e_ml / n).ln();
    let cs = (e_sum / n).ln() - (e_k / n).ln() - (e_pl / n).ln();
    (cd, cs)
}

/// Binning layout for heavy-tailed data: uniform bins over a symmetric core
/// plus logarithmically spaced overflow bins out to `overflow_max` on each
/// side. Power-law tails would waste a uniform-only grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub edges: Vec<f64>,
}

impl HistogramSpec {
    /// Symmetric heavy-tail layout: `n_core` uniform bins on
    /// `[-core_max, core_max]`, `n_overflow` log bins per side out to
    /// `overflow_max`.
    pub fn heavy_tail(core_max: f64, n_core: usize, overflow_max: f64, n_overflow: usize) -> Self {
        assert!(core_max > 0.0 && overflow_max > core_max && n_core > 0);
        let mut edges = Vec::with_capacity(n_core + 2 * n_overflow + 1);
        let log_ratio = (overflow_max / core_max).ln() / n_overflow as f64;
        for i in (1..=n_overflow).rev() {
            edges.push(-core_max * (log_ratio * i as f64).exp());
        }
        for i in 0..=n_core {
            edges.push(-core_max + 2.0 * core_max * i as f64 / n_core as f64);
        }
        for i in 1..=n_overflow {
            edges.push(core_max * (log_ratio * i as f64).exp());
        }
        HistogramSpec { edges }
    }

    /// Uniform bins on `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Self {
        assert!(hi > lo && n > 0);
        let edges = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        HistogramSpec { edges }
    }
}

/// Histogram with per-bin densities normalized over the covered range.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Samples that fell inside the covered range.
    pub n_in: u64,
    /// Samples outside the covered range (recorded, not binned).
    pub n_out: u64,
}

impl Histogram {
    pub fn build(spec: &HistogramSpec, samples: &[f64]) -> Self {
        let edges = spec.edges.clone();
        let mut counts = vec![0u64; edges.len() - 1];
        let mut n_in = 0u64;
        let mut n_out = 0u64;
        let lo = edges[0];
        let hi = *edges.last().unwrap();
        for &x in samples {
            if !(x >= lo && x < hi) {
                n_out += 1;
                continue;
            }
            let idx = match edges.binary_search_by(|e| e.partial_cmp(&x).unwrap()) {
                Ok(i) => i,
                Err(i) => i - 1,
            };
            let last = counts.len() - 1;
            counts[idx.min(last)] += 1;
            n_in += 1;
        }
        Histogram { edges, counts, n_in, n_out }
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    /// Density of bin `i`, normalized so densities integrate to 1 over the
    /// covered range.
    pub fn density(&self, i: usize) -> f64 {
        if self.n_in == 0 {
            return 0.0;
        }
        self.counts[i] as f64 / (self.n_in as f64 * self.width(i))
    }

    /// L1 distance between two histograms on identical edges.
    pub fn l1_distance(&self, other: &Histogram) -> f64 {
        assert_eq!(self.edges, other.edges, "histograms must share bin edges");
        (0..self.n_bins())
            .map(|i| (self.density(i) - other.density(i)).abs() * self.width(i))
            .sum()
    }

    /// L1 distance against an analytic density, integrated per bin with
    /// 8-point Gauss-Legendre.
    pub fn l1_vs_density<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        (0..self.n_bins())
            .map(|i| {
                let (a, b) = (self.edges[i], self.edges[i + 1]);
                let mean = gauss8(&f, a, b) / (b - a);
                (self.density(i) - mean).abs() * (b - a)
            })
            .sum()
    }
}

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
const GL8_X: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_W: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_361_98,
    0.362_683_783_378_361_98,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

fn gauss8<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c1 = 0.5 * (b - a);
    let c2 = 0.5 * (b + a);
    GL8_X
        .iter()
        .zip(GL8_W)
        .map(|(&x, w)| w * f(c1 * x + c2))
        .sum::<f64>()
        * c1
}

/// Result of a power-law tail fit.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TailFit {
    /// Log-log regression slope of the pooled-tail density; a stable law of
    /// index alpha gives -(alpha + 1).
    pub exponent: f64,
    /// Average of `(u(r) - u(-r)) / (u(r) + u(-r))` over the fitted range;
    /// estimates the skewness parameter of the attracting stable law.
    pub skew_ratio: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub n_tail: usize,
}

/// Fits the tail exponent and skew ratio of heavy-tailed samples.
///
/// `tail_quantile` selects the tail region: the threshold is that quantile
/// of |x|. Uses logarithmically spaced bins and least squares on log density
/// weighted by Poisson counts.
pub fn tail_fit(samples: &[f64], tail_quantile: f64) -> Result<TailFit> {
    if !(0.5..1.0).contains(&tail_quantile) {
        return Err(Error::InvalidParameter(format!(
            "tail_quantile must be in [0.5, 1), got {tail_quantile}"
        )));
    }
    let mut abs: Vec<f64> = samples.iter().map(|x| x.abs()).filter(|x| x.is_finite()).collect();
    abs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = abs.len();
    let r_min = abs[((n as f64) * tail_quantile) as usize];
    // stop where roughly 25 exceedances remain so the last bins stay populated
    let r_max = abs[(n - 25).min(n - 1)];
    if !(r_max > r_min && r_min > 0.0) {
        return Err(Error::InsufficientTailSamples { got: 0, need: 500 });
    }

    let n_tail = abs.iter().filter(|&&x| x > r_min).count();
    if n_tail < 500 {
        return Err(Error::InsufficientTailSamples { got: n_tail, need: 500 });
    }

    let n_bins = 24usize;
    let log_step = (r_max / r_min).ln() / n_bins as f64;
    let mut pos = vec![0u64; n_bins];
    let mut neg = vec![0u64; n_bins];
    for &x in samples {
        let r = x.abs();
        if r <= r_min || r >= r_max {
            continue;
        }
        let idx = ((r / r_min).ln() / log_step) as usize;
        let idx = idx.min(n_bins - 1);
        if x > 0.0 {
            pos[idx] += 1;
        } else {
            neg[idx] += 1;
        }
    }

    // pooled |x| density per log bin -> WLS slope in log-log coordinates
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for i in 0..n_bins {
        let total = pos[i] + neg[i];
        if total == 0 {
            continue;
        }
        let lo = r_min * (log_step * i as f64).exp();
        let hi = r_min * (log_step * (i + 1) as f64).exp();
        let mid = (lo * hi).sqrt();
        let dens = total as f64 / (samples.len() as f64 * (hi - lo));
        xs.push(mid.ln());
        ys.push(dens.ln());
        ws.push(total as f64);
    }
    if xs.len() < 4 {
        return Err(Error::InsufficientTailSamples { got: n_tail, need: 500 });
    }
    let (exponent, _) = weighted_linear_fit(&xs, &ys, &ws);

    // count-weighted skew ratio over bins with enough mass on both sides
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n_bins {
        let total = pos[i] + neg[i];
        if total < 10 {
            continue;
        }
        let ratio = (pos[i] as f64 - neg[i] as f64) / total as f64;
        num += ratio * total as f64;
        den += total as f64;
    }
    let skew_ratio = if den > 0.0 { num / den } else { f64::NAN };

    Ok(TailFit {
        exponent,
        skew_ratio,
        r_min,
        r_max,
        n_tail,
    })
}

/// Ordinary least squares slope/intercept.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let w = vec![1.0; x.len()];
    weighted_linear_fit(x, y, &w)
}

/// Weighted least squares slope/intercept.
pub fn weighted_linear_fit(x: &[f64], y: &[f64], w: &[f64]) -> (f64, f64) {
    assert!(x.len() == y.len() && x.len() == w.len() && x.len() >= 2);
    let sw: f64 = w.iter().sum();
    let mx: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my: f64 = y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..x.len() {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// 25th percentile, median, 75th percentile (linear interpolation).
/// Sorts in place. Returns NaNs for empty input.
pub fn quartiles(values: &mut [f64]) -> (f64, f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| {
        let idx = p * (values.len() - 1) as f64;
        let lo = idx.floor() as usize;
        let hi = idx.ceil() as usize;
        values[lo] + (values[hi] - values[lo]) * (idx - lo as f64)
    };
    (q(0.25), q(0.5), q(0.75))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::stable::{self, StableParams};
    use approx::assert_relative_eq;
    use rand::seq::SliceRandom;
    use rand::Rng;

    #[test]
    fn ecf_of_zeros_is_one() {
        let samples = vec![0.0; 100];
        let grid = [-1.0, 0.0, 0.5, 2.0];
        for v in ecf(&samples, &grid) {
            assert_relative_eq!(v.re, 1.0, epsilon = 1e-12);
            assert_relative_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ecf_gaussian_matches_analytic() {
        let mut rng = stream_rng(31, 0);
        let samples: Vec<f64> = (0..1_000_000)
            .map(|_| {
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                z * std::f64::consts::SQRT_2
            })
            .collect();
        let grid: Vec<f64> = (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect();
        let e = ecf(&samples, &grid);
        for (&k, v) in grid.iter().zip(&e) {
            assert!((v - Complex64::new((-k * k).exp(), 0.0)).norm() < 0.01);
        }
    }

    #[test]
    fn ecf_stable_sampler_cross_check() {
        let p = StableParams::new(1.5, 0.5, 1.0).unwrap();
        let mut rng = stream_rng(32, 0);
        let samples: Vec<f64> = (0..1_000_000).map(|_| stable::sample(&p, &mut rng)).collect();
        let grid: Vec<f64> = (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect();
        let e = ecf(&samples, &grid);
        let sup = grid
            .iter()
            .zip(&e)
            .map(|(&k, v)| (v - stable::characteristic_function(&p, k)).norm())
            .fold(0.0, f64::max);
        assert!(sup < 0.01, "sup {sup}");
    }

    #[test]
    fn ecf_conjugate_symmetric_and_one_at_zero() {
        let mut rng = stream_rng(33, 0);
        let samples: Vec<f64> = (0..1000).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        assert_eq!(ecf_at(&samples, 0.0), Complex64::new(1.0, 0.0));
        for k in [0.3, 1.7] {
            let a = ecf_at(&samples, k);
            let b = ecf_at(&samples, -k);
            assert!((a.conj() - b).norm() < 1e-12);
        }
    }

    #[test]
    fn acd_of_shuffled_series_vanishes_at_positive_lags() {
        let p = StableParams::new(1.6, 0.3, 1.0).unwrap();
        let realizations: Vec<Vec<f64>> = (0..40)
            .map(|i| {
                let mut rng = stream_rng(34, i);
                let mut v: Vec<f64> = (0..20_000).map(|_| stable::sample(&p, &mut rng)).collect();
                v.shuffle(&mut rng);
                v
            })
            .collect();
        let stats = acd_ensemble(&realizations, 1.0, &[5, 20]);
        for s in &stats {
            assert!(
                s.re_q25 <= 0.0 && s.re_q75 >= 0.0 || s.re_median.abs() < 0.05,
                "ACD at lag {} not consistent with 0: {s:?}",
                s.lag
            );
        }
    }

    #[test]
    fn acd_lag_zero_equals_self_codifference() {
        let mut rng = stream_rng(35, 0);
        let vals: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>() * 3.0 - 1.5).collect();
        let acd0 = acd_single(&vals, &[0])[0].value;
        let (cd, _) = codiff_cosum(&vals, &vals);
        assert!((acd0 - cd).norm() < 1e-12);
    }

    #[test]
    fn self_codifference_is_two_at_unit_scale() {
        let p = StableParams::new(1.5, 0.2, 1.0).unwrap();
        let mut rng = stream_rng(36, 0);
        let vals: Vec<f64> = (0..2_000_000).map(|_| stable::sample(&p, &mut rng)).collect();
        let (cd, _) = codiff_cosum(&vals, &vals);
        assert!((cd.re - 2.0).abs() < 0.05, "CD(Y,Y) = {cd}");
    }

    #[test]
    fn independent_pairs_have_vanishing_cd_cs() {
        let p = StableParams::new(1.5, 0.4, 1.0).unwrap();
        let mut cds = Vec::new();
        let mut css = Vec::new();
        for rep in 0..20 {
            let mut rng = stream_rng(37, rep);
            let a: Vec<f64> = (0..10_000).map(|_| stable::sample(&p, &mut rng)).collect();
            let b: Vec<f64> = (0..10_000).map(|_| stable::sample(&p, &mut rng)).collect();
            let (cd, cs) = codiff_cosum(&a, &b);
            cds.push(cd.norm());
            css.push(cs.norm());
        }
        let (_, cd_med, _) = quartiles(&mut cds);
        let (_, cs_med, _) = quartiles(&mut css);
        assert!(cd_med < 0.1, "median |CD| {cd_med}");
        assert!(cs_med < 0.1, "median |CS| {cs_med}");
    }

    #[test]
    fn histogram_heavy_tail_layout_and_density() {
        let spec = HistogramSpec::heavy_tail(2.0, 4, 32.0, 2);
        // edges: -32, -8, -2, -1, 0, 1, 2, 8, 32
        assert_eq!(spec.edges.len(), 9);
        assert_relative_eq!(spec.edges[0], -32.0, epsilon = 1e-12);
        assert_relative_eq!(spec.edges[1], -8.0, epsilon = 1e-12);
        let h = Histogram::build(&spec, &[0.5, 0.5, -0.5, 10.0, 100.0]);
        assert_eq!(h.n_in, 4);
        assert_eq!(h.n_out, 1);
        let total: f64 = (0..h.n_bins()).map(|i| h.density(i) * h.width(i)).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn histogram_l1_against_analytic_gaussian() {
        let mut rng = stream_rng(38, 0);
        let samples: Vec<f64> = (0..2_000_000)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let spec = HistogramSpec::heavy_tail(5.0, 100, 50.0, 10);
        let h = Histogram::build(&spec, &samples);
        let l1 = h.l1_vs_density(|x| (-(x * x) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt());
        assert!(l1 < 0.01, "L1 {l1}");
    }

    #[test]
    fn tail_fit_recovers_stable_index() {
        let p = StableParams::new(1.5, 0.0, 1.0).unwrap();
        let mut rng = stream_rng(39, 0);
        let samples: Vec<f64> = (0..10_000_000).map(|_| stable::sample(&p, &mut rng)).collect();
        let fit = tail_fit(&samples, 0.99).unwrap();
        assert!((fit.exponent + 2.5).abs() < 0.1, "exponent {}", fit.exponent);
        assert!(fit.skew_ratio.abs() < 0.05, "skew {}", fit.skew_ratio);
    }

    #[test]
    fn tail_fit_symmetrized_input_has_zero_skew() {
        let p = StableParams::new(1.5, 0.8, 1.0).unwrap();
        let mut rng = stream_rng(40, 0);
        let mut samples: Vec<f64> = (0..2_000_000).map(|_| stable::sample(&p, &mut rng)).collect();
        let mirrored: Vec<f64> = samples.iter().map(|x| -x).collect();
        samples.extend(mirrored);
        let fit = tail_fit(&samples, 0.99).unwrap();
        assert!(fit.skew_ratio.abs() < 0.02, "skew {}", fit.skew_ratio);
    }

    #[test]
    fn tail_fit_rejects_thin_samples() {
        let samples: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        assert!(matches!(
            tail_fit(&samples, 0.99),
            Err(Error::InsufficientTailSamples { .. })
        ));
    }

    #[test]
    fn quartiles_interpolate() {
        let mut v = vec![4.0, 1.0, 2.0, 3.0, 5.0];
        let (q25, med, q75) = quartiles(&mut v);
        assert_relative_eq!(q25, 2.0);
        assert_relative_eq!(med, 3.0);
        assert_relative_eq!(q75, 4.0);
    }

    #[test]
    fn weighted_fit_recovers_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let (slope, icept) = linear_fit(&x, &y);
        assert_relative_eq!(slope, 2.0, epsilon = 1e-12);
        assert_relative_eq!(icept, 1.0, epsilon = 1e-12);
    }
}
