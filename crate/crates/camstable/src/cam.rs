//! The linear CAM-noise process: a linear SDE driven by correlated additive
//! and multiplicative Gaussian white noise. Provides the derived
//! generalized-CLT reduction parameters, the analytic stationary density
//! with its normalization constant, the power-law tail coefficients, and a
//! weak order-2.0 explicit time integrator (plain and fast-time versions).

use crate::error::{Error, Result};
use crate::quad;
use crate::special;
use crate::traj::Trajectory;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Coefficients `(L, E, g, b)` of the CAM SDE
/// `dy = (L + E^2/2) y dt + (E y + g) dW1 + b dW2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CamParams {
    /// Drift rate, < 0.
    pub l: f64,
    /// Multiplicative noise amplitude, != 0.
    pub e: f64,
    /// Correlated additive amplitude.
    pub g: f64,
    /// Independent additive amplitude, != 0.
    pub b: f64,
}

impl CamParams {
    pub fn new(l: f64, e: f64, g: f64, b: f64) -> Result<Self> {
        for (name, v) in [("L", l), ("E", e), ("g", g), ("b", b)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if l >= 0.0 {
            return Err(Error::InvalidParameter(format!("L must be < 0, got {l}")));
        }
        if e == 0.0 || b == 0.0 {
            return Err(Error::InvalidParameter("E and b must be nonzero".into()));
        }
        let p = CamParams { l, e, g, b };
        if p.nu() <= 0.0 {
            return Err(Error::NoStationaryMean { nu: p.nu() });
        }
        Ok(p)
    }

    /// `nu = -(L/E^2 + 1/2)`; the stationary mean exists iff nu > 0 and the
    /// variance is infinite iff nu <= 1/2.
    pub fn nu(&self) -> f64 {
        -(self.l / (self.e * self.e) + 0.5)
    }

    /// Effective linear drift rate `L~ = L + E^2/2 = -nu E^2`.
    pub fn drift_rate(&self) -> f64 {
        self.l + 0.5 * self.e * self.e
    }

    /// True in the infinite-variance regime `0 < nu < 1/2` targeted by the
    /// alpha-stable reduction.
    pub fn infinite_variance(&self) -> bool {
        let nu = self.nu();
        nu > 0.0 && nu < 0.5
    }

    /// Characteristic relaxation time `1 / (nu E^2)` of the process.
    pub fn relaxation_time(&self) -> f64 {
        1.0 / self.drift_rate().abs()
    }
}

/// Parameters of the alpha-stable law attracting sums of stationary CAM
/// variates, plus the stationary-density normalization and tail weights.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CamDerived {
    pub nu: f64,
    /// Stability index `alpha* = 2 nu + 1 = -2L/E^2`, in (1, 2).
    pub alpha_star: f64,
    /// Skewness `beta* = tanh(pi g nu / b)`.
    pub beta_star: f64,
    /// Scale of the attracting stable law for normalized i.i.d. sums.
    pub sigma_star: f64,
    /// `gamma* = 1 - 1/alpha*`, the timescale-separation exponent.
    pub gamma_star: f64,
    /// Normalization constant of the stationary density.
    pub normalization: f64,
    /// Tail weights `h(+1)`, `h(-1)` of `p_s(y) ~ h(sgn y) |y|^-(2 nu + 2)`.
    pub h_plus: f64,
    pub h_minus: f64,
}

/// Closed-form normalization constant (complex-Gamma product form).
pub fn normalization_constant(p: &CamParams) -> Result<f64> {
    let nu = p.nu();
    if nu <= 0.0 {
        return Err(Error::NoStationaryMean { nu });
    }
    let t = p.g * nu / p.b;
    let n = 2.0 * PI * (2.0 * p.b.abs()).powf(-(2.0 * nu + 1.0)) * special::gamma(2.0 * nu + 1.0)
        / (p.e.abs() * special::gamma_abs_sq(nu + 1.0, t));
    Ok(n)
}

/// Normalization constant by quadrature of the arctangent-substituted
/// integral over `xi` in `[-pi/2, pi/2]`; cross-checks the closed form.
pub fn normalization_quadrature(p: &CamParams) -> Result<f64> {
    let nu = p.nu();
    if nu <= 0.0 {
        return Err(Error::NoStationaryMean { nu });
    }
    let c = 2.0 * p.g * nu / p.b;
    let integral = quad::tanh_sinh(
        |xi: f64| (c * xi).exp() * xi.cos().powf(2.0 * nu),
        -FRAC_PI_2,
        FRAC_PI_2,
        1e-12,
    )?;
    Ok(integral / (p.b.abs().powf(2.0 * nu + 1.0) * p.e.abs()))
}

/// Stationary density `p_s(y)` of the CAM process.
pub fn stationary_pdf_with_norm(p: &CamParams, norm: f64, y: f64) -> f64 {
    let nu = p.nu();
    let u = p.e * y + p.g;
    (u * u + p.b * p.b).powf(-(nu + 1.0)) * ((2.0 * p.g * nu / p.b) * (u / p.b).atan()).exp() / norm
}

/// Stationary density, computing the normalization on the fly.
pub fn stationary_pdf(p: &CamParams, y: f64) -> Result<f64> {
    Ok(stationary_pdf_with_norm(p, normalization_constant(p)?, y))
}

/// Tail weight `h(s) = exp(pi g nu s / b) / (N E^(2 nu + 2))` for s = +-1.
pub fn tail_coefficient(p: &CamParams, norm: f64, sign: f64) -> f64 {
    let nu = p.nu();
    (PI * p.g * nu * sign.signum() / p.b).exp() / (norm * p.e.abs().powf(2.0 * (nu + 1.0)))
}

/// Derives the attracting-stable-law parameters from the CAM coefficients.
///
/// Fails outside the infinite-variance regime: `nu >= 1/2` sums are
/// Gaussian-attracted and `nu <= 0` has no stationary mean.
pub fn derive(p: &CamParams) -> Result<CamDerived> {
    let nu = p.nu();
    if nu <= 0.0 {
        return Err(Error::NoStationaryMean { nu });
    }
    if nu >= 0.5 {
        return Err(Error::GaussianAttraction { nu });
    }
    let alpha_star = 2.0 * nu + 1.0;
    let beta_star = (PI * p.g * nu / p.b).tanh();
    let gamma_star = 1.0 - 1.0 / alpha_star;
    let normalization = normalization_constant(p)?;
    let h_plus = tail_coefficient(p, normalization, 1.0);
    let h_minus = tail_coefficient(p, normalization, -1.0);
    // (h+ + h-) Gamma(1 - alpha*) cos(pi alpha*/2) / alpha*, a product of two
    // negative factors; evaluated through the reflection identity so the
    // result is manifestly real and positive.
    let sigma_star =
        ((h_plus + h_minus) * special::gamma_one_minus_times_cos_half(alpha_star) / alpha_star)
            .powf(1.0 / alpha_star);
    debug_assert!(sigma_star > 0.0 && sigma_star.is_finite());
    Ok(CamDerived {
        nu,
        alpha_star,
        beta_star,
        sigma_star,
        gamma_star,
        normalization,
        h_plus,
        h_minus,
    })
}

/// One step of the weak order-2.0 explicit scheme.
///
/// `dw1`, `dw2` are the Gaussian increments of variance `dt`; `z` is the
/// standardized compensated increment, equal to `(dw1^2 - dt)/sqrt(dt)` in a
/// stochastic step and 0 in the zero-noise (deterministic Heun) limit.
pub fn weak_step(p: &CamParams, y: f64, dt: f64, dw1: f64, dw2: f64, z: f64) -> f64 {
    let lt = p.drift_rate();
    let sq = dt.sqrt();
    let gy = p.e * y + p.g;
    let base = y + lt * y * dt + p.b * dw2;
    let ups = base + gy * dw1;
    let ups_p = base + gy * sq;
    let ups_m = base - gy * sq;
    y + 0.5 * lt * (y + ups) * dt
        + 0.25 * (p.e * ups_p + 2.0 * p.e * y + p.e * ups_m + 4.0 * p.g) * dw1
        + 0.25 * p.e * (ups_p - ups_m) * z
        + p.b * dw2
}

/// Simulates `n_steps` steps of the CAM SDE; two independent Gaussian
/// increments of variance `dt` are consumed per step.
pub fn simulate<R: Rng + ?Sized>(
    p: &CamParams,
    y0: f64,
    dt: f64,
    n_steps: usize,
    rng: &mut R,
) -> Trajectory {
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut y = y0;
    values.push(y);
    let sq = dt.sqrt();
    for _ in 0..n_steps {
        let dw1 = sq * rng.sample::<f64, _>(StandardNormal);
        let dw2 = sq * rng.sample::<f64, _>(StandardNormal);
        y = weak_step(p, y, dt, dw1, dw2, (dw1 * dw1 - dt) / sq);
        values.push(y);
    }
    Trajectory::new(0.0, dt, values)
}

/// Coefficients of the fast-time process `y_{t/eps}`: drift scaled by
/// `1/eps`, noise amplitudes by `1/sqrt(eps)`. Leaves `nu` (and hence the
/// stationary law) unchanged.
pub fn fast_params(p: &CamParams, eps: f64) -> CamParams {
    let rs = eps.sqrt();
    CamParams {
        l: p.l / eps,
        e: p.e / rs,
        g: p.g / rs,
        b: p.b / rs,
    }
}

/// Simulates the fast process `y_{t/eps}` with time step `dt` (in slow time).
/// Records a warning when `dt > eps/10`, the resolution rule for the fast
/// dynamics.
pub fn simulate_fast<R: Rng + ?Sized>(
    p: &CamParams,
    eps: f64,
    y0: f64,
    dt: f64,
    n_steps: usize,
    rng: &mut R,
) -> Trajectory {
    let mut traj = simulate(&fast_params(p, eps), y0, dt, n_steps, rng);
    if dt > eps / 10.0 {
        traj.warnings.push(format!(
            "dt = {dt} exceeds eps/10 = {}; fast dynamics may be under-resolved",
            eps / 10.0
        ));
    }
    traj
}

/// Number of steps covering 20 relaxation e-folding times of the fast
/// process, used as the stationary-sampling burn-in.
pub fn burn_in_steps(p: &CamParams, eps: f64, dt: f64) -> usize {
    (20.0 * eps * p.relaxation_time() / dt).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::stats::{Histogram, HistogramSpec};
    use approx::assert_relative_eq;

    fn fig1_left() -> CamParams {
        CamParams::new(-1.0, 1.0541, -0.1, 0.5).unwrap()
    }

    fn fig1_right() -> CamParams {
        CamParams::new(-1.0, 1.118, 1.0, 0.3).unwrap()
    }

    #[test]
    fn derive_matches_reported_parameter_sets() {
        let d = derive(&fig1_left()).unwrap();
        assert!((d.alpha_star - 1.8).abs() < 1e-3, "alpha* {}", d.alpha_star);
        assert!((d.beta_star + 0.25).abs() < 5e-3, "beta* {}", d.beta_star);

        let d = derive(&fig1_right()).unwrap();
        assert!((d.alpha_star - 1.6).abs() < 1e-3, "alpha* {}", d.alpha_star);
        assert!((d.beta_star - 0.996).abs() < 5e-4, "beta* {}", d.beta_star);
    }

    #[test]
    fn beta_star_vanishes_with_g() {
        let p = CamParams::new(-1.0, 1.118, 1e-9, 0.3).unwrap();
        let d = derive(&p).unwrap();
        assert!(d.beta_star.abs() < 1e-8);
    }

    #[test]
    fn derive_rejects_out_of_regime() {
        // nu >= 1/2: -L/E^2 >= 1, e.g. L = -1, E = 1
        let p = CamParams { l: -1.0, e: 1.0, g: 0.1, b: 0.5 };
        assert!(matches!(derive(&p), Err(Error::GaussianAttraction { .. })));
        // nu <= 0: -L/E^2 <= 1/2
        let p = CamParams { l: -1.0, e: 2.0, g: 0.1, b: 0.5 };
        assert!(matches!(derive(&p), Err(Error::NoStationaryMean { .. })));
        assert!(CamParams::new(-1.0, 2.0, 0.1, 0.5).is_err());
    }

    #[test]
    fn normalization_closed_form_equals_quadrature() {
        for p in [fig1_left(), fig1_right()] {
            let closed = normalization_constant(&p).unwrap();
            let numeric = normalization_quadrature(&p).unwrap();
            assert_relative_eq!(closed, numeric, max_relative = 1e-9);
        }
    }

    #[test]
    fn normalization_symmetric_case_reduces() {
        // g = 0: the integral is even and the exponential factor is 1
        let p = CamParams::new(-1.0, 1.0541, 0.0, 0.5).unwrap();
        let nu = p.nu();
        let expected = quad::tanh_sinh(
            |xi: f64| xi.cos().powf(2.0 * nu),
            -FRAC_PI_2,
            FRAC_PI_2,
            1e-12,
        )
        .unwrap()
            / (p.b.powf(2.0 * nu + 1.0) * p.e);
        assert_relative_eq!(normalization_constant(&p).unwrap(), expected, max_relative = 1e-9);
    }

    #[test]
    fn stationary_pdf_integrates_to_one() {
        // integral of p_s equals N_quadrature / N_closed
        for p in [fig1_left(), fig1_right()] {
            let ratio = normalization_quadrature(&p).unwrap() / normalization_constant(&p).unwrap();
            assert!((ratio - 1.0).abs() < 1e-6, "integral {ratio}");
        }
    }

    #[test]
    fn stationary_pdf_symmetric_when_g_zero() {
        let p = CamParams::new(-0.8, 1.0, 0.0, 1.0).unwrap();
        let norm = normalization_constant(&p).unwrap();
        for y in [0.1, 0.5, 2.0, 17.0] {
            let lhs = stationary_pdf_with_norm(&p, norm, y);
            let rhs = stationary_pdf_with_norm(&p, norm, -y);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn tail_law_reached_far_out() {
        let p = fig1_left();
        let norm = normalization_constant(&p).unwrap();
        let nu = p.nu();
        let y = 100.0 * p.g.abs().max(p.b) / p.e.abs() * 10.0;
        for sign in [1.0, -1.0] {
            let h = tail_coefficient(&p, norm, sign);
            let ratio = stationary_pdf_with_norm(&p, norm, sign * y) * y.powf(2.0 * (nu + 1.0)) / h;
            assert!((ratio - 1.0).abs() < 0.01, "tail ratio {ratio} at sign {sign}");
        }
    }

    #[test]
    fn tail_ratio_identity_is_beta_star() {
        // [h(+1) - h(-1)] / [h(+1) + h(-1)] = tanh(pi g nu / b) algebraically
        for p in [fig1_left(), fig1_right(), CamParams::new(-1.0, 1.2, 0.4, 0.6).unwrap()] {
            let norm = normalization_constant(&p).unwrap();
            let hp = tail_coefficient(&p, norm, 1.0);
            let hm = tail_coefficient(&p, norm, -1.0);
            let lhs = (hp - hm) / (hp + hm);
            let rhs = (PI * p.g * p.nu() / p.b).tanh();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn partial_invariances_of_derive() {
        let base = fig1_right();
        let d0 = derive(&base).unwrap();
        // alpha* depends only on L/E^2
        let scaled = CamParams::new(base.l * 3.0, base.e * 3.0f64.sqrt(), 0.7, 0.9).unwrap();
        assert_relative_eq!(derive(&scaled).unwrap().alpha_star, d0.alpha_star, epsilon = 1e-12);
        // beta* depends only on g nu / b: rescale (g, b) jointly
        let joint = CamParams::new(base.l, base.e, base.g * 2.5, base.b * 2.5).unwrap();
        assert_relative_eq!(derive(&joint).unwrap().beta_star, d0.beta_star, epsilon = 1e-12);
        // gamma* = 1 - 1/alpha* in (0, 1/2)
        assert!(d0.gamma_star > 0.0 && d0.gamma_star < 0.5);
        assert_relative_eq!(d0.gamma_star, 1.0 - 1.0 / d0.alpha_star, epsilon = 1e-15);
    }

    #[test]
    fn sigma_star_real_positive_across_regime() {
        for &(l, e) in &[(-1.0, 1.0541), (-1.0, 1.118), (-1.0, 1.362), (-1.0, 1.195)] {
            let p = CamParams::new(l, e, 0.25, 0.4).unwrap();
            let d = derive(&p).unwrap();
            assert!(d.sigma_star > 0.0 && d.sigma_star.is_finite());
        }
    }

    #[test]
    fn zero_noise_step_is_deterministic_heun() {
        let p = fig1_left();
        let lt = p.drift_rate();
        let dt = 0.05;
        for y in [-2.0, 0.0, 0.7, 3.0] {
            let ups = y + lt * y * dt;
            let heun = y + 0.5 * lt * (y + ups) * dt;
            assert_relative_eq!(weak_step(&p, y, dt, 0.0, 0.0, 0.0), heun, epsilon = 1e-14);
        }
    }

    /// Conditional mean/second moment of one scheme step by Gaussian-weighted
    /// quadrature over (dw1, dw2); independent of the simulation path.
    fn scheme_moments(p: &CamParams, y: f64, dt: f64) -> (f64, f64) {
        let n = 401;
        let half = 8.0;
        let sq = dt.sqrt();
        let h = 2.0 * half / (n - 1) as f64;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let mut wsum = 0.0;
        for i in 0..n {
            let u1 = -half + i as f64 * h;
            let w1 = (-0.5 * u1 * u1).exp();
            for j in 0..n {
                let u2 = -half + j as f64 * h;
                let w = w1 * (-0.5 * u2 * u2).exp();
                let dw1 = sq * u1;
                let dw2 = sq * u2;
                let ynext = weak_step(p, y, dt, dw1, dw2, (dw1 * dw1 - dt) / sq);
                m1 += w * ynext;
                m2 += w * ynext * ynext;
                wsum += w;
            }
        }
        (m1 / wsum, m2 / wsum)
    }

    /// Exact conditional moments of the SDE via the closed moment ODEs.
    fn sde_moments(p: &CamParams, y: f64, dt: f64) -> (f64, f64) {
        let lt = p.drift_rate();
        let m1 = y * (lt * dt).exp();
        // d<y^2>/dt = (2 L~ + E^2) <y^2> + 2 E g <y> + g^2 + b^2, solved with RK4
        let a = 2.0 * lt + p.e * p.e;
        let f = |t: f64, m2: f64| a * m2 + 2.0 * p.e * p.g * y * (lt * t).exp() + p.g * p.g + p.b * p.b;
        let n = 4000;
        let h = dt / n as f64;
        let mut m2 = y * y;
        let mut t = 0.0;
        for _ in 0..n {
            let k1 = f(t, m2);
            let k2 = f(t + 0.5 * h, m2 + 0.5 * h * k1);
            let k3 = f(t + 0.5 * h, m2 + 0.5 * h * k2);
            let k4 = f(t + h, m2 + h * k3);
            m2 += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
        }
        (m1, m2)
    }

    #[test]
    fn weak_step_moments_match_sde() {
        let p = fig1_left();
        let y = 0.8;
        let mut errs = Vec::new();
        for &dt in &[0.04, 0.02] {
            let (s1, s2) = scheme_moments(&p, y, dt);
            let (e1, e2) = sde_moments(&p, y, dt);
            errs.push(((s1 - e1).abs(), s2 - e2));
        }
        // mean: one-step error is O(dt^3), ratio ~ 8 on halving
        let r1 = errs[0].0 / errs[1].0;
        assert!(r1 > 5.0, "mean error ratio {r1} ({errs:?})");
        // second moment: the scheme carries the cross term (E/2) b dW1 dW2
        // without a Levy-area substitute, leaving a one-step variance defect
        // of -(E^2 b^2 / 4) dt^2 + O(dt^3); check the coefficient directly
        for (&dt, &(_, d2)) in [0.04, 0.02].iter().zip(&errs) {
            let predicted = -0.25 * p.e * p.e * p.b * p.b * dt * dt;
            assert!(
                (d2 / predicted - 1.0).abs() < 0.25,
                "variance defect {d2} vs predicted {predicted} at dt {dt}"
            );
        }
    }

    #[test]
    fn long_run_histogram_matches_stationary_pdf() {
        let p = fig1_left();
        let dt = 0.1; // eps = 1, dt = eps/10
        let mut rng = stream_rng(101, 0);
        let burn = burn_in_steps(&p, 1.0, dt);
        let traj = simulate(&p, 0.0, dt, burn + 4_000_000, &mut rng);
        let spec = HistogramSpec::heavy_tail(8.0, 200, 1e6, 40);
        let hist = Histogram::build(&spec, traj.tail_from(burn));
        let norm = normalization_constant(&p).unwrap();
        let l1 = hist.l1_vs_density(|y| stationary_pdf_with_norm(&p, norm, y));
        assert!(l1 < 0.05, "L1 {l1}");
    }

    #[test]
    fn fast_simulation_with_unit_eps_is_identity() {
        let p = fig1_right();
        let a = simulate(&p, 0.3, 0.05, 200, &mut stream_rng(7, 3));
        let b = simulate_fast(&p, 1.0, 0.3, 0.05, 200, &mut stream_rng(7, 3));
        assert_eq!(a.values, b.values);
        assert!(b.warnings.is_empty());
    }

    #[test]
    fn fast_simulation_stationary_law_independent_of_eps() {
        let p = fig1_left();
        let spec = HistogramSpec::heavy_tail(8.0, 100, 1e6, 30);
        let mut hists = Vec::new();
        for (i, &eps) in [1.0, 1e-2].iter().enumerate() {
            let dt = eps / 10.0;
            let burn = burn_in_steps(&p, eps, dt);
            let mut rng = stream_rng(103, i as u64);
            let traj = simulate_fast(&p, eps, 0.0, dt, burn + 2_000_000, &mut rng);
            hists.push(Histogram::build(&spec, traj.tail_from(burn)));
        }
        let l1 = hists[0].l1_distance(&hists[1]);
        assert!(l1 < 0.02, "L1 {l1}");
    }

    #[test]
    fn fast_step_warning_recorded() {
        let p = fig1_left();
        let t = simulate_fast(&p, 0.01, 0.0, 0.01, 10, &mut stream_rng(1, 0));
        assert_eq!(t.warnings.len(), 1);
    }
}
