//! Ornstein-Uhlenbeck-type process driven by an alpha-stable Levy process
//! (OULP): `dz = -(theta/eps) z dt + sigma_z dL(alpha, beta)` on the fast
//! timescale, its stationary and time-integral characteristic functions, the
//! analytic autocodifference, and the parameter matching that makes its
//! integral agree with the integral of a CAM noise process.

use crate::cam::{self, CamParams};
use crate::error::{Error, Result};
use crate::stable::{self, StableParams};
use crate::traj::Trajectory;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Parameters of the stable-driven OU process.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OulpParams {
    /// Mean-reversion rate, `> 0`.
    pub theta: f64,
    /// Amplitude of the driving stable noise, `>= 0`.
    pub sigma_z: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl OulpParams {
    pub fn new(theta: f64, sigma_z: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "theta must be positive and finite, got {theta}"
            )));
        }
        if !(sigma_z.is_finite() && sigma_z >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma_z must be nonnegative and finite, got {sigma_z}"
            )));
        }
        // reuse the stable-law checks on (alpha, beta)
        StableParams::new(alpha, beta, 1.0)?;
        Ok(OulpParams { theta, sigma_z, alpha, beta })
    }

    /// Scale of the stationary law: `sigma_z / (alpha theta)^(1/alpha)`.
    pub fn stationary_scale(&self) -> f64 {
        self.sigma_z / (self.alpha * self.theta).powf(1.0 / self.alpha)
    }

    /// Stationary law of `z`, a stable law with the same index and skewness.
    pub fn stationary_law(&self) -> Result<StableParams> {
        StableParams::new(self.alpha, self.beta, self.stationary_scale())
    }
}

/// Characteristic function of the stationary law.
pub fn stationary_cf(p: &OulpParams, k: f64) -> Complex64 {
    let scale = p.stationary_scale();
    if k == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    (-(scale * k.abs()).powf(p.alpha) * stable::xi_factor(k, p.alpha, p.beta)).exp()
}

/// Characteristic function of the pathwise time integral
/// `v(t) = int_0^t z_{s/eps} ds` started from `z(0) = z0`:
/// `psi_v(m, t) = exp[ i eps m z0 / theta (1 - e^(-theta t / eps))
///   - eps^(alpha-1) sigma_z^alpha t / theta^alpha |m|^alpha Xi(m) ]`.
pub fn integral_cf(p: &OulpParams, eps: f64, z0: f64, m: f64, t: f64) -> Complex64 {
    if m == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let mean_phase = eps * m * z0 / p.theta * (1.0 - (-p.theta * t / eps).exp());
    let amp = eps.powf(p.alpha - 1.0) * p.sigma_z.powf(p.alpha) * t / p.theta.powf(p.alpha)
        * m.abs().powf(p.alpha);
    (Complex64::new(0.0, mean_phase) - amp * stable::xi_factor(m, p.alpha, p.beta)).exp()
}

/// Analytic autocodifference of the stationary OULP at lag `tau >= 0`
/// (arguments of the characteristic functions fixed at 1):
/// `ACD(tau) = sigma_z^alpha / (alpha theta) * { 1 + e^(-alpha theta tau)
///   - |1 - e^(-theta tau)|^alpha
///   - i beta tan(pi alpha / 2) [ (1 - e^(-alpha theta tau))
///   - |1 - e^(-theta tau)|^alpha ] }`.
pub fn acd_analytic(p: &OulpParams, tau: f64) -> Result<Complex64> {
    let pp = StableParams::new(p.alpha, p.beta, 1.0)?;
    if pp.has_log_branch() {
        return Err(Error::InvalidParameter(
            "analytic autocodifference is not available at alpha = 1".into(),
        ));
    }
    let a = p.alpha;
    let e1 = (-p.theta * tau).exp();
    let ea = (-a * p.theta * tau).exp();
    let s = (1.0 - e1).abs().powf(a);
    let re = 1.0 + ea - s;
    let im = -p.beta * (std::f64::consts::FRAC_PI_2 * a).tan() * ((1.0 - ea) - s);
    Ok(p.sigma_z.powf(a) / (a * p.theta) * Complex64::new(re, im))
}

/// OULP parameters matched to a CAM noise process so that time integrals of
/// the two agree weakly: `theta = nu E^2 = |L + E^2/2|`, `sigma_z = Sigma
/// theta`, with the index and skewness of the CAM attracting law.
pub fn match_from_cam(p: &CamParams, sigma_big: f64) -> Result<OulpParams> {
    let d = cam::derive(p)?;
    let theta = d.nu * p.e * p.e;
    OulpParams::new(theta, sigma_big * theta, d.alpha_star, d.beta_star)
}

/// Euler-Maruyama path of the fast OULP `z_{t/eps}` sampled every `dt` of
/// slow time. Records a warning when `dt > eps/(10 theta)`, the resolution
/// rule for the fast relaxation.
pub fn simulate<R: Rng + ?Sized>(
    p: &OulpParams,
    eps: f64,
    z0: f64,
    dt: f64,
    n_steps: usize,
    rng: &mut R,
) -> Trajectory {
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut z = z0;
    values.push(z);
    // standard stable increment scaled by sigma_z (dt/eps)^(1/alpha)
    let incr_scale = p.sigma_z * (dt / eps).powf(1.0 / p.alpha);
    for _ in 0..n_steps {
        let xi = stable::sample_standard(p.alpha, p.beta, rng);
        z += -(p.theta / eps) * z * dt + incr_scale * xi;
        values.push(z);
    }
    let mut traj = Trajectory::new(0.0, dt, values);
    if dt > eps / (10.0 * p.theta) {
        traj.warnings.push(format!(
            "step {dt} exceeds eps/(10 theta) = {}; fast relaxation under-resolved",
            eps / (10.0 * p.theta)
        ));
    }
    traj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::stats;
    use approx::assert_relative_eq;

    fn demo() -> OulpParams {
        OulpParams::new(1.0, 0.5, 1.5, 0.3).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(OulpParams::new(0.0, 1.0, 1.5, 0.0).is_err());
        assert!(OulpParams::new(1.0, -1.0, 1.5, 0.0).is_err());
        assert!(OulpParams::new(1.0, 1.0, 2.5, 0.0).is_err());
        assert!(OulpParams::new(1.0, 1.0, 1.5, 1.5).is_err());
    }

    #[test]
    fn noiseless_path_decays_geometrically() {
        let p = OulpParams::new(2.0, 0.0, 1.5, 0.0).unwrap();
        let mut rng = stream_rng(50, 0);
        let dt = 0.01;
        let traj = simulate(&p, 1.0, 3.0, dt, 100, &mut rng);
        for (i, &v) in traj.values.iter().enumerate() {
            assert_relative_eq!(v, 3.0 * (1.0 - 2.0 * dt).powi(i as i32), epsilon = 1e-12);
        }
    }

    #[test]
    fn stationary_ecf_matches_analytic() {
        let p = demo();
        let dt = 0.02;
        let mut samples = Vec::new();
        for stream in 0..8 {
            let mut rng = stream_rng(51, stream);
            let traj = simulate(&p, 1.0, 0.0, dt, 200_000, &mut rng);
            samples.extend_from_slice(traj.tail_from(2_000));
        }
        let grid: Vec<f64> = (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect();
        let e = stats::ecf(&samples, &grid);
        let sup = grid
            .iter()
            .zip(&e)
            .map(|(&k, v)| (v - stationary_cf(&p, k)).norm())
            .fold(0.0, f64::max);
        assert!(sup < 0.02, "sup distance {sup}");
    }

    #[test]
    fn gaussian_case_has_exact_stationary_variance() {
        let p = OulpParams::new(1.5, 0.8, 2.0, 0.0).unwrap();
        let mut rng = stream_rng(52, 0);
        let dt = 0.01;
        let traj = simulate(&p, 1.0, 0.0, dt, 2_000_000, &mut rng);
        let tail = traj.tail_from(5_000);
        let var: f64 = tail.iter().map(|v| v * v).sum::<f64>() / tail.len() as f64;
        // stable scale sigma at alpha = 2 means variance 2 sigma^2 = sigma_z^2 / theta
        let expected = p.sigma_z * p.sigma_z / p.theta;
        assert!((var / expected - 1.0).abs() < 0.05, "var {var} vs {expected}");
    }

    #[test]
    fn acd_endpoints() {
        let p = demo();
        let at0 = acd_analytic(&p, 0.0).unwrap();
        assert_relative_eq!(
            at0.re,
            2.0 * p.sigma_z.powf(p.alpha) / (p.alpha * p.theta),
            epsilon = 1e-12
        );
        assert_relative_eq!(at0.im, 0.0, epsilon = 1e-12);
        let far = acd_analytic(&p, 200.0).unwrap();
        assert!(far.norm() < 1e-10);
    }

    #[test]
    fn acd_symmetric_case_is_real() {
        let p = OulpParams::new(0.7, 1.2, 1.4, 0.0).unwrap();
        for tau in [0.0, 0.3, 1.0, 4.0] {
            assert_relative_eq!(acd_analytic(&p, tau).unwrap().im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn acd_rejects_log_branch() {
        let p = OulpParams::new(1.0, 1.0, 1.0, 0.5).unwrap();
        assert!(acd_analytic(&p, 1.0).is_err());
    }

    #[test]
    fn empirical_acd_tracks_analytic() {
        let p = demo();
        let dt = 0.02;
        let realizations: Vec<Vec<f64>> = (0..40)
            .map(|stream| {
                let mut rng = stream_rng(53, stream);
                simulate(&p, 1.0, 0.0, dt, 60_000, &mut rng).tail_from(2_000).to_vec()
            })
            .collect();
        let lags: Vec<usize> = vec![0, 10, 25, 50, 100, 200];
        let est = stats::acd_ensemble(&realizations, dt, &lags);
        for s in &est {
            let exact = acd_analytic(&p, s.lag).unwrap();
            let spread = (s.re_q75 - s.re_q25).max(0.02);
            assert!(
                (s.re_median - exact.re).abs() < 3.0 * spread,
                "lag {}: median {} vs analytic {}",
                s.lag,
                s.re_median,
                exact.re
            );
        }
    }

    #[test]
    fn integral_cf_is_stable_law_in_disguise() {
        // with z0 = 0 the integral law is stable with scale
        // eps^(1-1/alpha) (sigma_z/theta) t^(1/alpha)
        let p = demo();
        let (eps, t): (f64, f64) = (0.01, 3.0);
        let scale = eps.powf(1.0 - 1.0 / p.alpha) * (p.sigma_z / p.theta) * t.powf(1.0 / p.alpha);
        let law = StableParams::new(p.alpha, p.beta, scale).unwrap();
        for i in 0..100 {
            let m = -5.0 + 0.1 * i as f64;
            let a = integral_cf(&p, eps, 0.0, m, t);
            let b = stable::characteristic_function(&law, m);
            assert!((a - b).norm() < 1e-12, "m = {m}: {a} vs {b}");
        }
    }

    #[test]
    fn integral_cf_initial_condition_enters_only_through_phase() {
        let p = demo();
        let with = integral_cf(&p, 0.1, 2.0, 0.7, 1.0);
        let without = integral_cf(&p, 0.1, 0.0, 0.7, 1.0);
        assert_relative_eq!(with.norm(), without.norm(), epsilon = 1e-12);
    }

    #[test]
    fn matching_preserves_index_and_integral_scale() {
        let cam = CamParams::new(-1.0, 1.118, 1.0, 0.3).unwrap();
        let d = cam::derive(&cam).unwrap();
        let sigma_big = 2.5;
        let p = match_from_cam(&cam, sigma_big).unwrap();
        assert_relative_eq!(p.alpha, d.alpha_star, epsilon = 1e-12);
        assert_relative_eq!(p.beta, d.beta_star, epsilon = 1e-12);
        assert_relative_eq!(p.theta, (cam.l + cam.e * cam.e / 2.0).abs(), epsilon = 1e-12);
        // integral scale per unit time is sigma_z / theta = Sigma
        assert_relative_eq!(p.sigma_z / p.theta, sigma_big, epsilon = 1e-12);
    }

    #[test]
    fn fast_step_warning() {
        let p = demo();
        let mut rng = stream_rng(54, 0);
        let traj = simulate(&p, 0.01, 0.0, 0.01, 10, &mut rng);
        assert!(!traj.warnings.is_empty());
    }
}
