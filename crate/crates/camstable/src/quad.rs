//! Small quadrature routines: tanh-sinh for finite intervals with endpoint
//! singularities, and refined trapezoid sums for smooth/oscillatory
//! integrands.

use crate::error::{Error, Result};

/// Tanh-sinh (double exponential) quadrature of `f` over `[a, b]`.
///
/// Converges quickly even when derivatives of `f` are singular at the
/// endpoints, which is the case for the stationary-density normalization
/// integrand `cos(xi)^(2 nu)` with non-integer `2 nu`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let c = 0.5 * (b - a);
    let g = |t: f64| {
        let (r, w) = de_node(t);
        if r == 0.0 {
            return 0.0;
        }
        // offset from the nearer endpoint, computed without cancellation
        let y = if t >= 0.0 { b - c * r } else { a + c * r };
        if y <= a.min(b) || y >= a.max(b) {
            0.0
        } else {
            w * f(y)
        }
    };

    let t_max = 4.0;
    let mut h = 1.0;
    let mut sum = g(0.0);
    // level 0: coarse trapezoid over t in [-t_max, t_max]
    let mut n = 1;
    while (n as f64) * h <= t_max {
        sum += g(n as f64 * h) + g(-(n as f64) * h);
        n += 1;
    }
    let mut prev = sum * h;

    for _level in 0..12 {
        h *= 0.5;
        // add midpoints
        let mut k = 1;
        let mut add = 0.0;
        while (k as f64) * h <= t_max {
            add += g(k as f64 * h) + g(-(k as f64) * h);
            k += 2;
        }
        sum += add;
        let cur = sum * h;
        if (cur - prev).abs() <= rel_tol * cur.abs().max(1e-300) {
            return Ok(c * cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "tanh-sinh did not reach relative tolerance {rel_tol:.1e}"
    )))
}

// Returns (1 - |tanh(s)|, weight) where s = (pi/2) sinh(t); the distance to
// the endpoint stays accurate where tanh itself would round to +-1.
#[inline]
fn de_node(t: f64) -> (f64, f64) {
    use std::f64::consts::FRAC_PI_2;
    let s = FRAC_PI_2 * t.sinh();
    let r = 2.0 / ((2.0 * s.abs()).exp() + 1.0);
    let w = FRAC_PI_2 * t.cosh() / s.cosh().powi(2);
    (r, w)
}

/// Trapezoid rule over `[a, b]`, refining by doubling the panel count until
/// two successive levels agree to `tol` (absolute + relative mix).
///
/// Suited to smooth integrands including moderately oscillatory ones such as
/// `Re[exp(-ikx) psi(k)]` in the stable-density inversion.
pub fn trapezoid_refine<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut n: usize = 64;
    let h0 = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n {
        sum += f(a + i as f64 * h0);
    }
    let mut prev = sum * h0;

    for _ in 0..18 {
        // midpoints of the current panels
        let h = (b - a) / n as f64;
        let mut add = 0.0;
        for i in 0..n {
            add += f(a + (i as f64 + 0.5) * h);
        }
        sum += add;
        n *= 2;
        let cur = sum * (b - a) / n as f64;
        if (cur - prev).abs() <= tol * (1.0 + cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "trapezoid refinement did not reach tolerance {tol:.1e} on [{a}, {b}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn tanh_sinh_polynomial() {
        let v = tanh_sinh(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // int_0^1 x^(-1/2) dx = 2, integrand unbounded at 0
        let v = tanh_sinh(|x| x.powf(-0.5), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn tanh_sinh_fractional_power_of_cosine() {
        // int_{-pi/2}^{pi/2} cos(xi)^(2 nu) dxi = sqrt(pi) Gamma(nu + 1/2) / Gamma(nu + 1)
        let nu = 0.3;
        let expected = PI.sqrt() * crate::special::gamma(nu + 0.5) / crate::special::gamma(nu + 1.0);
        let v = tanh_sinh(|xi| xi.cos().powf(2.0 * nu), -PI / 2.0, PI / 2.0, 1e-12).unwrap();
        assert_relative_eq!(v, expected, epsilon = 1e-10);
    }

    #[test]
    fn trapezoid_oscillatory() {
        // int_0^10 cos(7 k) exp(-k) dk
        let v = trapezoid_refine(|k: f64| (7.0 * k).cos() * (-k).exp(), 0.0, 10.0, 1e-10).unwrap();
        let expected = (1.0 - (-10.0_f64).exp() * ((70.0_f64).cos() - 7.0 * (70.0_f64).sin())) / 50.0;
        assert_relative_eq!(v, expected, epsilon = 1e-8);
    }
}
