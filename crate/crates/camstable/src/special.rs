//! Gamma-function helpers used by the stationary-density normalization and
//! the generalized-CLT scale formula.

use num_complex::Complex64;
use std::f64::consts::PI;

// Lanczos approximation, g = 7, 9 coefficients. Accurate to ~1e-13 for
// Re z > 0.5.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal branch of log Gamma(z) for complex z with Re z > 0.
///
/// Arguments with Re z <= 0 are handled by the reflection formula; the
/// branch there is only reliable away from the poles, which is all the
/// callers in this crate need.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        let s = (PI * z).sin();
        return Complex64::new(PI, 0.0).ln() - s.ln() - ln_gamma_complex(Complex64::new(1.0, 0.0) - z);
    }
    let zm1 = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (zm1 + 0.5) * t.ln() - t + x.ln()
}

/// log Gamma(x) for real x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_complex(Complex64::new(x, 0.0)).re
}

/// Gamma(x) for real x > 0.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// |Gamma(a + i t)|^2 = Gamma(a + it) Gamma(a - it) for a > 0.
pub fn gamma_abs_sq(a: f64, t: f64) -> f64 {
    (2.0 * ln_gamma_complex(Complex64::new(a, t)).re).exp()
}

/// The product Gamma(1 - alpha) cos(pi alpha / 2) for alpha in (1, 2),
/// where both factors are negative and the product is positive.
///
/// Gamma(1 - alpha) is evaluated through the reflection identity
/// Gamma(alpha) Gamma(1 - alpha) = pi / sin(pi alpha) to avoid calling the
/// Lanczos series at negative arguments.
pub fn gamma_one_minus_times_cos_half(alpha: f64) -> f64 {
    assert!(alpha > 1.0 && alpha < 2.0, "alpha must be in (1, 2)");
    let gamma_one_minus = PI / ((PI * alpha).sin() * gamma(alpha));
    let out = gamma_one_minus * (PI * alpha / 2.0).cos();
    debug_assert!(out > 0.0);
    out
}
