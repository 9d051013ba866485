//! Complex Euler gamma function (Lanczos approximation with reflection).

use alloc::format;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Whether `z` is a pole of Γ (a nonpositive integer, up to rounding).
pub fn is_pole(z: Complex64) -> bool {
    let r = libm::round(z.re);
    r <= 0.0 && (z.re - r).abs() < 1e-12 && z.im.abs() < 1e-12
}

/// `ln Γ(z)` on some branch; only its exponential is meaningful.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(COEFFS[0], 0.0);
    for (k, &c) in COEFFS.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    let t = z + (G + 0.5);
    Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::GammaPole { argument: (z.re, z.im), context: format!("Γ({z})") });
    }
    Ok(ln_gamma(z).exp())
}

/// `Γ(z)^k` with the pole reported under `context`.
pub fn gamma_pow(z: Complex64, k: i64, context: &str) -> Result<Complex64> {
    if k == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if is_pole(z) {
        return Err(Error::GammaPole { argument: (z.re, z.im), context: context.into() });
    }
    Ok((ln_gamma(z) * k as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert_relative_eq!(gamma(c(5.0, 0.0)).unwrap().re, 24.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(c(0.5, 0.0)).unwrap().re, PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(c(-0.5, 0.0)).unwrap().re, -2.0 * PI.sqrt(), max_relative = 1e-13);
        let g = gamma(c(1.0, 1.0)).unwrap();
        assert_relative_eq!(g.re, 0.498_015_668_118_356, max_relative = 1e-13);
        assert_relative_eq!(g.im, -0.154_949_828_301_810_7, max_relative = 1e-13);
        assert!(matches!(gamma(c(-2.0, 0.0)), Err(Error::GammaPole { .. })));
        assert!(matches!(gamma(c(0.0, 0.0)), Err(Error::GammaPole { .. })));
    }

    proptest! {
        #[test]
        fn recurrence(re in -4.5f64..6.0, im in -3.0f64..3.0) {
            let z = c(re, im);
            prop_assume!(!is_pole(z) && (z + 1.0).norm() > 1e-3 && z.norm() > 1e-3);
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1e-300));
        }

        #[test]
        fn reflection(re in 0.05f64..0.95, im in -2.0f64..2.0) {
            let z = c(re, im);
            let lhs = gamma(z).unwrap() * gamma(c(1.0, 0.0) - z).unwrap();
            let rhs = PI / (z * PI).sin();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }
    }
}
