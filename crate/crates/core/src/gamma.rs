//! Euler gamma function.
//!
//! Lanczos approximation with g = 7 and nine coefficients, plus the
//! reflection formula below 1/2.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
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

/// Γ(x). Returns ±∞ at the poles (non-positive integers).
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// 1/Γ(x), which is entire: exactly zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    1.0 / gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integers_are_factorials() {
        let mut fact = 1.0;
        for n in 1..20 {
            assert_relative_eq!(gamma(n as f64), fact, max_relative = 1e-12);
            fact *= n as f64;
        }
    }

    #[test]
    fn half_integers() {
        let sqrt_pi = PI.sqrt();
        assert_relative_eq!(gamma(0.5), sqrt_pi, max_relative = 1e-13);
        assert_relative_eq!(gamma(1.5), sqrt_pi / 2.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(2.5), 0.75 * sqrt_pi, max_relative = 1e-13);
        assert_relative_eq!(gamma(-0.5), -2.0 * sqrt_pi, max_relative = 1e-13);
    }

    #[test]
    fn recurrence_holds_on_target_range() {
        let mut x = 0.1;
        while x < 29.0 {
            assert_relative_eq!(gamma(x + 1.0), x * gamma(x), max_relative = 1e-12);
            x += 0.37;
        }
    }

    #[test]
    fn poles() {
        assert!(gamma(0.0).is_infinite());
        assert!(gamma(-3.0).is_infinite());
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-2.0), 0.0);
        assert_relative_eq!(recip_gamma(0.5), 1.0 / PI.sqrt(), max_relative = 1e-13);
    }
}
