use crate::{Error, Result};
use core::f64::consts::PI;

// B_{2k} / (2k (2k - 1)) for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

const SHIFT_TO: f64 = 12.0;

/// Natural logarithm of `Γ(x)` for `x > 0`.
///
/// Arguments below 12 are shifted up with the recurrence
/// `ln Γ(x) = ln Γ(x + n) - ln(x (x+1) ... (x+n-1))`, then the Stirling
/// series is summed through the `x^{-15}` term.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(alloc::format!(
            "log_gamma needs x > 0, got {x}"
        )));
    }
    let mut shifted = x;
    let mut prod = 1.0;
    let mut log_prod = 0.0;
    while shifted < SHIFT_TO {
        prod *= shifted;
        shifted += 1.0;
        if prod > 1e280 || prod < 1e-280 {
            log_prod += libm::log(prod);
            prod = 1.0;
        }
    }
    log_prod += libm::log(prod);
    Ok(stirling(shifted) - log_prod)
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * libm::log(x) - x + 0.5 * libm::log(2.0 * PI) + series
}

/// `ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        assert_relative_eq!(
            log_gamma(0.5).unwrap(),
            0.5 * libm::log(PI),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            log_gamma(6.0).unwrap(),
            libm::log(120.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            log_gamma(0.5).unwrap(),
            0.572_364_942_924_700_1,
            max_relative = 1e-13
        );
    }

    #[test]
    fn matches_libm_lgamma() {
        for i in 1..400 {
            let x = 0.013 * i as f64 * i as f64 / 10.0 + 1e-3;
            let ours = log_gamma(x).unwrap();
            let reference = libm::lgamma(x);
            assert!(
                (ours - reference).abs() <= 1e-13 * reference.abs().max(1.0),
                "x = {x}: {ours} vs {reference}"
            );
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn tiny_and_huge_arguments() {
        assert_relative_eq!(
            log_gamma(1e-10).unwrap(),
            libm::lgamma(1e-10),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            log_gamma(1e6).unwrap(),
            libm::lgamma(1e6),
            max_relative = 1e-14
        );
    }
}
