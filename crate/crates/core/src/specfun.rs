//! Error functions on the real line, plus the formal complex evaluations
//! needed by the closed-form thermodynamics.
//!
//! `erf` and `erfc` delegate to `libm`. `erfi` has no common implementation,
//! so it is built here from its Maclaurin series (all terms positive, no
//! cancellation) and, beyond [`ERFI_SERIES_LIMIT`], from the asymptotic
//! expansion of the scaled function `exp(-x^2) erfi(x)` truncated at its
//! smallest term.
//!
//! The complex entry points only cover what the thermodynamic formulas reach:
//! the real axis, the imaginary axis, and a disc of radius
//! [`COMPLEX_SERIES_RADIUS`] around the origin.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used for formal evaluations. Components must stay finite.
pub type ComplexValue = Complex64;

/// Largest `|x|` for which `erfi(x)` is representable as an `f64`.
pub const ERFI_MAX_ARG: f64 = 26.5;

/// Crossover between the Maclaurin series and the asymptotic expansion.
pub const ERFI_SERIES_LIMIT: f64 = 5.5;

/// Radius of the disc where off-axis complex arguments are summed directly.
pub const COMPLEX_SERIES_RADIUS: f64 = 3.0;

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

fn finite(function: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: x,
            reason: "argument must be finite",
        })
    }
}

/// Error function.
pub fn erf(x: f64) -> Result<f64> {
    finite("erf", x)?;
    Ok(libm::erf(x))
}

/// Complementary error function, accurate in relative terms for large `x`.
pub fn erfc(x: f64) -> Result<f64> {
    finite("erfc", x)?;
    Ok(libm::erfc(x))
}

/// Imaginary error function `erfi(x) = -i erf(ix)`.
///
/// Fails with a range error for `|x| > ERFI_MAX_ARG`, where `exp(x^2)`
/// leaves the double range.
pub fn erfi(x: f64) -> Result<f64> {
    finite("erfi", x)?;
    let ax = x.abs();
    if ax > ERFI_MAX_ARG {
        return Err(Error::range("erfi argument", x, ERFI_MAX_ARG));
    }
    let magnitude = if ax <= ERFI_SERIES_LIMIT {
        erfi_series(ax)
    } else {
        (ax * ax).exp() * erfi_scaled_asymptotic(ax)
    };
    Ok(magnitude.copysign(x))
}

/// `exp(-x^2) erfi(x)` for `x >= 0`; finite for every finite `x`.
///
/// Equals `2/sqrt(pi)` times Dawson's integral.
pub fn erfi_scaled(x: f64) -> Result<f64> {
    finite("erfi_scaled", x)?;
    if x < 0.0 {
        return Err(Error::Domain {
            function: "erfi_scaled",
            value: x,
            reason: "argument must be non-negative",
        });
    }
    if x <= ERFI_SERIES_LIMIT {
        Ok((-x * x).exp() * erfi_series(x))
    } else {
        Ok(erfi_scaled_asymptotic(x))
    }
}

fn erfi_series(x: f64) -> f64 {
    // sum_k x^(2k+1) / (k! (2k+1))
    let x2 = x * x;
    let mut power = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        power *= x2 / k;
        let term = power / (2.0 * k + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    TWO_OVER_SQRT_PI * sum
}

fn erfi_scaled_asymptotic(x: f64) -> f64 {
    // 1/(x sqrt(pi)) * sum_k (2k-1)!! / (2x^2)^k, stopped at the smallest term
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0) * inv;
        if next >= term || next < sum * 1e-17 {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    sum / (x * PI.sqrt())
}

fn check_complex(function: &'static str, z: ComplexValue) -> Result<()> {
    finite(function, z.re)?;
    finite(function, z.im)
}

fn erf_series_complex(z: ComplexValue) -> ComplexValue {
    // sum_k (-1)^k z^(2k+1) / (k! (2k+1))
    let z2 = z * z;
    let mut power = z;
    let mut sum = z;
    let mut k = 0.0;
    loop {
        k += 1.0;
        power *= -z2 / k;
        let term = power / (2.0 * k + 1.0);
        sum += term;
        if term.norm() <= sum.norm() * 1e-17 || k > 500.0 {
            break;
        }
    }
    sum * TWO_OVER_SQRT_PI
}

/// Complementary error function at a complex argument.
///
/// On the imaginary axis this uses `erfc(iy) = 1 - i erfi(y)`; on the real
/// axis it is the real `erfc`; elsewhere the Maclaurin series is summed
/// inside `|z| <= COMPLEX_SERIES_RADIUS`.
pub fn erfc_formal(z: ComplexValue) -> Result<ComplexValue> {
    check_complex("erfc_formal", z)?;
    if z.im == 0.0 {
        return Ok(ComplexValue::new(erfc(z.re)?, 0.0));
    }
    if z.re == 0.0 {
        if z.im.abs() > ERFI_MAX_ARG {
            return Err(Error::range("erfc_formal imaginary part", z.im, ERFI_MAX_ARG));
        }
        return Ok(ComplexValue::new(1.0, -erfi(z.im)?));
    }
    if z.norm() > COMPLEX_SERIES_RADIUS {
        return Err(Error::range("erfc_formal |z| off the axes", z.norm(), COMPLEX_SERIES_RADIUS));
    }
    Ok(ComplexValue::new(1.0, 0.0) - erf_series_complex(z))
}

/// Imaginary error function at a complex argument, `erfi(z) = -i erf(iz)`.
///
/// Same coverage as [`erfc_formal`]; on the imaginary axis `erfi(iy) = i erf(y)`.
pub fn erfi_formal(z: ComplexValue) -> Result<ComplexValue> {
    check_complex("erfi_formal", z)?;
    if z.im == 0.0 {
        return Ok(ComplexValue::new(erfi(z.re)?, 0.0));
    }
    if z.re == 0.0 {
        return Ok(ComplexValue::new(0.0, erf(z.im)?));
    }
    if z.norm() > COMPLEX_SERIES_RADIUS {
        return Err(Error::range("erfi_formal |z| off the axes", z.norm(), COMPLEX_SERIES_RADIUS));
    }
    let iz = ComplexValue::new(-z.im, z.re);
    let erf_iz = erf_series_complex(iz);
    Ok(ComplexValue::new(erf_iz.im, -erf_iz.re))
}

/// Principal square root of a real number, imaginary for negative input.
pub fn principal_sqrt(x: f64) -> ComplexValue {
    if x >= 0.0 {
        ComplexValue::new(x.sqrt(), 0.0)
    } else {
        ComplexValue::new(0.0, (-x).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Taylor series oracle for erf, alternating form.
    fn erf_taylor(x: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 0..terms {
            if k > 0 {
                fact *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * x.powi(2 * k as i32 + 1) / (fact * (2 * k + 1) as f64);
        }
        sum * 2.0 / PI.sqrt()
    }

    fn erfi_taylor(x: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 0..terms {
            if k > 0 {
                fact *= k as f64;
            }
            sum += x.powi(2 * k as i32 + 1) / (fact * (2 * k + 1) as f64);
        }
        sum * 2.0 / PI.sqrt()
    }

    #[test]
    fn erf_examples() {
        assert_eq!(erf(0.0).unwrap(), 0.0);
        assert_eq!(erf(0.7).unwrap(), -erf(-0.7).unwrap());
        let oracle = erf_taylor(1.0, 40);
        assert!((oracle - 0.842700792949715).abs() < 1e-12);
        assert!((erf(1.0).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn erfc_examples() {
        assert_eq!(erfc(0.0).unwrap(), 1.0);
        assert!((erfc(1.3).unwrap() + erfc(-1.3).unwrap() - 2.0).abs() < 1e-15);
        let oracle = 1.0 - erf_taylor(2.0, 60);
        assert!((oracle - 0.004677734981063).abs() < 1e-12);
        assert!((erfc(2.0).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn erfc_large_argument_keeps_relative_accuracy() {
        // erfc(10) = 2.088487583762545e-45
        let v = erfc(10.0).unwrap();
        assert!(v > 0.0);
        assert!((v / 2.088487583762545e-45 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn erfi_examples() {
        assert_eq!(erfi(0.0).unwrap(), 0.0);
        assert_eq!(erfi(-2.1).unwrap(), -erfi(2.1).unwrap());
        let oracle = erfi_taylor(2.0, 60);
        assert!((oracle - 18.5648024145756).abs() < 1e-8);
        assert!((erfi(2.0).unwrap() - oracle).abs() < 1e-8);
    }

    #[test]
    fn erfi_range_error_carries_threshold() {
        match erfi(27.0) {
            Err(Error::Range { limit, value, .. }) => {
                assert_eq!(limit, ERFI_MAX_ARG);
                assert_eq!(value, 27.0);
            }
            other => panic!("expected range error, got {other:?}"),
        }
        assert!(erfi(26.5).unwrap().is_finite());
        assert!(erfi(-26.5).unwrap().is_finite());
    }

    #[test]
    fn erfi_scaled_examples() {
        assert_eq!(erfi_scaled(0.0).unwrap(), 0.0);
        let expected = erfi_taylor(2.0, 60) * (-4.0f64).exp();
        assert!((erfi_scaled(2.0).unwrap() - expected).abs() < 1e-8);
        let asym = 1.0 / (20.0 * PI.sqrt()) * (1.0 + 1.0 / 800.0);
        assert!((erfi_scaled(20.0).unwrap() - asym).abs() < 1e-6);
        assert!(matches!(erfi_scaled(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn non_finite_inputs_are_domain_errors() {
        for f in [erf, erfc, erfi, erfi_scaled] {
            assert!(matches!(f(f64::NAN), Err(Error::Domain { .. })));
            assert!(matches!(f(f64::INFINITY), Err(Error::Domain { .. })));
        }
        assert!(erfc_formal(ComplexValue::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn erfc_formal_examples() {
        let z = erfc_formal(ComplexValue::new(0.0, 0.0)).unwrap();
        assert_eq!(z, ComplexValue::new(1.0, 0.0));
        let z = erfc_formal(ComplexValue::new(0.0, 1.5)).unwrap();
        assert_eq!(z.re, 1.0);
        assert!((z.im + erfi(1.5).unwrap()).abs() < 1e-15);
        let y = 2.121320;
        let z = erfc_formal(ComplexValue::new(0.0, -y)).unwrap();
        assert_eq!(z.re, 1.0);
        assert!((z.im - erfi_taylor(y, 80)).abs() < 1e-9);
    }

    #[test]
    fn erfc_formal_off_axis_matches_series_and_limits() {
        // erf(1+i) = 1.3161512816979476 + 0.19045346923783471 i
        let z = erfc_formal(ComplexValue::new(1.0, 1.0)).unwrap();
        assert!((z.re - (1.0 - 1.3161512816979476)).abs() < 1e-12);
        assert!((z.im + 0.190_453_469_237_834_7).abs() < 1e-12);
        assert!(erfc_formal(ComplexValue::new(3.0, 3.0)).unwrap_err().is_range());
        assert!(erfc_formal(ComplexValue::new(0.0, 30.0)).unwrap_err().is_range());
    }

    #[test]
    fn erfi_formal_axes() {
        let z = erfi_formal(ComplexValue::new(0.0, 0.8)).unwrap();
        assert_eq!(z.re, 0.0);
        assert!((z.im - erf(0.8).unwrap()).abs() < 1e-15);
        let z = erfi_formal(ComplexValue::new(1.2, 0.0)).unwrap();
        assert!((z.re - erfi(1.2).unwrap()).abs() < 1e-15);
        // off-axis: erfi(z) = -i erf(iz); check against the real erf on a rotated point
        let w = erfi_formal(ComplexValue::new(0.5, 0.5)).unwrap();
        let e = erfc_formal(ComplexValue::new(-0.5, 0.5)).unwrap();
        let erf_iz = ComplexValue::new(1.0, 0.0) - e;
        assert!((w - ComplexValue::new(erf_iz.im, -erf_iz.re)).norm() < 1e-14);
    }

    #[test]
    fn principal_sqrt_of_negative_is_positive_imaginary() {
        let s = principal_sqrt(-4.0);
        assert_eq!(s, ComplexValue::new(0.0, 2.0));
        assert_eq!(principal_sqrt(9.0), ComplexValue::new(3.0, 0.0));
    }
}
