use std::f64::consts::FRAC_1_SQRT_2;

use errorfunctions::{ComplexErrorFunctions, RealErrorFunctions};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex amplitude type used throughout the crate.
pub type ComplexValue = Complex64;

/// Arguments beyond this modulus are handled through the Faddeeva
/// asymptotics only; the series region never sees them.
const SERIES_LIMIT: f64 = 30.0;

/// Faddeeva function `w(z) = exp(-z²) erfc(-iz)`.
///
/// Backed by the `errorfunctions` port of the Faddeeva package, which uses
/// the Laplace continued fraction for large `|z|` and a rapidly convergent
/// exponential sum elsewhere.
pub fn faddeeva(z: Complex64) -> Complex64 {
    ComplexErrorFunctions::w(z)
}

/// Error function of a complex argument.
///
/// Odd and conjugate-symmetric to the last bit: the value is computed for
/// the representative in the closed first quadrant and mapped back.
pub fn complex_erf(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite { op: "complex_erf" });
    }
    let flip_re = z.re.is_sign_negative();
    let flip_im = z.im.is_sign_negative();
    let q = Complex64::new(z.re.abs(), z.im.abs());
    let v = if q.norm() > SERIES_LIMIT && q.re > q.im {
        // erf saturates toward +1 inside the right-hand sector.
        Complex64::new(1.0, 0.0) - ComplexErrorFunctions::erfc(q)
    } else {
        ComplexErrorFunctions::erf(q)
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite { op: "complex_erf" });
    }
    let mut v = v;
    if flip_im {
        v = v.conj();
    }
    if flip_re {
        // erf(-conj q) = -conj erf(q) composed with the conjugation above
        v = -v.conj();
    }
    Ok(v)
}

/// Complementary error function for `Re z >= 0`, where it is bounded.
pub fn complex_erfc(z: Complex64) -> Complex64 {
    ComplexErrorFunctions::erfc(z)
}

/// Real error function.
pub fn erf_real(x: f64) -> f64 {
    RealErrorFunctions::erf(x)
}

/// Principal square root of `i·beta`: phase `+π/4` for `beta > 0` and
/// `-π/4` for `beta < 0`.
pub fn principal_sqrt_i(beta: f64) -> Complex64 {
    let m = beta.abs().sqrt() * FRAC_1_SQRT_2;
    if beta >= 0.0 {
        Complex64::new(m, m)
    } else {
        Complex64::new(m, -m)
    }
}
