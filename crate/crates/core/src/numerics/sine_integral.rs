use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

/// Sine integral `Si(x) = ∫₀ˣ sin(t)/t dt`.
///
/// Power series for `|x| <= 4`; beyond that, `Si(x) = π/2 + Im E₁(ix)` with
/// `E₁` from its continued fraction (modified Lentz).
pub fn sine_integral(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= 4.0 {
        series(ax)
    } else if ax.is_infinite() {
        FRAC_PI_2
    } else {
        FRAC_PI_2 + exp_integral_imaginary(ax).im
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn series(x: f64) -> f64 {
    // Σ (-1)^n x^{2n+1} / ((2n+1)(2n+1)!)
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 1usize;
    loop {
        let kf = (2 * k) as f64;
        term *= -x2 / (kf * (kf + 1.0));
        let contrib = term / (kf + 1.0);
        sum += contrib;
        if contrib.abs() <= 1e-17 * sum.abs() {
            return sum;
        }
        k += 1;
    }
}

/// `E₁(ix)` for `x > 4`.
fn exp_integral_imaginary(x: f64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    Complex64::from_polar(1.0, -x) * h
}
