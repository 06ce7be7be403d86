use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

use super::quadrature::cached_rule;

// Below SERIES_MAX the Maclaurin series loses at most exp(πu²/2) ≈ 535 ulps.
const SERIES_MAX: f64 = 2.0;
// Above ASYMPTOTIC_MIN the auxiliary expansion has converged far below one ulp.
const ASYMPTOTIC_MIN: f64 = 6.0;

/// Fresnel integrals `C(u) = ∫₀ᵘ cos(πt²/2) dt` and `S(u) = ∫₀ᵘ sin(πt²/2) dt`.
///
/// Computed independently of the complex error function: Maclaurin series
/// near the origin, the large-argument expansion of the complementary
/// integral far out, and composite Gauss–Legendre panels in between.
pub fn fresnel_cs(u: f64) -> Result<(f64, f64)> {
    if !u.is_finite() {
        return Err(Error::NonFinite { op: "fresnel_cs" });
    }
    let x = u.abs();
    let (c, s) = if x <= SERIES_MAX {
        series(x)
    } else if x >= ASYMPTOTIC_MIN {
        asymptotic(x)
    } else {
        let (c0, s0) = series(SERIES_MAX);
        let (dc, ds) = panels(SERIES_MAX, x);
        (c0 + dc, s0 + ds)
    };
    Ok(if u < 0.0 { (-c, -s) } else { (c, s) })
}

fn series(x: f64) -> (f64, f64) {
    // C = Σ (-1)^n (π/2)^{2n} x^{4n+1} / ((2n)! (4n+1))
    // S = Σ (-1)^n (π/2)^{2n+1} x^{4n+3} / ((2n+1)! (4n+3))
    let z = FRAC_PI_2 * x * x;
    let mut c = 0.0;
    let mut s = 0.0;
    // term_k = z^k / k!
    let mut term = 1.0;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let contrib = term * x / (2.0 * kf + 1.0);
        match k % 4 {
            0 => c += contrib,
            1 => s += contrib,
            2 => c -= contrib,
            _ => s -= contrib,
        }
        if contrib.abs() < 1e-18 * (c.abs() + s.abs()).max(1e-300) && k > 2 {
            break;
        }
        k += 1;
        term *= z / k as f64;
    }
    (c, s)
}

fn asymptotic(x: f64) -> (f64, f64) {
    // ∫ₓ^∞ e^{iπt²/2} dt = -e^{iπx²/2} Σ (2n-1)!! / ((iπ)^{n+1} x^{2n+1})
    let inv = 1.0 / (PI * x * x);
    let mut sum_re = 0.0;
    let mut sum_im = 0.0;
    // coefficient of 1/(iπ x²)^n, times 1/(iπ x)
    let mut mag = 1.0 / (PI * x);
    let mut n = 0usize;
    loop {
        // (1/i)^{n+1} cycles through -i, -1, i, 1
        match n % 4 {
            0 => sum_im -= mag,
            1 => sum_re -= mag,
            2 => sum_im += mag,
            _ => sum_re += mag,
        }
        let next = mag * (2 * n + 1) as f64 * inv;
        if next < 1e-18 / (PI * x) || next > mag {
            break;
        }
        mag = next;
        n += 1;
    }
    let phase = FRAC_PI_2 * x * x;
    let (sp, cp) = phase.sin_cos();
    // tail = -(cos + i sin)(sum)
    let tail_re = -(cp * sum_re - sp * sum_im);
    let tail_im = -(cp * sum_im + sp * sum_re);
    (0.5 - tail_re, 0.5 - tail_im)
}

fn panels(from: f64, to: f64) -> (f64, f64) {
    // local phase gradient is πt, so a panel of width 1/t spans about π radians
    let rule = cached_rule(24);
    let mut c = 0.0;
    let mut s = 0.0;
    let mut left = from;
    while left < to {
        let right = (left + 1.0 / left).min(to);
        let half = 0.5 * (right - left);
        let mid = 0.5 * (right + left);
        for (node, weight) in rule.nodes.iter().zip(&rule.weights) {
            let t = mid + half * node;
            let (sp, cp) = (FRAC_PI_2 * t * t).sin_cos();
            c += weight * half * cp;
            s += weight * half * sp;
        }
        left = right;
    }
    (c, s)
}
