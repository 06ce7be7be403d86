//! Closed-form and steepest-descent kernels for integrals with quadratic
//! phase `exp(i(k s − β k²))` over `k`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::numerics::{adaptive_integrate, faddeeva, principal_sqrt_i};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `exp(i·phase)`.
fn cis(phase: f64) -> Complex64 {
    let (s, c) = phase.sin_cos();
    Complex64::new(c, s)
}

/// Window chirp `G(s) = ∫_{-K}^{K} exp(i(k s − β k²)) dk`.
///
/// Completing the square puts the stationary point at `k₀ = s/2β`. Each
/// window edge contributes an `erfc` on the `e^{iπ/4}` ray, evaluated as
/// `exp(-z²)·w(iz)` with the unimodular factor folded into the edge phase
/// `±K s − β K²`, so the result never subtracts nearly equal numbers.
pub fn window_chirp(s: f64, beta: f64, k_max: f64) -> Complex64 {
    if beta == 0.0 {
        return if s == 0.0 {
            Complex64::new(2.0 * k_max, 0.0)
        } else {
            Complex64::new(2.0 * (k_max * s).sin() / s, 0.0)
        };
    }
    if beta < 0.0 {
        return window_chirp(s, -beta, k_max).conj();
    }
    let c = principal_sqrt_i(beta);
    let pref = SQRT_PI / (2.0 * c);
    let k0 = s / (2.0 * beta);
    let upper = cis(k_max * s - beta * k_max * k_max);
    let lower = cis(-k_max * s - beta * k_max * k_max);
    let ic = Complex64::i() * c;
    let bracket = if k0.abs() <= k_max {
        cis(s * s / (4.0 * beta)) * 2.0
            - upper * faddeeva(ic * (k_max - k0))
            - lower * faddeeva(ic * (k_max + k0))
    } else if k0 > k_max {
        upper * faddeeva(ic * (k0 - k_max)) - lower * faddeeva(ic * (k_max + k0))
    } else {
        lower * faddeeva(ic * (-k0 - k_max)) - upper * faddeeva(ic * (k_max - k0))
    };
    pref * bracket
}

/// Edge tail `R(s) = ∫_K^∞ exp(i(k s − β k²)) / k dk` for `β ≠ 0`, `K > 0`.
///
/// The contour is deformed onto steepest-descent paths. The path leaving
/// the endpoint `K` is parameterized so that the integrand carries an exact
/// `exp(-q²)` weight and is integrated adaptively; when the stationary
/// point `k* = s/2β` lies beyond `K`, the path through it contributes
/// `-iπ e^{i s²/4β} w(k* √β e^{iπ/4})` exactly.
pub fn edge_tail_over_k(s: f64, beta: f64, k_max: f64) -> Complex64 {
    if beta < 0.0 {
        // R(s; -β) = conj R(-s; β)
        return edge_tail_over_k(-s, -beta, k_max).conj();
    }
    let k_star = s / (2.0 * beta);
    let edge_phase = cis(k_max * s - beta * k_max * k_max);
    let q_max = 6.5;
    let scale = 1.0 / (k_max * beta.sqrt());
    if k_star <= k_max {
        let d = k_max - k_star;
        let endpoint = adaptive_integrate(
            |q| {
                let shift = Complex64::new(0.0, -q * q / beta);
                let r = (Complex64::new(d * d, 0.0) + shift).sqrt();
                let dk = if r == Complex64::new(0.0, 0.0) {
                    Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2) / beta.sqrt()
                } else {
                    Complex64::new(0.0, -q / beta) / r
                };
                let k = k_max + shift / (r + d);
                dk / k * (-q * q).exp()
            },
            0.0,
            q_max,
            1e-16 * scale,
            1e-12,
        );
        edge_phase * endpoint
    } else {
        let d = k_star - k_max;
        let endpoint = adaptive_integrate(
            |q| {
                let shift = Complex64::new(0.0, -q * q / beta);
                let r = (Complex64::new(d * d, 0.0) + shift).sqrt();
                let dk = Complex64::new(0.0, q / beta) / r;
                let k = k_max - shift / (r + d);
                dk / k * (-q * q).exp()
            },
            0.0,
            q_max,
            1e-16 * scale,
            1e-12,
        );
        let zeta = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2) * (k_star * beta.sqrt());
        let saddle = Complex64::new(0.0, -PI) * cis(s * s / (4.0 * beta)) * faddeeva(zeta);
        edge_phase * endpoint + saddle
    }
}
