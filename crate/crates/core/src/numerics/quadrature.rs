use std::collections::HashMap;
use std::f64::consts::PI;
use std::iter::Sum;
use std::ops::Mul;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Largest Gauss–Legendre order this crate will build.
pub const MAX_GL_ORDER: usize = 2048;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Integrate `f` over `[a, b]` with the affine image of the rule.
    pub fn integrate<T, F>(&self, a: f64, b: f64, f: F) -> T
    where
        F: Fn(f64) -> T,
        T: Mul<f64, Output = T> + Sum,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let sum: T = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(mid + half * x) * w)
            .sum();
        sum * half
    }
}

/// Legendre polynomial and its derivative at `x` by the three-term recurrence.
pub(crate) fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Build the `order`-point Gauss–Legendre rule by Newton iteration on `P_order`.
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_GL_ORDER {
        return Err(invalid(
            "quadrature order",
            format!("{order} outside 1..={MAX_GL_ORDER}"),
        ));
    }
    let n = order;
    let nf = n as f64;
    let half = n / 2;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, root i counted from x = 1 downward
        let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = theta.cos() * (1.0 - 1.0 / (8.0 * nf * nf) + 1.0 / (8.0 * nf * nf * nf));
        if n % 2 == 1 && i == half {
            x = 0.0;
        }
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-300) {
                break;
            }
        }
        if n % 2 == 1 && i == half {
            x = 0.0;
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    Ok(QuadratureRule {
        order,
        nodes,
        weights,
    })
}

fn cache() -> &'static RwLock<HashMap<usize, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared, lazily built rule. Panics only on an out-of-range order, which is
/// an internal invariant violation.
pub(crate) fn cached_rule(order: usize) -> Arc<QuadratureRule> {
    if let Some(rule) = cache().read().expect("rule cache poisoned").get(&order) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(gauss_legendre(order).expect("internal quadrature order in range"));
    cache()
        .write()
        .expect("rule cache poisoned")
        .entry(order)
        .or_insert(rule)
        .clone()
}

// Gauss–Kronrod 7/15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(mid - dx);
        let f2 = f(mid + dx);
        kron += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let kron = kron * half;
    let gauss = gauss * half;
    (kron, (kron - gauss).norm())
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of a complex integrand.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate is below `max(abs_tol, rel_tol·|I|)` or `max_panels` is reached.
/// The panel ordering is deterministic.
pub fn adaptive_integrate<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    const MAX_PANELS: usize = 400;
    let (v, e) = kronrod15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: Complex64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) || panels.len() >= MAX_PANELS {
            return total;
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| {
                if p.3 > best.1 {
                    (i, p.3)
                } else {
                    best
                }
            });
        let (lo, hi, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}
