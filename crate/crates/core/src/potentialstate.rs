//! Location states in a binding potential, built from the closure relation
//! of a discrete eigenbasis. The harmonic oscillator is the shipped basis.

use num_complex::Complex64;

use crate::density::{self, Evaluator, SampledDensity};
use crate::error::{ensure_finite, invalid, Error, Result};
use crate::freestate::{PhysicalConstants, SlitSpec};
use crate::numerics::{cached_rule, HermiteSweep};

const PROJECTION_START_ORDER: usize = 96;
const PROJECTION_MAX_ORDER: usize = 1536;
const PROJECTION_TOL: f64 = 1e-12;

/// A real, orthonormal eigenbasis with a finite cutoff `n = 0..=n_max`.
pub trait Eigenbasis: Sync {
    fn n_max(&self) -> usize;

    /// `E_n / ħ`, in inverse time.
    fn energy_over_hbar(&self, n: usize) -> f64;

    fn eigenfunction(&self, n: usize, y: f64) -> f64;

    /// `u_0(y), …, u_{n_max}(y)` into `out`.
    fn eigenfunctions_into(&self, y: f64, out: &mut Vec<f64>) {
        out.clear();
        out.extend((0..=self.n_max()).map(|n| self.eigenfunction(n, y)));
    }

    /// `Σ c_n u_n(y) e^{-iE_n t/ħ}`.
    fn accumulate(&self, coefficients: &[f64], y: f64, t: f64) -> Complex64 {
        coefficients
            .iter()
            .enumerate()
            .map(|(n, &c)| Complex64::from_polar(c * self.eigenfunction(n, y), -self.energy_over_hbar(n) * t))
            .sum()
    }
}

/// Oscillator eigenbasis `u_n(y) = σ^{-1/2} φ_n(y/σ)`, `σ = √((ħ/m)/ω)`,
/// `E_n = ħω(n + ½)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorBasis {
    omega: f64,
    sigma: f64,
    n_max: usize,
    constants: PhysicalConstants,
}

impl OscillatorBasis {
    pub fn new(constants: PhysicalConstants, omega: f64, n_max: usize) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("omega", format!("must be finite and positive, got {omega}")));
        }
        if n_max > 10_000 {
            return Err(invalid("n_max", format!("at most 10000, got {n_max}")));
        }
        Ok(Self {
            omega,
            sigma: (constants.hbar_over_m() / omega).sqrt(),
            n_max,
            constants,
        })
    }

    /// `ω = 1`, the period `2π` of the oscillator figures.
    pub fn unit_frequency(constants: PhysicalConstants, n_max: usize) -> Result<Self> {
        Self::new(constants, 1.0, n_max)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    /// `E_n/m = (ħ/m) ω (n + ½)`.
    pub fn energy_per_mass(&self, n: usize) -> f64 {
        self.constants.hbar_over_m() * self.energy_over_hbar(n)
    }

    /// Same basis with a different cutoff.
    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        Self::new(self.constants, self.omega, n_max)
    }

    /// Half-width that contains the classical turning point of `n_max`.
    pub fn envelope(&self) -> f64 {
        (2.0 * self.n_max as f64 + 1.0).sqrt() * self.sigma
    }
}

impl Eigenbasis for OscillatorBasis {
    fn n_max(&self) -> usize {
        self.n_max
    }

    fn energy_over_hbar(&self, n: usize) -> f64 {
        self.omega * (n as f64 + 0.5)
    }

    fn eigenfunction(&self, n: usize, y: f64) -> f64 {
        HermiteSweep::new(y / self.sigma).nth(n).unwrap_or(0.0) / self.sigma.sqrt()
    }

    fn eigenfunctions_into(&self, y: f64, out: &mut Vec<f64>) {
        let scale = self.sigma.sqrt().recip();
        out.clear();
        out.extend(HermiteSweep::new(y / self.sigma).take(self.n_max + 1).map(|v| v * scale));
    }

    fn accumulate(&self, coefficients: &[f64], y: f64, t: f64) -> Complex64 {
        let scale = self.sigma.sqrt().recip();
        HermiteSweep::new(y / self.sigma)
            .zip(coefficients)
            .enumerate()
            .map(|(n, (u, &c))| Complex64::from_polar(c * u * scale, -self.energy_over_hbar(n) * t))
            .sum()
    }
}

/// A rectangle collapsed in the slit, expanded over a discrete eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct LocationState<B: Eigenbasis> {
    basis: B,
    slit: SlitSpec,
    coefficients: Vec<f64>,
}

pub type OscillatorLocationState = LocationState<OscillatorBasis>;

impl<B: Eigenbasis> LocationState<B> {
    pub fn basis(&self) -> &B {
        &self.basis
    }

    pub fn slit(&self) -> &SlitSpec {
        &self.slit
    }

    /// `c_n = (1/√a) ∫_slit u_n(y') dy'`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `Σ c_n²`, the part of the rectangle captured by the cutoff.
    pub fn capture(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }

    /// `Σ_{n > n0} c_n²`.
    pub fn tail_capture(&self, n0: usize) -> f64 {
        self.coefficients.iter().skip(n0 + 1).map(|c| c * c).sum()
    }

    pub fn evolve(&self, y: f64, t: f64) -> Result<Complex64> {
        if !y.is_finite() || !t.is_finite() {
            return Err(Error::Domain {
                op: "evolve",
                reason: format!("non-finite argument (y = {y}, t = {t})"),
            });
        }
        let psi = self.basis.accumulate(&self.coefficients, y, t);
        ensure_finite("evolve", &[psi.re, psi.im])?;
        Ok(psi)
    }
}

impl<B: Eigenbasis> Evaluator for LocationState<B> {
    fn amplitude(&self, y: f64, t: f64) -> Result<Complex64> {
        self.evolve(y, t)
    }
}

/// Project the slit rectangle onto `basis`.
///
/// Gauss–Legendre over the slit with 96 nodes, doubled until successive
/// coefficient vectors agree to `1e-12`.
pub fn project_coefficients<B: Eigenbasis + Clone>(basis: &B, slit: &SlitSpec) -> Result<LocationState<B>> {
    let lo = slit.lower_edge();
    let hi = slit.upper_edge();
    let norm = slit.width().sqrt().recip();
    let project = |order: usize| -> Result<Vec<f64>> {
        let rule = cached_rule(order);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = vec![0.0; basis.n_max() + 1];
        let mut u = Vec::with_capacity(basis.n_max() + 1);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            basis.eigenfunctions_into(mid + half * x, &mut u);
            for (a, v) in acc.iter_mut().zip(&u) {
                *a += w * half * v;
            }
        }
        acc.iter_mut().for_each(|c| *c *= norm);
        Ok(acc)
    };
    let mut order = PROJECTION_START_ORDER;
    let mut current = project(order)?;
    loop {
        let next_order = order * 2;
        if next_order > PROJECTION_MAX_ORDER {
            return Err(Error::Domain {
                op: "project_coefficients",
                reason: format!("slit quadrature did not settle by {order} nodes"),
            });
        }
        let refined = project(next_order)?;
        let change = current
            .iter()
            .zip(&refined)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        current = refined;
        order = next_order;
        if change <= PROJECTION_TOL {
            break;
        }
    }
    ensure_finite("project_coefficients", &current)?;
    Ok(LocationState {
        basis: basis.clone(),
        slit: *slit,
        coefficients: current,
    })
}

/// Partial closure sum `Σ_{n ≤ n_max} u_n(y) u_n(y')`.
pub fn closure_check(basis: &OscillatorBasis, y: f64, y_prime: f64) -> Result<f64> {
    let bound = 5.0 * basis.sigma() * (basis.n_max() as f64).sqrt().max(1.0);
    if !(y.abs() <= bound && y_prime.abs() <= bound) {
        return Err(Error::Domain {
            op: "closure_check",
            reason: format!("|y|, |y'| must not exceed {bound}"),
        });
    }
    let s = basis.sigma().recip();
    let sum: f64 = HermiteSweep::new(y * s)
        .zip(HermiteSweep::new(y_prime * s))
        .take(basis.n_max() + 1)
        .map(|(a, b)| a * b)
        .sum();
    Ok(sum * s)
}

/// `|ψ(y, t)|²` of an oscillator location state over `grid_y`.
pub fn oscillator_density_profile(
    state: &OscillatorLocationState,
    grid_y: &[f64],
    t: f64,
    normalize: bool,
) -> Result<SampledDensity> {
    density::density_profile(state, grid_y, t, normalize)
}

/// Symmetric grid about the origin that covers both the slit and its mirror
/// image as well as the envelope of the included states.
pub fn oscillator_default_grid(state: &OscillatorLocationState, points: usize) -> Result<Vec<f64>> {
    let slit = state.slit();
    let reach = (slit.center().abs() + slit.width()).max(state.basis().envelope()) + 2.0 * state.basis().sigma();
    density::uniform_grid(-reach, reach, points)
}
