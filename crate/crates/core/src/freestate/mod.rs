//! The free-particle location state: a rectangular collapse state expanded
//! over plane waves up to a cutoff `k_m` and evolved unitarily.
//!
//! Two evaluators are provided. [`FreeLocationState::evaluate_truncated`]
//! keeps the finite cutoff; [`evaluate_limit`] is the exact free evolution
//! of the rectangle (the `k_m → ∞` limit) in closed form through the error
//! function, and serves as the oracle the truncated evaluator converges to.
//!
//! Units: only the ratio `ħ/m` enters. Wavenumbers are `1/length`, and the
//! momentum-space baseline takes `ħ = 1`, so `p_y` is numerically a wavenumber.

pub mod chirp;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::density::{self, Evaluator, SampledDensity};
use crate::error::{invalid, Error, Result};
use crate::numerics::{complex_erfc, principal_sqrt_i, sine_integral, cached_rule};

use chirp::{edge_tail_over_k, window_chirp};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Products `K·a` above this are past what the capped outer Gauss–Legendre
/// pass can resolve; the edge-tail evaluator takes over.
const ORDER_SWAP_MAX_KA: f64 = 1000.0;
const ORDER_SWAP_START: usize = 64;
const ORDER_SWAP_CAP: usize = 1024;
const ORDER_SWAP_TOL: f64 = 1e-10;

/// Default number of samples in an automatically chosen grid.
pub const DEFAULT_GRID_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar_over_m: f64,
}

impl PhysicalConstants {
    pub fn new(hbar_over_m: f64) -> Result<Self> {
        if !(hbar_over_m > 0.0 && hbar_over_m.is_finite()) {
            return Err(invalid("hbar_over_m", format!("must be positive, got {hbar_over_m}")));
        }
        Ok(Self { hbar_over_m })
    }

    pub fn hbar_over_m(&self) -> f64 {
        self.hbar_over_m
    }
}

impl Default for PhysicalConstants {
    /// `ħ/m = 1`.
    fn default() -> Self {
        Self { hbar_over_m: 1.0 }
    }
}

/// A slit of width `a` centred at `y₀`; defines the collapsed rectangular
/// state `1/√a` on `[y₀ − a/2, y₀ + a/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitSpec {
    width_a: f64,
    center_y0: f64,
    constants: PhysicalConstants,
}

impl SlitSpec {
    pub fn new(width_a: f64, center_y0: f64, constants: PhysicalConstants) -> Result<Self> {
        if !(width_a > 0.0 && width_a.is_finite()) {
            return Err(invalid("slit width", format!("must be positive, got {width_a}")));
        }
        if !center_y0.is_finite() {
            return Err(invalid("slit center", "must be finite"));
        }
        Ok(Self {
            width_a,
            center_y0,
            constants,
        })
    }

    /// Slit of width `a` at the origin with `ħ/m = 1`.
    pub fn centered(width_a: f64) -> Result<Self> {
        Self::new(width_a, 0.0, PhysicalConstants::default())
    }

    pub fn width(&self) -> f64 {
        self.width_a
    }

    pub fn center(&self) -> f64 {
        self.center_y0
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    pub fn hbar_over_m(&self) -> f64 {
        self.constants.hbar_over_m
    }

    pub fn lower_edge(&self) -> f64 {
        self.center_y0 - 0.5 * self.width_a
    }

    pub fn upper_edge(&self) -> f64 {
        self.center_y0 + 0.5 * self.width_a
    }

    /// Closed interval test; both edges belong to the slit.
    pub fn contains(&self, y: f64) -> bool {
        (y - self.center_y0).abs() <= 0.5 * self.width_a
    }

    /// Signed distances `(s₊, s₋) = (y − y₀ + a/2, y − y₀ − a/2)`.
    fn edge_offsets(&self, y: f64) -> (f64, f64) {
        let rel = y - self.center_y0;
        (rel + 0.5 * self.width_a, rel - 0.5 * self.width_a)
    }
}

/// The collapsed state: `1/√a` on the closed slit interval, zero elsewhere.
pub fn rectangular_state(slit: &SlitSpec, y: f64) -> Complex64 {
    if slit.contains(y) {
        Complex64::new(1.0 / slit.width_a.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Momentum-space amplitude of the rectangle (ħ = 1):
/// `(2/(p√(2πa))) sin(a p/2) · e^{-i p y₀}`, with limit `√(a/2π)` at `p = 0`.
pub fn momentum_amplitude(slit: &SlitSpec, p_y: f64) -> Complex64 {
    let a = slit.width_a;
    let magnitude = if p_y == 0.0 {
        (a / (2.0 * PI)).sqrt()
    } else {
        2.0 / (p_y * (2.0 * PI * a).sqrt()) * (0.5 * a * p_y).sin()
    };
    Complex64::from_polar(1.0, -p_y * slit.center_y0) * magnitude
}

/// Far-field reference `P(α) = (a/2π)(sin α/α)²`.
pub fn fraunhofer_reference(slit: &SlitSpec, alpha: f64) -> f64 {
    slit.width_a / (2.0 * PI) * sinc(alpha).powi(2)
}

pub(crate) fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

fn check_point(op: &'static str, y: f64, t: f64) -> Result<()> {
    if y.is_finite() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            op,
            reason: format!("non-finite argument (y = {y}, t = {t})"),
        })
    }
}

fn checked(op: &'static str, v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { op })
    }
}

/// Free location state with plane-wave cutoff `k_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeLocationState {
    slit: SlitSpec,
    cutoff_km: f64,
}

impl FreeLocationState {
    pub fn new(slit: SlitSpec, cutoff_km: f64) -> Result<Self> {
        if !(cutoff_km > 0.0 && cutoff_km.is_finite()) {
            return Err(invalid("cutoff k_m", format!("must be positive, got {cutoff_km}")));
        }
        Ok(Self { slit, cutoff_km })
    }

    pub fn slit(&self) -> &SlitSpec {
        &self.slit
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff_km
    }

    /// Plane-wave coefficient `c(k) = (1/2π√a) ∫_slit e^{-iky'} dy'`.
    pub fn coefficient(&self, k: f64) -> Complex64 {
        let a = self.slit.width_a;
        let bracket = if k == 0.0 { a } else { 2.0 * (0.5 * k * a).sin() / k };
        Complex64::from_polar(1.0, -k * self.slit.center_y0) * (bracket / (2.0 * PI * a.sqrt()))
    }

    /// Exact `∫|ψ(y, t)|² dy = 2π ∫_{-k_m}^{k_m} |c(k)|² dk`, time independent.
    ///
    /// Equals `(2/π) Si(k_m a) − 4 sin²(k_m a/2)/(π a k_m)`, slightly below one.
    pub fn norm(&self) -> f64 {
        let a = self.slit.width_a;
        let k = self.cutoff_km;
        2.0 / PI * sine_integral(k * a) - 4.0 * (0.5 * k * a).sin().powi(2) / (PI * a * k)
    }

    /// `1 − norm`: the probability carried by plane waves beyond the cutoff.
    pub fn truncation_deficit(&self) -> f64 {
        1.0 - self.norm()
    }

    /// `ψ(y, t)` with the cutoff kept.
    ///
    /// `t = 0` is evaluated exactly through sine integrals. Otherwise the
    /// order-swapped form (closed-form chirp over `k`, Gauss–Legendre over
    /// the slit) is used while `k_m a` is small enough for the outer pass to
    /// resolve, and the edge-tail form beyond that.
    pub fn evaluate_truncated(&self, y: f64, t: f64) -> Result<Complex64> {
        check_point("evaluate_truncated", y, t)?;
        if t == 0.0 {
            return Ok(self.evaluate_at_collapse(y));
        }
        if self.cutoff_km * self.slit.width_a <= ORDER_SWAP_MAX_KA {
            self.evaluate_order_swap(y, t)
        } else {
            self.evaluate_edge_tails(y, t)
        }
    }

    /// `t = 0`: `(1/π√a)[Si(k_m s₊) − Si(k_m s₋)]`, the truncated rectangle
    /// with its Gibbs ringing.
    fn evaluate_at_collapse(&self, y: f64) -> Complex64 {
        let (sp, sm) = self.slit.edge_offsets(y);
        let k = self.cutoff_km;
        let v = (sine_integral(k * sp) - sine_integral(k * sm)) / (PI * self.slit.width_a.sqrt());
        Complex64::new(v, 0.0)
    }

    /// Order-swapped evaluation `(1/2π√a) ∫_slit G(y − y', t) dy'` where `G`
    /// is the window chirp over `|k| ≤ k_m`.
    ///
    /// Gauss–Legendre order starts at 64 and doubles until successive
    /// results agree to 1e-10 (relative, floored at `1e-3/√a`), capped at 1024.
    pub fn evaluate_order_swap(&self, y: f64, t: f64) -> Result<Complex64> {
        check_point("evaluate_order_swap", y, t)?;
        let beta = 0.5 * self.slit.hbar_over_m() * t;
        let a = self.slit.width_a;
        let prefactor = 1.0 / (2.0 * PI * a.sqrt());
        let lo = self.slit.lower_edge();
        let hi = self.slit.upper_edge();
        let k = self.cutoff_km;
        let pass = |order: usize| -> Complex64 {
            cached_rule(order).integrate(lo, hi, |yp| window_chirp(y - yp, beta, k)) * prefactor
        };
        let floor = 1e-3 / a.sqrt();
        let mut order = ORDER_SWAP_START;
        let mut previous = pass(order);
        while order < ORDER_SWAP_CAP {
            order *= 2;
            let current = pass(order);
            let settled = (current - previous).norm() <= ORDER_SWAP_TOL * current.norm().max(floor);
            previous = current;
            if settled {
                break;
            }
        }
        checked("evaluate_order_swap", previous)
    }

    /// `ψ_∞(y, t)` corrected by the plane waves beyond the cutoff:
    /// `ψ = ψ_∞ + (i/2π√a) Σ_edges ±[R(s) − R(−s)]` with `R` the edge tail
    /// `∫_{k_m}^∞ e^{i(ks − βk²)}/k dk`.
    pub fn evaluate_edge_tails(&self, y: f64, t: f64) -> Result<Complex64> {
        check_point("evaluate_edge_tails", y, t)?;
        if t == 0.0 {
            return Ok(self.evaluate_at_collapse(y));
        }
        let beta = 0.5 * self.slit.hbar_over_m() * t;
        let k = self.cutoff_km;
        let (sp, sm) = self.slit.edge_offsets(y);
        let odd_tail = |s: f64| edge_tail_over_k(s, beta, k) - edge_tail_over_k(-s, beta, k);
        let correction = (odd_tail(sp) - odd_tail(sm)) * Complex64::i() / (2.0 * PI * self.slit.width_a.sqrt());
        checked("evaluate_edge_tails", evaluate_limit(&self.slit, y, t)? + correction)
    }

    /// Mean energy per unit mass, `⟨E⟩/m = (ħ/m)² ⟨k²⟩ / 2`, over `|k| ≤ k_m`.
    ///
    /// Both moments are closed form:
    /// `∫ sin²(ka/2) dk = k_m − sin(k_m a)/a` and
    /// `∫ sin²(ka/2)/k² dk = a Si(k_m a) − 2 sin²(k_m a/2)/k_m`.
    pub fn mean_energy(&self) -> f64 {
        let a = self.slit.width_a;
        let k = self.cutoff_km;
        let second_moment = k - (k * a).sin() / a;
        let zeroth_moment = a * sine_integral(k * a) - 2.0 * (0.5 * k * a).sin().powi(2) / k;
        0.5 * self.slit.hbar_over_m().powi(2) * second_moment / zeroth_moment
    }
}

/// Free-function form of [`FreeLocationState::mean_energy`].
pub fn mean_energy(state: &FreeLocationState) -> f64 {
    state.mean_energy()
}

impl Evaluator for FreeLocationState {
    fn amplitude(&self, y: f64, t: f64) -> Result<Complex64> {
        self.evaluate_truncated(y, t)
    }
}

/// The `k_m → ∞` evaluator as a value, for use with [`density_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfiniteCutoff(pub SlitSpec);

impl Evaluator for InfiniteCutoff {
    fn amplitude(&self, y: f64, t: f64) -> Result<Complex64> {
        evaluate_limit(&self.0, y, t)
    }
}

/// `w = √(2i(ħ/m)t)` on the principal branch.
fn spreading_width(slit: &SlitSpec, t: f64) -> Complex64 {
    principal_sqrt_i(2.0 * slit.hbar_over_m() * t)
}

/// `erf(s₊/w) − erf(s₋/w)` written through `erfc` of arguments in the right
/// half plane, so neither side of the slit loses precision.
fn erf_window(sp: f64, sm: f64, w: Complex64) -> Complex64 {
    let zp = sp / w;
    let zm = sm / w;
    if sm >= 0.0 {
        complex_erfc(zm) - complex_erfc(zp)
    } else if sp <= 0.0 {
        complex_erfc(-zp) - complex_erfc(-zm)
    } else {
        Complex64::new(2.0, 0.0) - complex_erfc(zp) - complex_erfc(-zm)
    }
}

/// Exact free evolution of the rectangle:
/// `ψ(y, t) = (1/2√a)[erf((y − y₀ + a/2)/w) − erf((y − y₀ − a/2)/w)]`,
/// `w = √(2i(ħ/m)t)`. Returns the rectangle itself at `t = 0`.
pub fn evaluate_limit(slit: &SlitSpec, y: f64, t: f64) -> Result<Complex64> {
    check_point("evaluate_limit", y, t)?;
    if t == 0.0 {
        return Ok(rectangular_state(slit, y));
    }
    let (sp, sm) = slit.edge_offsets(y);
    let w = spreading_width(slit, t);
    checked("evaluate_limit", erf_window(sp, sm, w) / (2.0 * slit.width_a.sqrt()))
}

/// `ψ_∞` together with `∂ψ_∞/∂y = (1/√(πa) w)[e^{-s₊²/w²} − e^{-s₋²/w²}]`.
pub fn evaluate_limit_with_derivative(slit: &SlitSpec, y: f64, t: f64) -> Result<(Complex64, Complex64)> {
    check_point("evaluate_limit_with_derivative", y, t)?;
    if t == 0.0 {
        return Ok((rectangular_state(slit, y), Complex64::new(0.0, 0.0)));
    }
    let (sp, sm) = slit.edge_offsets(y);
    let w = spreading_width(slit, t);
    let a = slit.width_a;
    let psi = erf_window(sp, sm, w) / (2.0 * a.sqrt());
    let gauss = |s: f64| {
        let z = s / w;
        (-z * z).exp()
    };
    let dpsi = (gauss(sp) - gauss(sm)) / (SQRT_PI * a.sqrt() * w);
    Ok((
        checked("evaluate_limit_with_derivative", psi)?,
        checked("evaluate_limit_with_derivative", dpsi)?,
    ))
}

/// Automatic grid: [`DEFAULT_GRID_POINTS`] samples centred on the slit over
/// a width `max(4a, 8 (ħ/m)|t| · 2π/a)`, wide enough that the spreading
/// lobes never clip.
pub fn default_grid(slit: &SlitSpec, t: f64) -> Vec<f64> {
    let a = slit.width_a;
    let k_typ = 2.0 * PI / a;
    let width = (4.0 * a).max(8.0 * slit.hbar_over_m() * t.abs() * k_typ);
    density::uniform_grid(slit.center_y0 - 0.5 * width, slit.center_y0 + 0.5 * width, DEFAULT_GRID_POINTS)
        .expect("positive width gives an increasing grid")
}

/// `|ψ(y, t)|²` over `grid_y` for either free evaluator.
pub fn density_profile<E: Evaluator + ?Sized>(
    evaluator: &E,
    grid_y: &[f64],
    t: f64,
    normalize: bool,
) -> Result<SampledDensity> {
    density::density_profile(evaluator, grid_y, t, normalize)
}
