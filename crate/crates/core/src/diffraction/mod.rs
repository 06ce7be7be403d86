//! The virtual single-slit experiment: time of flight to a screen, the
//! screen pattern of the location state, and its comparison against the
//! far-field sinc² pattern.

pub mod trajectory;

use std::fmt;

use crate::density::{self, trapezoid, Evaluator, SampledDensity};
use crate::error::{invalid, Error, Result};
use crate::freestate::{fraunhofer_reference, InfiniteCutoff, PhysicalConstants, SlitSpec};

pub use trajectory::{
    bohm_velocity_y, integrate_trajectory, trajectory_endpoints, trajectory_fan, Trajectory, TrajectoryOptions,
};

/// Screen at `x = D` reached by particles of longitudinal wave number `k_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenGeometry {
    distance_d: f64,
    k_x: f64,
    constants: PhysicalConstants,
}

impl ScreenGeometry {
    pub fn new(distance_d: f64, k_x: f64, constants: PhysicalConstants) -> Result<Self> {
        if !(distance_d.is_finite() && distance_d > 0.0) {
            return Err(invalid("screen distance D", format!("must be finite and positive, got {distance_d}")));
        }
        if !(k_x.is_finite() && k_x > 0.0) {
            return Err(invalid("k_x", format!("must be finite and positive, got {k_x}")));
        }
        Ok(Self {
            distance_d,
            k_x,
            constants,
        })
    }

    pub fn distance(&self) -> f64 {
        self.distance_d
    }

    pub fn k_x(&self) -> f64 {
        self.k_x
    }

    /// `λ = 2π/k_x`.
    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.k_x
    }

    /// `v_x = (ħ/m) k_x`.
    pub fn velocity_x(&self) -> f64 {
        self.constants.hbar_over_m() * self.k_x
    }

    pub fn time_of_flight(&self) -> f64 {
        time_of_flight(self)
    }
}

/// `T = D/v_x = D m/(ħ k_x)`.
pub fn time_of_flight(screen: &ScreenGeometry) -> f64 {
    screen.distance_d / screen.velocity_x()
}

/// `N_F = a²/(8π (ħ/m) T)`, the same as `a²/(4λD)` under `T = D/v_x`.
pub fn fresnel_number(slit: &SlitSpec, time_t: f64) -> Result<f64> {
    if !(time_t.is_finite() && time_t > 0.0) {
        return Err(invalid("T", format!("must be finite and positive, got {time_t}")));
    }
    let a = slit.width();
    Ok(a * a / (8.0 * std::f64::consts::PI * slit.hbar_over_m() * time_t))
}

/// Screen pattern `|Ψ_x Ψ_y|²` at `T = D/v_x`, normalized. The longitudinal
/// factor has constant modulus and drops out on normalization.
pub fn product_density(slit: &SlitSpec, screen: &ScreenGeometry, grid_y: &[f64]) -> Result<SampledDensity> {
    screen_density(&InfiniteCutoff(*slit), time_of_flight(screen), grid_y)
}

/// Normalized pattern of any transverse evaluator at time of flight `T`.
pub fn screen_density<E: Evaluator + ?Sized>(evaluator: &E, time_t: f64, grid_y: &[f64]) -> Result<SampledDensity> {
    density::density_profile(evaluator, grid_y, time_t, true)
}

/// Far-field momentum pattern carried to the screen by `k = m y/(ħT)`:
/// `∝ sinc²(a (y − y₀)/(2 (ħ/m) T))`, normalized on the grid.
pub fn fraunhofer_mapped_reference(slit: &SlitSpec, time_t: f64, grid_y: &[f64]) -> Result<SampledDensity> {
    if !(time_t.is_finite() && time_t > 0.0) {
        return Err(invalid("T", format!("must be finite and positive, got {time_t}")));
    }
    density::check_grid(grid_y)?;
    let scale = slit.width() / (2.0 * slit.hbar_over_m() * time_t);
    let values = grid_y
        .iter()
        .map(|&y| fraunhofer_reference(slit, scale * (y - slit.center())))
        .collect();
    SampledDensity::new(grid_y.to_vec(), values, time_t)?.normalize()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Fresnel,
    Transition,
    Fraunhofer,
}

impl Regime {
    /// Fraunhofer below `N_F = 0.1`, Fresnel above `0.5`.
    pub fn classify(fresnel_number: f64) -> Self {
        if fresnel_number < 0.1 {
            Regime::Fraunhofer
        } else if fresnel_number > 0.5 {
            Regime::Fresnel
        } else {
            Regime::Transition
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Fresnel => "Fresnel",
            Regime::Transition => "Transition",
            Regime::Fraunhofer => "Fraunhofer",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    pub fresnel_number: f64,
    pub l2_distance: f64,
    pub linf_distance: f64,
    pub peak_ratio: f64,
    pub regime: Regime,
}

/// Distances between two normalized densities on the same grid.
pub fn compare_patterns(
    observed: &SampledDensity,
    reference: &SampledDensity,
    fresnel_number: f64,
) -> Result<ComparisonReport> {
    if observed.grid_y != reference.grid_y {
        return Err(Error::GridMismatch("observed and reference grids differ".into()));
    }
    if !observed.normalized || !reference.normalized {
        return Err(Error::GridMismatch("both densities must be normalized".into()));
    }
    let diff: Vec<f64> = observed
        .density
        .iter()
        .zip(&reference.density)
        .map(|(o, r)| o - r)
        .collect();
    let squared: Vec<f64> = diff.iter().map(|d| d * d).collect();
    let l2_distance = trapezoid(&observed.grid_y, &squared).sqrt();
    let linf_distance = diff.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    Ok(ComparisonReport {
        fresnel_number,
        l2_distance,
        linf_distance,
        peak_ratio: observed.peak() / reference.peak(),
        regime: Regime::classify(fresnel_number),
    })
}

/// Pattern and reference at `T` on `grid_y`, compared.
pub fn compare_at_time(slit: &SlitSpec, time_t: f64, grid_y: &[f64]) -> Result<ComparisonReport> {
    let observed = screen_density(&InfiniteCutoff(*slit), time_t, grid_y)?;
    let reference = fraunhofer_mapped_reference(slit, time_t, grid_y)?;
    compare_patterns(&observed, &reference, fresnel_number(slit, time_t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::uniform_grid;
    use crate::freestate::{default_grid, FreeLocationState};

    fn slit() -> SlitSpec {
        SlitSpec::centered(0.1).unwrap()
    }

    #[test]
    fn time_of_flight_examples() {
        let c = PhysicalConstants::default();
        let s = ScreenGeometry::new(1.0, 2000.0, c).unwrap();
        assert!((s.time_of_flight() - 5e-4).abs() < 1e-18);
        let far = ScreenGeometry::new(2.0, 2000.0, c).unwrap();
        assert_eq!(far.time_of_flight(), 2.0 * s.time_of_flight());
        assert!(ScreenGeometry::new(1.0, 1e300, c).unwrap().time_of_flight() < 1e-299);
        assert!(ScreenGeometry::new(0.0, 1.0, c).is_err());
        assert!(ScreenGeometry::new(1.0, -1.0, c).is_err());
    }

    #[test]
    fn fresnel_numbers_of_the_figure() {
        let expect = [(0.0005, 0.796), (0.00075, 0.531), (0.001, 0.398), (0.01, 0.039)];
        for (t, nf) in expect {
            let v = fresnel_number(&slit(), t).unwrap();
            // published to three decimals, truncated
            assert!((v - nf).abs() < 1e-3, "T={t}: {v}");
        }
        assert!((fresnel_number(&slit(), 0.01).unwrap() - 1.0 / (8.0 * std::f64::consts::PI)).abs() < 1e-16);
        assert!(fresnel_number(&slit(), 0.0).is_err());
    }

    #[test]
    fn regime_thresholds() {
        assert_eq!(Regime::classify(0.039), Regime::Fraunhofer);
        assert_eq!(Regime::classify(0.398), Regime::Transition);
        assert_eq!(Regime::classify(0.531), Regime::Fresnel);
        assert_eq!(Regime::classify(0.796), Regime::Fresnel);
    }

    #[test]
    fn product_density_depends_only_on_time() {
        let c = PhysicalConstants::default();
        let grid = default_grid(&slit(), 1e-3);
        let a = product_density(&slit(), &ScreenGeometry::new(1.0, 1000.0, c).unwrap(), &grid).unwrap();
        let b = product_density(&slit(), &ScreenGeometry::new(3.0, 3000.0, c).unwrap(), &grid).unwrap();
        assert_eq!(a, b);
        let direct = density::density_profile(&InfiniteCutoff(slit()), &grid, 1e-3, true).unwrap();
        assert_eq!(a, direct);
        let later = product_density(&slit(), &ScreenGeometry::new(2.0, 1000.0, c).unwrap(), &grid).unwrap();
        assert_ne!(a.density, later.density);
    }

    #[test]
    fn truncated_and_limit_patterns_agree_at_large_cutoff() {
        let grid = default_grid(&slit(), 1e-3);
        let lim = screen_density(&InfiniteCutoff(slit()), 1e-3, &grid).unwrap();
        let trunc = screen_density(&FreeLocationState::new(slit(), 1e8).unwrap(), 1e-3, &grid).unwrap();
        let r = compare_patterns(&trunc, &lim, 0.398).unwrap();
        assert!(r.linf_distance < 1e-5 * lim.peak(), "{r:?}");
    }

    #[test]
    fn mapped_reference_shape() {
        let grid = uniform_grid(-2.0, 2.0, 4001).unwrap();
        let r = fraunhofer_mapped_reference(&slit(), 0.01, &grid).unwrap();
        assert!(r.normalized);
        assert_eq!(r.density[2000], r.peak());
        let zero = 0.2 * std::f64::consts::PI;
        let near = grid.iter().position(|&y| y >= zero).unwrap();
        assert!(r.density[near] < 1e-4 * r.peak());
        assert!(fraunhofer_mapped_reference(&slit(), -1.0, &grid).is_err());
    }

    #[test]
    fn comparison_basics() {
        let grid = default_grid(&slit(), 1e-2);
        let obs = screen_density(&InfiniteCutoff(slit()), 1e-2, &grid).unwrap();
        let same = compare_patterns(&obs, &obs, 0.04).unwrap();
        assert_eq!((same.l2_distance, same.linf_distance, same.peak_ratio), (0.0, 0.0, 1.0));
        let reference = fraunhofer_mapped_reference(&slit(), 1e-2, &grid).unwrap();
        let ab = compare_patterns(&obs, &reference, 0.04).unwrap();
        let ba = compare_patterns(&reference, &obs, 0.04).unwrap();
        assert_eq!(ab.l2_distance, ba.l2_distance);
        assert_eq!(ab.linf_distance, ba.linf_distance);
        let other = uniform_grid(-1.0, 1.0, 11).unwrap();
        let mismatched = fraunhofer_mapped_reference(&slit(), 1e-2, &other).unwrap();
        assert!(matches!(compare_patterns(&obs, &mismatched, 0.04), Err(Error::GridMismatch(_))));
        let raw = density::density_profile(&InfiniteCutoff(slit()), &grid, 1e-2, false).unwrap();
        assert!(compare_patterns(&raw, &reference, 0.04).is_err());
    }

    #[test]
    fn far_field_agreement_and_near_field_deviation() {
        for (t, bound, above) in [(0.01, 0.02, false), (0.001, 0.10, true), (0.0005, 0.10, true)] {
            let grid = default_grid(&slit(), t);
            let r = compare_at_time(&slit(), t, &grid).unwrap();
            let peak = fraunhofer_mapped_reference(&slit(), t, &grid).unwrap().peak();
            let rel = r.linf_distance / peak;
            if above {
                assert!(rel > bound, "T={t}: {rel}");
            } else {
                assert!(rel <= bound, "T={t}: {rel}");
            }
        }
    }
}
