//! Location states: collapsed rectangular wave functions evolved under free
//! and harmonic-oscillator Hamiltonians, and the single-slit diffraction
//! patterns they produce on a screen.

pub mod density;
pub mod diffraction;
pub mod error;
pub mod freestate;
pub mod numerics;
pub mod potentialstate;

pub use density::{density_profile, uniform_grid, Evaluator, SampledDensity};
pub use error::{Error, Result};
pub use freestate::{
    evaluate_limit, FreeLocationState, InfiniteCutoff, PhysicalConstants, SlitSpec,
};
pub use numerics::ComplexValue;
pub use potentialstate::{
    closure_check, oscillator_density_profile, project_coefficients, Eigenbasis, LocationState,
    OscillatorBasis, OscillatorLocationState,
};
pub use diffraction::{
    compare_patterns, fraunhofer_mapped_reference, fresnel_number, product_density, time_of_flight,
    ComparisonReport, Regime, ScreenGeometry,
};
