//! Special functions and quadrature shared by every evaluator.
//!
//! Everything here is a pure function of its arguments: identical input bits
//! give identical output bits, and all routines are safe to call from any
//! number of threads.

mod erf;
mod fresnel;
mod hermite;
mod quadrature;
mod sine_integral;

pub use erf::{complex_erf, complex_erfc, erf_real, faddeeva, principal_sqrt_i, ComplexValue};
pub use fresnel::fresnel_cs;
pub use hermite::{hermite_function, HermiteSweep};
pub use quadrature::{adaptive_integrate, gauss_legendre, QuadratureRule, MAX_GL_ORDER};
pub(crate) use quadrature::cached_rule;
pub use sine_integral::sine_integral;
