//! Sampled probability densities and the pointwise evaluation pass that
//! produces them.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

/// Anything that yields a wave-function amplitude at `(y, t)`.
pub trait Evaluator: Sync {
    fn amplitude(&self, y: f64, t: f64) -> Result<Complex64>;
}

impl<E: Evaluator + ?Sized> Evaluator for &E {
    fn amplitude(&self, y: f64, t: f64) -> Result<Complex64> {
        (**self).amplitude(y, t)
    }
}

/// Probability density samples on a strictly increasing position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledDensity {
    pub grid_y: Vec<f64>,
    pub density: Vec<f64>,
    pub time_t: f64,
    pub normalized: bool,
}

impl SampledDensity {
    /// Wrap raw samples, checking the grid and sign invariants.
    pub fn new(grid_y: Vec<f64>, density: Vec<f64>, time_t: f64) -> Result<Self> {
        check_grid(&grid_y)?;
        if grid_y.len() != density.len() {
            return Err(Error::GridMismatch(format!(
                "{} grid points but {} density samples",
                grid_y.len(),
                density.len()
            )));
        }
        if density.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(invalid("density", "samples must be finite and non-negative"));
        }
        Ok(Self {
            grid_y,
            density,
            time_t,
            normalized: false,
        })
    }

    pub fn len(&self) -> usize {
        self.grid_y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid_y.is_empty()
    }

    /// Trapezoidal integral over the grid, summed left to right.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid_y, &self.density)
    }

    /// Divide by the trapezoidal integral so the samples integrate to one.
    pub fn normalize(mut self) -> Result<Self> {
        let total = self.integral();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Domain {
                op: "normalize",
                reason: format!("density integrates to {total} over the grid"),
            });
        }
        for d in &mut self.density {
            *d /= total;
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn peak(&self) -> f64 {
        self.density.iter().copied().fold(0.0, f64::max)
    }
}

/// Trapezoidal rule with a fixed sequential summation order.
pub fn trapezoid(x: &[f64], f: &[f64]) -> f64 {
    x.windows(2)
        .zip(f.windows(2))
        .map(|(xs, fs)| 0.5 * (xs[1] - xs[0]) * (fs[0] + fs[1]))
        .fold(0.0, |acc, v| acc + v)
}

pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 || grid.iter().any(|y| !y.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::GridNotIncreasing);
    }
    Ok(())
}

/// `points` uniformly spaced samples on `[min, max]`.
///
/// Built from the midpoint outward so a grid with `min = -max` is exactly
/// mirror-symmetric.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(min < max) || !min.is_finite() || !max.is_finite() {
        return Err(Error::GridNotIncreasing);
    }
    let center = 0.5 * (min + max);
    let half = 0.5 * (max - min);
    let last = (points - 1) as f64;
    let grid: Vec<f64> = (0..points)
        .map(|i| center + half * ((2 * i) as f64 - last) / last)
        .collect();
    check_grid(&grid)?;
    Ok(grid)
}

/// Pointwise `|ψ(y, t)|²` over the grid, optionally normalized.
///
/// Grid points are evaluated in parallel; each sample depends only on its
/// own `y`, so the result is bitwise independent of the thread count.
pub fn density_profile<E: Evaluator + ?Sized>(
    evaluator: &E,
    grid_y: &[f64],
    t: f64,
    normalize: bool,
) -> Result<SampledDensity> {
    check_grid(grid_y)?;
    let density: Vec<f64> = grid_y
        .par_iter()
        .map(|&y| evaluator.amplitude(y, t).map(|psi| psi.norm_sqr()))
        .collect::<Result<Vec<f64>>>()?;
    let sampled = SampledDensity::new(grid_y.to_vec(), density, t)?;
    if normalize {
        sampled.normalize()
    } else {
        Ok(sampled)
    }
}
