//! Transverse de Broglie–Bohm trajectories in the free limit state.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::freestate::{evaluate_limit_with_derivative, SlitSpec};

const NODE_THRESHOLD: f64 = 1e-12;

/// `v_y = (ħ/m) Im(ψ'/ψ)` of the free limit state.
///
/// At `t = 0` the state is real, so the velocity vanishes on the slit and is
/// undefined outside it.
pub fn bohm_velocity_y(slit: &SlitSpec, y: f64, t: f64) -> Result<f64> {
    let (psi, dpsi) = evaluate_limit_with_derivative(slit, y, t)?;
    let modulus = psi.norm();
    if modulus < NODE_THRESHOLD {
        return Err(Error::NodeSingularity { y, t, modulus });
    }
    Ok(slit.hbar_over_m() * (dpsi / psi).im)
}

/// Step control for [`integrate_trajectory`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryOptions {
    /// Nominal steps across `[0, T]`.
    pub base_steps: usize,
    /// Smallest step as a fraction of `T`.
    pub floor_fraction: f64,
    /// Accepted step-doubling discrepancy, as a fraction of the slit width.
    pub tolerance: f64,
    /// Keep every accepted point rather than only the endpoint.
    pub record_path: bool,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self {
            base_steps: 2000,
            floor_fraction: 1e-6,
            tolerance: 1e-9,
            record_path: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
}

impl Trajectory {
    pub fn start(&self) -> f64 {
        self.positions[0]
    }

    pub fn end(&self) -> f64 {
        *self.positions.last().expect("a trajectory has at least its start")
    }
}

fn rk4_step(slit: &SlitSpec, t: f64, y: f64, h: f64, v0: f64) -> Result<f64> {
    let k1 = v0;
    let k2 = bohm_velocity_y(slit, y + 0.5 * h * k1, t + 0.5 * h)?;
    let k3 = bohm_velocity_y(slit, y + 0.5 * h * k2, t + 0.5 * h)?;
    let k4 = bohm_velocity_y(slit, y + h * k3, t + h)?;
    Ok(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

/// Classical RK4 from `(0, y_start)` to `t_end`, with the nominal step
/// `t_end/base_steps` checked against two half steps. A rejected step is
/// halved down to `floor_fraction · t_end`, where it is taken regardless.
pub fn integrate_trajectory(slit: &SlitSpec, y_start: f64, t_end: f64, options: &TrajectoryOptions) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(invalid("T", format!("must be finite and positive, got {t_end}")));
    }
    if !slit.contains(y_start) {
        return Err(invalid("start", format!("{y_start} lies outside the slit")));
    }
    if options.base_steps == 0 || !(options.floor_fraction > 0.0) || !(options.tolerance > 0.0) {
        return Err(invalid("trajectory options", "steps, floor and tolerance must be positive"));
    }
    let h_base = t_end / options.base_steps as f64;
    let h_floor = options.floor_fraction * t_end;
    let tol = options.tolerance * slit.width();
    let mut t = 0.0;
    let mut y = y_start;
    let mut h = h_base;
    let mut times = vec![0.0];
    let mut positions = vec![y_start];
    while t < t_end {
        // land on t_end exactly
        let h_try = if t + h >= t_end { t_end - t } else { h };
        let attempt = (|| -> Result<(f64, f64)> {
            let v0 = bohm_velocity_y(slit, y, t)?;
            let full = rk4_step(slit, t, y, h_try, v0)?;
            let mid = rk4_step(slit, t, y, 0.5 * h_try, v0)?;
            let v_mid = bohm_velocity_y(slit, mid, t + 0.5 * h_try)?;
            let halves = rk4_step(slit, t + 0.5 * h_try, mid, 0.5 * h_try, v_mid)?;
            Ok((full, halves))
        })();
        let at_floor = h_try <= h_floor;
        match attempt {
            Ok((full, halves)) if at_floor || (halves - full).abs() <= tol => {
                let err = (halves - full).abs();
                // Richardson extrapolation of the step-doubled pair
                y = halves + (halves - full) / 15.0;
                t = if h_try == t_end - t { t_end } else { t + h_try };
                if options.record_path || t == t_end {
                    times.push(t);
                    positions.push(y);
                }
                // grow back toward the base step only with ample margin
                if err <= tol / 32.0 {
                    h = (2.0 * h).min(h_base);
                }
            }
            Err(e) if at_floor => return Err(e),
            _ => h = (0.5 * h_try).max(h_floor),
        }
    }
    Ok(Trajectory { times, positions })
}

/// `count` starts equispaced at the cell centres of the slit, integrated in
/// parallel. Paths are recorded.
pub fn trajectory_fan(slit: &SlitSpec, t_end: f64, count: usize) -> Result<Vec<Trajectory>> {
    if count == 0 {
        return Err(invalid("count", "at least one trajectory"));
    }
    let half = 0.5 * slit.width();
    // mirror pairs are exact negatives about the centre
    let starts: Vec<f64> = (0..count)
        .map(|i| slit.center() + half * ((2 * i + 1) as f64 - count as f64) / count as f64)
        .collect();
    let options = TrajectoryOptions::default();
    starts
        .par_iter()
        .map(|&y| integrate_trajectory(slit, y, t_end, &options))
        .collect()
}

/// Endpoints at `t_end` for each start, in input order.
pub fn trajectory_endpoints(slit: &SlitSpec, starts: &[f64], t_end: f64) -> Result<Vec<f64>> {
    let options = TrajectoryOptions {
        record_path: false,
        ..TrajectoryOptions::default()
    };
    starts
        .par_iter()
        .map(|&y| integrate_trajectory(slit, y, t_end, &options).map(|tr| tr.end()))
        .collect()
}
