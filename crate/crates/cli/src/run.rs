//! Executes a validated experiment and writes its artifacts.

use std::path::{Path, PathBuf};

use locstate_core::diffraction::{compare_patterns, screen_density, trajectory_fan};
use locstate_core::freestate::{default_grid, InfiniteCutoff};
use locstate_core::potentialstate::oscillator_default_grid;
use locstate_core::{
    density_profile, fraunhofer_mapped_reference, fresnel_number, project_coefficients, uniform_grid, Error,
    Evaluator, FreeLocationState, OscillatorBasis, SampledDensity,
};

use crate::config::{Evolution, ExperimentConfig, Format, Mode};
use crate::emit::{self, MeanEnergyRecord};
use crate::CliError;

fn numerical(e: Error) -> CliError {
    CliError::Numerical(e.to_string())
}

/// `<stem>_t<value>.<ext>`, with any matching extension on the stem dropped.
pub fn output_path(stem: &Path, suffix: Option<&str>, format: Format) -> PathBuf {
    let ext = format.extension();
    let base = match stem.extension() {
        Some(e) if e == ext => stem.with_extension(""),
        _ => stem.to_path_buf(),
    };
    let mut name = base.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    if let Some(s) = suffix {
        name.push_str(s);
    }
    name.push('.');
    name.push_str(ext);
    base.with_file_name(name)
}

fn time_suffix(t: f64) -> String {
    format!("_t{t}")
}

fn times_of(config: &ExperimentConfig) -> Vec<f64> {
    match &config.evolution {
        Evolution::Times(list) => list.clone(),
        Evolution::Screen(screen) => vec![screen.time_of_flight()],
        Evolution::None => Vec::new(),
    }
}

fn grid_for(config: &ExperimentConfig, t: f64) -> Result<Vec<f64>, CliError> {
    match config.grid {
        Some(g) => uniform_grid(g.min, g.max, g.points).map_err(|e| CliError::Config(format!("grid: {e}"))),
        None => Ok(default_grid(&config.slit, t)),
    }
}

fn write_density(config: &ExperimentConfig, density: &SampledDensity, suffix: &str) -> Result<PathBuf, CliError> {
    let path = output_path(&config.out_path, Some(suffix), config.format);
    let body = match config.format {
        Format::Csv => emit::density_csv(density),
        Format::Json => emit::density_json(density),
        Format::Svg => emit::density_svg(density, None, &format!("|Ψ|² at t = {}", density.time_t)),
    };
    emit::write_file(&path, &body)?;
    Ok(path)
}

/// Free evaluator for the configured cutoff, or the exact limit without one.
fn free_evaluator(config: &ExperimentConfig) -> Result<Box<dyn Evaluator>, CliError> {
    match config.cutoffs_km.first() {
        Some(&km) => Ok(Box::new(
            FreeLocationState::new(config.slit, km).map_err(|e| CliError::Config(format!("cutoff.k_m: {e}")))?,
        )),
        None => Ok(Box::new(InfiniteCutoff(config.slit))),
    }
}

/// Run the experiment; returns the files written, in order.
pub fn run(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    match config.mode {
        Mode::Free | Mode::Diffraction => {
            let evaluator = free_evaluator(config)?;
            // compute everything before touching the filesystem
            let profiles = times_of(config)
                .into_iter()
                .map(|t| {
                    let grid = grid_for(config, t)?;
                    let d = if config.mode == Mode::Free {
                        density_profile(&*evaluator, &grid, t, true)
                    } else {
                        screen_density(&*evaluator, t, &grid)
                    };
                    d.map_err(numerical)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            for d in &profiles {
                written.push(write_density(config, d, &time_suffix(d.time_t))?);
            }
        }
        Mode::Oscillator => {
            let basis = OscillatorBasis::new(config.slit.constants(), config.omega, config.n_max)
                .map_err(|e| CliError::Config(format!("oscillator: {e}")))?;
            let state = project_coefficients(&basis, &config.slit).map_err(numerical)?;
            let profiles = times_of(config)
                .into_iter()
                .map(|t| {
                    let grid = match config.grid {
                        Some(_) => grid_for(config, t)?,
                        None => oscillator_default_grid(&state, crate::config::DEFAULT_GRID_POINTS).map_err(numerical)?,
                    };
                    density_profile(&state, &grid, t, true).map_err(numerical)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            for d in &profiles {
                written.push(write_density(config, d, &time_suffix(d.time_t))?);
            }
        }
        Mode::Compare => {
            let evaluator = free_evaluator(config)?;
            let mut results = Vec::new();
            for t in times_of(config) {
                let grid = grid_for(config, t)?;
                let observed = screen_density(&*evaluator, t, &grid).map_err(numerical)?;
                let reference = fraunhofer_mapped_reference(&config.slit, t, &grid).map_err(numerical)?;
                let nf = fresnel_number(&config.slit, t).map_err(numerical)?;
                let report = compare_patterns(&observed, &reference, nf).map_err(numerical)?;
                results.push((t, observed, reference, report));
            }
            for (t, observed, reference, report) in &results {
                let suffix = time_suffix(*t);
                match config.format {
                    Format::Json => {
                        let path = output_path(&config.out_path, Some(&suffix), Format::Json);
                        emit::write_file(&path, &emit::report_json(report))?;
                        written.push(path);
                    }
                    Format::Svg => {
                        let path = output_path(&config.out_path, Some(&suffix), Format::Svg);
                        let title = format!("T = {t}, N_F = {:.3}", report.fresnel_number);
                        emit::write_file(&path, &emit::density_svg(observed, Some(reference), &title))?;
                        written.push(path);
                    }
                    Format::Csv => {
                        written.push(write_density(config, observed, &suffix)?);
                        written.push(write_density(config, reference, &format!("{suffix}_reference"))?);
                    }
                }
            }
        }
        Mode::Trajectories => {
            let fans = times_of(config)
                .into_iter()
                .map(|t| trajectory_fan(&config.slit, t, config.trajectory_count).map(|f| (t, f)))
                .collect::<Result<Vec<_>, Error>>()
                .map_err(numerical)?;
            for (t, fan) in &fans {
                let path = output_path(&config.out_path, Some(&time_suffix(*t)), config.format);
                let body = match config.format {
                    Format::Csv => emit::trajectories_csv(fan),
                    Format::Json => emit::trajectories_json(fan),
                    Format::Svg => emit::trajectories_svg(fan, &format!("trajectories to t = {t}")),
                };
                emit::write_file(&path, &body)?;
                written.push(path);
            }
        }
        Mode::MeanEnergy => {
            let rows = config
                .cutoffs_km
                .iter()
                .map(|&k_m| {
                    let state = FreeLocationState::new(config.slit, k_m)
                        .map_err(|e| CliError::Config(format!("cutoff.k_m: {e}")))?;
                    let mean_energy = state.mean_energy();
                    if !mean_energy.is_finite() {
                        return Err(CliError::Numerical("mean_energy: non-finite value".into()));
                    }
                    Ok(MeanEnergyRecord { k_m, mean_energy })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let path = output_path(&config.out_path, None, config.format);
            let body = match config.format {
                Format::Json => emit::mean_energy_json(&rows),
                _ => emit::mean_energy_csv(&rows),
            };
            emit::write_file(&path, &body)?;
            written.push(path);
        }
    }
    Ok(written)
}
