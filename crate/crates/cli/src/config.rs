//! Experiment configuration: flat `key=value` files with dotted keys,
//! named presets and command-line flags, layered preset < file < flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use locstate_core::{PhysicalConstants, ScreenGeometry, SlitSpec};

use crate::CliError;

/// Every key a config file may set.
pub const KEYS: &[&str] = &[
    "mode",
    "preset",
    "slit.a",
    "slit.y0",
    "constants.hbar_over_m",
    "cutoff.k_m",
    "cutoff.n_max",
    "oscillator.omega",
    "times",
    "screen.D",
    "screen.k_x",
    "grid.min",
    "grid.max",
    "grid.points",
    "output.format",
    "output.path",
    "trajectories.count",
];

/// Cutoff used for free-particle profiles when none is given.
pub const DEFAULT_KM: f64 = 1e8;
pub const DEFAULT_NMAX: usize = 250;
pub const DEFAULT_GRID_POINTS: usize = 2001;
pub const DEFAULT_TRAJECTORIES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Free,
    Oscillator,
    Diffraction,
    Compare,
    Trajectories,
    MeanEnergy,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Free => "free",
            Mode::Oscillator => "oscillator",
            Mode::Diffraction => "diffraction",
            Mode::Compare => "compare",
            Mode::Trajectories => "trajectories",
            Mode::MeanEnergy => "mean-energy",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "free" => Mode::Free,
            "oscillator" => Mode::Oscillator,
            "diffraction" => Mode::Diffraction,
            "compare" => Mode::Compare,
            "trajectories" => Mode::Trajectories,
            "mean-energy" => Mode::MeanEnergy,
            _ => {
                return Err(format!(
                    "unknown mode '{s}' (expected free, oscillator, diffraction, compare, trajectories or mean-energy)"
                ))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(format!("unknown format '{s}' (expected csv, json or svg)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            _ => Err(format!("unknown preset '{s}' (expected fig2, fig3 or fig4)")),
        }
    }
}

impl Preset {
    pub fn as_str(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    fn entries(&self) -> &'static [(&'static str, &'static str)] {
        match self {
            // free location state of a 0.1-wide slit spreading from collapse
            Preset::Fig2 => &[
                ("mode", "free"),
                ("slit.a", "0.1"),
                ("slit.y0", "0"),
                ("constants.hbar_over_m", "1"),
                ("cutoff.k_m", "1e8"),
                ("times", "0,1e-5,1e-4,1e-3,1e-2,1e-1"),
                ("output.format", "csv"),
                ("output.path", "fig2"),
            ],
            // oscillator detected at y0 = 10 through a slit of width 2
            Preset::Fig3 => &[
                ("mode", "oscillator"),
                ("slit.a", "2"),
                ("slit.y0", "10"),
                ("constants.hbar_over_m", "1"),
                ("oscillator.omega", "1"),
                ("cutoff.n_max", "250"),
                ("times", "0,0.2,0.4,0.6,0.8,1.0"),
                ("output.format", "csv"),
                ("output.path", "fig3"),
            ],
            // screen patterns against the far-field reference
            Preset::Fig4 => &[
                ("mode", "compare"),
                ("slit.a", "0.1"),
                ("slit.y0", "0"),
                ("constants.hbar_over_m", "1"),
                ("cutoff.k_m", "1e8"),
                ("times", "0.0005,0.00075,0.001,0.01"),
                ("output.format", "json"),
                ("output.path", "fig4"),
            ],
        }
    }
}

/// Where a setting came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Preset(&'static str),
    File { path: PathBuf, line: usize },
    Flag(&'static str),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Preset(name) => write!(f, "preset {name}"),
            Origin::File { path, line } => write!(f, "{}:{line}", path.display()),
            Origin::Flag(flag) => write!(f, "flag {flag}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Setting {
    value: String,
    origin: Origin,
}

/// Raw settings from one or more layers; later layers win.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<&'static str, Setting>,
}

fn canonical_key(key: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|k| *k == key)
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    fn set(&mut self, key: &'static str, value: impl Into<String>, origin: Origin) {
        self.values.insert(
            key,
            Setting {
                value: value.into(),
                origin,
            },
        );
    }

    /// Set `key` from a command-line flag.
    pub fn set_flag(&mut self, key: &str, flag: &'static str, value: impl Into<String>) -> Result<(), CliError> {
        let key = canonical_key(key).ok_or_else(|| CliError::Config(format!("flag {flag}: unknown key '{key}'")))?;
        self.set(key, value, Origin::Flag(flag));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.value.as_str())
    }

    pub fn origin(&self, key: &str) -> Option<&Origin> {
        self.values.get(key).map(|s| &s.origin)
    }

    /// Layer `other` on top of `self`.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k, v.clone());
        }
    }

    pub fn from_preset(preset: Preset) -> Self {
        let mut s = Self::new();
        for (k, v) in preset.entries() {
            let key = canonical_key(k).expect("preset keys are known");
            s.set(key, *v, Origin::Preset(preset.as_str()));
        }
        s
    }

    /// Parse a flat `key = value` file. Blank lines and lines starting with
    /// `#` are skipped; unknown or repeated keys are errors.
    pub fn parse_file(text: &str, path: &Path) -> Result<Self, CliError> {
        let mut s = Self::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let at = || format!("{}:{line}", path.display());
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{}: expected key=value, got '{trimmed}'", at())))?;
            let key = key.trim();
            let value = value.trim();
            let canonical =
                canonical_key(key).ok_or_else(|| CliError::Config(format!("{}: unknown key '{key}'", at())))?;
            if let Some(prev) = s.origin(canonical) {
                return Err(CliError::Config(format!("{}: key '{key}' already set at {prev}", at())));
            }
            if value.is_empty() {
                return Err(CliError::Config(format!("{}: key '{key}' has no value", at())));
            }
            s.set(
                canonical,
                value,
                Origin::File {
                    path: path.to_path_buf(),
                    line,
                },
            );
        }
        Ok(s)
    }

    pub fn load_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_file(&text, path)
    }

    fn error(&self, key: &str, msg: impl fmt::Display) -> CliError {
        match self.origin(key) {
            Some(origin) => CliError::Config(format!("{origin}: {key}: {msg}")),
            None => CliError::Config(format!("{key}: {msg}")),
        }
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| self.error(key, format!("invalid value '{v}': {e}"))))
            .transpose()
    }

    fn real(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| parse_real(v).map_err(|e| self.error(key, e)))
            .transpose()
    }

    fn reals(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| parse_real(item.trim()))
                    .collect::<Result<Vec<f64>, String>>()
                    .map_err(|e| self.error(key, e))
            })
            .transpose()
    }
}

/// A finite real, also accepting `pi` with an optional numeric multiplier
/// (`2pi`, `0.5pi`).
pub fn parse_real(text: &str) -> Result<f64, String> {
    let value = if let Some(mult) = text.strip_suffix("pi") {
        let m = match mult.trim_end_matches('*') {
            "" => 1.0,
            "-" => -1.0,
            m => m.parse::<f64>().map_err(|_| format!("not a number: '{text}'"))?,
        };
        m * std::f64::consts::PI
    } else {
        text.parse::<f64>().map_err(|_| format!("not a number: '{text}'"))?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not a finite number: '{text}'"))
    }
}

/// Parse the `MIN:MAX:N` grid shorthand into its three keys.
pub fn split_grid(text: &str) -> Result<(String, String, String), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [min, max, n] => Ok((min.to_string(), max.to_string(), n.to_string())),
        _ => Err(CliError::Config(format!("flag --grid: expected MIN:MAX:N, got '{text}'"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

/// What drives the evolution parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Evolution {
    Times(Vec<f64>),
    Screen(ScreenGeometry),
    None,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub slit: SlitSpec,
    pub cutoffs_km: Vec<f64>,
    pub n_max: usize,
    pub omega: f64,
    pub evolution: Evolution,
    pub grid: Option<GridSpec>,
    pub format: Format,
    pub out_path: PathBuf,
    pub trajectory_count: usize,
}

impl ExperimentConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let mode: Mode = s
            .parse("mode")?
            .ok_or_else(|| CliError::Config("mode is required".into()))?;

        let hbar_over_m = s.real("constants.hbar_over_m")?.unwrap_or(1.0);
        let constants =
            PhysicalConstants::new(hbar_over_m).map_err(|e| s.error("constants.hbar_over_m", e))?;
        let a = s.real("slit.a")?.ok_or_else(|| s.error("slit.a", "slit width is required"))?;
        let y0 = s.real("slit.y0")?.unwrap_or(0.0);
        let slit = SlitSpec::new(a, y0, constants).map_err(|e| s.error("slit.a", e))?;

        let km = s.reals("cutoff.k_m")?;
        let n_max: Option<usize> = s.parse("cutoff.n_max")?;
        if km.is_some() && n_max.is_some() {
            return Err(s.error("cutoff.n_max", "cutoff.k_m and cutoff.n_max are mutually exclusive"));
        }
        let uses_km = matches!(mode, Mode::Free | Mode::Diffraction | Mode::Compare | Mode::MeanEnergy);
        if km.is_some() && !uses_km {
            return Err(s.error("cutoff.k_m", format!("not used by {} mode", mode.as_str())));
        }
        if n_max.is_some() && mode != Mode::Oscillator {
            return Err(s.error("cutoff.n_max", format!("not used by {} mode", mode.as_str())));
        }
        let cutoffs_km = match (mode, km) {
            (Mode::MeanEnergy, None) => return Err(s.error("cutoff.k_m", "mean-energy needs at least one cutoff")),
            (Mode::Free, None) => vec![DEFAULT_KM],
            (_, None) => Vec::new(),
            (Mode::MeanEnergy, Some(list)) => list,
            (_, Some(list)) if list.len() != 1 => {
                return Err(s.error("cutoff.k_m", "exactly one cutoff expected outside mean-energy mode"))
            }
            (_, Some(list)) => list,
        };
        if let Some(bad) = cutoffs_km.iter().find(|k| !(**k > 0.0)) {
            return Err(s.error("cutoff.k_m", format!("cutoff must be positive, got {bad}")));
        }

        let omega = s.real("oscillator.omega")?.unwrap_or(1.0);
        if s.get("oscillator.omega").is_some() && mode != Mode::Oscillator {
            return Err(s.error("oscillator.omega", format!("not used by {} mode", mode.as_str())));
        }
        if !(omega > 0.0) {
            return Err(s.error("oscillator.omega", "must be positive"));
        }

        let times = s.reals("times")?;
        let screen_d = s.real("screen.D")?;
        let screen_kx = s.real("screen.k_x")?;
        let screen = match (screen_d, screen_kx) {
            (None, None) => None,
            (Some(d), Some(kx)) => Some(ScreenGeometry::new(d, kx, constants).map_err(|e| s.error("screen.D", e))?),
            (Some(_), None) => return Err(s.error("screen.D", "screen.k_x must be given with screen.D")),
            (None, Some(_)) => return Err(s.error("screen.k_x", "screen.D must be given with screen.k_x")),
        };
        let evolution = match (mode, times, screen) {
            (Mode::MeanEnergy, None, None) => Evolution::None,
            (Mode::MeanEnergy, _, _) => return Err(s.error("times", "mean-energy takes no times or screen")),
            (_, Some(_), Some(_)) => {
                return Err(s.error("times", "give either times or a screen geometry, not both"))
            }
            (_, None, None) => return Err(s.error("times", "times or screen.D/screen.k_x are required")),
            (_, Some(list), None) => Evolution::Times(list),
            (Mode::Free | Mode::Oscillator, None, Some(_)) => {
                return Err(s.error("screen.D", format!("{} mode takes times, not a screen", mode.as_str())))
            }
            (_, None, Some(screen)) => Evolution::Screen(screen),
        };
        if let Evolution::Times(list) = &evolution {
            let needs_positive = matches!(mode, Mode::Diffraction | Mode::Compare | Mode::Trajectories);
            if needs_positive && list.iter().any(|t| !(*t > 0.0)) {
                return Err(s.error("times", format!("{} mode needs positive times", mode.as_str())));
            }
        }

        let grid = match (s.real("grid.min")?, s.real("grid.max")?) {
            (None, None) => {
                if s.get("grid.points").is_some() {
                    return Err(s.error("grid.points", "grid.min and grid.max must be given with grid.points"));
                }
                None
            }
            (Some(min), Some(max)) => {
                let points: usize = s.parse("grid.points")?.unwrap_or(DEFAULT_GRID_POINTS);
                if points < 2 {
                    return Err(s.error("grid.points", format!("at least 2 points, got {points}")));
                }
                if !(min < max) {
                    return Err(s.error("grid.max", format!("grid.min ({min}) must be below grid.max ({max})")));
                }
                Some(GridSpec { min, max, points })
            }
            (Some(_), None) => return Err(s.error("grid.min", "grid.max must be given with grid.min")),
            (None, Some(_)) => return Err(s.error("grid.max", "grid.min must be given with grid.max")),
        };
        if grid.is_some() && matches!(mode, Mode::MeanEnergy | Mode::Trajectories) {
            return Err(s.error("grid.min", format!("not used by {} mode", mode.as_str())));
        }

        let default_format = match mode {
            Mode::Compare | Mode::MeanEnergy => Format::Json,
            _ => Format::Csv,
        };
        let format = s.parse("output.format")?.unwrap_or(default_format);
        if mode == Mode::MeanEnergy && format == Format::Svg {
            return Err(s.error("output.format", "mean-energy writes csv or json"));
        }
        let out_path = PathBuf::from(s.get("output.path").unwrap_or(mode.as_str()));

        let trajectory_count: usize = s.parse("trajectories.count")?.unwrap_or(DEFAULT_TRAJECTORIES);
        if s.get("trajectories.count").is_some() && mode != Mode::Trajectories {
            return Err(s.error("trajectories.count", format!("not used by {} mode", mode.as_str())));
        }
        if trajectory_count == 0 {
            return Err(s.error("trajectories.count", "at least one trajectory"));
        }

        Ok(Self {
            mode,
            slit,
            cutoffs_km,
            n_max: n_max.unwrap_or(DEFAULT_NMAX),
            omega,
            evolution,
            grid,
            format,
            out_path,
            trajectory_count,
        })
    }
}

/// Merge the layers: the preset named by the flags (or else the file), then
/// the file, then the flags.
pub fn resolve(file: Option<&Path>, flags: &Settings) -> Result<ExperimentConfig, CliError> {
    let file_layer = file.map(Settings::load_file).transpose()?.unwrap_or_default();
    let preset_name = flags.get("preset").map(|_| flags).or_else(|| file_layer.get("preset").map(|_| &file_layer));
    let mut merged = match preset_name {
        Some(layer) => {
            let preset: Preset = layer.parse("preset")?.expect("preset key is present");
            Settings::from_preset(preset)
        }
        None => Settings::new(),
    };
    merged.overlay(&file_layer);
    merged.overlay(flags);
    ExperimentConfig::from_settings(&merged)
}
