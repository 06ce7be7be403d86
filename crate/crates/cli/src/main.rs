use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use locstate_cli::config::split_grid;
use locstate_cli::{configure_threads, resolve, run, CliError, Settings};

/// Location-state diffraction experiments.
///
/// Settings are layered: a preset, then the config file, then flags.
#[derive(Debug, Parser)]
#[command(name = "locstate", version)]
struct Args {
    /// free, oscillator, diffraction, compare, trajectories or mean-energy
    mode: Option<String>,

    /// Flat key=value file with dotted keys (slit.a=0.1)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Preset parameter set: fig2, fig3 or fig4
    #[arg(long)]
    preset: Option<String>,

    /// Slit width
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,

    /// Slit centre
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<String>,

    /// Ratio hbar/m (default 1)
    #[arg(long = "hbar-over-m", allow_hyphen_values = true)]
    hbar_over_m: Option<String>,

    /// Spectral cutoff; a comma list in mean-energy mode
    #[arg(long, conflicts_with = "nmax")]
    km: Option<String>,

    /// Highest oscillator level
    #[arg(long)]
    nmax: Option<String>,

    /// Oscillator angular frequency
    #[arg(long)]
    omega: Option<String>,

    /// Comma-separated evolution times (pi multiples allowed: 2pi)
    #[arg(long, allow_hyphen_values = true)]
    times: Option<String>,

    /// Screen distance
    #[arg(long = "screen-D", requires = "kx")]
    screen_d: Option<String>,

    /// Longitudinal wave number
    #[arg(long, requires = "screen_d")]
    kx: Option<String>,

    /// Position grid as MIN:MAX:N
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,

    /// Number of trajectories in a fan
    #[arg(long)]
    count: Option<String>,

    /// csv, json or svg
    #[arg(long)]
    format: Option<String>,

    /// Output path stem; files are named <stem>_t<value>.<ext>
    #[arg(long)]
    out: Option<PathBuf>,
}

fn flag_layer(args: &Args) -> Result<Settings, CliError> {
    let mut s = Settings::new();
    let pairs: [(&str, &'static str, &Option<String>); 13] = [
        ("mode", "<mode>", &args.mode),
        ("preset", "--preset", &args.preset),
        ("slit.a", "--a", &args.a),
        ("slit.y0", "--y0", &args.y0),
        ("constants.hbar_over_m", "--hbar-over-m", &args.hbar_over_m),
        ("cutoff.k_m", "--km", &args.km),
        ("cutoff.n_max", "--nmax", &args.nmax),
        ("oscillator.omega", "--omega", &args.omega),
        ("times", "--times", &args.times),
        ("screen.D", "--screen-D", &args.screen_d),
        ("screen.k_x", "--kx", &args.kx),
        ("trajectories.count", "--count", &args.count),
        ("output.format", "--format", &args.format),
    ];
    for (key, flag, value) in pairs {
        if let Some(v) = value {
            s.set_flag(key, flag, v.clone())?;
        }
    }
    if let Some(out) = &args.out {
        s.set_flag("output.path", "--out", out.to_string_lossy().into_owned())?;
    }
    if let Some(grid) = &args.grid {
        let (min, max, n) = split_grid(grid)?;
        s.set_flag("grid.min", "--grid", min)?;
        s.set_flag("grid.max", "--grid", max)?;
        s.set_flag("grid.points", "--grid", n)?;
    }
    Ok(s)
}

fn execute(args: &Args) -> Result<(), CliError> {
    configure_threads()?;
    let flags = flag_layer(args)?;
    let config = resolve(args.config.as_deref(), &flags)?;
    let mut stdout = std::io::stdout().lock();
    for path in run(&config)? {
        // a closed pipe downstream is not a failure of the run
        if writeln!(stdout, "{}", path.display()).is_err() {
            break;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("locstate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
