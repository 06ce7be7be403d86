//! Text encoders for densities, reports and trajectories. Every encoder is
//! a pure function of its input, so equal data gives equal bytes.

use std::fmt::Write as _;
use std::path::Path;

use locstate_core::diffraction::Trajectory;
use locstate_core::{ComparisonReport, Regime, SampledDensity};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `y,density` with 17 significant digits and LF line endings.
pub fn density_csv(density: &SampledDensity) -> String {
    let mut out = String::with_capacity(48 * density.len() + 16);
    out.push_str("y,density\n");
    for (y, d) in density.grid_y.iter().zip(&density.density) {
        let _ = writeln!(out, "{y:.16e},{d:.16e}");
    }
    out
}

#[derive(Serialize)]
struct DensityRecord<'a> {
    time: f64,
    normalized: bool,
    y: &'a [f64],
    density: &'a [f64],
}

pub fn density_json(density: &SampledDensity) -> String {
    let record = DensityRecord {
        time: density.time_t,
        normalized: density.normalized,
        y: &density.grid_y,
        density: &density.density,
    };
    serde_json::to_string(&record).expect("densities serialize") + "\n"
}

/// Serialized form of a [`ComparisonReport`], fields in fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub fresnel_number: f64,
    pub l2_distance: f64,
    pub linf_distance: f64,
    pub peak_ratio: f64,
    pub regime: String,
}

impl From<&ComparisonReport> for ReportRecord {
    fn from(r: &ComparisonReport) -> Self {
        Self {
            fresnel_number: r.fresnel_number,
            l2_distance: r.l2_distance,
            linf_distance: r.linf_distance,
            peak_ratio: r.peak_ratio,
            regime: r.regime.as_str().to_string(),
        }
    }
}

impl ReportRecord {
    pub fn regime(&self) -> Option<Regime> {
        match self.regime.as_str() {
            "Fresnel" => Some(Regime::Fresnel),
            "Transition" => Some(Regime::Transition),
            "Fraunhofer" => Some(Regime::Fraunhofer),
            _ => None,
        }
    }
}

pub fn report_json(report: &ComparisonReport) -> String {
    serde_json::to_string_pretty(&ReportRecord::from(report)).expect("reports serialize") + "\n"
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanEnergyRecord {
    pub k_m: f64,
    pub mean_energy: f64,
}

pub fn mean_energy_csv(rows: &[MeanEnergyRecord]) -> String {
    let mut out = String::from("k_m,mean_energy\n");
    for r in rows {
        let _ = writeln!(out, "{:.16e},{:.16e}", r.k_m, r.mean_energy);
    }
    out
}

pub fn mean_energy_json(rows: &[MeanEnergyRecord]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize") + "\n"
}

/// `trajectory,t,y`, one row per recorded point.
pub fn trajectories_csv(fan: &[Trajectory]) -> String {
    let mut out = String::from("trajectory,t,y\n");
    for (i, tr) in fan.iter().enumerate() {
        for (t, y) in tr.times.iter().zip(&tr.positions) {
            let _ = writeln!(out, "{i},{t:.16e},{y:.16e}");
        }
    }
    out
}

#[derive(Serialize)]
struct TrajectoryRecord<'a> {
    start: f64,
    t: &'a [f64],
    y: &'a [f64],
}

pub fn trajectories_json(fan: &[Trajectory]) -> String {
    let records: Vec<TrajectoryRecord> = fan
        .iter()
        .map(|tr| TrajectoryRecord {
            start: tr.start(),
            t: &tr.times,
            y: &tr.positions,
        })
        .collect();
    serde_json::to_string(&records).expect("trajectories serialize") + "\n"
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;

/// Maps data coordinates into the plot box, leaving 5% margins.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let (y0, y1) = if y1 > y0 { (y0, y1) } else { (y0 - 0.5, y0 + 0.5) };
        let (x0, x1) = if x1 > x0 { (x0, x1) } else { (x0 - 0.5, x0 + 0.5) };
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        let m = 0.05 * WIDTH;
        m + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * m)
    }

    fn py(&self, y: f64) -> f64 {
        let m = 0.05 * HEIGHT;
        HEIGHT - m - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * m)
    }

    fn polyline(&self, xs: &[f64], ys: &[f64], style: &str) -> String {
        let mut pts = String::with_capacity(16 * xs.len());
        for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
            if i > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.2},{:.2}", self.px(*x), self.py(*y));
        }
        format!("<polyline fill=\"none\" {style} points=\"{pts}\"/>\n")
    }

    fn axes(&self, x_label: &str, y_label: &str) -> String {
        let mut out = String::new();
        let (l, r) = (self.px(self.x0), self.px(self.x1));
        let (b, t) = (self.py(self.y0), self.py(self.y1));
        let _ = writeln!(
            out,
            "<path d=\"M{l:.2},{t:.2} L{l:.2},{b:.2} L{r:.2},{b:.2}\" stroke=\"black\" fill=\"none\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\">{x_label}</text>",
            0.5 * (l + r),
            HEIGHT - 4.0
        );
        let _ = writeln!(
            out,
            "<text x=\"12\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 12 {:.2})\">{y_label}</text>",
            0.5 * (t + b),
            0.5 * (t + b)
        );
        let _ = writeln!(
            out,
            "<text x=\"{l:.2}\" y=\"{:.2}\" font-size=\"10\">{:.4e}</text>",
            b + 12.0,
            self.x0
        );
        let _ = writeln!(
            out,
            "<text x=\"{r:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"end\">{:.4e}</text>",
            b + 12.0,
            self.x1
        );
        let _ = writeln!(out, "<text x=\"{:.2}\" y=\"{t:.2}\" font-size=\"10\">{:.4e}</text>", l + 4.0, self.y1);
        out
    }
}

fn svg_document(body: &str, title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <title>{title}</title>\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

/// Density plot; the optional reference is drawn dashed red beneath the
/// solid blue observation.
pub fn density_svg(observed: &SampledDensity, reference: Option<&SampledDensity>, title: &str) -> String {
    let mut top = observed.peak();
    if let Some(r) = reference {
        top = top.max(r.peak());
    }
    let xs = &observed.grid_y;
    let frame = Frame::new(xs[0], xs[xs.len() - 1], 0.0, top);
    let mut body = frame.axes("y", "|Ψ|²");
    if let Some(r) = reference {
        body += &frame.polyline(
            &r.grid_y,
            &r.density,
            "stroke=\"red\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"",
        );
    }
    body += &frame.polyline(xs, &observed.density, "stroke=\"blue\" stroke-width=\"1.5\"");
    svg_document(&body, title)
}

/// Trajectory fan, `y` against `t`.
pub fn trajectories_svg(fan: &[Trajectory], title: &str) -> String {
    let t_end = fan.iter().map(|tr| *tr.times.last().unwrap_or(&0.0)).fold(0.0, f64::max);
    let (lo, hi) = fan
        .iter()
        .flat_map(|tr| tr.positions.iter())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(*y), b.max(*y)));
    // plot y horizontally as on a screen, time upward
    let frame = Frame::new(lo, hi, 0.0, t_end);
    let mut body = frame.axes("y", "t");
    for tr in fan {
        body += &frame.polyline(&tr.positions, &tr.times, "stroke=\"blue\" stroke-width=\"0.8\"");
    }
    svg_document(&body, title)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
