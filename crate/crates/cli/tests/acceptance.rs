//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use locstate_core::density::trapezoid;
use locstate_core::diffraction::{compare_patterns, screen_density, trajectory_endpoints};
use locstate_core::freestate::{default_grid, rectangular_state, FreeLocationState};
use locstate_core::numerics::gauss_legendre;
use locstate_core::potentialstate::oscillator_default_grid;
use locstate_core::{
    density_profile, evaluate_limit, fraunhofer_mapped_reference, fresnel_number, project_coefficients,
    uniform_grid, ComplexValue, OscillatorBasis, OscillatorLocationState, PhysicalConstants, SlitSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = (bool, String);

fn slit() -> SlitSpec {
    SlitSpec::centered(0.1).unwrap()
}

fn oscillator_state() -> OscillatorLocationState {
    let c = PhysicalConstants::default();
    let basis = OscillatorBasis::unit_frequency(c, 250).unwrap();
    project_coefficients(&basis, &SlitSpec::new(2.0, 10.0, c).unwrap()).unwrap()
}

fn fresnel_numbers() -> Outcome {
    let published = [(0.0005, 0.796), (0.00075, 0.531), (0.001, 0.398), (0.01, 0.039)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (t, nf) in published {
        let v = fresnel_number(&slit(), t).unwrap();
        // agreement in every printed decimal
        let pass = (v - nf).abs() < 1e-3;
        ok &= pass;
        parts.push(format!("T={t}: {v:.5} vs {nf}"));
    }
    (ok, parts.join(", "))
}

fn rectangle_recovery() -> Outcome {
    let s = slit();
    let a = s.width();
    let mut exact = true;
    for y in [-0.05, -0.031, 0.0, 0.02, 0.05] {
        let psi = evaluate_limit(&s, y, 0.0).unwrap();
        exact &= psi == ComplexValue::new(1.0 / a.sqrt(), 0.0);
        // (1/√a)² rounds to within two ulp of 1/a
        exact &= (psi.norm_sqr() - 1.0 / a).abs() <= 2.0 * f64::EPSILON / a;
    }
    let state = FreeLocationState::new(s, 1e5).unwrap();
    let rule = gauss_legendre(8).unwrap();
    let panels = 20_000;
    let h = 2.0 * a / panels as f64;
    let (mut err, mut norm) = (0.0, 0.0);
    for p in 0..panels {
        let lo = -a + p as f64 * h;
        err += rule.integrate(lo, lo + h, |y| {
            (state.evaluate_truncated(y, 0.0).unwrap() - rectangular_state(&s, y)).norm_sqr()
        });
        norm += rule.integrate(lo, lo + h, |y| rectangular_state(&s, y).norm_sqr());
    }
    let rel = (err / norm).sqrt();
    (
        exact && rel <= 0.01,
        format!("limit at t=0 equals 1/sqrt(a): {exact}; truncated k_m=1e5 relative L2 on [-a,a] = {rel:.3e}"),
    )
}

fn brute_force(state: &FreeLocationState, y: f64, t: f64) -> ComplexValue {
    let s = state.slit();
    let beta = 0.5 * s.hbar_over_m() * t;
    let inner = gauss_legendre(48).unwrap();
    let outer = gauss_legendre(24).unwrap();
    let km = state.cutoff();
    let panels = (4.0 * km).ceil() as usize;
    let h = 2.0 * km / panels as f64;
    let mut total = ComplexValue::new(0.0, 0.0);
    for p in 0..panels {
        let lo = -km + p as f64 * h;
        total += outer.integrate(lo, lo + h, |k| {
            let bracket: ComplexValue =
                inner.integrate(s.lower_edge(), s.upper_edge(), |yp| ComplexValue::from_polar(1.0, -k * yp));
            bracket * ComplexValue::from_polar(1.0, k * y - beta * k * k)
        });
    }
    total / (2.0 * PI * s.width().sqrt())
}

fn oracle_equivalence() -> Outcome {
    let state = FreeLocationState::new(slit(), 200.0).unwrap();
    let t = 1e-3;
    let grid = default_grid(&slit(), t);
    let points = uniform_grid(grid[0], grid[grid.len() - 1], 101).unwrap();
    let worst = points
        .iter()
        .map(|&y| {
            let fast = state.evaluate_truncated(y, t).unwrap();
            let brute = brute_force(&state, y, t);
            (fast - brute).norm() / brute.norm()
        })
        .fold(0.0f64, f64::max);
    (worst <= 1e-8, format!("max relative error over 101 points = {worst:.3e}"))
}

fn unitarity() -> Outcome {
    // band-limited densities: the trapezoid rule with h well below π/k_m is
    // exact up to the far tails
    let km = 1000.0;
    let state = FreeLocationState::new(slit(), km).unwrap();
    let exact = state.norm();
    let mut free_worst = 0.0f64;
    for t in [0.0, 1e-5, 1e-4, 1e-3, 1e-2] {
        let reach = 4.0 + km * t;
        let n = (2.0 * reach / 1e-3) as usize + 1;
        let grid = uniform_grid(-reach, reach, n).unwrap();
        let d = density_profile(&state, &grid, t, false).unwrap();
        free_worst = free_worst.max((trapezoid(&d.grid_y, &d.density) - exact).abs() / exact);
    }
    let osc = oscillator_state();
    let grid = oscillator_default_grid(&osc, 8001).unwrap();
    let norms: Vec<f64> = [0.0, 0.2, 0.5, 1.0, PI, 5.0]
        .iter()
        .map(|&t| {
            let d = density_profile(&osc, &grid, t, false).unwrap();
            trapezoid(&d.grid_y, &d.density)
        })
        .collect();
    let osc_worst = norms.iter().map(|n| (n - norms[0]).abs() / norms[0]).fold(0.0f64, f64::max);
    (
        free_worst <= 1e-6 && osc_worst <= 1e-6,
        format!("free k_m=1e3 drift vs exact norm {free_worst:.2e}; oscillator drift {osc_worst:.2e}"),
    )
}

fn fraunhofer_convergence() -> Outcome {
    let state = FreeLocationState::new(slit(), 1e8).unwrap();
    let rel = |t: f64| {
        let grid = default_grid(&slit(), t);
        let observed = screen_density(&state, t, &grid).unwrap();
        let reference = fraunhofer_mapped_reference(&slit(), t, &grid).unwrap();
        let r = compare_patterns(&observed, &reference, fresnel_number(&slit(), t).unwrap()).unwrap();
        r.linf_distance / reference.peak()
    };
    let far = rel(0.01);
    let near = rel(0.001);
    (
        far <= 0.02 && near > 0.10,
        format!("L_inf/peak = {far:.4} at N_F=0.0398, {near:.4} at N_F=0.398"),
    )
}

fn revival_and_mirror() -> Outcome {
    let osc = oscillator_state();
    let grid = oscillator_default_grid(&osc, 2001).unwrap();
    let n = grid.len();
    let (mut revival, mut mirror) = (0.0f64, 0.0f64);
    for t in [0.0, 0.5, 1.0, 2.5] {
        let d = density_profile(&osc, &grid, t, false).unwrap().density;
        let later = density_profile(&osc, &grid, t + 2.0 * PI, false).unwrap().density;
        let half = density_profile(&osc, &grid, t + PI, false).unwrap().density;
        for i in 0..n {
            revival = revival.max((later[i] - d[i]).abs());
            mirror = mirror.max((half[i] - d[n - 1 - i]).abs());
        }
    }
    (
        revival <= 1e-9 && mirror <= 1e-9,
        format!("sup revival error {revival:.2e}, sup mirror error {mirror:.2e}"),
    )
}

fn parseval_capture() -> Outcome {
    let osc = oscillator_state();
    let capture = osc.capture();
    let tail = osc.tail_capture(200);
    (
        capture >= 0.999 && tail < 1e-4,
        format!("sum c_n^2 = {capture:.10} (need >= 0.999), tail n>200 = {tail:.3e} (need < 1e-4)"),
    )
}

fn mean_energy_growth() -> Outcome {
    let e: Vec<f64> = [1e3, 1e4, 1e5]
        .iter()
        .map(|&k| FreeLocationState::new(slit(), k).unwrap().mean_energy())
        .collect();
    let increasing = e[1] > e[0] && e[2] > e[1];
    let ratio = e[2] / e[1];
    (
        increasing && (ratio - 10.0).abs() <= 0.5,
        format!("E = {:.4e}, {:.4e}, {:.4e}; E(1e5)/E(1e4) = {ratio:.4}", e[0], e[1], e[2]),
    )
}

/// Quantiles of `|ψ(T)|²` at probabilities `j/bins` from a fine trapezoid
/// CDF, the tails outside the window split evenly.
fn equal_probability_edges(t: f64, bins: usize) -> Vec<f64> {
    let s = slit();
    let grid = uniform_grid(-60.0, 60.0, 120_001).unwrap();
    let d = density_profile(&locstate_core::InfiniteCutoff(s), &grid, t, false).unwrap();
    let mut cdf = vec![0.0; grid.len()];
    for i in 1..grid.len() {
        cdf[i] = cdf[i - 1] + 0.5 * (d.density[i] + d.density[i - 1]) * (grid[i] - grid[i - 1]);
    }
    let outside = 0.5 * (1.0 - cdf[grid.len() - 1]);
    (1..bins)
        .map(|j| {
            let p = j as f64 / bins as f64 - outside;
            let i = cdf.partition_point(|c| *c < p).clamp(1, grid.len() - 1);
            let frac = (p - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
            grid[i - 1] + frac * (grid[i] - grid[i - 1])
        })
        .collect()
}

fn equivariance() -> Outcome {
    let t = 0.01;
    let samples = 10_000;
    let bins = 40;
    let s = slit();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_917);
    let starts: Vec<f64> = (0..samples).map(|_| rng.gen_range(s.lower_edge()..s.upper_edge())).collect();
    let ends = match trajectory_endpoints(&s, &starts, t) {
        Ok(e) => e,
        Err(e) => return (false, format!("integration failed: {e}")),
    };
    let edges = equal_probability_edges(t, bins);
    let mut counts = vec![0usize; bins];
    for y in &ends {
        counts[edges.partition_point(|e| e < y)] += 1;
    }
    let expected = samples as f64 / bins as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.99);
    (
        chi2 < critical,
        format!("chi^2 = {chi2:.2} over {bins} bins, 1% critical value {critical:.2}"),
    )
}

fn run_presets(dir: &Path, threads: Option<&str>) -> Result<BTreeMap<String, Vec<u8>>, String> {
    for preset in ["fig2", "fig3", "fig4"] {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_locstate"));
        cmd.current_dir(dir).args(["--preset", preset]);
        match threads {
            Some(n) => cmd.env("LOCSTATE_THREADS", n),
            None => cmd.env_remove("LOCSTATE_THREADS"),
        };
        let out = cmd.output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
    }
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        files.insert(
            entry.file_name().to_string_lossy().into_owned(),
            std::fs::read(entry.path()).map_err(|e| e.to_string())?,
        );
    }
    Ok(files)
}

fn determinism() -> Outcome {
    let configs = [None, None, Some("1"), Some("4")];
    let mut runs = Vec::new();
    for threads in configs {
        let dir = tempfile::tempdir().unwrap();
        match run_presets(dir.path(), threads) {
            Ok(files) => runs.push(files),
            Err(e) => return (false, format!("preset run failed: {e}")),
        }
    }
    let identical = runs.iter().all(|r| *r == runs[0]);
    (
        identical && runs[0].len() == 16,
        format!("{} files per run, identical across 2 default runs and 1 vs 4 threads: {identical}", runs[0].len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("fresnel numbers", fresnel_numbers),
        ("rectangle recovery", rectangle_recovery),
        ("oracle equivalence", oracle_equivalence),
        ("unitarity", unitarity),
        ("fraunhofer convergence", fraunhofer_convergence),
        ("oscillator revival and mirror", revival_and_mirror),
        ("parseval capture", parseval_capture),
        ("mean-energy growth", mean_energy_growth),
        ("dBB equivariance", equivariance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} ({:.1} s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
