//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use qhydro::fields::gaussian;
use qhydro::optics::{
    cross_term_spacing, fresnel_propagate, fringe_spacing_from_minima, initial_two_slit_field, transverse_momentum,
    OpticalScene, PoyntingField, SlitSpec,
};
use qhydro::propagators::{
    analytic_gaussian_oracle, classical_ck_trajectory, hamilton_jacobi_residual, ClassicalCKState, GaussianParams,
};
use qhydro::scenario::{catalog_entry, execute, run_scenario, RunOptions, ScenarioConfig};
use qhydro::trajectory::{
    check_non_crossing, integrate_bundle, newton_residual, sample_initial_positions, tube_probability,
    SamplingScheme, TrajectoryBundle,
};
use qhydro::{ComplexField, GridSpec, Model, PhysicalConstants, PotentialSpec, Propagator, PropagatorConfig};

const TAU0: f64 = 10.0;

fn omega0() -> f64 {
    2.0 * PI / TAU0
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn entry(name: &str) -> ScenarioConfig {
    catalog_entry(name).unwrap_or_else(|| panic!("catalog has no '{name}'"))
}

/// Free Gaussian at rest: propagation snapshots and a quantile bundle.
struct FreeRun {
    prop: Propagator,
    snaps: Vec<ComplexField>,
    bundle: TrajectoryBundle,
}

fn free_gaussian_run(n_traj: usize) -> FreeRun {
    let grid = GridSpec::symmetric(40.0, 2048).unwrap();
    let cfg = PropagatorConfig::standard(PhysicalConstants::natural(), PotentialSpec::Free, 1e-3, 4.0);
    let prop = Propagator::new(grid, cfg).unwrap();
    let psi0 = ComplexField::from_fn(grid, 0.0, |x| gaussian(x, 0.0, 1.0, 0.0, 1.0)).unwrap();
    let run = prop.propagate(&psi0, 4.0, 10).unwrap();
    let ens = sample_initial_positions(&grid, &psi0.density(), n_traj, SamplingScheme::Quantile).unwrap();
    let bundle = integrate_bundle(&ens, &run.snapshots, &prop, 0.02).unwrap();
    FreeRun { prop, snaps: run.snapshots, bundle }
}

fn criterion_1(run: &FreeRun) -> Outcome {
    let params = GaussianParams { sigma0: 1.0, x0: 0.0, p0: 0.0 };
    let worst = run
        .snaps
        .iter()
        .map(|s| {
            let exact = analytic_gaussian_oracle(params, run.prop.config(), *run.prop.grid(), s.time()).unwrap();
            s.max_abs_diff(&exact)
        })
        .fold(0.0, f64::max);
    outcome(worst < 1e-6, format!("max |dpsi| = {worst:.3e} over {} snapshots (limit 1e-6)", run.snaps.len()))
}

fn criterion_2(run: &FreeRun) -> Outcome {
    let b = &run.bundle;
    let mut worst = 0.0f64;
    for tr in &b.trajectories {
        let x0 = tr.start();
        for &(t, x) in &tr.samples {
            let ratio = (1.0 + (t / 2.0).powi(2)).sqrt();
            worst = worst.max((x / x0 - ratio).abs() / ratio);
        }
    }
    let ok = worst < 1e-4 && b.failures.is_empty() && b.trajectories.len() == 16;
    outcome(ok, format!("{} trajectories, max relative error {worst:.3e} (limit 1e-4)", b.trajectories.len()))
}

/// Largest drift of the probability between neighbouring trajectories.
fn tube_drift(b: &TrajectoryBundle, snaps: &[ComplexField]) -> f64 {
    let mut worst = 0.0f64;
    for w in b.members.windows(2) {
        let p = tube_probability(b, snaps, w[0], w[1]).unwrap();
        let p0 = p[0].1;
        worst = p.iter().map(|(_, v)| (v - p0).abs()).fold(worst, f64::max);
    }
    worst
}

struct TwoGaussians {
    snaps: Vec<ComplexField>,
    bundle: TrajectoryBundle,
}

fn two_gaussian_run() -> TwoGaussians {
    let grid = GridSpec::symmetric(60.0, 4096).unwrap();
    let cfg = PropagatorConfig::standard(PhysicalConstants::natural(), PotentialSpec::Free, 1e-3, 10.0);
    let prop = Propagator::new(grid, cfg).unwrap();
    let psi0 = ComplexField::from_fn(grid, 0.0, |x| gaussian(x, -3.0, 0.5, 0.0, 1.0) + gaussian(x, 3.0, 0.5, 0.0, 1.0))
        .unwrap()
        .normalized()
        .unwrap();
    let run = prop.propagate(&psi0, 10.0, 10).unwrap();
    let ens = sample_initial_positions(&grid, &psi0.density(), 64, SamplingScheme::Quantile).unwrap();
    let bundle = integrate_bundle(&ens, &run.snapshots, &prop, 0.01).unwrap();
    TwoGaussians { snaps: run.snapshots, bundle }
}

fn criterion_3(run: &TwoGaussians) -> Outcome {
    let b = &run.bundle;
    let nc = check_non_crossing(b);
    let half = b.trajectories.len() / 2;
    let sides = b.trajectories.iter().enumerate().all(|(i, tr)| {
        tr.samples.iter().all(|&(_, x)| if i < half { x < 0.0 } else { x > 0.0 })
    });
    let gap = nc.min_gap.unwrap_or(0.0);
    let sigma_end = 0.5 * (1.0 + (10.0f64 / (2.0 * 0.25)).powi(2)).sqrt();
    let ok = nc.ok && gap > 0.0 && sides && b.failures.is_empty() && b.trajectories.len() == 64;
    outcome(
        ok,
        format!(
            "{} trajectories, min gap {gap:.3e}, halves stay on their side: {sides}, packet width at t = 10: {sigma_end:.2} vs separation 6",
            b.trajectories.len()
        ),
    )
}

fn criterion_4(free: &FreeRun, two: &TwoGaussians) -> Outcome {
    let a = tube_drift(&free.bundle, &free.snaps);
    let b = tube_drift(&two.bundle, &two.snaps);
    outcome(a < 1e-3 && b < 1e-3, format!("max tube drift: free {a:.3e}, two-Gaussian {b:.3e} (limit 1e-3)"))
}

fn criterion_5() -> Outcome {
    let w = omega0();
    let gamma = 0.3 * w;
    let potential = PotentialSpec::Harmonic { omega: w, center: 0.0 };
    let cfg = PropagatorConfig::standard(PhysicalConstants::natural(), potential.clone(), 1e-3, 3.0 / gamma)
        .with_model(Model::CaldirolaKanai, gamma);
    let states = classical_ck_trajectory(ClassicalCKState::new(0.0, 1.0, 0.0), &cfg, 3.0 / gamma).unwrap();
    let e0 = states[0].energy(&potential, 1.0).unwrap();
    let worst = states
        .iter()
        .map(|s| {
            let law = e0 * (-gamma * s.t).exp();
            (s.energy(&potential, 1.0).unwrap() - law).abs() / law
        })
        .fold(0.0, f64::max);
    let mut balance = 0.0f64;
    for w in states.windows(2) {
        let h = w[1].t - w[0].t;
        let de = w[1].energy(&potential, 1.0).unwrap() - w[0].energy(&potential, 1.0).unwrap();
        let loss = -gamma * h * 0.5 * (w[0].p * w[0].p + w[1].p * w[1].p);
        balance = balance.max((de - loss).abs() / e0);
    }
    outcome(
        worst < 1e-5,
        format!("max |E - E0 exp(-gamma t)| / (E0 exp(-gamma t)) = {worst:.3e} (limit 1e-5); per-step dE = -gamma p^2 dt holds to {balance:.1e}"),
    )
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["fig2a", "fig2b", "fig2c"] {
        let start = Instant::now();
        let c = entry(name);
        let m = c.matter_wave().unwrap();
        let prop = Propagator::new(m.grid, m.propagator_config()).unwrap();
        let psi0 = m.initial.build(m.grid, &m.constants).unwrap();
        let run = prop.propagate(&psi0, m.time.t_final, m.time.snapshot_every).unwrap();
        let t_on = 5.0 / m.gamma;
        let tail: Vec<f64> = run.series.iter().filter(|r| r.t > t_on).map(|r| r.width).collect();
        let monotone = tail.len() >= 2 && tail.windows(2).all(|w| w[1] < w[0]);
        let zero_point = 0.5 * omega0();
        let crossing = run.series.iter().find(|r| r.energy < zero_point).map(|r| r.t);
        let secs = start.elapsed().as_secs_f64();
        let this = monotone && crossing.is_some_and(|t| t < 10.0 * TAU0) && secs < 60.0;
        ok &= this;
        parts.push(format!(
            "{name}: width decreasing over {} samples after t = {t_on:.2}: {monotone}, E < hbar w0/2 at t = {}, {secs:.1} s",
            tail.len(),
            crossing.map_or("never".into(), |t| format!("{t:.3}"))
        ));
    }

    let start = Instant::now();
    let c = entry("fig2a");
    let m = c.matter_wave().unwrap();
    let cfg = m.propagator_config().with_model(Model::CaldirolaKanai, 0.0);
    let prop = Propagator::new(m.grid, cfg).unwrap();
    let psi0 = m.initial.build(m.grid, &m.constants).unwrap();
    let run = prop.propagate(&psi0, m.time.t_final, m.time.snapshot_every).unwrap();
    let e0 = run.series[0].energy;
    let dev = run.series.iter().map(|r| (r.energy - e0).abs()).fold(0.0, f64::max) / e0;
    let secs = start.elapsed().as_secs_f64();
    ok &= dev < 1e-6 && secs < 60.0;
    parts.push(format!("gamma = 0 control: max relative energy change {dev:.3e} (limit 1e-6), {secs:.1} s"));
    outcome(ok, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let c = entry("oracle-kostin-relaxation");
    let m = c.matter_wave().unwrap();
    let prop = Propagator::new(m.grid, m.propagator_config()).unwrap();
    let psi0 = m.initial.build(m.grid, &m.constants).unwrap();
    let run = prop.propagate(&psi0, m.time.t_final, m.time.snapshot_every).unwrap();
    let target = 0.5 * omega0();
    let e_end = run.series.last().unwrap().energy;
    let rel = (e_end - target).abs() / target;

    let w = omega0();
    let sigma = (1.0 / (2.0 * w)).sqrt();
    let grid = GridSpec::symmetric(8.0, 512).unwrap();
    let ground_prop = Propagator::new(grid, PropagatorConfig { dt: 5e-4, ..m.propagator_config() }).unwrap();
    let ground = ComplexField::from_fn(grid, 0.0, |x| gaussian(x, 0.0, sigma, 0.0, 1.0)).unwrap().normalized().unwrap();
    let five = ground_prop.propagate(&ground, 5.0 * TAU0, 2000).unwrap();
    let modulus = |f: &ComplexField| f.values().iter().map(|z| z.norm()).collect::<Vec<_>>();
    let a0 = modulus(&ground);
    let drift = five
        .snapshots
        .iter()
        .map(|s| modulus(s).iter().zip(&a0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    outcome(
        rel < 0.01 && drift < 1e-8,
        format!(
            "E(t = {}) = {e_end:.6} vs hbar w0/2 = {target:.6} (relative {rel:.2e}, limit 1e-2); ground state max ||psi(t)| - |psi(0)|| over 5 periods = {drift:.2e} (limit 1e-8)",
            m.time.t_final
        ),
    )
}

/// HJ and Newton residuals of a Kostin run at one resolution.
fn kostin_residuals(dt: f64, n: usize) -> (f64, f64) {
    let w = omega0();
    let grid = GridSpec::symmetric(10.0, n).unwrap();
    let cfg = PropagatorConfig::standard(PhysicalConstants::natural(), PotentialSpec::Harmonic { omega: w, center: 0.0 }, dt, 5.0)
        .with_model(Model::Kostin, 0.3 * w);
    let prop = Propagator::new(grid, cfg).unwrap();
    let sigma = (1.0 / (2.0 * w)).sqrt();
    let psi0 = ComplexField::from_fn(grid, 0.0, |x| gaussian(x, 1.0, sigma, 0.0, 1.0)).unwrap();
    let run = prop.propagate(&psi0, 5.0, 1).unwrap();
    let s = &run.snapshots;
    let mut hj = 0.0f64;
    for k in (1..s.len() - 1).step_by(((0.5 / dt).round() as usize).max(1)) {
        hj = hj.max(hamilton_jacobi_residual(&prop, &s[k - 1], &s[k], &s[k + 1], 1e-3).unwrap().rms);
    }
    let ens = sample_initial_positions(&grid, &psi0.density(), 12, SamplingScheme::Quantile).unwrap();
    let bundle = integrate_bundle(&ens, s, &prop, dt).unwrap();
    let newton = newton_residual(&bundle, s, &prop, 1e-3).unwrap().rms;
    (hj, newton)
}

fn criterion_8() -> Outcome {
    let (hj1, nw1) = kostin_residuals(0.02, 256);
    let (hj2, nw2) = kostin_residuals(0.01, 512);
    let (r_hj, r_nw) = (hj1 / hj2, nw1 / nw2);
    outcome(
        r_hj >= 2.0 && r_nw >= 2.0,
        format!(
            "phase-equation residual {hj1:.3e} -> {hj2:.3e} (ratio {r_hj:.2}); Newton residual {nw1:.3e} -> {nw2:.3e} (ratio {r_nw:.2}); need ratio >= 2"
        ),
    )
}

/// `|Ψ|²` of a normalized Gaussian slit after paraxial free propagation.
fn beam_intensity(sigma: f64, wavelength: f64, x: f64, z: f64) -> f64 {
    let k = 2.0 * PI / wavelength;
    let zr = 2.0 * k * sigma * sigma;
    let s = sigma * (1.0 + (z / zr).powi(2)).sqrt();
    (-x * x / (2.0 * s * s)).exp() / (2.0 * PI * s * s).sqrt()
}

fn criterion_9() -> Outcome {
    let lambda = 943e-9;
    let sigma = 0.3e-3;
    let grid = GridSpec::symmetric(12e-3, 4096).unwrap();
    let planes = vec![0.5, 3.0, 8.0];
    let scene = OpticalScene::new(vec![SlitSpec::gaussian(sigma, 0.0)], lambda, grid, planes.clone()).unwrap();
    let field = fresnel_propagate(&initial_two_slit_field(&scene).unwrap(), &scene).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for (p, &z) in planes.iter().enumerate() {
        let exact: Vec<f64> = grid.points().iter().map(|&x| beam_intensity(sigma, lambda, x, z)).collect();
        let peak = exact.iter().cloned().fold(0.0, f64::max);
        let err = field.intensity(p).iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / peak;
        ok &= err < 1e-4;
        parts.push(format!("z = {z} m: {err:.2e}"));
    }
    outcome(ok, format!("max |I - I_exact| / max I_exact: {} (limit 1e-4)", parts.join(", ")))
}

fn criterion_10() -> Outcome {
    let lambda = 943e-9;
    let sigma = 0.3e-3;
    let half = 2.35e-3;
    let grid = GridSpec::symmetric(12e-3, 4096).unwrap();
    let planes = vec![3.0, 12.0];
    let slits = vec![SlitSpec::gaussian(sigma, half), SlitSpec::gaussian(sigma, -half)];
    let scene = OpticalScene::new(slits.clone(), lambda, grid, planes).unwrap();
    let single = |s: &SlitSpec| {
        let sc = scene.with_slits(vec![*s]);
        fresnel_propagate(&initial_two_slit_field(&sc).unwrap(), &sc).unwrap()
    };
    let (a, b) = (single(&slits[0]), single(&slits[1]));
    let expected = lambda * 3.0 / (2.0 * half);
    let spacing = cross_term_spacing(&grid, &a.psi[0], &b.psi[0], 0.0).unwrap();
    let far = cross_term_spacing(&grid, &a.psi[1], &b.psi[1], 0.0).unwrap();
    let far_expected = lambda * 12.0 / (2.0 * half);

    let field = fresnel_propagate(&initial_two_slit_field(&scene).unwrap(), &scene).unwrap();
    let minima = fringe_spacing_from_minima(&grid, &field.intensity(0), 0.0).unwrap();
    let pf = PoyntingField::from_field(&field).unwrap();
    let prof = transverse_momentum(&pf, 3.0).unwrap();
    let n = grid.n_points();
    let mut parity = 0.0f64;
    for j in 0..n {
        if prof.valid[j] && prof.valid[n - 1 - j] {
            parity = parity.max((prof.values[j] + prof.values[n - 1 - j]).abs());
        }
    }
    let at_zero = 0.5 * (prof.values[n / 2 - 1] + prof.values[n / 2]);
    let rel = (spacing - expected).abs() / expected;
    let ok = rel < 0.02 && parity < 1e-6 && at_zero.abs() < 1e-6;
    outcome(
        ok,
        format!(
            "z = 3 m: spacing {:.4} mm vs lambda z / d = {:.4} mm (relative {rel:.3}, limit 0.02), intensity-minima spacing {:.4} mm; z = 12 m: {:.4} mm vs {:.4} mm; kx/k antisymmetry {parity:.1e}, kx/k(0) = {at_zero:.1e} (limit 1e-6)",
            spacing * 1e3,
            expected * 1e3,
            minima * 1e3,
            far * 1e3,
            far_expected * 1e3
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut values = Vec::new();
    for name in ["fig4-asymmetric", "fig4-trunc-1.9", "fig4-trunc-1.5"] {
        let mut c = entry(name);
        if let Some(o) = match &mut c.setup {
            qhydro::scenario::Setup::Optics(o) => Some(o),
            _ => None,
        } {
            o.paths_per_slit = 0;
        }
        let out = execute(&c);
        values.push((name, out.metrics.get("kx_peak_to_peak_z8").copied()));
    }
    let v: Vec<f64> = values.iter().map(|(_, v)| v.unwrap_or(f64::NAN)).collect();
    let ok = v[0] < v[1] && v[1] < v[2];
    let listed: Vec<String> = values.iter().map(|(n, v)| format!("{n} {:.5}", v.unwrap_or(f64::NAN))).collect();
    outcome(ok, format!("kx/k peak-to-peak at z = 8 m: {}", listed.join(" < ")))
}

fn criterion_12() -> Outcome {
    let out = execute(&entry("fig4-symmetric"));
    let ordering = out.check_named("path_ordering");
    let flux = out.check_named("flux");
    let n_paths = out.table("paths.dat").map_or(0, |t| {
        t.lines()
            .filter(|l| !l.starts_with('#'))
            .filter_map(|l| l.split_whitespace().next()?.parse::<f64>().ok())
            .fold(0.0, f64::max) as usize
    });
    let frac = |k: &str| out.metrics.get(k).copied().unwrap_or(f64::NAN);
    let ok = n_paths == 40
        && ordering.is_some_and(|c| c.passed)
        && flux.is_some_and(|c| c.passed)
        && out.warnings.is_empty();
    outcome(
        ok,
        format!(
            "{n_paths} paths; ordering: {}; central fringe at z = 12 m: path fraction {:.4} vs energy fraction {:.4}, error {:.4} (limit 0.02)",
            ordering.map_or("missing".into(), |c| c.detail.clone()),
            frac("central_fringe_paths"),
            frac("central_fringe_energy"),
            flux.and_then(|c| c.value).unwrap_or(f64::NAN)
        ),
    )
}

fn criterion_13() -> Outcome {
    let w = omega0();
    let grid = GridSpec::symmetric(8.0, 1024).unwrap();
    let potential = PotentialSpec::Harmonic { omega: w, center: 0.0 };
    let base = PropagatorConfig::standard(PhysicalConstants::natural(), potential, 1e-3, 1.0);
    let std_prop = Propagator::new(grid, base.clone()).unwrap();
    let ck = Propagator::new(grid, base.clone().with_model(Model::CaldirolaKanai, 0.0)).unwrap();
    let ko = Propagator::new(grid, base.with_model(Model::Kostin, 0.0)).unwrap();
    let mut psi = ComplexField::from_fn(grid, 0.0, |x| {
        gaussian(x, 1.0, 0.8, 0.7, 1.0) + Complex64::new(0.0, 0.5) * gaussian(x, -1.5, 0.6, 0.0, 1.0)
    })
    .unwrap()
    .normalized()
    .unwrap();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s = std_prop.step(&psi).unwrap();
        worst = worst.max(ck.step(&psi).unwrap().max_abs_diff(&s));
        worst = worst.max(ko.step(&psi).unwrap().max_abs_diff(&s));
        psi = s;
    }

    let dir = tempfile::tempdir().unwrap();
    let mut identical = true;
    let mut compared = 0;
    for name in ["oracle-two-gaussians", "oracle-gaussian-slit"] {
        let c = entry(name);
        let runs: Vec<_> = [1, 4]
            .into_iter()
            .map(|t| {
                let out = dir.path().join(format!("{name}-{t}"));
                run_scenario(&c, &RunOptions { out_dir: Some(out.clone()), threads: Some(t), required_checks: None });
                out
            })
            .collect();
        let mut files: Vec<_> = std::fs::read_dir(&runs[0])
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .filter(|f| f.to_string_lossy().ends_with(".dat"))
            .collect();
        files.sort();
        for f in files {
            let a = std::fs::read(runs[0].join(&f)).unwrap();
            let b = std::fs::read(runs[1].join(&f)).unwrap_or_default();
            identical &= a == b;
            compared += 1;
        }
    }
    outcome(
        worst <= 1e-12 && identical && compared > 0,
        format!("gamma = 0 reductions: max per-step |dpsi| = {worst:.1e} (limit 1e-12); {compared} tables byte-identical for 1 vs 4 threads: {identical}"),
    )
}

fn main() -> ExitCode {
    type Check = Box<dyn FnOnce() -> Outcome>;
    let start = Instant::now();
    let free = free_gaussian_run(16);
    let free_secs = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let two = two_gaussian_run();
    let two_secs = start.elapsed().as_secs_f64();

    let mut results: Vec<(usize, f64, Outcome)> = Vec::new();
    let shared: [(usize, f64, Outcome); 4] = [
        (1, free_secs, criterion_1(&free)),
        (2, free_secs, criterion_2(&free)),
        (3, two_secs, criterion_3(&two)),
        (4, free_secs + two_secs, criterion_4(&free, &two)),
    ];
    let limits = [10.0, 10.0, 30.0, f64::INFINITY];
    for ((i, secs, mut o), limit) in shared.into_iter().zip(limits) {
        if secs >= limit {
            o.passed = false;
            o.detail.push_str(&format!("; runtime over {limit} s"));
        }
        results.push((i, secs, o));
    }

    let rest: Vec<(usize, f64, Check)> = vec![
        (5, 1.0, Box::new(criterion_5)),
        (6, 180.0, Box::new(criterion_6)),
        (7, 60.0, Box::new(criterion_7)),
        (8, f64::INFINITY, Box::new(criterion_8)),
        (9, 30.0, Box::new(criterion_9)),
        (10, 60.0, Box::new(criterion_10)),
        (11, 90.0, Box::new(criterion_11)),
        (12, 60.0, Box::new(criterion_12)),
        (13, f64::INFINITY, Box::new(criterion_13)),
    ];
    for (i, limit, f) in rest {
        let start = Instant::now();
        let mut o = f();
        let secs = start.elapsed().as_secs_f64();
        if secs >= limit {
            o.passed = false;
            o.detail.push_str(&format!("; runtime over {limit} s"));
        }
        results.push((i, secs, o));
    }

    let mut failed = 0;
    for (i, secs, o) in &results {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {i:>2}: {tag}  [{secs:.1} s]  {}", o.detail);
        failed += usize::from(!o.passed);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
