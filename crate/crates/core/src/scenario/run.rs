use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{emit_scenario, Artifact, InitialState, MatterWaveSetup, OpticsSetup, ScenarioConfig, Setup};
use crate::fields::{write_snapshot, ComplexField};
use crate::grid::GridSpec;
use crate::optics::{
    central_fringe_window, check_path_ordering, fresnel_propagate, fringe_spacing_from_minima, initial_two_slit_field,
    launch_positions, path_fraction_in, peak_to_peak, trace_paths, transverse_momentum, write_paths, write_profile,
    PoyntingField,
};
use crate::propagators::{
    analytic_gaussian_oracle, write_series, GaussianParams, Model, PotentialSpec, Propagator, NORM_DRIFT_WARNING,
};
use crate::table::fmt_f64;
use crate::trajectory::{check_non_crossing, integrate_bundle, sample_initial_positions, write_bundle, TubeProbe};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REQUIRED_CHECK: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Environment variable overriding the default output root.
pub const OUT_DIR_ENV: &str = "QHYDRO_OUT_DIR";

const ENERGY_CONSERVATION: f64 = 1e-6;
const TUBE_TOLERANCE: f64 = 1e-3;
const ORACLE_TOLERANCE: f64 = 1e-6;
const FLUX_TOLERANCE: f64 = 0.02;
const PARITY_TOLERANCE: f64 = 1e-6;
/// `U` threshold, relative to the plane maximum, for `k_x/k` peak-to-peak metrics.
const KX_P2P_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Ok,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageResult {
    pub name: String,
    pub status: StageStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub value: Option<f64>,
    pub limit: Option<f64>,
    pub detail: String,
    pub required: bool,
}

/// In-memory result of a run: stage log, checks, scalar metrics and the
/// output tables as `(file name, contents)`.
#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    pub stages: Vec<StageResult>,
    pub checks: Vec<CheckResult>,
    pub metrics: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    pub tables: Vec<(String, String)>,
}

impl RunOutcome {
    fn stage<T, E: std::fmt::Display>(&mut self, name: &str, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => {
                self.stages.push(StageResult { name: name.into(), status: StageStatus::Ok, message: None });
                Some(v)
            }
            Err(e) => {
                self.stages.push(StageResult { name: name.into(), status: StageStatus::Failed, message: Some(e.to_string()) });
                None
            }
        }
    }

    fn skip(&mut self, names: &[&str]) {
        for n in names {
            self.stages.push(StageResult { name: n.to_string(), status: StageStatus::Skipped, message: None });
        }
    }

    fn check(&mut self, name: &str, passed: bool, value: Option<f64>, limit: Option<f64>, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), passed, value, limit, detail: detail.into(), required: false });
    }

    pub fn check_named(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn table(&self, file: &str) -> Option<&str> {
        self.tables.iter().find(|(f, _)| f == file).map(|(_, t)| t.as_str())
    }

    pub fn failed_stage(&self) -> bool {
        self.stages.iter().any(|s| s.status == StageStatus::Failed)
    }

    /// 4 if any stage failed, else 3 if a required check failed, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.failed_stage() {
            EXIT_NUMERIC
        } else if self.checks.iter().any(|c| c.required && !c.passed) {
            EXIT_REQUIRED_CHECK
        } else {
            EXIT_OK
        }
    }
}

/// Run `config` on the ambient rayon pool without touching the filesystem.
/// Checks listed in `config.required_checks` are flagged; a required check that
/// could not be evaluated is recorded as failed.
pub fn execute(config: &ScenarioConfig) -> RunOutcome {
    let mut out = RunOutcome::default();
    match &config.setup {
        Setup::MatterWave(m) => run_matter_wave(config, m, &mut out),
        Setup::Optics(o) => run_optics(config, o, &mut out),
    }
    for name in &config.required_checks {
        match out.checks.iter_mut().find(|c| &c.name == name) {
            Some(c) => c.required = true,
            None => out.checks.push(CheckResult {
                name: name.clone(),
                passed: false,
                value: None,
                limit: None,
                detail: "not evaluated".into(),
                required: true,
            }),
        }
    }
    out
}

fn meta(config: &ScenarioConfig) -> Vec<(&'static str, String)> {
    vec![("scenario", config.name.clone())]
}

fn oracle_params(m: &MatterWaveSetup) -> Option<GaussianParams> {
    let supported = matches!(m.potential, PotentialSpec::Free | PotentialSpec::Harmonic { .. });
    match m.initial {
        InitialState::Gaussian { center, sigma, momentum } if m.model == Model::Standard && supported => {
            Some(GaussianParams { sigma0: sigma, x0: center, p0: momentum })
        }
        _ => None,
    }
}

fn run_matter_wave(config: &ScenarioConfig, m: &MatterWaveSetup, out: &mut RunOutcome) {
    let pcfg = m.propagator_config();
    let setup = Propagator::new(m.grid, pcfg.clone()).map_err(|e| e.to_string()).and_then(|p| {
        let psi0 = m.initial.build(m.grid, &m.constants).map_err(|e| e.to_string())?.with_time(m.time.t0);
        Ok((p, psi0))
    });
    let Some((prop, psi0)) = out.stage("setup", setup) else {
        out.skip(&["propagate", "trajectories", "write"]);
        return;
    };

    let mut snaps: Vec<ComplexField> = Vec::new();
    let mut series = Vec::new();
    let r = prop.propagate_with(&psi0, m.time.t_final, m.time.snapshot_every, |psi| {
        series.push(prop.series_row(psi));
        snaps.push(psi.clone());
    });
    let Some(warnings) = out.stage("propagate", r) else {
        out.skip(&["trajectories", "write"]);
        return;
    };
    out.warnings.extend(warnings);

    let first = series[0];
    let last = series[series.len() - 1];
    let drift = (last.norm - first.norm).abs();
    out.metrics.insert("norm_drift".into(), drift);
    out.metrics.insert("energy_initial".into(), first.energy);
    out.metrics.insert("energy_final".into(), last.energy);
    out.metrics.insert("width_initial".into(), first.width);
    out.metrics.insert("width_final".into(), last.width);
    out.metrics.insert("mean_x_final".into(), last.mean_x);
    out.check("norm", drift <= NORM_DRIFT_WARNING, Some(drift), Some(NORM_DRIFT_WARNING), "|norm(t_final) - norm(t0)|");

    let e0 = first.energy;
    let scale = e0.abs().max(f64::MIN_POSITIVE);
    if m.gamma == 0.0 {
        let dev = series.iter().map(|r| (r.energy - e0).abs()).fold(0.0, f64::max) / scale;
        out.check("energy", dev <= ENERGY_CONSERVATION, Some(dev), Some(ENERGY_CONSERVATION), "max |E(t) - E0| / |E0|");
    } else {
        let mut low = e0;
        let mut rise = 0.0f64;
        for r in &series[1..] {
            rise = rise.max(r.energy - low);
            low = low.min(r.energy);
        }
        let rise = rise / scale;
        out.check(
            "energy",
            rise <= ENERGY_CONSERVATION,
            Some(rise),
            Some(ENERGY_CONSERVATION),
            "largest rise of E(t) above its running minimum, relative to |E0|",
        );
    }
    if let (Model::CaldirolaKanai, PotentialSpec::Harmonic { omega, .. }) = (m.model, &m.potential) {
        let zero_point = 0.5 * m.constants.hbar() * omega;
        let crossing = series.iter().find(|r| r.energy < zero_point).map(|r| r.t);
        let min_e = series.iter().map(|r| r.energy).fold(f64::INFINITY, f64::min);
        out.check(
            "below_zero_point",
            crossing.is_some(),
            Some(min_e),
            Some(zero_point),
            match crossing {
                Some(t) => format!("physical energy first below hbar omega / 2 at t = {}", fmt_f64(t)),
                None => "physical energy stays above hbar omega / 2".into(),
            },
        );
    }
    if m.model == Model::CaldirolaKanai && m.gamma > 0.0 {
        let t_on = m.time.t0 + 5.0 / m.gamma;
        let tail: Vec<f64> = series.iter().filter(|r| r.t > t_on).map(|r| r.width).collect();
        if tail.len() >= 2 {
            let rise = tail.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
            out.check(
                "width_monotone",
                rise < 0.0,
                Some(rise),
                Some(0.0),
                format!("largest width increment between stored snapshots for t > {}", fmt_f64(t_on)),
            );
        }
    }
    if let Some(params) = oracle_params(m) {
        let mut worst = 0.0f64;
        let mut failure = None;
        for s in &snaps {
            match analytic_gaussian_oracle(params, &pcfg, m.grid, s.time()) {
                Ok(exact) => worst = worst.max(s.max_abs_diff(&exact)),
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        match failure {
            None => out.check("oracle", worst < ORACLE_TOLERANCE, Some(worst), Some(ORACLE_TOLERANCE), "max |psi - psi_exact| over snapshots"),
            Some(e) => out.check("oracle", false, None, Some(ORACLE_TOLERANCE), e),
        }
    }

    let bundle = if m.ensemble.n_trajectories >= 2 {
        let rho0 = psi0.density();
        let r = sample_initial_positions(&m.grid, &rho0, m.ensemble.n_trajectories, m.ensemble.sampling)
            .and_then(|ens| integrate_bundle(&ens, &snaps, &prop, m.ensemble.dt));
        out.stage("trajectories", r)
    } else {
        out.skip(&["trajectories"]);
        None
    };
    if let Some(b) = &bundle {
        for (i, e) in &b.failures {
            out.warnings.push(format!("trajectory {} failed: {e}", i + 1));
        }
        let nc = check_non_crossing(b);
        let detail = match nc.first_violation {
            Some((t, k)) => format!("trajectories {} and {} cross at t = {}", k + 1, k + 2, fmt_f64(t)),
            None => format!("{} trajectories stay ordered", b.trajectories.len()),
        };
        out.check("non_crossing", nc.ok && b.failures.is_empty(), nc.min_gap, Some(0.0), detail);
        if let Some(g) = nc.min_gap {
            out.metrics.insert("min_gap".into(), g);
        }
        match TubeProbe::new(&snaps).and_then(|p| p.quantile_drift(b)) {
            Ok(d) => {
                out.metrics.insert("quantile_drift".into(), d);
                out.check("tubes", d < TUBE_TOLERANCE, Some(d), Some(TUBE_TOLERANCE), "max |F(x_i(t), t) - F(x_i(t0), t0)|");
            }
            Err(e) => out.check("tubes", false, None, Some(TUBE_TOLERANCE), e.to_string()),
        }
    }

    let mut tables = Vec::new();
    let mut meta = meta(config);
    meta.push(("model", m.model.name().into()));
    meta.push(("gamma", fmt_f64(m.gamma)));
    for a in &config.outputs {
        match a {
            Artifact::Series => tables.push(("series.dat".to_string(), write_series(&series, &meta))),
            Artifact::Bundle => {
                if let Some(b) = &bundle {
                    tables.push(("bundle.dat".into(), write_bundle(b, &meta[..1])));
                }
            }
            Artifact::Snapshots => {
                for (file, psi) in [("snapshot_initial.dat", &snaps[0]), ("snapshot_final.dat", &snaps[snaps.len() - 1])] {
                    let mut buf = Vec::new();
                    write_snapshot(&mut buf, psi, &m.constants, m.model.name(), prop.analyzer()).expect("writing to memory");
                    tables.push((file.into(), String::from_utf8(buf).expect("tables are UTF-8")));
                }
            }
            Artifact::Profiles | Artifact::Paths => {}
        }
    }
    out.tables = tables;
}

fn z_label(z: f64) -> String {
    format!("{z}").replace('-', "m")
}

/// Largest `|kx(x) + kx(−x)|` over mirror pairs where both values are valid.
fn kx_antisymmetry(grid: &GridSpec, values: &[f64], valid: &[bool]) -> f64 {
    let n = grid.n_points();
    (0..n)
        .filter(|&j| valid[j] && valid[n - 1 - j])
        .map(|j| (values[j] + values[n - 1 - j]).abs())
        .fold(0.0, f64::max)
}

fn run_optics(config: &ScenarioConfig, o: &OpticsSetup, out: &mut RunOutcome) {
    let setup = o.scene().and_then(|scene| Ok((initial_two_slit_field(&scene)?, scene)));
    let Some((initial, scene)) = out.stage("setup", setup) else {
        out.skip(&["fresnel", "em_fields", "paths", "write"]);
        return;
    };
    let Some(field) = out.stage("fresnel", fresnel_propagate(&initial, &scene)) else {
        out.skip(&["em_fields", "paths", "write"]);
        return;
    };
    let Some(pf) = out.stage("em_fields", PoyntingField::from_field(&field)) else {
        out.skip(&["paths", "write"]);
        return;
    };

    let centers: Vec<f64> = o.slits.iter().map(|s| s.center).collect();
    let x_mid = centers.iter().sum::<f64>() / centers.len() as f64;
    let mut parity = 0.0f64;
    for &z in &o.report_planes {
        let p = pf.plane_index(z).expect("report planes are on the lattice");
        let prof = transverse_momentum(&pf, z).expect("report planes are on the lattice");
        if let Some(v) = peak_to_peak(&prof, &pf.u[p], KX_P2P_THRESHOLD) {
            out.metrics.insert(format!("kx_peak_to_peak_z{}", z_label(z)), v);
        }
        if o.slits.len() >= 2 {
            if let Some(s) = fringe_spacing_from_minima(&o.grid, &pf.u[p], x_mid) {
                out.metrics.insert(format!("fringe_spacing_z{}", z_label(z)), s);
            }
        }
        parity = parity.max(kx_antisymmetry(&o.grid, &prof.values, &prof.valid));
    }
    if o.is_mirror_symmetric() && !o.report_planes.is_empty() {
        out.check("kx_parity", parity < PARITY_TOLERANCE, Some(parity), Some(PARITY_TOLERANCE), "max |kx/k(x) + kx/k(-x)| on report planes");
    }

    let mut paths = Vec::new();
    let mut weights = Vec::new();
    if o.paths_per_slit > 0 {
        let r = launch_positions(&pf, &o.slits, o.paths_per_slit).map(|(xs, ws)| {
            let traced = trace_paths(&xs, scene.z_planes[0], &pf, o.ds);
            (ws, traced)
        });
        if let Some((ws, traced)) = out.stage("paths", r) {
            for (i, (t, w)) in traced.into_iter().zip(ws).enumerate() {
                match t {
                    Ok(p) => {
                        paths.push(p);
                        weights.push(w);
                    }
                    Err(e) => out.warnings.push(format!("path {} failed: {e}", i + 1)),
                }
            }
            let failed = o.paths_per_slit * o.slits.len() - paths.len();
            let rep = check_path_ordering(&paths, &scene.z_planes);
            let detail = match rep.first_violation {
                Some((z, i)) => format!("paths {} and {} cross at z = {} m", i + 1, i + 2, fmt_f64(z)),
                None if failed > 0 => format!("{failed} paths failed to reach the last plane"),
                None => format!("{} paths stay ordered on every plane", paths.len()),
            };
            out.check("path_ordering", rep.ok && failed == 0, rep.min_gap, Some(0.0), detail);
            if o.slits.len() >= 2 {
                match central_fringe_window(&pf, x_mid) {
                    Some(win) => {
                        let last = pf.u.len() - 1;
                        let cdf = crate::trajectory::Cdf::new(&o.grid, &pf.u[last]);
                        match cdf {
                            Ok(cdf) => {
                                let energy = cdf.mass_between(win.0, win.1) / cdf.total();
                                let total_w: f64 = weights.iter().sum();
                                let frac = path_fraction_in(&paths, &weights, win) / total_w;
                                let err = (frac - energy).abs();
                                out.metrics.insert("central_fringe_energy".into(), energy);
                                out.metrics.insert("central_fringe_paths".into(), frac);
                                out.check(
                                    "flux",
                                    err < FLUX_TOLERANCE,
                                    Some(err),
                                    Some(FLUX_TOLERANCE),
                                    format!(
                                        "central fringe [{}, {}] m at z = {} m: path fraction {} vs energy fraction {}",
                                        fmt_f64(win.0),
                                        fmt_f64(win.1),
                                        fmt_f64(scene.z_planes[last]),
                                        fmt_f64(frac),
                                        fmt_f64(energy)
                                    ),
                                );
                            }
                            Err(e) => out.check("flux", false, None, Some(FLUX_TOLERANCE), e.to_string()),
                        }
                    }
                    None => out.check("flux", false, None, Some(FLUX_TOLERANCE), "no central fringe at the last plane"),
                }
            }
        }
    } else {
        out.skip(&["paths"]);
    }

    let meta = meta(config);
    let mut tables = Vec::new();
    for a in &config.outputs {
        match a {
            Artifact::Profiles => {
                for &z in &o.report_planes {
                    let p = pf.plane_index(z).expect("report planes are on the lattice");
                    tables.push((format!("profile_z{}m.dat", z_label(z)), write_profile(&field, &pf, p, &meta)));
                }
            }
            Artifact::Paths => {
                if !paths.is_empty() {
                    tables.push(("paths.dat".into(), write_paths(&paths, &meta)));
                }
            }
            Artifact::Series | Artifact::Bundle | Artifact::Snapshots => {}
        }
    }
    out.tables = tables;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutDirSource {
    Flag,
    Environment,
    Default,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Exact output directory; overrides the environment and the default.
    pub out_dir: Option<PathBuf>,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Replaces the scenario's required checks.
    pub required_checks: Option<Vec<String>>,
}

impl RunOptions {
    /// `--out-dir`, else `$QHYDRO_OUT_DIR/<name>`, else `qhydro-out/<name>`.
    pub fn resolve_out_dir(&self, name: &str) -> (PathBuf, OutDirSource) {
        if let Some(d) = &self.out_dir {
            return (d.clone(), OutDirSource::Flag);
        }
        match std::env::var_os(OUT_DIR_ENV) {
            Some(root) if !root.is_empty() => (PathBuf::from(root).join(name), OutDirSource::Environment),
            _ => (PathBuf::from("qhydro-out").join(name), OutDirSource::Default),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub scenario: String,
    pub kind: String,
    pub description: String,
    pub config_sha256: String,
    pub version: String,
    pub wall_time_s: f64,
    pub threads: usize,
    pub out_dir: String,
    pub out_dir_source: OutDirSource,
    pub assumptions: Vec<String>,
    pub stages: Vec<StageResult>,
    pub checks: Vec<CheckResult>,
    pub metrics: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    pub files: Vec<String>,
    pub exit_code: i32,
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
    pub files: Vec<PathBuf>,
}

impl RunArtifacts {
    pub fn exit_code(&self) -> i32 {
        self.manifest.exit_code
    }
}

/// Run `config` and persist its tables, the canonical config and
/// `manifest.json` under the resolved output directory.
pub fn run_scenario(config: &ScenarioConfig, options: &RunOptions) -> RunArtifacts {
    let mut config = config.clone();
    if let Some(r) = &options.required_checks {
        config.required_checks = r.clone();
    }
    let start = Instant::now();
    let (outcome, threads) = match options.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => (pool.install(|| execute(&config)), n),
            Err(e) => {
                let mut o = RunOutcome::default();
                o.stage::<(), _>("setup", Err(format!("cannot start {n} worker threads: {e}")));
                (o, n)
            }
        },
        None => (execute(&config), rayon::current_num_threads()),
    };
    let wall = start.elapsed().as_secs_f64();
    let (dir, source) = options.resolve_out_dir(&config.name);
    write_outcome(&config, outcome, &dir, source, wall, threads)
}

/// Write tables and manifest. A write failure is recorded as a failed stage;
/// the manifest is attempted regardless.
pub fn write_outcome(
    config: &ScenarioConfig,
    mut outcome: RunOutcome,
    dir: &Path,
    source: OutDirSource,
    wall_time_s: f64,
    threads: usize,
) -> RunArtifacts {
    let text = emit_scenario(config);
    let hash = Sha256::digest(text.as_bytes());
    let hash: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    let mut files = Vec::new();
    let mut tables = vec![("scenario.cfg".to_string(), text)];
    tables.append(&mut outcome.tables);
    let written = std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display())).and_then(|_| {
        for (name, body) in &tables {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| format!("{}: {e}", path.display()))?;
            files.push(path);
        }
        Ok(())
    });
    if outcome.stages.iter().any(|s| s.name == "write") {
        outcome.stages.retain(|s| s.name != "write");
    }
    outcome.stage("write", written);
    let mut manifest = Manifest {
        scenario: config.name.clone(),
        kind: config.kind().name().into(),
        description: config.description.clone(),
        config_sha256: hash,
        version: env!("CARGO_PKG_VERSION").into(),
        wall_time_s,
        threads,
        out_dir: dir.display().to_string(),
        out_dir_source: source,
        assumptions: config.assumptions.clone(),
        stages: Vec::new(),
        checks: outcome.checks.clone(),
        metrics: outcome.metrics.clone(),
        warnings: outcome.warnings.clone(),
        files: Vec::new(),
        exit_code: EXIT_OK,
    };
    let manifest_path = dir.join("manifest.json");
    manifest.files = files.iter().chain([&manifest_path]).filter_map(|p| p.file_name()).map(|f| f.to_string_lossy().into()).collect();
    manifest.stages = outcome.stages.clone();
    manifest.exit_code = outcome.exit_code();
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&manifest_path, json + "\n")) {
        eprintln!("cannot write {}: {e}", manifest_path.display());
        manifest.exit_code = EXIT_NUMERIC;
    } else {
        files.push(manifest_path);
    }
    RunArtifacts { out_dir: dir.to_path_buf(), manifest, files }
}
