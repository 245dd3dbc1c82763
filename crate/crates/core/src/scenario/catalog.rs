use std::f64::consts::PI;

use super::{
    Artifact, EnsembleSpec, InitialState, MatterWaveSetup, OpticsSetup, PlaneRange, ScenarioConfig, Setup, TimeSpec,
};
use crate::fields::PhysicalConstants;
use crate::grid::GridSpec;
use crate::optics::SlitSpec;
use crate::propagators::{Model, PotentialSpec};
use crate::trajectory::SamplingScheme;

/// Oscillator period of the dissipative scenarios.
const TAU0: f64 = 10.0;
const LAMBDA: f64 = 943e-9;

/// Name and one-line summary of a built-in scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry { name: "fig2a", summary: "Caldirola-Kanai oscillator, gamma = 0.3 omega0, displaced ground state" },
    CatalogEntry { name: "fig2b", summary: "Caldirola-Kanai oscillator, gamma = 2 omega0" },
    CatalogEntry { name: "fig2c", summary: "Caldirola-Kanai oscillator, gamma = 4 omega0" },
    CatalogEntry { name: "fig3-superposition", summary: "Caldirola-Kanai oscillator, two-packet superposition" },
    CatalogEntry { name: "fig4-symmetric", summary: "two Gaussian slits, 0.3 mm at +-2.35 mm, 943 nm, photon paths" },
    CatalogEntry { name: "fig4-asymmetric", summary: "two fitted Gaussian slits, untruncated" },
    CatalogEntry { name: "fig4-trunc-1.9", summary: "fitted slits truncated at 1.9 sigma" },
    CatalogEntry { name: "fig4-trunc-1.5", summary: "fitted slits truncated at 1.5 sigma" },
    CatalogEntry { name: "oracle-free-gaussian", summary: "free Gaussian against the closed form, 16 trajectories" },
    CatalogEntry { name: "oracle-two-gaussians", summary: "symmetric free two-Gaussian interference, 64 trajectories" },
    CatalogEntry { name: "oracle-ho-frictionless", summary: "frictionless oscillator with the fig2 initial state" },
    CatalogEntry { name: "oracle-kostin-relaxation", summary: "Kostin coherent state relaxing to the ground state" },
    CatalogEntry { name: "oracle-gaussian-slit", summary: "single Gaussian slit against the Gaussian beam" },
];

pub fn omega0() -> f64 {
    2.0 * PI / TAU0
}

fn ground_sigma() -> f64 {
    (1.0 / (2.0 * omega0())).sqrt()
}

struct Mw {
    model: Model,
    gamma: f64,
    potential: PotentialSpec,
    half_width: f64,
    n: usize,
    dt: f64,
    t_final: f64,
    every: usize,
    initial: InitialState,
    trajectories: usize,
    dt_traj: f64,
}

fn matter_wave(name: &str, description: &str, assumptions: &[&str], mw: Mw, checks: &[&str]) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        description: description.into(),
        assumptions: assumptions.iter().map(|s| s.to_string()).collect(),
        setup: Setup::MatterWave(MatterWaveSetup {
            model: mw.model,
            gamma: mw.gamma,
            constants: PhysicalConstants::natural(),
            potential: mw.potential,
            grid: GridSpec::symmetric(mw.half_width, mw.n).expect("catalog grid"),
            time: TimeSpec { t0: 0.0, dt: mw.dt, t_final: mw.t_final, snapshot_every: mw.every },
            initial: mw.initial,
            ensemble: EnsembleSpec { n_trajectories: mw.trajectories, sampling: SamplingScheme::Quantile, dt: mw.dt_traj },
        }),
        outputs: vec![Artifact::Series, Artifact::Bundle, Artifact::Snapshots],
        required_checks: checks.iter().map(|s| s.to_string()).collect(),
    }
}

fn oscillator() -> PotentialSpec {
    PotentialSpec::Harmonic { omega: omega0(), center: 0.0 }
}

fn displaced_ground() -> InitialState {
    InitialState::Gaussian { center: 1.0, sigma: ground_sigma(), momentum: 0.0 }
}

fn ck(name: &str, factor: f64, half_width: f64, n: usize, t_final: f64, every: usize) -> ScenarioConfig {
    let window = format!(
        "grid +-{half_width} with {n} points and t_final = {t_final}: the canonical momentum spread grows as e^(gamma t) and must stay below the grid Nyquist momentum"
    );
    matter_wave(
        name,
        &format!("Caldirola-Kanai oscillator, gamma = {factor} omega0, omega0 = 2 pi / {TAU0}"),
        &["initial state: ground-state Gaussian displaced to x = 1, at rest", &window],
        Mw {
            model: Model::CaldirolaKanai,
            gamma: factor * omega0(),
            potential: oscillator(),
            half_width,
            n,
            dt: 1e-3,
            t_final,
            every,
            initial: displaced_ground(),
            trajectories: 20,
            dt_traj: 0.01,
        },
        &["norm", "energy", "non_crossing"],
    )
}

/// Lattice shared by the two-slit scenarios: dense near the slits, 12 m far end.
fn fig4_optics(slits: Vec<SlitSpec>, paths_per_slit: usize) -> OpticsSetup {
    OpticsSetup {
        wavelength: LAMBDA,
        slits,
        grid: GridSpec::symmetric(12e-3, 4096).expect("catalog grid"),
        planes: vec![
            PlaneRange { start: 0.25, step: 0.05, stop: 2.0 },
            PlaneRange { start: 2.1, step: 0.1, stop: 12.0 },
        ],
        report_planes: vec![3.0, 4.5, 6.0, 8.0],
        paths_per_slit,
        ds: 0.01,
    }
}

const FIG4_NOTES: &[&str] = &[
    "report planes 3, 4.5, 6 and 8 m stand in for the unlisted experimental distances",
    "propagation lattice 0.25-2 m every 5 cm and 2.1-12 m every 10 cm on a +-12 mm grid of 4096 points",
];

fn optics(name: &str, description: &str, setup: OpticsSetup, outputs: Vec<Artifact>, checks: &[&str]) -> ScenarioConfig {
    let notes: &[&str] = if setup.slits.len() > 1 { FIG4_NOTES } else { &["planes every 0.5 m to 8 m on a +-12 mm grid of 4096 points"] };
    ScenarioConfig {
        name: name.into(),
        description: description.into(),
        assumptions: notes.iter().map(|s| s.to_string()).collect(),
        setup: Setup::Optics(setup),
        outputs,
        required_checks: checks.iter().map(|s| s.to_string()).collect(),
    }
}

fn fitted_slits(window: Option<f64>) -> Vec<SlitSpec> {
    [(0.307e-3, 2.335e-3), (0.301e-3, -2.355e-3)]
        .into_iter()
        .map(|(sigma, center)| SlitSpec { sigma, center, window_halfwidth: window.map(|w| w * sigma) })
        .collect()
}

fn build(name: &str) -> Option<ScenarioConfig> {
    let o0 = omega0();
    Some(match name {
        "fig2a" => ck(name, 0.3, 8.0, 4096, 40.0, 20),
        "fig2b" => ck(name, 2.0, 8.0, 8192, 6.0, 10),
        "fig2c" => ck(name, 4.0, 8.0, 16384, 3.0, 10),
        "fig3-superposition" => matter_wave(
            name,
            "Caldirola-Kanai oscillator, gamma = 0.3 omega0, superposition of two ground-state Gaussians",
            &[
                "packet centres at -2 and +2 with zero relative phase",
                "grid +-8 with 4096 points and t_final = 20",
            ],
            Mw {
                model: Model::CaldirolaKanai,
                gamma: 0.3 * o0,
                potential: oscillator(),
                half_width: 8.0,
                n: 4096,
                dt: 1e-3,
                t_final: 20.0,
                every: 20,
                initial: InitialState::Superposition { centers: [-2.0, 2.0], sigma: ground_sigma(), phase: 0.0 },
                trajectories: 20,
                dt_traj: 0.01,
            },
            &["norm", "energy", "non_crossing"],
        ),
        "fig4-symmetric" => optics(
            name,
            "two Gaussian slits, sigma = 0.3 mm at +-2.35 mm, wavelength 943 nm",
            fig4_optics(vec![SlitSpec::gaussian(0.3e-3, 2.35e-3), SlitSpec::gaussian(0.3e-3, -2.35e-3)], 20),
            vec![Artifact::Profiles, Artifact::Paths],
            &["path_ordering", "flux", "kx_parity"],
        ),
        "fig4-asymmetric" => optics(
            name,
            "fitted Gaussian slits: 0.307 mm at 2.335 mm and 0.301 mm at -2.355 mm, 943 nm",
            fig4_optics(fitted_slits(None), 20),
            vec![Artifact::Profiles, Artifact::Paths],
            &["path_ordering"],
        ),
        "fig4-trunc-1.9" => optics(
            name,
            "fitted Gaussian slits truncated at w = 1.9 sigma",
            fig4_optics(fitted_slits(Some(1.9)), 0),
            vec![Artifact::Profiles],
            &[],
        ),
        "fig4-trunc-1.5" => optics(
            name,
            "fitted Gaussian slits truncated at w = 1.5 sigma",
            fig4_optics(fitted_slits(Some(1.5)), 0),
            vec![Artifact::Profiles],
            &[],
        ),
        "oracle-free-gaussian" => matter_wave(
            name,
            "free Gaussian, sigma0 = 1, checked against the closed-form solution",
            &[],
            Mw {
                model: Model::Standard,
                gamma: 0.0,
                potential: PotentialSpec::Free,
                half_width: 40.0,
                n: 2048,
                dt: 1e-3,
                t_final: 4.0,
                every: 10,
                initial: InitialState::Gaussian { center: 0.0, sigma: 1.0, momentum: 0.0 },
                trajectories: 16,
                dt_traj: 0.02,
            },
            &["norm", "energy", "non_crossing", "tubes", "oracle"],
        ),
        "oracle-two-gaussians" => matter_wave(
            name,
            "free superposition of two Gaussians, sigma0 = 0.5 at +-3, through fringe formation",
            &[],
            Mw {
                model: Model::Standard,
                gamma: 0.0,
                potential: PotentialSpec::Free,
                half_width: 60.0,
                n: 4096,
                dt: 1e-3,
                t_final: 10.0,
                every: 10,
                initial: InitialState::Superposition { centers: [-3.0, 3.0], sigma: 0.5, phase: 0.0 },
                trajectories: 64,
                dt_traj: 0.01,
            },
            &["norm", "energy", "non_crossing"],
        ),
        "oracle-ho-frictionless" => matter_wave(
            name,
            "frictionless oscillator with the displaced ground state; closed-form coherent state",
            &["initial state: ground-state Gaussian displaced to x = 1, at rest"],
            Mw {
                model: Model::Standard,
                gamma: 0.0,
                potential: oscillator(),
                half_width: 8.0,
                n: 2048,
                dt: 1e-3,
                t_final: 40.0,
                every: 20,
                initial: displaced_ground(),
                trajectories: 20,
                dt_traj: 0.01,
            },
            &["norm", "energy", "non_crossing", "oracle"],
        ),
        "oracle-kostin-relaxation" => matter_wave(
            name,
            "Kostin oscillator, gamma = 0.3 omega0, coherent state a = 1 relaxing to the ground state",
            &["grid +-10 with 1024 points and t_final = 60"],
            Mw {
                model: Model::Kostin,
                gamma: 0.3 * o0,
                potential: oscillator(),
                half_width: 10.0,
                n: 1024,
                dt: 1e-3,
                t_final: 60.0,
                every: 50,
                initial: displaced_ground(),
                trajectories: 20,
                dt_traj: 0.05,
            },
            &["norm", "energy", "non_crossing"],
        ),
        "oracle-gaussian-slit" => optics(
            name,
            "single Gaussian slit, sigma = 0.3 mm, against the closed-form Gaussian beam",
            OpticsSetup {
                wavelength: LAMBDA,
                slits: vec![SlitSpec::gaussian(0.3e-3, 0.0)],
                grid: GridSpec::symmetric(12e-3, 4096).expect("catalog grid"),
                planes: vec![PlaneRange { start: 0.5, step: 0.5, stop: 8.0 }],
                report_planes: vec![0.5, 3.0, 8.0],
                paths_per_slit: 20,
                ds: 0.01,
            },
            vec![Artifact::Profiles, Artifact::Paths],
            &["path_ordering"],
        ),
        _ => return None,
    })
}

/// Every built-in scenario, in catalog order.
pub fn catalog() -> Vec<(CatalogEntry, ScenarioConfig)> {
    ENTRIES.iter().map(|e| (*e, build(e.name).expect("catalog entry"))).collect()
}

pub fn catalog_entry(name: &str) -> Option<ScenarioConfig> {
    ENTRIES.iter().find(|e| e.name == name).and_then(|e| build(e.name))
}
